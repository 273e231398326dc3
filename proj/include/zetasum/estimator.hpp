#pragma once

#include "zetasum/ball.hpp"
#include "zetasum/phifunc.hpp"
#include "zetasum/zeros.hpp"

#include <optional>
#include <string>
#include <vector>

/// Sums of phi(gamma) over zero ordinates: Lehman's estimate, the finite-sum
/// identity with its E2 bound, convergent totals and divergent limits.
namespace zetasum::est {

struct ExplicitConstants {
    Ball A;   // 0.28
    Ball A0;  // 2.067
    Ball A1;  // 0.059
    Ball A2;  // 1/150
    Ball euler_gamma;
    // c0 = S1(168 pi) cancels out and is never needed.

    static const ExplicitConstants& get();
};

enum class Method { lehman, theorem1, theorem4, identity };

struct SumEstimate {
    Ball value;
    Ball partial_sum;
    Ball integral_term;
    Ball boundary_term;  // phi(T) Q(T)
    Ball error_bound;
    Ball T_used;
    std::size_t n_zeros = 0;
    Method method = Method::theorem1;
};

std::string method_name(Method m);

/// Quadrature tolerance as a fraction of the run's analytic error bound
/// (default 1e-3). Process-wide.
void set_quadrature_factor(double factor);
double quadrature_factor();

/// Sum' of phi(gamma) over T1 <= gamma <= T2; a zero whose enclosure meets an
/// endpoint gets weight 1/2.
Ball weighted_partial_sum(const zeros::ZeroTable& table, const phi::PhiSpec& spec, const Ball& T1, const Ball& T2);

/// A (2 phi(T) log T + int_T^T2 phi(t)/t dt); T2 = nullopt is infinity.
Ball lehman_bound(const phi::PhiSpec& spec, const Ball& T, const std::optional<Ball>& T2);

/// Main integral over [T, T2] widened by lehman_bound. Needs T >= 2 pi e.
SumEstimate lehman_estimate(const zeros::ZeroTable& table, const phi::PhiSpec& spec, const Ball& T,
                            const std::optional<Ball>& T2);

/// 2 (A0 + A1 log T1) |phi'(T1)| + (A1 + A2) phi(T1) / T1
Ball e2_bound(const phi::PhiSpec& spec, const Ball& T1);

struct IdentitySides {
    Ball lhs;  // Sum' - int - [phi Q]
    Ball rhs;  // -int phi' Q, one quadrature per gap between zeros
};
IdentitySides finite_identity(const zeros::ZeroTable& table, const phi::PhiSpec& spec, const Ball& T1, const Ball& T2,
                              double tol);

/// Sum over all gamma > 0 of phi(gamma), cut at T between zeros n_use and
/// n_use + 1:  Sum'_{gamma < T} + main integral over [T, inf) - phi(T) Q(T) +- E2(T).
SumEstimate convergent_total(const zeros::ZeroTable& table, const phi::PhiSpec& spec, std::size_t n_use);

/// How the main integral of a divergent limit is anchored.
enum class Anchor {
    lower_limit,     // subtract main integral over [T0, T1]
    antiderivative,  // subtract G(T1) for the built-in's closed form G
};

/// lim_{T -> inf} (Sum'_{T0 <= gamma <= T} phi(gamma) - main integral), estimated at T1 between zeros
/// n_use and n_use + 1: Sum' - integral - phi(T1) Q(T1) +- E2(T1).
SumEstimate divergent_limit(const zeros::ZeroTable& table, const phi::PhiSpec& spec, std::size_t n_use,
                            Anchor anchor = Anchor::lower_limit);

/// The same limit without the boundary term and without E2.
Ball naive_divergent_estimate(const zeros::ZeroTable& table, const phi::PhiSpec& spec, std::size_t n_use,
                              Anchor anchor = Anchor::lower_limit);

/// One row of the c2 table: phi = 1/log^2(t/2pi), T = (gamma_n + gamma_{n+1})/2.
struct Table1Row {
    std::size_t n = 0;
    Ball T;
    Ball naive;
    Ball accelerated;
    Ball bound;
};

struct Table1Report {
    std::vector<Table1Row> rows;
    std::vector<std::string> notices;
    std::string text() const;
    std::string csv() const;
};

/// Rows n in {10, 10^2, ..., max_n} that the table can support.
Table1Report table1_report(const zeros::ZeroTable& table, std::size_t max_n = 100000);

/// Upper end of an error bound rounded upwards to `sig` significant digits,
/// e.g. "4.009e-06".
std::string format_bound(const Ball& bound, int sig = 3);

/// Phi for the c2 rows; T0 = 14 since the weight is singular at 2 pi.
phi::PhiSpec c2_phi();

}  // namespace zetasum::est
