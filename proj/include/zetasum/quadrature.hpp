#pragma once

#include "zetasum/ball.hpp"
#include "zetasum/phifunc.hpp"

#include <functional>
#include <optional>

/// Enclosure-producing integration: adaptive Gauss-Legendre on finite
/// ranges, the t = T/u map for tails, the main term of the zero sums, li(x).
namespace zetasum::quad {

using Integrand = std::function<Ball(const Ball&)>;

enum class Method { closed_form, adaptive, tail_substitution };

struct QuadResult {
    Ball value;
    long subdivisions = 0;
    Method method = Method::adaptive;
};

constexpr long kPanelBudget = 1L << 16;

/// int_a^b f. The radius is the ball sum of 15-point Gauss-Legendre panels
/// widened by the 15/7-point disagreement on each panel.
QuadResult integrate_finite(const Integrand& f, const Ball& a, const Ball& b, double tol);

/// int_T^inf f with t = T/u, panels geometric towards u = 0. Throws
/// DivergenceError when successive panel contributions stop shrinking.
QuadResult integrate_tail(const Integrand& f, const Ball& T, double tol);

/// Divergence detector alone: contributions of the blocks
/// s = log(t/T) in [0,1], [1,2], [2,4], ..., [2^(J-1), 2^J].
bool tail_diverges(const std::function<long double(long double)>& f, long double T);

/// (1/2pi) int_T1^T2 phi(t) log(t/2pi) dt; T2 = nullopt means infinity.
QuadResult main_integral(const phi::PhiSpec& spec, const Ball& T1, const std::optional<Ball>& T2, double tol);

/// Logarithmic integral (principal value) for x > 1.
Ball li(const Ball& x);

}  // namespace zetasum::quad
