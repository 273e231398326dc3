#pragma once

#include "zetasum/ball.hpp"

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <vector>

/// Hardy's Z function, the zero finder, zero tables and the counting
/// functions L(T), N(T), Q(T).
namespace zetasum::zeros {

/// Z(t) = e^{i theta(t)} zeta(1/2 + it), enclosed.
///
/// Below 1000 zeta is evaluated by Euler-Maclaurin summation. From 1000 on the
/// Riemann-Siegel formula with corrections C0..C4 is used, with Gabcke's
/// remainder bound 0.017 t^(-11/4) (valid for t >= 200).
Ball hardy_z(const Ball& t);

/// Hardware-float Z(t) with no error control, used for scanning.
long double hardy_z_fast(long double t);

/// Riemann-Siegel evaluation in ball form, exposed for testing. `terms` is
/// the number of correction terms (1..5); requires t >= 200.
Ball hardy_z_riemann_siegel(const Ball& t, int terms);
/// Euler-Maclaurin evaluation in ball form, exposed for testing.
Ball hardy_z_euler_maclaurin(const Ball& t);

enum class Source { computed, imported };

struct ZeroTable {
    std::vector<Ball> ordinates;
    Source source = Source::computed;
    double height_max = 0.0;

    std::size_t size() const { return ordinates.size(); }
    /// Throws FormatError unless the enclosures are strictly increasing and
    /// pairwise disjoint.
    void check_ordering() const;
    /// (gamma_n + gamma_{n+1}) / 2 with 1-based n; requires n < size().
    Ball midpoint_after(std::size_t n) const;
};

enum class Mode { certified, fast };

struct FindOptions {
    double refine_tol = 1e-9;
    Mode mode = Mode::certified;
};

/// Every zero with ordinate <= t_max; 15 <= t_max <= 1e6 is the supported
/// range (smaller values are accepted).
ZeroTable find_zeros(double t_max, const FindOptions& options = {});
/// The first `count` zeros; height_max is the midpoint between the last
/// returned zero and the next one.
ZeroTable find_zeros_by_count(std::size_t count, const FindOptions& options = {});

ZeroTable import_zeros(const std::string& path);
ZeroTable read_zeros(std::istream& in, const std::string& name = "<stream>");
void write_zeros(const ZeroTable& table, std::ostream& out);

/// (T/2pi)(log(T/2pi) - 1) + 7/8
Ball L_of(const Ball& T);

struct CountResult {
    mpq_class value;
    bool ambiguous = false;
};
/// N(T) from the table, half weight when T falls inside a zero enclosure.
CountResult count_N(const ZeroTable& table, double T);
/// N(T) - L(T); T must be disjoint from every zero enclosure.
Ball Q_of(const ZeroTable& table, const Ball& T);

}  // namespace zetasum::zeros
