#pragma once

#include "zetasum/ball.hpp"

#include <gmpxx.h>

#include <vector>

/// The Riemann-Siegel theta function, its asymptotic expansion with explicit
/// remainder, Gram points and the series for Q(t) - S(t).
namespace zetasum::theta {

/// Exact Bernoulli number B_n (B_1 = -1/2 convention). Cached, thread safe.
mpq_class bernoulli(unsigned n);

/// Truncated asymptotic expansion of theta(t) with k correction terms.
struct ThetaExpansion {
    int k = 3;
    std::vector<mpq_class> bernoulli;  // B_2, B_4, ..., B_2k

    explicit ThetaExpansion(int terms);

    /// T~_j(t) = (1 - 2^(1-2j)) |B_2j| / (4 j (2j-1) t^(2j-1)), 1 <= j <= k.
    Ball term(int j, const Ball& t) const;
    /// Upper bound on |R~_(k+1)(t)|, the error after k terms.
    Ball remainder_bound(const Ball& t) const;
};

/// theta(t) from the asymptotic expansion. Requires t >= 2 pi and
/// 1 <= k <= 10; the radius includes the truncation bound.
Ball theta_asymptotic(const Ball& t, int k = 3);

/// theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi, computed from a
/// shifted Stirling series with rigorous remainder. Valid for t >= 0.
Ball theta_reference(const Ball& t);

/// Enclosure of the Gram point g_n (theta(g_n) = n pi, g_n >= 7), n >= -1.
Ball gram_point(long n);

/// Enclosure of Q(t) - S(t) from k terms of its asymptotic series plus the
/// explicit remainder. Requires t >= 2 pi.
Ball q_minus_s(const Ball& t, int k = 3);

/// Hardware-float theta for scanning (asymptotic series, t >= 2 pi).
long double theta_fast(long double t);
/// Hardware-float Gram point, used to lay out scan grids.
long double gram_point_fast(long n);

}  // namespace zetasum::theta
