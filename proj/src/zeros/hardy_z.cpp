#include "zetasum/complex_ball.hpp"
#include "zetasum/errors.hpp"
#include "zetasum/theta.hpp"
#include "zetasum/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>

namespace zetasum::zeros {

using numeric::ComplexBall;
using numeric::working_precision;

namespace {

constexpr double kEulerMaclaurinLimit = 1000.0;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// log n and n^(-1/2), grown on demand, one cache per precision.
struct IntegerCache {
    std::vector<Ball> log_n{Ball()};         // index 0 unused
    std::vector<Ball> inv_sqrt_n{Ball()};
    void grow(std::size_t n) {
        while (log_n.size() <= n) {
            const Ball k(static_cast<long>(log_n.size()));
            log_n.push_back(numeric::log(k));
            inv_sqrt_n.push_back(Ball(1) / numeric::sqrt(k));
        }
    }
};

IntegerCache& integer_cache() {
    thread_local std::map<mpfr_prec_t, IntegerCache> caches;
    return caches[working_precision()];
}

Ball theta_for_z(const Ball& t) {
    if (t.lower() >= kEulerMaclaurinLimit) {
        Ball th = theta::theta_asymptotic(t, 10);
        const double rounding = std::ldexp(th.mag_upper(), -static_cast<int>(working_precision()) + 8);
        if (th.rad() <= t.rad() * 10.0 + rounding) return th;
    }
    return theta::theta_reference(t);
}

// ---------------------------------------------------------------------------
// Psi(z) = -cos(2 pi z^2 - 5 pi / 8) / cos(2 pi z), z = p - 1/2, as a power
// series in w = z^2. Psi is entire; on |z| = 1 the numerator is at most
// cosh(2 pi) < 268 and |cos(2 pi z)| >= 0.9, so |a_k| <= 300 by Cauchy.

constexpr double kPsiCauchyBound = 300.0;
constexpr int kMaxDerivative = 12;

struct PsiSeries {
    int terms = 0;
    // derivative[m][j]: coefficient of w^j in Psi^(m)(z) / z^(m mod 2)
    std::array<std::vector<Ball>, kMaxDerivative + 1> derivative;
    std::array<double, kMaxDerivative + 1> tail{};  // bound for |z| <= 1/2
    std::array<std::vector<long double>, kMaxDerivative + 1> fast;
};

double psi_tail_bound(int terms, int m) {
    // sum_{k >= K} 300 (2k)^m 2^(m - 2k); term ratio <= 1/2 once K >= 2m.
    const double k = terms;
    const double first = kPsiCauchyBound * std::pow(2.0 * k, m) * std::ldexp(1.0, m - 2 * terms);
    return 2.0 * first * (1.0 + 1e-9);
}

PsiSeries build_psi_series(mpfr_prec_t prec) {
    PsiSeries s;
    int K = 2 * kMaxDerivative + 8;
    while (psi_tail_bound(K, kMaxDerivative) > std::ldexp(1.0, -static_cast<int>(prec) - 10)) ++K;
    s.terms = K;
    for (int m = 0; m <= kMaxDerivative; ++m) s.tail[static_cast<std::size_t>(m)] = psi_tail_bound(K, m);

    std::vector<Ball> a;
    {
        // The denominator vanishes at w = 1/16, so the division loses 4 bits per term.
        numeric::PrecisionScope scope(prec + 64 + 4 * K);
        const Ball pi = Ball::pi();
        const Ball two_pi = pi.ldexp(1);
        const Ball phase = pi * Ball(5) / Ball(8);
        const Ball c = numeric::cos(phase);
        const Ball sn = numeric::sin(phase);
        // (2 pi)^j / j! for j up to 2K
        std::vector<Ball> scaled(static_cast<std::size_t>(2 * K + 2));
        scaled[0] = Ball(1);
        for (int j = 1; j < 2 * K + 2; ++j) scaled[static_cast<std::size_t>(j)] = scaled[static_cast<std::size_t>(j - 1)] * two_pi / Ball(j);
        std::vector<Ball> num(static_cast<std::size_t>(K)), den(static_cast<std::size_t>(K));
        for (int j = 0; j < K; ++j) {
            // -[cos(2 pi w) cos(phase) + sin(2 pi w) sin(phase)], coefficient of w^j
            const Ball sign = (j / 2) % 2 == 0 ? Ball(1) : Ball(-1);
            const Ball part = (j % 2 == 0 ? c : sn) * scaled[static_cast<std::size_t>(j)] * sign;
            num[static_cast<std::size_t>(j)] = -part;
            // cos(2 pi z) = sum (-1)^j (2 pi)^(2j) / (2j)! w^j
            den[static_cast<std::size_t>(j)] = scaled[static_cast<std::size_t>(2 * j)] * (j % 2 == 0 ? Ball(1) : Ball(-1));
        }
        a.resize(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            Ball acc = num[static_cast<std::size_t>(k)];
            for (int j = 1; j <= k; ++j) acc -= den[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(k - j)];
            a[static_cast<std::size_t>(k)] = acc;  // den[0] = 1
        }
    }

    for (int m = 0; m <= kMaxDerivative; ++m) {
        auto& out = s.derivative[static_cast<std::size_t>(m)];
        const int first = (m + 1) / 2;  // smallest k with 2k >= m
        for (int k = first; k < K; ++k) {
            mpz_class falling = 1;
            for (int i = 0; i < m; ++i) falling *= 2 * k - i;
            Ball v = a[static_cast<std::size_t>(k)] * Ball::from_rational(mpq_class(falling));
            out.push_back(Ball::from_mpfr(v.mid(), v.rad()));
        }
        auto& f = s.fast[static_cast<std::size_t>(m)];
        for (const Ball& b : out) f.push_back(b.mid_long_double());
    }
    return s;
}

const PsiSeries& psi_series() {
    thread_local std::map<mpfr_prec_t, PsiSeries> cache;
    const mpfr_prec_t prec = working_precision();
    auto it = cache.find(prec);
    if (it == cache.end()) it = cache.emplace(prec, build_psi_series(prec)).first;
    return it->second;
}

const PsiSeries& psi_series_fast() {
    static const PsiSeries s = build_psi_series(80);
    return s;
}

Ball psi_derivative(const PsiSeries& s, int m, const Ball& z) {
    const auto& c = s.derivative[static_cast<std::size_t>(m)];
    const Ball w = z * z;
    Ball acc;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + *it;
    if (m % 2 == 1) acc = acc * z;
    return acc.widened(s.tail[static_cast<std::size_t>(m)]);
}

long double psi_derivative_fast(const PsiSeries& s, int m, long double z) {
    const auto& c = s.fast[static_cast<std::size_t>(m)];
    const long double w = z * z;
    long double acc = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + *it;
    return m % 2 == 1 ? acc * z : acc;
}

// Riemann-Siegel correction coefficients C_j as combinations of Psi^(m):
// {j, m, numerator, denominator-without-pi, power of pi}.
struct CoefficientTerm {
    int j;
    int m;
    long num;
    long den;
    int pi_power;
};
constexpr CoefficientTerm kCoefficients[] = {
    {0, 0, 1, 1, 0},
    {1, 3, -1, 96, 2},
    {2, 2, 1, 64, 2},
    {2, 6, 1, 18432, 4},
    {3, 1, -1, 64, 2},
    {3, 5, -1, 3840, 4},
    {3, 9, -1, 5308416, 6},
    {4, 0, 1, 128, 2},
    {4, 4, 19, 24576, 4},
    {4, 8, 11, 5898240, 6},
    {4, 12, 1, 2038431744, 8},
};

// Gabcke: remainder after C_0..C_k is at most d_k t^(-(2k+3)/4) for t >= 200.
constexpr double kGabcke[] = {0.127, 0.053, 0.011, 0.031, 0.017};

}  // namespace

Ball hardy_z_riemann_siegel(const Ball& t, int terms) {
    if (terms < 1 || terms > 5) throw DomainError("zeros", "hardy_z", "Riemann-Siegel terms must be in [1, 5]");
    if (t.lower() < 200.0) throw DomainError("zeros", "hardy_z", "Riemann-Siegel remainder bound needs t >= 200");
    const Ball pi = Ball::pi();
    const Ball tau = t / pi.ldexp(1);
    const Ball root = numeric::sqrt(tau);
    const long N = static_cast<long>(std::floor(root.mid_double()));
    if (root.lower() < static_cast<double>(N) || root.upper() >= static_cast<double>(N + 1)) {
        throw DomainError("zeros", "hardy_z", "argument straddles a Riemann-Siegel block boundary");
    }
    IntegerCache& cache = integer_cache();
    cache.grow(static_cast<std::size_t>(N));
    const Ball th = theta_for_z(t);
    Ball main;
    for (long n = 1; n <= N; ++n) {
        main += cache.inv_sqrt_n[static_cast<std::size_t>(n)] *
                numeric::cos(th - t * cache.log_n[static_cast<std::size_t>(n)]);
    }
    main = main.ldexp(1);

    const PsiSeries& series = psi_series();
    const Ball z = root - Ball(N) - Ball(1).ldexp(-1);
    std::array<Ball, kMaxDerivative + 1> psi;
    std::array<bool, kMaxDerivative + 1> have{};
    std::array<Ball, 5> C;
    for (const auto& term : kCoefficients) {
        if (term.j >= terms) continue;
        const auto m = static_cast<std::size_t>(term.m);
        if (!have[m]) {
            psi[m] = psi_derivative(series, term.m, z);
            have[m] = true;
        }
        C[static_cast<std::size_t>(term.j)] +=
            psi[m] * Ball::from_rational(mpq_class(term.num, term.den)) / numeric::pow(pi, term.pi_power);
    }
    const Ball inv_sqrt_tau = Ball(1) / root;
    Ball correction;
    Ball scale(1);
    for (int j = 0; j < terms; ++j) {
        correction += C[static_cast<std::size_t>(j)] * scale;
        scale = scale * inv_sqrt_tau;
    }
    correction = correction * numeric::sqrt(inv_sqrt_tau);
    if ((N - 1) % 2 != 0) correction = -correction;
    const double remainder =
        kGabcke[terms - 1] * std::pow(t.lower(), -(2.0 * (terms - 1) + 3.0) / 4.0) * (1.0 + 1e-12);
    return (main + correction).widened(remainder);
}

Ball hardy_z_euler_maclaurin(const Ball& t) {
    const mpfr_prec_t prec = working_precision();
    const int M = static_cast<int>(prec / 4 + 2);
    const double modulus_s = std::hypot(0.5, std::fabs(t.mid_double()) + t.rad());
    const long N = std::max<long>(
        2, static_cast<long>(std::ceil(2.0 * (modulus_s + 2.0 * M + 1.0) / M_PI)));
    IntegerCache& cache = integer_cache();
    cache.grow(static_cast<std::size_t>(N));

    const Ball half = Ball(1).ldexp(-1);
    const ComplexBall s{half, t};
    ComplexBall zeta{Ball(), Ball()};
    auto power = [&](long n) {  // n^(-s)
        const Ball phase = t * cache.log_n[static_cast<std::size_t>(n)];
        const Ball mag = cache.inv_sqrt_n[static_cast<std::size_t>(n)];
        return ComplexBall{mag * numeric::cos(phase), -(mag * numeric::sin(phase))};
    };
    for (long n = 1; n < N; ++n) zeta += power(n);
    const ComplexBall nps = power(N);
    const Ball Nb(N);
    // N^(1-s) / (s - 1) + N^(-s) / 2
    zeta += (nps * Nb) / ComplexBall{-half, t};
    zeta += nps * half;

    // sum_{k=1}^{M} B_2k r_k N^(-s), r_k = s (s+1) ... (s+2k-2) N^(1-2k) / (2k)!
    const Ball inv_n2 = Ball(1) / (Nb * Nb);
    ComplexBall r = ComplexBall{half, t} * (Ball(1) / (Nb * Ball(2)));
    for (int k = 1; k <= M; ++k) {
        const Ball b = Ball::from_rational(theta::bernoulli(static_cast<unsigned>(2 * k)));
        zeta += (r * nps) * b;
        const ComplexBall step = ComplexBall{half + Ball(2 * k - 1), t} * ComplexBall{half + Ball(2 * k), t};
        r = step * r * (inv_n2 / Ball(static_cast<long>(2 * k + 1) * (2 * k + 2)));
    }
    // |T_{M+1}| |s + 2M + 1| / (sigma + 2M + 1), |N^(-s)| = N^(-1/2)
    const Ball next = numeric::abs(Ball::from_rational(theta::bernoulli(static_cast<unsigned>(2 * M + 2))));
    const Ball bound = next * r.modulus() * cache.inv_sqrt_n[static_cast<std::size_t>(N)] *
                       ComplexBall{half + Ball(2 * M + 1), t}.modulus() / (half + Ball(2 * M + 1));
    const double err = bound.mag_upper();
    zeta.re = zeta.re.widened(err);
    zeta.im = zeta.im.widened(err);

    const Ball th = theta_for_z(t);
    return numeric::cos(th) * zeta.re - numeric::sin(th) * zeta.im;
}

Ball hardy_z(const Ball& t) {
    if (mpfr_sgn(t.mid()) < 0) throw DomainError("zeros", "hardy_z", "requires t >= 0");
    if (t.lower() >= kEulerMaclaurinLimit) return hardy_z_riemann_siegel(t, 5);
    return hardy_z_euler_maclaurin(t);
}

// ---------------------------------------------------------------------------

namespace {

long double hardy_z_fast_em(long double t) {
    using C = std::complex<long double>;
    constexpr int M = 10;
    const long double modulus_s = std::hypot(0.5L, t);
    const long N = std::max<long>(2, static_cast<long>(std::ceil(2.0L * (modulus_s + 2.0L * M + 1.0L) / kPiL)));
    const C s(0.5L, t);
    C zeta = 0;
    auto power = [&](long n) {
        const long double ln = std::log(static_cast<long double>(n));
        return std::exp(-0.5L * ln) * C(std::cos(t * ln), -std::sin(t * ln));
    };
    for (long n = 1; n < N; ++n) zeta += power(n);
    const C nps = power(N);
    const long double Nl = static_cast<long double>(N);
    zeta += nps * Nl / (s - 1.0L) + 0.5L * nps;
    static const std::vector<long double> coefficients = [] {
        std::vector<long double> c;
        mpz_class f = 2;
        for (int k = 1; k <= M; ++k) {
            mpq_class q = theta::bernoulli(static_cast<unsigned>(2 * k)) / mpq_class(f);
            c.push_back(static_cast<long double>(q.get_d()));
            f *= (2 * k + 1) * (2 * k + 2);
        }
        return c;
    }();
    C rising = s;
    long double npow = 1.0L / Nl;
    for (int k = 1; k <= M; ++k) {
        zeta += coefficients[static_cast<std::size_t>(k - 1)] * rising * nps * npow;
        rising *= (s + static_cast<long double>(2 * k - 1)) * (s + static_cast<long double>(2 * k));
        npow /= Nl * Nl;
    }
    const long double th = theta::theta_fast(t);
    return std::cos(th) * zeta.real() - std::sin(th) * zeta.imag();
}

long double hardy_z_fast_rs(long double t) {
    const long double tau = t / (2.0L * kPiL);
    const long double root = std::sqrt(tau);
    const long N = static_cast<long>(std::floor(root));
    const long double th = theta::theta_fast(t);
    long double main = 0.0L;
    for (long n = 1; n <= N; ++n) {
        const long double ln = std::log(static_cast<long double>(n));
        main += std::cos(th - t * ln) / std::sqrt(static_cast<long double>(n));
    }
    main *= 2.0L;
    const PsiSeries& series = psi_series_fast();
    const long double z = root - static_cast<long double>(N) - 0.5L;
    std::array<long double, 5> C{};
    for (const auto& term : kCoefficients) {
        C[static_cast<std::size_t>(term.j)] += psi_derivative_fast(series, term.m, z) *
                                               static_cast<long double>(term.num) /
                                               static_cast<long double>(term.den) /
                                               std::pow(kPiL, static_cast<long double>(term.pi_power));
    }
    const long double x = 1.0L / root;
    const long double correction =
        std::sqrt(x) * (C[0] + x * (C[1] + x * (C[2] + x * (C[3] + x * C[4]))));
    return main + ((N - 1) % 2 == 0 ? correction : -correction);
}

}  // namespace

long double hardy_z_fast(long double t) {
    if (t < 0) throw DomainError("zeros", "hardy_z", "requires t >= 0");
    return t < 200.0L ? hardy_z_fast_em(t) : hardy_z_fast_rs(t);
}

}  // namespace zetasum::zeros
