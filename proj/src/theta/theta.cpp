#include "zetasum/theta.hpp"

#include "zetasum/complex_ball.hpp"
#include "zetasum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace zetasum::theta {

using numeric::ComplexBall;
using numeric::working_precision;

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;
constexpr long double kTwoPiL = 2.0L * kPiL;

Ball two_pi() { return Ball::pi().ldexp(1); }

void require_at_least_two_pi(const Ball& t, const char* op) {
    if (mpfr_cmp(t.mid(), two_pi().mid()) < 0) {
        throw DomainError("theta", op, "requires t >= 2*pi (use theta_reference below 2*pi)");
    }
}

// |B_2j| (1 - 2^(1-2j)) / (4 j (2j - 1)): the coefficient of t^(1-2j).
mpq_class expansion_coefficient(int j) {
    mpq_class b = abs(bernoulli(static_cast<unsigned>(2 * j)));
    mpz_class pow2 = 1;
    pow2 <<= static_cast<mp_bitcnt_t>(2 * j - 1);
    mpq_class factor = 1 - mpq_class(1, pow2);
    factor.canonicalize();
    mpq_class c = b * factor / (4 * j * (2 * j - 1));
    c.canonicalize();
    return c;
}

struct StirlingPlan {
    int terms = 0;         // K
    double min_modulus = 0;  // W: shift until |w| >= W
    std::vector<Ball> coefficients;  // B_2k / (2k (2k-1)), k = 1..K
    Ball remainder_coefficient;      // |B_2K+2| / ((2K+2)(2K+1))
};

// Number of Stirling terms and the shift threshold for the current precision.
// The remainder after K terms is bounded (for Re w > 0) by
//   |B_2K+2| sec^(2K+2)(arg(w)/2) / ((2K+2)(2K+1) |w|^(2K+1)),
// and sec^2(arg/2) <= 2 on the right half-plane.
const StirlingPlan& stirling_plan() {
    thread_local std::map<mpfr_prec_t, StirlingPlan> cache;
    const mpfr_prec_t prec = working_precision();
    auto it = cache.find(prec);
    if (it != cache.end()) return it->second;

    StirlingPlan plan;
    plan.terms = static_cast<int>(std::clamp<long>(prec / 4, 8, 120));
    const int K = plan.terms;
    for (int k = 1; k <= K; ++k) {
        mpq_class c = bernoulli(static_cast<unsigned>(2 * k)) / mpq_class(2 * k * (2 * k - 1));
        c.canonicalize();
        plan.coefficients.push_back(Ball::from_rational(c));
    }
    mpq_class rc = abs(bernoulli(static_cast<unsigned>(2 * K + 2))) / mpq_class((2 * K + 2) * (2 * K + 1));
    rc.canonicalize();
    plan.remainder_coefficient = Ball::from_rational(rc);
    const double log_rc = std::log(rc.get_d());
    const double log_eps = -static_cast<double>(prec + 8) * std::log(2.0);
    const double log_sec = static_cast<double>(K + 1) * std::log(2.0);
    plan.min_modulus = std::exp((log_rc + log_sec - log_eps) / static_cast<double>(2 * K + 1));
    return cache.emplace(prec, std::move(plan)).first->second;
}

}  // namespace

mpq_class bernoulli(unsigned n) {
    static std::mutex mutex;
    static std::vector<mpq_class> table{mpq_class(1)};
    std::lock_guard<std::mutex> lock(mutex);
    while (table.size() <= n) {
        // B_m = -1/(m+1) sum_{k<m} C(m+1, k) B_k
        const unsigned m = static_cast<unsigned>(table.size());
        mpq_class sum = 0;
        mpz_class binom = 1;  // C(m+1, 0)
        for (unsigned k = 0; k < m; ++k) {
            sum += binom * table[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        mpq_class b = -sum / mpq_class(m + 1);
        b.canonicalize();
        table.push_back(b);
    }
    return table[n];
}

// ---------------------------------------------------------------------------
// asymptotic expansion

ThetaExpansion::ThetaExpansion(int terms) : k(terms) {
    if (terms < 1) throw DomainError("theta", "ThetaExpansion", "k must be >= 1");
    for (int j = 1; j <= terms; ++j) bernoulli.push_back(theta::bernoulli(static_cast<unsigned>(2 * j)));
}

Ball ThetaExpansion::term(int j, const Ball& t) const {
    return Ball::from_rational(expansion_coefficient(j)) / numeric::pow(t, 2 * j - 1);
}

Ball ThetaExpansion::remainder_bound(const Ball& t) const {
    // (1 - 2^(1-2k))^-1 (pi k)^(1/2) T~_k(t) + e^(-pi t) / 2
    //   = (pi k)^(1/2) |B_2k| / (4 k (2k-1) t^(2k-1)) + e^(-pi t) / 2
    const Ball pi = Ball::pi();
    mpq_class c = abs(bernoulli.back()) / mpq_class(4 * k * (2 * k - 1));
    c.canonicalize();
    const Ball series = numeric::sqrt(pi * Ball(k)) * Ball::from_rational(c) / numeric::pow(t, 2 * k - 1);
    const Ball tail = numeric::exp(-(pi * t)).ldexp(-1);
    return series + tail;
}

Ball theta_asymptotic(const Ball& t, int k) {
    require_at_least_two_pi(t, "theta_asymptotic");
    if (k < 1 || k > 10) throw DomainError("theta", "theta_asymptotic", "k must be in [1, 10]");
    const ThetaExpansion expansion(k);
    const Ball pi = Ball::pi();
    const Ball half_t = t.ldexp(-1);
    Ball value = half_t * (numeric::log(t / pi.ldexp(1)) - Ball(1)) - pi.ldexp(-3);
    for (int j = 1; j <= k; ++j) value += expansion.term(j, t);
    return value.widened(expansion.remainder_bound(t));
}

Ball q_minus_s(const Ball& t, int k) {
    require_at_least_two_pi(t, "q_minus_s");
    if (k < 1 || k > 10) throw DomainError("theta", "q_minus_s", "k must be in [1, 10]");
    const ThetaExpansion expansion(k);
    const Ball pi = Ball::pi();
    Ball sum;
    for (int j = 1; j <= k; ++j) sum += expansion.term(j, t);
    sum = sum / pi;
    // |B_2k| / (4 (pi k)^(1/2) (2k-1) t^(2k-1)) + e^(-pi t) / (2 pi)
    mpq_class c = abs(expansion.bernoulli.back()) / mpq_class(4 * (2 * k - 1));
    c.canonicalize();
    const Ball series = Ball::from_rational(c) / (numeric::sqrt(pi * Ball(k)) * numeric::pow(t, 2 * k - 1));
    const Ball tail = numeric::exp(-(pi * t)) / pi.ldexp(1);
    return sum.widened(series + tail);
}

// ---------------------------------------------------------------------------
// reference evaluation through log Gamma

Ball theta_reference(const Ball& t) {
    if (mpfr_sgn(t.mid()) < 0) throw DomainError("theta", "theta_reference", "requires t >= 0");
    const StirlingPlan& plan = stirling_plan();
    const Ball quarter = Ball(1).ldexp(-2);
    const Ball half = Ball(1).ldexp(-1);
    const Ball b = t.ldexp(-1);  // Im z, z = 1/4 + i t/2

    // Shift z -> z + m until |z + m| >= W, using
    //   Im log Gamma(z) = Im log Gamma(z + m) - sum_{j<m} arg(z + j).
    const double bd = std::fabs(b.mid_double());
    long m = 0;
    if (std::hypot(0.25, bd) < plan.min_modulus) {
        const double need = std::sqrt(std::max(0.0, plan.min_modulus * plan.min_modulus - bd * bd));
        m = static_cast<long>(std::ceil(need - 0.25)) + 1;
    }
    Ball arg_sum;
    for (long j = 0; j < m; ++j) arg_sum += numeric::atan2(b, quarter + Ball(j));

    const Ball a = quarter + Ball(m);
    const ComplexBall w{a, b};
    const Ball modulus_sq = w.norm_squared();
    const Ball log_modulus = numeric::log(modulus_sq).ldexp(-1);
    const Ball arg_w = numeric::atan2(b, a);

    // Im[(w - 1/2) log w - w]
    Ball im = b * log_modulus + (a - half) * arg_w - b;
    const ComplexBall w_inv = w.reciprocal();
    const ComplexBall w_inv2 = w_inv * w_inv;
    ComplexBall power = w_inv;
    for (int k = 0; k < plan.terms; ++k) {
        im += plan.coefficients[static_cast<std::size_t>(k)] * power.im;
        power = power * w_inv2;
    }

    const int K = plan.terms;
    const Ball inv_modulus = Ball(1) / numeric::sqrt(modulus_sq);
    const Ball remainder = plan.remainder_coefficient * numeric::pow(inv_modulus, 2 * K + 1);
    // sec^2(arg/2) = 2 / (1 + cos arg), cos arg = Re w / |w| >= a_lo / |w|_hi
    const double cos_lo = std::max(0.0, a.lower() / numeric::sqrt(modulus_sq).upper());
    const double sec_factor = std::pow(2.0 / (1.0 + cos_lo), static_cast<double>(K + 1)) * (1.0 + 1e-12);
    im = im.widened(numeric::mul_up(remainder.mag_upper(), sec_factor));

    const Ball log_pi = numeric::log(Ball::pi());
    return im - arg_sum - b * log_pi;
}

// ---------------------------------------------------------------------------
// Gram points

long double theta_fast(long double t) {
    if (t < kTwoPiL) {
        return Ball::from_long_double(t).mid_long_double() >= 0
                   ? theta_reference(Ball::from_long_double(t)).mid_long_double()
                   : 0.0L;
    }
    static const std::vector<long double> coefficients = [] {
        std::vector<long double> c;
        for (int j = 1; j <= 7; ++j) c.push_back(static_cast<long double>(expansion_coefficient(j).get_d()));
        return c;
    }();
    long double value = 0.5L * t * (std::log(t / kTwoPiL) - 1.0L) - kPiL / 8.0L;
    const long double inv = 1.0L / t;
    const long double inv2 = inv * inv;
    long double p = inv;
    for (const long double c : coefficients) {
        value += c * p;
        p *= inv2;
    }
    return value;
}

long double gram_point_fast(long n) {
    if (n < -1) throw DomainError("theta", "gram_point", "requires n >= -1");
    const long double target = static_cast<long double>(n) * kPiL;
    // Newton from the right converges monotonically: theta is convex for t > 7.
    long double t = 2.0L * kTwoPiL * (static_cast<long double>(n) + 4.0L) + 40.0L;
    for (int iter = 0; iter < 200; ++iter) {
        const long double f = theta_fast(t) - target;
        const long double df = 0.5L * std::log(t / kTwoPiL);
        const long double step = f / df;
        t -= step;
        if (std::fabs(step) <= 1e-17L * t) break;
    }
    return t;
}

Ball gram_point(long n) {
    if (n < -1) throw DomainError("theta", "gram_point", "requires n >= -1");
    const Ball target = Ball::pi() * Ball(n);
    const Ball two_pi_ball = two_pi();
    Ball g = Ball::from_long_double(gram_point_fast(n)).center();
    // Newton refinement on the reference theta, midpoint arithmetic only.
    const int iterations = 2 + static_cast<int>(working_precision() / 64);
    for (int iter = 0; iter < iterations; ++iter) {
        const Ball f = theta_reference(g) - target;
        const Ball df = numeric::log(g / two_pi_ball).ldexp(-1);
        g = (g - f / df).center();
    }
    // Certify theta(g - d) < n pi < theta(g + d); theta is increasing for t >= 7.
    mpfr_exp_t e = mpfr_get_exp(g.mid());
    double delta = std::ldexp(1.0, static_cast<int>(e - working_precision() + 8));
    for (int attempt = 0; attempt < 60; ++attempt) {
        const Ball lo = g - Ball::from_double(delta);
        const Ball hi = g + Ball::from_double(delta);
        if ((theta_reference(lo.center()) - target).is_negative() &&
            (theta_reference(hi.center()) - target).is_positive()) {
            return g.widened(delta);
        }
        delta *= 4.0;
    }
    throw DomainError("theta", "gram_point", "could not certify Gram point " + std::to_string(n));
}

}  // namespace zetasum::theta
