#include "zetasum/quadrature.hpp"

#include "zetasum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace zetasum::quad {

using numeric::working_precision;

namespace {

struct Rule {
    std::vector<Ball> nodes;    // on [-1, 1]
    std::vector<Ball> weights;
    std::vector<long double> nodes_fast, weights_fast;
};

// Gauss-Legendre nodes by Newton iteration on P_n.
Rule legendre_rule(int n, mpfr_prec_t prec) {
    Rule r;
    numeric::PrecisionScope scope(prec + 32);
    const Ball pi = Ball::pi();
    for (int i = 1; i <= n; ++i) {
        Ball x = numeric::cos(pi * Ball::from_rational(mpq_class(4 * i - 1, 4 * n + 2))).center();
        Ball dp;
        for (int iter = 0; iter < 100; ++iter) {
            Ball p0(1), p1 = x;
            for (int k = 2; k <= n; ++k) {
                Ball p2 = (Ball(2 * k - 1) * x * p1 - Ball(k - 1) * p0) / Ball(k);
                p0 = p1;
                p1 = p2;
            }
            dp = Ball(n) * (x * p1 - p0) / (x * x - Ball(1));
            const Ball step = (p1 / dp).center();
            x = (x - step).center();
            if (mpfr_zero_p(step.mid()) ||
                mpfr_get_exp(step.mid()) < -static_cast<mpfr_exp_t>(prec) - 24) {
                break;
            }
        }
        const Ball w = Ball(2) / ((Ball(1) - x * x) * dp * dp);
        r.nodes.push_back(Ball::from_mpfr(x.mid()).center());
        r.weights.push_back(Ball::from_mpfr(w.center().mid()).center());
    }
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes_fast.push_back(r.nodes[i].mid_long_double());
        r.weights_fast.push_back(r.weights[i].mid_long_double());
    }
    return r;
}

struct Rules {
    Rule g15, g7;
};

const Rules& rules() {
    thread_local std::map<mpfr_prec_t, Rules> cache;
    const mpfr_prec_t prec = working_precision();
    auto it = cache.find(prec);
    if (it == cache.end()) it = cache.emplace(prec, Rules{legendre_rule(15, prec), legendre_rule(7, prec)}).first;
    return it->second;
}

const Rules& rules_fast() {
    static const Rules r{legendre_rule(15, 64), legendre_rule(7, 64)};
    return r;
}

struct Panel {
    Ball lo, hi;
    Ball value;
    double err = 0.0;
    double priority() const { return numeric::add_up(err, value.rad()); }
    bool operator<(const Panel& o) const { return priority() < o.priority(); }
};

Panel evaluate_panel(const Integrand& f, const Ball& lo, const Ball& hi) {
    const Rules& r = rules();
    const Ball half = (hi - lo).ldexp(-1);
    const Ball mid = (hi + lo).ldexp(-1);
    Ball s15, s7;
    for (std::size_t i = 0; i < r.g15.nodes.size(); ++i) s15 += r.g15.weights[i] * f(mid + half * r.g15.nodes[i]);
    for (std::size_t i = 0; i < r.g7.nodes.size(); ++i) s7 += r.g7.weights[i] * f(mid + half * r.g7.nodes[i]);
    Panel p{lo, hi, s15 * half, 0.0};
    p.err = ((s15 - s7) * half).mag_upper();
    return p;
}

long double block_fast(const std::function<long double(long double)>& g, long double a, long double b, int pieces) {
    const Rules& r = rules_fast();
    long double total = 0.0L;
    const long double h = (b - a) / pieces;
    for (int k = 0; k < pieces; ++k) {
        const long double lo = a + k * h;
        const long double half = 0.5L * h, mid = lo + half;
        long double s = 0.0L;
        for (std::size_t i = 0; i < r.g15.nodes_fast.size(); ++i) {
            s += r.g15.weights_fast[i] * g(mid + half * r.g15.nodes_fast[i]);
        }
        total += s * half;
    }
    return total;
}

constexpr int kDivergenceBlocks = 10;
constexpr int kMaxTailBlocks = 20;
constexpr double kDivergentRatio = 0.75;

}  // namespace

QuadResult integrate_finite(const Integrand& f, const Ball& a, const Ball& b, double tol) {
    if (!(tol > 0)) throw DomainError("quadrature", "integrate_finite", "tol must be positive");
    const Ball lo = a.center(), hi = b.center();
    QuadResult result;
    result.method = Method::adaptive;
    if (mpfr_equal_p(lo.mid(), hi.mid())) {
        result.value = Ball();
    } else {
        if (mpfr_cmp(lo.mid(), hi.mid()) > 0) {
            throw DomainError("quadrature", "integrate_finite", "requires a < b");
        }
        std::priority_queue<Panel> queue;
        queue.push(evaluate_panel(f, lo, hi));
        long panels = 1;
        auto total_error = [&] {
            // Sum over a copy of the heap; panel counts stay modest.
            auto copy = queue;
            double e = 0.0;
            while (!copy.empty()) {
                e = numeric::add_up(e, copy.top().priority());
                copy.pop();
            }
            return e;
        };
        double estimate = total_error();
        while (estimate > tol) {
            if (panels >= kPanelBudget) {
                throw ConvergenceError("quadrature", "integrate_finite",
                                       "tolerance not reached within 2^16 panels (error estimate " +
                                           std::to_string(estimate) + ")");
            }
            Panel worst = queue.top();
            queue.pop();
            const Ball m = (worst.lo + worst.hi).ldexp(-1).center();
            Panel left = evaluate_panel(f, worst.lo, m);
            Panel right = evaluate_panel(f, m, worst.hi);
            estimate = estimate - worst.priority() + left.priority() + right.priority();
            queue.push(std::move(left));
            queue.push(std::move(right));
            ++panels;
            // the running sum drifts once panel errors are far below it
            if (estimate <= tol || queue.top().priority() * static_cast<double>(queue.size()) <= tol) estimate = total_error();
        }
        // Deterministic order: sum panels left to right.
        std::vector<Panel> all;
        while (!queue.empty()) {
            all.push_back(queue.top());
            queue.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return mpfr_cmp(x.lo.mid(), y.lo.mid()) < 0; });
        Ball sum;
        double err = 0.0;
        for (const Panel& p : all) {
            sum += p.value;
            err = numeric::add_up(err, p.err);
        }
        result.value = sum.widened(err);
        result.subdivisions = panels;
    }
    // endpoint uncertainty
    double extra = 0.0;
    if (a.rad() > 0) extra = numeric::add_up(extra, numeric::mul_up(f(a).mag_upper(), a.rad()));
    if (b.rad() > 0) extra = numeric::add_up(extra, numeric::mul_up(f(b).mag_upper(), b.rad()));
    result.value = result.value.widened(extra);
    return result;
}

QuadResult integrate_tail(const Integrand& f, const Ball& T, double tol) {
    if (!(tol > 0)) throw DomainError("quadrature", "integrate_tail", "tol must be positive");
    if (!T.is_positive()) throw DomainError("quadrature", "integrate_tail", "requires T > 0");
    // t = T/u = T e^s; the blocks s in [0,1], [1,2], [2,4], ... are the u panels
    // [e^-1, 1], [e^-2, e^-1], [e^-4, e^-2], ... integrated in log u.
    const Ball Tc = T.center();
    const Integrand g = [&](const Ball& s) {
        const Ball t = Tc * numeric::exp(s);
        return f(t) * t;
    };
    QuadResult result;
    result.method = Method::tail_substitution;
    Ball total;
    double previous = 0.0;
    double ratio = 1.0;
    long double s_lo = 0.0L;
    for (int j = 0; j < kMaxTailBlocks; ++j) {
        const long double s_hi = j == 0 ? 1.0L : 2.0L * s_lo;
        const double block_tol = tol / std::ldexp(4.0, j + 1);
        const QuadResult block = integrate_finite(g, Ball::from_long_double(s_lo), Ball::from_long_double(s_hi), block_tol);
        total += block.value;
        result.subdivisions += block.subdivisions;
        const double size = block.value.mag_upper();
        if (j > 0) ratio = previous > 0 ? size / previous : 0.0;
        previous = size;
        s_lo = s_hi;
        if (j >= 3 && ratio < kDivergentRatio && size <= tol / 8) {
            // remaining blocks assumed to keep shrinking at least geometrically
            const double rest = size * ratio / (1.0 - ratio);
            result.value = total.widened(rest);
            break;
        }
        if (j + 1 == kDivergenceBlocks && ratio >= kDivergentRatio) {
            throw DivergenceError("quadrature", "integrate_tail",
                                  "block contributions are not shrinking; the tail integral diverges");
        }
        if (j + 1 == kMaxTailBlocks) {
            throw ConvergenceError("quadrature", "integrate_tail", "tail converges too slowly for the tolerance");
        }
    }
    // dependence on the radius of T: |d/dT int_T^inf f| = |f(T)|
    if (T.rad() > 0) result.value = result.value.widened(numeric::mul_up(f(T).mag_upper(), T.rad()));
    if (result.value.rad() > tol) {
        throw ConvergenceError("quadrature", "integrate_tail", "tolerance not reached");
    }
    return result;
}

bool tail_diverges(const std::function<long double(long double)>& f, long double T) {
    const auto g = [&](long double s) {
        const long double t = T * std::exp(s);
        return f(t) * t;
    };
    long double previous = 0.0L, s_lo = 0.0L;
    long double ratio = 1.0L;
    for (int j = 0; j < kDivergenceBlocks; ++j) {
        const long double s_hi = j == 0 ? 1.0L : 2.0L * s_lo;
        const long double c = std::fabs(block_fast(g, s_lo, s_hi, 16));
        if (j > 0) ratio = previous > 0 ? c / previous : 0.0L;
        previous = c;
        s_lo = s_hi;
    }
    return ratio >= kDivergentRatio;
}

QuadResult main_integral(const phi::PhiSpec& spec, const Ball& T1, const std::optional<Ball>& T2, double tol) {
    if (mpfr_cmp(T1.mid(), spec.T0.mid()) < 0) {
        throw DomainError("quadrature", "main_integral", "T1 is below T0");
    }
    const Ball two_pi = Ball::pi().ldexp(1);
    if (spec.tail_antiderivative) {
        const phi::Antiderivative& G = *spec.tail_antiderivative;
        QuadResult r;
        r.method = Method::closed_form;
        if (T2) {
            r.value = G.at(*T2) - G.at(T1);
        } else {
            if (!G.zero_at_infinity) {
                throw DivergenceError("quadrature", "main_integral", spec.name + ": int phi(t) log t dt diverges");
            }
            r.value = -G.at(T1);
        }
        return r;
    }
    const Integrand f = [&](const Ball& t) { return spec.phi(t) * numeric::log(t / two_pi); };
    QuadResult r;
    if (T2) {
        r = integrate_finite(f, T1, *T2, tol * 2.0 * M_PI);
    } else {
        if (spec.log_tail_converges && !*spec.log_tail_converges) {
            throw DivergenceError("quadrature", "main_integral", spec.name + ": int phi(t) log t dt diverges");
        }
        r = integrate_tail(f, T1, tol * 2.0 * M_PI);
    }
    r.value = r.value / two_pi;
    return r;
}

Ball li(const Ball& x) {
    if (!(x.lower() > 1.0) && !(x - Ball(1)).is_positive()) {
        throw DomainError("quadrature", "li", "requires x > 1");
    }
    // li(x) = gamma + log log x + sum_{n>=1} (log x)^n / (n n!)
    const Ball L = numeric::log(x);
    const double Lmax = L.mag_upper();
    const double eps = std::ldexp(1.0, -static_cast<int>(working_precision()) - 8);
    Ball sum;
    Ball term = L;  // (log x)^n / n!
    for (long n = 1;; ++n) {
        sum += term / Ball(n);
        const double next = term.mag_upper() * Lmax / static_cast<double>(n + 1);
        // once L/(n+1) <= 1/2 the remaining terms are bounded by twice the next one
        if (Lmax / static_cast<double>(n + 2) <= 0.5 && next <= eps * std::max(1.0, sum.mag_lower())) {
            sum = sum.widened(2.0 * next / static_cast<double>(n + 1) * (1.0 + 1e-12));
            break;
        }
        term = term * L / Ball(n + 1);
    }
    return Ball::euler_gamma() + numeric::log(L) + sum;
}

}  // namespace zetasum::quad
