#include "zetasum/errors.hpp"
#include "zetasum/theta.hpp"
#include "zetasum/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zetasum::zeros {

namespace {

constexpr int kMaxSubdivision = 64;

int sign_of(long double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

struct Bracket {
    long double lo, hi;
    long double zlo, zhi;
};

std::string interval_text(long double a, long double b) {
    std::ostringstream os;
    os.precision(12);
    os << "[" << static_cast<double>(a) << ", " << static_cast<double>(b) << "]";
    return os.str();
}

// Sign-change brackets of the fast Z on a grid of `per` points per Gram
// interval across [g_a, g_b].
std::vector<Bracket> scan(const std::vector<long double>& gram, std::size_t a, std::size_t b, int per,
                          const std::vector<long double>& z_gram) {
    std::vector<Bracket> out;
    for (std::size_t i = a; i < b; ++i) {
        long double x0 = gram[i];
        long double z0 = z_gram[i];
        for (int j = 1; j <= per; ++j) {
            const long double x1 = j == per ? gram[i + 1] : gram[i] + (gram[i + 1] - gram[i]) * j / per;
            const long double z1 = j == per ? z_gram[i + 1] : hardy_z_fast(x1);
            if (sign_of(z0) * sign_of(z1) < 0) out.push_back({x0, x1, z0, z1});
            x0 = x1;
            z0 = z1;
        }
    }
    return out;
}

// Illinois variant of regula falsi on the fast Z.
long double refine_fast(Bracket br) {
    long double a = br.lo, b = br.hi, fa = br.zlo, fb = br.zhi;
    int side = 0;
    for (int iter = 0; iter < 200 && b - a > 1e-17L * b; ++iter) {
        const long double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > a && c < b)) break;
        const long double fc = hardy_z_fast(c);
        if (fc == 0) return c;
        if (sign_of(fc) == sign_of(fa)) {
            a = c;
            fa = fc;
            if (side == -1) fb *= 0.5L;
            side = -1;
        } else {
            b = c;
            fb = fc;
            if (side == 1) fa *= 0.5L;
            side = 1;
        }
    }
    return fabsl(fa) < fabsl(fb) ? a : b;
}

int certified_sign(const Ball& z) {
    if (z.is_positive()) return 1;
    if (z.is_negative()) return -1;
    return 0;
}

Ball point(long double x) { return Ball::from_long_double(x); }

// Certified enclosure of the single zero in `br`, of radius <= tol / 2.
Ball certify(const Bracket& br, long double root, double tol) {
    const int s_lo = sign_of(br.zlo);
    for (const long double delta : {static_cast<long double>(tol) / 4, static_cast<long double>(tol) / 2}) {
        const long double a = root - delta, b = root + delta;
        if (a <= br.lo || b >= br.hi) continue;
        if (certified_sign(hardy_z(point(a))) == s_lo && certified_sign(hardy_z(point(b))) == -s_lo) {
            return hull(point(a), point(b));
        }
    }
    // Fall back to bisection with certified signs.
    long double a = br.lo, b = br.hi;
    if (certified_sign(hardy_z(point(a))) != s_lo || certified_sign(hardy_z(point(b))) != -s_lo) {
        throw IncompleteTableError("zeros", "find_zeros",
                                   "cannot certify the sign change in " + interval_text(br.lo, br.hi));
    }
    while (b - a > tol) {
        const long double mid = 0.5L * (a + b);
        int s = 0;
        for (const long double nudge : {0.0L, 0.125L, -0.125L, 0.25L, -0.25L}) {
            const long double m = mid + nudge * (b - a);
            s = certified_sign(hardy_z(point(m)));
            if (s != 0) {
                (s == s_lo ? a : b) = m;
                break;
            }
        }
        if (s == 0) {
            throw IncompleteTableError("zeros", "find_zeros",
                                       "Z too small to resolve near " + interval_text(a, b));
        }
    }
    return hull(point(a), point(b));
}

Ball locate(const Bracket& br, const FindOptions& options) {
    const long double root = refine_fast(br);
    if (options.mode == Mode::fast) {
        // heuristic: the hardware Riemann-Siegel sum is good to about 1e-8 near t = 200
        const double radius = root < 200.0L ? options.refine_tol : std::max(options.refine_tol, 1e-7);
        return Ball::from_long_double(root, radius);
    }
    return certify(br, root, options.refine_tol);
}

// All zeros in (g_{-1}, g_last] where g_last is the first good Gram point
// with index >= stop_index (or with g >= stop_height).
std::vector<Ball> find_through(long stop_index, long double stop_height, const FindOptions& options) {
    if (!(options.refine_tol > 0)) throw DomainError("zeros", "find_zeros", "refine_tol must be positive");
    std::vector<Ball> zeros;
    std::vector<long double> gram{theta::gram_point_fast(-1)};
    std::vector<long double> z_gram{hardy_z_fast(gram[0])};
    auto good = [&](std::size_t i) {
        const long n = static_cast<long>(i) - 1;
        const int parity = n % 2 == 0 ? 1 : -1;
        return parity * sign_of(z_gram[i]) > 0;
    };
    if (!good(0)) throw IncompleteTableError("zeros", "find_zeros", "g_-1 is not a good Gram point");

    std::size_t a = 0;
    for (;;) {
        // next good Gram point after a
        std::size_t b = a;
        do {
            ++b;
            if (gram.size() <= b) {
                gram.push_back(theta::gram_point_fast(static_cast<long>(b) - 1));
                z_gram.push_back(hardy_z_fast(gram.back()));
            }
        } while (!good(b));
        const std::size_t expected = b - a;
        std::vector<Bracket> brackets;
        for (int per = 1; per <= kMaxSubdivision; per *= 2) {
            brackets = scan(gram, a, b, per, z_gram);
            if (brackets.size() >= expected) break;
        }
        if (brackets.size() != expected) {
            throw IncompleteTableError(
                "zeros", "find_zeros",
                "found " + std::to_string(brackets.size()) + " of " + std::to_string(expected) +
                    " sign changes in Gram block " + interval_text(gram[a], gram[b]));
        }
        for (const Bracket& br : brackets) zeros.push_back(locate(br, options));
        a = b;
        const long n = static_cast<long>(a) - 1;
        if (n >= stop_index && gram[a] >= stop_height) break;
    }
    return zeros;
}

}  // namespace

ZeroTable find_zeros(double t_max, const FindOptions& options) {
    if (!(t_max > 0) || t_max > 1e6) throw DomainError("zeros", "find_zeros", "t_max must be in (0, 1e6]");
    std::vector<Ball> all = find_through(-1, static_cast<long double>(t_max), options);
    ZeroTable table;
    for (Ball& z : all) {
        if (mpfr_cmp_d(z.mid(), t_max) <= 0) table.ordinates.push_back(std::move(z));
    }
    table.source = Source::computed;
    table.height_max = t_max;
    table.check_ordering();
    return table;
}

ZeroTable find_zeros_by_count(std::size_t count, const FindOptions& options) {
    if (count == 0) throw DomainError("zeros", "find_zeros", "count must be positive");
    // N(g_n) = n + 1 at good Gram points, so stopping at or beyond g_count
    // yields at least count + 1 zeros.
    std::vector<Ball> all = find_through(static_cast<long>(count), 0.0L, options);
    if (all.size() <= count) {
        throw IncompleteTableError("zeros", "find_zeros", "zero count fell short of the Gram estimate");
    }
    ZeroTable table;
    table.height_max = ((all[count - 1] + all[count]).ldexp(-1)).mid_double();
    all.resize(count);
    table.ordinates = std::move(all);
    table.source = Source::computed;
    table.check_ordering();
    return table;
}

}  // namespace zetasum::zeros
