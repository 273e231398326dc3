#include "zetasum/estimator.hpp"

#include "zetasum/errors.hpp"
#include "zetasum/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace zetasum::est {

using zeros::ZeroTable;
using phi::PhiSpec;

namespace {

Ball two_pi() { return Ball::pi().ldexp(1); }

void require_at_least(const Ball& T, const Ball& lo, const char* op, const std::string& what) {
    if (mpfr_cmp(T.mid(), lo.mid()) < 0) throw DomainError("estimator", op, "T = " + T.to_string() + " is below " + what);
}

// F with int_a^b phi(t)/t dt = F(b) - F(a) and F(inf) = 0, for the built-ins
std::optional<std::function<Ball(const Ball&)>> over_t_antiderivative(const PhiSpec& spec) {
    switch (spec.builtin) {
        case phi::Builtin::inv_power:
        case phi::Builtin::inv_t:
        case phi::Builtin::inv_square: {
            const mpq_class c = spec.power;
            return [c](const Ball& t) {
                const Ball tc = c.get_den() == 1 && c.get_num().fits_slong_p() ? numeric::pow(t, c.get_num().get_si())
                                                                               : numeric::pow(t, Ball::from_rational(c));
                return -Ball(1) / (Ball::from_rational(c) * tc);
            };
        }
        case phi::Builtin::inv_log_sq:
            return [](const Ball& t) { return -Ball(1) / numeric::log(t / two_pi()); };
        case phi::Builtin::inv_t2_plus_quarter:
            return [](const Ball& t) { return -Ball(2) * numeric::log(Ball(1) + Ball(1) / (Ball(4) * t * t)); };
        case phi::Builtin::none: break;
    }
    return std::nullopt;
}

// int_T^T2 phi(t)/t dt
Ball over_t_integral(const PhiSpec& spec, const Ball& T, const std::optional<Ball>& T2, double tol) {
    if (const auto F = over_t_antiderivative(spec)) {
        return T2 ? (*F)(*T2) - (*F)(T) : -(*F)(T);
    }
    const quad::Integrand f = [&](const Ball& t) { return spec.phi(t) / t; };
    return T2 ? quad::integrate_finite(f, T, *T2, tol).value : quad::integrate_tail(f, T, tol).value;
}

void check_log_tail(const PhiSpec& spec, const Ball& T) {
    bool converges;
    if (spec.log_tail_converges) {
        converges = *spec.log_tail_converges;
    } else {
        const long double tp = 2.0L * M_PIl;
        converges = !quad::tail_diverges([&](long double t) { return spec.phi_fast(t) * std::log(t / tp); },
                                         T.mid_long_double());
    }
    if (!converges) {
        throw DivergenceError("estimator", "convergent_total",
                              spec.name + ": int phi(t) log t dt diverges; use the divergent limit instead");
    }
}

void check_over_t_tail(const PhiSpec& spec) {
    bool converges;
    if (spec.over_t_tail_converges) {
        converges = *spec.over_t_tail_converges;
    } else {
        converges = !quad::tail_diverges([&](long double t) { return spec.phi_fast(t) / t; }, spec.T0.mid_long_double());
    }
    if (!converges) {
        throw AdmissibilityError("estimator", "divergent_limit", spec.name + ": int phi(t)/t dt diverges");
    }
}

std::atomic<double> g_quad_factor{1e-3};

// quadrature tolerance: well below the analytic error bound
double quad_tol(const Ball& bound) {
    const double b = bound.mag_upper();
    return b > 0 ? g_quad_factor.load() * b : 1e-30;
}

struct DivergentParts {
    Ball T1, partial, integral, boundary, e2;
};

DivergentParts divergent_parts(const ZeroTable& table, const PhiSpec& spec, std::size_t n_use, Anchor anchor,
                               bool with_boundary) {
    check_over_t_tail(spec);
    DivergentParts p;
    p.T1 = table.midpoint_after(n_use);
    spec.ensure_admissible(p.T1.mid_double());
    p.e2 = e2_bound(spec, p.T1);
    p.partial = weighted_partial_sum(table, spec, spec.T0, p.T1);
    if (anchor == Anchor::antiderivative) {
        if (!spec.tail_antiderivative) {
            throw DomainError("estimator", "divergent_limit", spec.name + " has no closed-form antiderivative");
        }
        p.integral = spec.tail_antiderivative->at(p.T1);
    } else {
        p.integral = quad::main_integral(spec, spec.T0, p.T1, quad_tol(p.e2)).value;
    }
    if (with_boundary) p.boundary = spec.phi(p.T1) * zeros::Q_of(table, p.T1);
    return p;
}

std::string fixed_with_radius(const Ball& x, int decimals) {
    char rad[32];
    std::snprintf(rad, sizeof rad, "%.1e", x.rad());
    return x.mid_fixed(decimals) + " ± " + rad;
}

}  // namespace

const ExplicitConstants& ExplicitConstants::get() {
    thread_local std::map<mpfr_prec_t, ExplicitConstants> cache;
    const mpfr_prec_t prec = numeric::working_precision();
    auto it = cache.find(prec);
    if (it == cache.end()) {
        ExplicitConstants c{Ball::from_decimal("0.28"), Ball::from_decimal("2.067"), Ball::from_decimal("0.059"),
                            Ball::from_rational(mpq_class(1, 150)), Ball::euler_gamma()};
        it = cache.emplace(prec, std::move(c)).first;
    }
    return it->second;
}

void set_quadrature_factor(double factor) {
    if (!(factor > 0) || factor > 1) throw DomainError("estimator", "set_quadrature_factor", "factor must be in (0, 1]");
    g_quad_factor = factor;
}

double quadrature_factor() { return g_quad_factor.load(); }

std::string method_name(Method m) {
    switch (m) {
        case Method::lehman: return "lehman";
        case Method::theorem1: return "theorem1";
        case Method::theorem4: return "theorem4";
        case Method::identity: return "identity";
    }
    return "?";
}

Ball weighted_partial_sum(const ZeroTable& table, const PhiSpec& spec, const Ball& T1, const Ball& T2) {
    require_at_least(T1, spec.T0, "weighted_partial_sum", "T0");
    if (mpfr_cmp(T2.mid(), T1.mid()) < 0) throw DomainError("estimator", "weighted_partial_sum", "requires T1 <= T2");
    if (T2.mid_double() > table.height_max) {
        throw RangeError("estimator", "weighted_partial_sum",
                         "T2 = " + T2.to_string() + " is beyond the table's certified height");
    }
    const auto first = std::partition_point(table.ordinates.begin(), table.ordinates.end(),
                                            [&](const Ball& z) { return z.upper() < T1.lower(); });
    Ball sum;
    for (auto it = first; it != table.ordinates.end() && !(it->lower() > T2.upper()); ++it) {
        const Ball term = spec.phi(*it);
        if (it->overlaps(T1) || it->overlaps(T2)) {
            sum += term.ldexp(-1);
        } else {
            sum += term;
        }
    }
    return sum;
}

Ball e2_bound(const PhiSpec& spec, const Ball& T1) {
    require_at_least(T1, two_pi(), "e2_bound", "2 pi");
    const ExplicitConstants& k = ExplicitConstants::get();
    return Ball(2) * (k.A0 + k.A1 * numeric::log(T1)) * numeric::abs(spec.dphi(T1)) +
           (k.A1 + k.A2) * spec.phi(T1) / T1;
}

Ball lehman_bound(const PhiSpec& spec, const Ball& T, const std::optional<Ball>& T2) {
    const Ball head = Ball(2) * spec.phi(T) * numeric::log(T);
    const Ball integral = over_t_integral(spec, T, T2, std::max(1e-6 * head.mag_upper(), 1e-300));
    return ExplicitConstants::get().A * (head + integral);
}

SumEstimate lehman_estimate(const ZeroTable& table, const PhiSpec& spec, const Ball& T, const std::optional<Ball>& T2) {
    require_at_least(T, two_pi() * numeric::exp(Ball(1)), "lehman_estimate", "2 pi e");
    if (T2 && mpfr_cmp(T2->mid(), T.mid()) < 0) throw DomainError("estimator", "lehman_estimate", "requires T <= T2");
    spec.ensure_admissible((T2 ? *T2 : T).mid_double());
    SumEstimate r;
    r.method = Method::lehman;
    r.T_used = T;
    r.error_bound = lehman_bound(spec, T, T2);
    r.integral_term = quad::main_integral(spec, T, T2, quad_tol(r.error_bound)).value;
    r.value = r.integral_term.widened(r.error_bound);
    if (T2 && T2->mid_double() <= table.height_max) {
        r.partial_sum = weighted_partial_sum(table, spec, T, *T2);
        r.n_zeros = static_cast<std::size_t>(std::count_if(table.ordinates.begin(), table.ordinates.end(), [&](const Ball& z) {
            return !(z.upper() < T.lower()) && !(z.lower() > T2->upper());
        }));
    }
    return r;
}

IdentitySides finite_identity(const ZeroTable& table, const PhiSpec& spec, const Ball& T1, const Ball& T2, double tol) {
    if (mpfr_cmp(T2.mid(), T1.mid()) < 0) throw DomainError("estimator", "finite_identity", "requires T1 <= T2");
    require_at_least(T1, spec.T0, "finite_identity", "T0");
    spec.ensure_admissible(T2.mid_double());
    IdentitySides out;
    const Ball Q1 = zeros::Q_of(table, T1), Q2 = zeros::Q_of(table, T2);
    if (mpfr_equal_p(T1.mid(), T2.mid())) return out;

    const Ball boundary = spec.phi(T2) * Q2 - spec.phi(T1) * Q1;
    out.lhs = weighted_partial_sum(table, spec, T1, T2) - quad::main_integral(spec, T1, T2, tol).value - boundary;

    // Q(t) = n - L(t) is smooth between consecutive zeros
    const auto first = std::partition_point(table.ordinates.begin(), table.ordinates.end(),
                                            [&](const Ball& z) { return z.upper() < T1.lower(); });
    const auto last = std::partition_point(first, table.ordinates.end(),
                                           [&](const Ball& z) { return z.upper() < T2.lower(); });
    std::vector<Ball> cuts{T1};
    cuts.insert(cuts.end(), first, last);
    cuts.push_back(T2);
    long n = static_cast<long>(first - table.ordinates.begin());
    const double piece_tol = tol / static_cast<double>(cuts.size() - 1);
    Ball rhs;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i, ++n) {
        const Ball count(n);
        const quad::Integrand f = [&](const Ball& t) { return -spec.dphi(t) * (count - zeros::L_of(t)); };
        rhs += quad::integrate_finite(f, cuts[i], cuts[i + 1], piece_tol).value;
    }
    out.rhs = rhs;
    return out;
}

SumEstimate convergent_total(const ZeroTable& table, const PhiSpec& spec, std::size_t n_use) {
    SumEstimate r;
    r.method = Method::theorem1;
    r.T_used = table.midpoint_after(n_use);
    r.n_zeros = n_use;
    spec.ensure_admissible(r.T_used.mid_double());
    check_log_tail(spec, r.T_used);
    r.error_bound = e2_bound(spec, r.T_used);
    r.partial_sum = weighted_partial_sum(table, spec, spec.T0, r.T_used);
    r.integral_term = quad::main_integral(spec, r.T_used, std::nullopt, quad_tol(r.error_bound)).value;
    r.boundary_term = spec.phi(r.T_used) * zeros::Q_of(table, r.T_used);
    // the tail sum is the integral - phi(T) Q(T) + theta E2(T)
    r.value = (r.partial_sum + r.integral_term - r.boundary_term).widened(r.error_bound);
    return r;
}

SumEstimate divergent_limit(const ZeroTable& table, const PhiSpec& spec, std::size_t n_use, Anchor anchor) {
    const DivergentParts p = divergent_parts(table, spec, n_use, anchor, true);
    SumEstimate r;
    r.method = Method::theorem4;
    r.T_used = p.T1;
    r.n_zeros = n_use;
    r.partial_sum = p.partial;
    r.integral_term = p.integral;
    r.boundary_term = p.boundary;
    r.error_bound = p.e2;
    r.value = (p.partial - p.integral - p.boundary).widened(p.e2);
    return r;
}

Ball naive_divergent_estimate(const ZeroTable& table, const PhiSpec& spec, std::size_t n_use, Anchor anchor) {
    const DivergentParts p = divergent_parts(table, spec, n_use, anchor, false);
    return p.partial - p.integral;
}

std::string format_bound(const Ball& bound, int sig) {
    const double v = bound.upper();
    if (!(v > 0) || !std::isfinite(v)) return "0";
    int e = static_cast<int>(std::floor(std::log10(v)));
    // exact decimal ceiling through the MPFR midpoint, not the double
    mpz_class m;
    {
        numeric::PrecisionScope scope(256);
        Ball scaled = Ball::from_double(v) * numeric::pow(Ball(10), static_cast<long>(sig - 1 - e));
        mpfr_t tmp;
        mpfr_init2(tmp, 256);
        mpfr_set(tmp, scaled.mid(), MPFR_RNDU);
        mpfr_ceil(tmp, tmp);
        mpfr_get_z(m.get_mpz_t(), tmp, MPFR_RNDU);
        mpfr_clear(tmp);
    }
    std::string digits = m.get_str();
    if (static_cast<int>(digits.size()) > sig) {  // 9.995 -> 10.0
        ++e;
        digits = digits.substr(0, static_cast<std::size_t>(sig));
    }
    char exp[16];
    std::snprintf(exp, sizeof exp, "e%+03d", e);
    return digits.substr(0, 1) + (sig > 1 ? "." + digits.substr(1) : "") + exp;
}

PhiSpec c2_phi() { return phi::make_phi("builtin:inv_log_sq", Ball(14)); }

Table1Report table1_report(const ZeroTable& table, std::size_t max_n) {
    Table1Report report;
    const PhiSpec spec = c2_phi();
    for (std::size_t n = 10; n <= max_n; n *= 10) {
        if (n >= table.size()) {
            report.notices.push_back("row n = " + std::to_string(n) + " skipped: the table has " +
                                     std::to_string(table.size()) + " zeros, " + std::to_string(n + 1) + " needed");
            break;
        }
        const SumEstimate e = divergent_limit(table, spec, n, Anchor::antiderivative);
        Table1Row row;
        row.n = n;
        row.T = e.T_used;
        row.naive = e.partial_sum - e.integral_term;
        row.accelerated = e.partial_sum - e.integral_term - e.boundary_term;
        row.bound = e.error_bound;
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string Table1Report::text() const {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%8s  %-18s  %-28s  %-28s  %s\n", "n", "T", "naive", "accelerated", "bound");
    os << line;
    for (const Table1Row& r : rows) {
        std::snprintf(line, sizeof line, "%8zu  %-18s  %-28s  %-28s  %s\n", r.n, r.T.mid_fixed(10).c_str(),
                      fixed_with_radius(r.naive, 10).c_str(), fixed_with_radius(r.accelerated, 10).c_str(),
                      format_bound(r.bound).c_str());
        os << line;
    }
    for (const std::string& n : notices) os << "# " << n << '\n';
    return os.str();
}

std::string Table1Report::csv() const {
    std::ostringstream os;
    os << "n,T,naive,accelerated,bound\n";
    for (const Table1Row& r : rows) {
        os << r.n << ',' << r.T.mid_fixed(10) << ',' << fixed_with_radius(r.naive, 10) << ','
           << fixed_with_radius(r.accelerated, 10) << ',' << format_bound(r.bound) << '\n';
    }
    return os.str();
}

}  // namespace zetasum::est
