#include "doctest.h"
#include "zetasum/errors.hpp"
#include "zetasum/estimator.hpp"
#include "zetasum/quadrature.hpp"

#include <cmath>

using namespace zetasum;
using namespace zetasum::est;
using numeric::Ball;

namespace {

Ball two_pi() { return Ball::pi().ldexp(1); }

const zeros::ZeroTable& table1000() {
    static const zeros::ZeroTable t = zeros::find_zeros(1005.0);
    return t;
}

phi::PhiSpec make(const char* text) { return phi::make_phi(text, two_pi()); }

const char* kC1 = "0.0231049931154189707889338104";
const char* kRemark2 = "0.0230957089661210338143";
const char* kH = "-0.0171594043070981495";
const char* kC2 = "-0.5276697875";

}  // namespace

TEST_CASE("explicit constants") {
    const ExplicitConstants& k = ExplicitConstants::get();
    CHECK(k.A.contains_decimal("0.28"));
    CHECK(k.A0.contains_decimal("2.067"));
    CHECK(k.A1.contains_decimal("0.059"));
    CHECK((k.A2 * Ball(150)).contains(1.0));
    CHECK(k.euler_gamma.contains_decimal("0.57721566490153286060651209008240243104215933593992"));
}

TEST_CASE("weighted partial sums") {
    const auto& z = table1000();
    const phi::PhiSpec sq = make("builtin:inv_square");
    const Ball s = weighted_partial_sum(z, sq, two_pi(), Ball(15));
    CHECK(s.contains_decimal("0.005005244123594116078809401234791290488753"));  // 1/gamma_1^2
    CHECK(weighted_partial_sum(z, sq, Ball(30), Ball(30)).contains(0.0));
    // an endpoint on a zero gives half weight
    const Ball g1 = z.ordinates[0];
    const Ball half = weighted_partial_sum(z, sq, two_pi(), g1);
    CHECK(half.overlaps(s.ldexp(-1)));
    CHECK_THROWS_AS(weighted_partial_sum(z, sq, two_pi(), Ball(2000)), RangeError);
    CHECK_THROWS_AS(weighted_partial_sum(z, sq, Ball(5), Ball(15)), DomainError);
}

TEST_CASE("bounds at T = 1000") {
    const phi::PhiSpec sq = make("builtin:inv_square");
    const Ball T(1000);
    const Ball lb = lehman_bound(sq, T, std::nullopt);
    const Ball eb = e2_bound(sq, T);
    // (0.14 + 0.56 log T)/T^2 and (8.334 + 0.236 log T)/T^3 up to the rounding in the printed coefficients
    CHECK(std::fabs(lb.mid_double() - 4.00834e-6) < 1e-10);
    CHECK(std::fabs(eb.mid_double() - 9.96424e-9) < 1e-12);
    CHECK(lb.mid_double() <= 4.009e-6);
    CHECK(eb.mid_double() <= 9.965e-9);
    CHECK(lb.mid_double() / eb.mid_double() >= 400.0);
    CHECK(format_bound(lb, 4) == "4.009e-06");
    // the printed 9.965 comes from coefficients already rounded upwards
    CHECK(format_bound(eb, 4) == "9.964e-09");
    CHECK(std::fabs(eb.mid_double() - 9.965e-9) < 0.005e-9);
    CHECK(format_bound(Ball::from_double(9.991), 3) == "1.00e+01");
    CHECK(format_bound(Ball::from_double(0.5), 3) == "5.00e-01");
    // DSL phi uses quadrature for the 1/t integral
    const Ball lb_dsl = lehman_bound(make("1/t^2"), T, std::nullopt);
    CHECK(std::fabs(lb_dsl.mid_double() - lb.mid_double()) < 1e-12);

    // the c2 weight: (0.302 L + 8.702)/(T L^3)
    const phi::PhiSpec ls = c2_phi();
    for (double t : {51.0, 237.0, 1000.0, 9878.0}) {
        const double L = std::log(t / (2 * M_PI));
        const double closed = (0.302 * L + 8.702) / (t * L * L * L);
        CHECK(std::fabs(e2_bound(ls, Ball::from_double(t)).mid_double() / closed - 1.0) < 1e-3);
    }
}

TEST_CASE("Lehman estimate") {
    const auto& z = table1000();
    const phi::PhiSpec sq = make("builtin:inv_square");
    const Ball lo = two_pi() * numeric::exp(Ball(1));
    const SumEstimate e = lehman_estimate(z, sq, lo, lo);
    CHECK(e.integral_term.contains(0.0));
    CHECK(e.error_bound.overlaps(Ball::from_decimal("0.28") * Ball(2) * sq.phi(lo) * numeric::log(lo)));
    CHECK_THROWS_AS(lehman_estimate(z, sq, Ball(17), std::nullopt), DomainError);

    // consistent with the sharper estimate
    const SumEstimate tail = lehman_estimate(z, sq, z.midpoint_after(649), std::nullopt);
    const SumEstimate total = convergent_total(z, sq, 649);
    CHECK((total.partial_sum + tail.value).overlaps(total.value));

    // the sum over [100, 900] is inside the Lehman enclosure
    const SumEstimate fin = lehman_estimate(z, sq, Ball(100), Ball(900));
    CHECK(fin.value.contains(fin.partial_sum));
    CHECK(fin.n_zeros > 400);
}

TEST_CASE("finite identity") {
    const auto& z = table1000();
    for (const char* name : {"builtin:inv_t", "builtin:inv_square", "builtin:inv_t2_plus_quarter", "1/t^1.5"}) {
        const phi::PhiSpec s = make(name);
        for (auto [a, b] : {std::pair{20, 500}, std::pair{50, 200}, std::pair{100, 1000}}) {
            CAPTURE(name);
            CAPTURE(a);
            const IdentitySides sides = finite_identity(z, s, Ball(a), Ball(b), 1e-14);
            CHECK(sides.lhs.overlaps(sides.rhs));
            CHECK(sides.rhs.mag_upper() <= e2_bound(s, Ball(a)).mid_double());
            CHECK(sides.lhs.rad() < 1e-10);
        }
    }
    const phi::PhiSpec ls = c2_phi();
    const IdentitySides sides = finite_identity(z, ls, Ball(20), Ball(500), 1e-14);
    CHECK(sides.lhs.overlaps(sides.rhs));
    const IdentitySides empty = finite_identity(z, ls, Ball(30), Ball(30), 1e-14);
    CHECK(empty.lhs.contains(0.0));
    CHECK(empty.rhs.contains(0.0));
    // T on a zero
    CHECK_THROWS_AS(finite_identity(z, ls, z.ordinates[3], Ball(500), 1e-14), AmbiguityError);
}

TEST_CASE("convergent totals") {
    const auto& z = table1000();
    const phi::PhiSpec sq = make("builtin:inv_square");
    const SumEstimate e = convergent_total(z, sq, 649);
    CHECK(e.method == Method::theorem1);
    CHECK(e.value.contains_decimal(kC1));
    CHECK(e.value.rad() <= 1.1e-8);
    CHECK(e.value.rad() >= e.error_bound.mid_double());
    CHECK(e.T_used.lower() > z.ordinates[648].upper());
    CHECK(e.T_used.upper() < z.ordinates[649].lower());

    // enclosures nest as n grows
    const SumEstimate e100 = convergent_total(z, sq, 100);
    CHECK(e100.value.contains_decimal(kC1));
    CHECK(e100.value.overlaps(e.value));

    const SumEstimate dsl = convergent_total(z, make("1/t^2"), 649);
    CHECK(dsl.value.contains_decimal(kC1));

    const SumEstimate r2 = convergent_total(z, make("builtin:inv_t2_plus_quarter"), 649);
    CHECK(r2.value.contains_decimal(kRemark2));
    const Ball closed = Ball(1) + Ball::euler_gamma().ldexp(-1) - numeric::log(Ball::pi().ldexp(2)).ldexp(-1);
    CHECK(r2.value.overlaps(closed));

    CHECK_THROWS_AS(convergent_total(z, make("builtin:inv_t"), 649), DivergenceError);
    CHECK_THROWS_AS(convergent_total(z, make("1/t"), 649), DivergenceError);
    CHECK_THROWS_AS(convergent_total(z, sq, z.size()), RangeError);
}

TEST_CASE("divergent limits") {
    const auto& z = table1000();
    const SumEstimate h = divergent_limit(z, make("builtin:inv_t"), 649);
    CHECK(h.method == Method::theorem4);
    CHECK(h.value.contains_decimal(kH));
    const SumEstimate h_dsl = divergent_limit(z, make("1/t"), 649);
    CHECK(h_dsl.value.contains_decimal(kH));

    const phi::PhiSpec ls = c2_phi();
    const SumEstimate c2 = divergent_limit(z, ls, 600, Anchor::antiderivative);
    CHECK(c2.value.contains_decimal(kC2));
    // anchored at T0 the limit moves by li(T0/2pi)
    const SumEstimate c2_t0 = divergent_limit(z, ls, 600);
    CHECK((c2_t0.value - quad::li(Ball(14) / two_pi())).contains_decimal(kC2));

    // table rows n = 10, 100
    const Ball naive10 = naive_divergent_estimate(z, ls, 10, Anchor::antiderivative);
    CHECK(std::fabs(naive10.mid_double() - -0.499862587495) < 1e-11);
    const SumEstimate acc10 = divergent_limit(z, ls, 10, Anchor::antiderivative);
    CHECK(std::fabs((acc10.partial_sum - acc10.integral_term - acc10.boundary_term).mid_double() - -0.527339075642) < 1e-11);
    CHECK(std::fabs(acc10.T_used.mid_double() - 51.3720769776934) < 1e-12);

    // the boundary term helps from n = 100 on
    const Ball c2ref = Ball::from_decimal(kC2);
    for (std::size_t n : {100, 300, 600}) {
        const SumEstimate acc = divergent_limit(z, ls, n, Anchor::antiderivative);
        const Ball fast = acc.partial_sum - acc.integral_term - acc.boundary_term;
        const Ball naive = naive_divergent_estimate(z, ls, n, Anchor::antiderivative);
        CHECK((fast - c2ref).mag_upper() < (naive - c2ref).mag_lower());
    }

    CHECK_THROWS_AS(divergent_limit(z, phi::make_phi("1/log(t/(2*pi))", Ball(14)), 100), AdmissibilityError);
    CHECK_THROWS_AS(divergent_limit(z, make("1/t^2 + 1/t"), 100, Anchor::antiderivative), DomainError);
}

TEST_CASE("table 1 report") {
    const auto& z = table1000();
    const Table1Report r = table1_report(z, 1000);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].naive.mid_fixed(8) == "-0.49986259");
    CHECK(r.rows[0].accelerated.mid_fixed(8) == "-0.52733908");
    CHECK(r.rows[1].naive.mid_fixed(8) == "-0.54054724");
    CHECK(r.rows[1].accelerated.mid_fixed(8) == "-0.52767238");
    CHECK(format_bound(r.rows[0].bound) == "1.96e-02");
    CHECK(format_bound(r.rows[1].bound) == "8.64e-04");
    CHECK(r.notices.size() == 1);
    const std::string csv = r.csv();
    CHECK(csv.rfind("n,T,naive,accelerated,bound\n", 0) == 0);
    CHECK(csv.find("\n10,51.3720769777,-0.4998625875 ± ") != std::string::npos);
    CHECK(r.text().find("-0.5273390756") != std::string::npos);
    CHECK(r.text() == table1_report(z, 1000).text());
}
