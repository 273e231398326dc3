#include "doctest.h"
#include "zetasum/errors.hpp"
#include "zetasum/quadrature.hpp"

#include <cmath>
#include <random>

using namespace zetasum;
using namespace zetasum::quad;
using numeric::Ball;

namespace {

Ball two_pi() { return Ball::pi().ldexp(1); }
Ball dec(const char* s) { return Ball::from_decimal(s); }

}  // namespace

TEST_CASE("finite integrals") {
    const Integrand inv = [](const Ball& t) { return Ball(1) / t; };
    const QuadResult r = integrate_finite(inv, Ball(1), numeric::exp(Ball(1)), 1e-20);
    CHECK(r.value.contains(1.0));
    CHECK(r.value.rad() <= 1e-20);
    CHECK(r.method == Method::adaptive);

    const QuadResult s = integrate_finite([](const Ball& x) { return numeric::sin(x); }, Ball(0), Ball::pi(), 1e-25);
    CHECK(s.value.contains(2.0));
    CHECK(s.value.rad() <= 1e-25);

    // (1/2pi) int_{2pi}^T log(t/2pi)/t dt = log^2(T/2pi)/(4pi)
    const Ball T(1000);
    const Integrand g = [&](const Ball& t) { return numeric::log(t / two_pi()) / t; };
    const Ball lhs = integrate_finite(g, two_pi(), T, 1e-18).value / two_pi();
    const Ball L = numeric::log(T / two_pi());
    const Ball rhs = L * L / Ball::pi().ldexp(2);
    CHECK(lhs.overlaps(rhs));
    CHECK(lhs.rad() <= 1e-17);

    CHECK(integrate_finite(inv, Ball(3), Ball(3), 1e-10).value.contains(0.0));
    CHECK_THROWS_AS(integrate_finite(inv, Ball(3), Ball(2), 1e-10), DomainError);
    CHECK_THROWS_AS(integrate_finite(inv, Ball(1), Ball(2), 0.0), DomainError);
}

TEST_CASE("additivity") {
    const Integrand f = [](const Ball& t) { return numeric::exp(-t / Ball(7)) / (t * t + Ball(1)); };
    const Ball whole = integrate_finite(f, Ball(1), Ball(50), 1e-22).value;
    const Ball parts = integrate_finite(f, Ball(1), dec("17.3"), 1e-22).value + integrate_finite(f, dec("17.3"), Ball(50), 1e-22).value;
    CHECK(whole.overlaps(parts));
    CHECK((whole - parts).mag_upper() <= 3e-22);
}

TEST_CASE("endpoint radius widens the result") {
    const Integrand f = [](const Ball& t) { return Ball(1) / t; };
    const QuadResult r = integrate_finite(f, Ball(1), Ball::from_double(2.0, 1e-6), 1e-20);
    CHECK(r.value.rad() >= 0.5e-6);
    CHECK(r.value.contains_decimal("0.693147180559945309417232121458"));
}

TEST_CASE("panel budget") {
    // oscillates far too fast for 2^16 panels at this tolerance
    const Integrand f = [](const Ball& t) { return numeric::sin(Ball(1000000000L) * t * t); };
    CHECK_THROWS_AS(integrate_finite(f, Ball(0), Ball(1000), 1e-30), ConvergenceError);
}

TEST_CASE("tails") {
    const Integrand sq = [](const Ball& t) { return Ball(1) / (t * t); };
    const QuadResult r = integrate_tail(sq, Ball(10), 1e-15);
    CHECK(r.value.contains_decimal("0.1"));
    CHECK(r.value.rad() <= 1e-15);
    CHECK(r.method == Method::tail_substitution);

    const Integrand e = [](const Ball& t) { return numeric::exp(-t / Ball(50)) / t; };
    const QuadResult re = integrate_tail(e, Ball(10), 1e-12);
    CHECK(re.value.contains_decimal("1.22265054418389308833477257757442277406"));

    const Integrand inv = [](const Ball& t) { return Ball(1) / t; };
    CHECK_THROWS_AS(integrate_tail(inv, Ball(10), 1e-10), DivergenceError);
}

TEST_CASE("divergence detector") {
    CHECK(tail_diverges([](long double t) { return 1.0L / t; }, 10.0L));
    CHECK(tail_diverges([](long double t) { return std::log(t) / t; }, 10.0L));
    CHECK_FALSE(tail_diverges([](long double t) { return 1.0L / (t * t); }, 10.0L));
    CHECK_FALSE(tail_diverges([](long double t) { return std::log(t) / std::pow(t, 1.5L); }, 10.0L));
    CHECK_FALSE(tail_diverges([](long double t) { return 1.0L / (t * std::log(t) * std::log(t)); }, 10.0L));
}

TEST_CASE("li") {
    CHECK(li(Ball(10)).contains_decimal("6.165599504787297937522981752669522749131"));
    CHECK(li(Ball(2)).contains_decimal("1.045163780117492784844588889194613136523"));
    CHECK(li(numeric::exp(Ball(1))).contains_decimal("1.895117816355936755466520934331634269017"));
    CHECK(li(Ball(10)).rad() <= 1e-30);
    CHECK(li(Ball(1000000)).contains_decimal("78627.54915946218191986291074794726116132"));
    CHECK_THROWS_AS(li(Ball(1)), DomainError);
    CHECK_THROWS_AS(li(dec("0.5")), DomainError);
}

TEST_CASE("main integral") {
    // closed form against adaptive quadrature for inv_square
    const phi::PhiSpec sq = phi::make_phi("builtin:inv_square", two_pi());
    const phi::PhiSpec sq_dsl = phi::make_phi("1/t^2", two_pi());
    const QuadResult closed = main_integral(sq, Ball(100), Ball(1000), 1e-20);
    const QuadResult adaptive = main_integral(sq_dsl, Ball(100), Ball(1000), 1e-20);
    CHECK(closed.method == Method::closed_form);
    CHECK(adaptive.method == Method::adaptive);
    CHECK(closed.value.overlaps(adaptive.value));

    const QuadResult tail = main_integral(sq, Ball(100), std::nullopt, 1e-20);
    CHECK(tail.value.contains_decimal("0.005995833220570441514186491098946889861487"));
    const QuadResult tail_dsl = main_integral(sq_dsl, Ball(100), std::nullopt, 1e-14);
    CHECK(tail_dsl.value.contains_decimal("0.005995833220570441514186491098946889861487"));

    const phi::PhiSpec q = phi::make_phi("builtin:inv_t2_plus_quarter", two_pi());
    const QuadResult rq = main_integral(q, two_pi(), std::nullopt, 1e-14);
    CHECK(rq.method == Method::tail_substitution);
    CHECK(rq.value.contains_decimal("0.02531251352525803973568254599197618721432"));
    CHECK(rq.value.rad() <= 1e-14);

    const phi::PhiSpec ls = phi::make_phi("builtin:inv_log_sq", Ball(14));
    CHECK(main_integral(ls, Ball(14), Ball(1000), 1e-20).value.contains_decimal("40.96790636524993121825589079098305255953"));
    CHECK_THROWS_AS(main_integral(ls, Ball(14), std::nullopt, 1e-10), DivergenceError);

    const phi::PhiSpec inv = phi::make_phi("builtin:inv_t", two_pi());
    CHECK_THROWS_AS(main_integral(inv, Ball(100), std::nullopt, 1e-10), DivergenceError);
    const phi::PhiSpec inv_dsl = phi::make_phi("1/t", two_pi());
    CHECK_THROWS_AS(main_integral(inv_dsl, Ball(100), std::nullopt, 1e-10), DivergenceError);
    // log^2(T/2pi)/(4pi) differences for phi = 1/t
    const Ball L1 = numeric::log(Ball(100) / two_pi()), L2 = numeric::log(Ball(1000) / two_pi());
    CHECK(main_integral(inv, Ball(100), Ball(1000), 1e-20).value.overlaps((L2 * L2 - L1 * L1) / Ball::pi().ldexp(2)));
    CHECK_THROWS_AS(main_integral(inv, Ball(5), Ball(1000), 1e-20), DomainError);
}

TEST_CASE("closed form and adaptive agree on random ranges") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const char* name : {"builtin:inv_t", "builtin:inv_square", "builtin:inv_power:1.5", "builtin:inv_log_sq"}) {
        const phi::PhiSpec closed = phi::make_phi(name, Ball(14));
        const phi::PhiSpec dsl = phi::make_phi(phi::to_string(closed.body), Ball(14));
        for (int i = 0; i < 20; ++i) {
            const double a = 14.0 * std::pow(1000.0, u(rng)), b = a * (1.0 + 10.0 * u(rng));
            CAPTURE(name);
            CAPTURE(a);
            const Ball x = main_integral(closed, Ball::from_double(a), Ball::from_double(b), 1e-18).value;
            const Ball y = main_integral(dsl, Ball::from_double(a), Ball::from_double(b), 1e-18).value;
            CHECK(x.overlaps(y));
            CHECK(y.rad() <= 1e-18);
        }
    }
}

TEST_CASE("additivity on random splits") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Integrand f = [](const Ball& t) { return numeric::log(t) / (t * t + Ball(1)); };
    for (int i = 0; i < 20; ++i) {
        const double a = 1.0 + 50.0 * u(rng), b = a + 20.0 * u(rng) + 0.01, c = b + 20.0 * u(rng) + 0.01;
        const Ball ab = integrate_finite(f, Ball::from_double(a), Ball::from_double(b), 1e-20).value;
        const Ball bc = integrate_finite(f, Ball::from_double(b), Ball::from_double(c), 1e-20).value;
        const Ball ac = integrate_finite(f, Ball::from_double(a), Ball::from_double(c), 1e-20).value;
        CHECK(ac.overlaps(ab + bc));
    }
}
