#include "doctest.h"
#include "zetasum/errors.hpp"
#include "zetasum/phifunc.hpp"

#include <cmath>
#include <random>

using namespace zetasum;
using namespace zetasum::phi;
using numeric::Ball;

namespace {

Ball two_pi() { return Ball::pi().ldexp(1); }

std::string roundtrip(const std::string& s) { return to_string(parse_phi(s)); }

// central difference with step h, long double
long double fd(const std::function<long double(long double)>& f, long double t) {
    const long double h = 1e-4L * t;
    return (f(t + h) - f(t - h)) / (2 * h);
}

}  // namespace

TEST_CASE("parser and printer") {
    CHECK(roundtrip("1/t") == "1/t");
    CHECK(roundtrip("1/t^2") == "1/t^2");
    CHECK(roundtrip("1 / (t^2 + 0.25)") == "1/(t^2 + 0.25)");
    CHECK(roundtrip("1/(log(t/(2*pi)))^2") == "1/log(t/(2*pi))^2");
    CHECK(roundtrip("t^-2") == "t^-2");
    CHECK(roundtrip("-t") == "-t");
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_phi("1/t^^2"), ParseError);
    CHECK_THROWS_AS(parse_phi(""), ParseError);
    CHECK_THROWS_AS(parse_phi("(1/t"), ParseError);
    CHECK_THROWS_AS(parse_phi("1/t)"), ParseError);
    CHECK_THROWS_AS(parse_phi("sin(t)"), ParseError);
    CHECK_THROWS_AS(parse_phi("x"), ParseError);
    CHECK_THROWS_AS(parse_phi("1e5"), ParseError);
}

TEST_CASE("symbolic derivatives") {
    CHECK(to_string(differentiate(parse_phi("1/t"))) == "-1/t^2");
    CHECK(to_string(differentiate(parse_phi("1/t^2"))) == "-2/t^3");
    CHECK(to_string(differentiate(parse_phi("t"))) == "1");
    CHECK(to_string(differentiate(parse_phi("3"))) == "0");
    CHECK(to_string(differentiate(parse_phi("pi"))) == "0");
    CHECK(to_string(differentiate(parse_phi("log(t/(2*pi))"))) == "1/t");
}

TEST_CASE("evaluation") {
    const Ball t = Ball::from_decimal("10");
    CHECK(evaluate(parse_phi("1/t^2"), t).contains_decimal("0.01"));
    CHECK(evaluate(parse_phi("1/(t^2 + 0.25)"), t).contains_decimal("0.00997506234413965087281795511221945137157107231920199501246882793"));
    CHECK(evaluate(parse_phi("exp(-t)"), t).contains_decimal("0.0000453999297624848515355915155605506102379765162302209"));
    CHECK(evaluate(parse_phi("log(t/(2*pi))"), t).contains_decimal("0.464708026584700200457331981873128927878306541353206150399025"));
    CHECK(evaluate(parse_phi("t^0.5"), t).contains_decimal("3.16227766016837933199889354443271853371955513932521682685750"));
    CHECK_THROWS_AS(evaluate(parse_phi("log(t - 20)"), t), DomainError);
    CHECK_THROWS_AS(evaluate(parse_phi("1/(t - 10)"), t), DomainError);
}

TEST_CASE("built-ins") {
    CHECK(builtin_text(Builtin::inv_t) == "1/t");
    CHECK(builtin_text(Builtin::inv_square) == "1/t^2");
    CHECK(builtin_text(Builtin::inv_power, mpq_class(3, 2)) == "1/t^1.5");
    CHECK(builtin_text(Builtin::inv_log_sq) == "1/(log(t/(2*pi)))^2");
    CHECK(builtin_text(Builtin::inv_t2_plus_quarter) == "1/(t^2 + 0.25)");

    const PhiSpec sq = make_phi("builtin:inv_square", two_pi());
    CHECK(sq.builtin == Builtin::inv_square);
    CHECK(sq.tail_antiderivative.has_value());
    CHECK(*sq.log_tail_converges);
    const PhiSpec inv = make_phi("builtin:inv_t", two_pi());
    CHECK_FALSE(*inv.log_tail_converges);
    const PhiSpec p = make_phi("builtin:inv_power:1.5", two_pi());
    CHECK(p.power == mpq_class(3, 2));
    CHECK(p.phi(Ball(100)).contains_decimal("0.001"));
    CHECK_THROWS_AS(make_phi("builtin:inv_power", two_pi()), ParseError);
    CHECK_THROWS_AS(make_phi("builtin:inv_power:-1", two_pi()), DomainError);
    CHECK_THROWS_AS(make_phi("builtin:nope", two_pi()), ParseError);
    CHECK_THROWS_AS(make_phi("builtin:inv_t:2", two_pi()), ParseError);
}

TEST_CASE("all built-ins admissible to 1e7") {
    for (const char* name : {"builtin:inv_t", "builtin:inv_square", "builtin:inv_power:3", "builtin:inv_t2_plus_quarter"}) {
        const PhiSpec s = make_phi(name, two_pi());
        CHECK_NOTHROW(s.ensure_admissible(1e6));
        CHECK(s.checked_upper() >= 1e7);
    }
    // singular at 2 pi, so started a little to the right
    const PhiSpec s = make_phi("builtin:inv_log_sq", Ball(14));
    CHECK_NOTHROW(s.ensure_admissible(1e6));
    CHECK_THROWS_AS(make_phi("builtin:inv_log_sq", two_pi()), AdmissibilityError);
}

TEST_CASE("T0 handling") {
    const PhiSpec s = make_phi("1/t", Ball::from_decimal("6.283185307179586"));
    CHECK(mpfr_equal_p(s.T0.mid(), two_pi().mid()));
    CHECK_THROWS_AS(make_phi("1/t", Ball(6)), DomainError);
    CHECK_THROWS_AS(s.phi(Ball(5)), DomainError);
    CHECK_THROWS_AS(s.dphi(Ball(5)), DomainError);
}

TEST_CASE("admissibility rejections") {
    CHECK_THROWS_AS(make_phi("t", two_pi()), AdmissibilityError);
    CHECK_THROWS_AS(make_phi("-1/t", two_pi()), AdmissibilityError);
    CHECK_THROWS_AS(make_phi("1 - 1/t", two_pi()), AdmissibilityError);
    CHECK_THROWS_AS(make_phi("exp(-t^2/1000)", two_pi()), AdmissibilityError);  // concave near 22
    CHECK_NOTHROW(make_phi("exp(-t)", two_pi()));
    CHECK_NOTHROW(make_phi("2", two_pi()));
}

TEST_CASE("derivatives of built-ins match finite differences") {
    for (const char* name : {"builtin:inv_t", "builtin:inv_square", "builtin:inv_power:2.5", "builtin:inv_t2_plus_quarter"}) {
        const PhiSpec s = make_phi(name, Ball(14));
        for (long double t : {20.0L, 100.0L, 1234.5L, 1e5L}) {
            const long double d1 = s.dphi_fast(t), d2 = s.d2phi_fast(t);
            CHECK(std::fabs(d1 - fd([&](long double x) { return s.phi_fast(x); }, t)) <= 1e-7L * std::fabs(d1));
            CHECK(std::fabs(d2 - fd([&](long double x) { return s.dphi_fast(x); }, t)) <= 1e-7L * std::fabs(d2));
            // the ball evaluation agrees with the fast one
            CHECK(std::fabs(s.dphi(Ball::from_long_double(t)).mid_long_double() - d1) <= 1e-15L * std::fabs(d1));
        }
    }
}

TEST_CASE("random admissible expressions") {
    // products and sums of positive, decreasing, convex atoms stay admissible
    const std::vector<std::string> atoms = {"1/t", "1/t^2", "exp(-t/50)", "1/log(t)", "1/(t + 3)", "t^-0.5",
                                            "1/(t^2 + 0.25)", "1/log(t)^2", "0.5"};
    std::mt19937 rng(12345);
    std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
    std::uniform_int_distribution<int> op(0, 1);
    for (int k = 0; k < 100; ++k) {
        std::string text = atoms[pick(rng)];
        const int n = 1 + k % 3;
        for (int i = 0; i < n; ++i) text = "(" + text + ")" + (op(rng) ? " * " : " + ") + "(" + atoms[pick(rng)] + ")";
        CAPTURE(text);
        const PhiSpec s = make_phi(text, Ball(10));
        // printing then parsing is stable
        const std::string printed = to_string(s.body);
        CHECK(to_string(parse_phi(printed)) == printed);
        CHECK(structurally_equal(parse_phi(printed), s.body));
        for (long double t : {12.0L, 77.0L, 900.0L}) {
            const long double d1 = s.dphi_fast(t), d2 = s.d2phi_fast(t);
            CHECK(std::fabs(d1 - fd([&](long double x) { return s.phi_fast(x); }, t)) <= 1e-6L * std::fabs(d1) + 1e-12L * s.phi_fast(t) / t);
            CHECK(std::fabs(d2 - fd([&](long double x) { return s.dphi_fast(x); }, t)) <= 1e-6L * std::fabs(d2) + 1e-12L * std::fabs(d1) / t);
        }
    }
}
