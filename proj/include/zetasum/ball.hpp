#pragma once

#include <mpfr.h>

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace zetasum::numeric {

/// Working precision (bits of mantissa) used for the midpoint of every
/// newly created Ball. Defaults to 128.
mpfr_prec_t working_precision() noexcept;
void set_working_precision(mpfr_prec_t bits);

/// Scoped override of the working precision, restores the previous value on
/// destruction. Intended for tests and for the oracle computations that
/// re-run an expression at higher precision.
class PrecisionScope {
public:
    explicit PrecisionScope(mpfr_prec_t bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    mpfr_prec_t saved_;
};

struct BallBuilder;

/// Midpoint-radius enclosure of a real number.
///
/// The midpoint is an MPFR float at the working precision in effect when the
/// ball was produced; the radius is a double that is always rounded upwards.
/// Every operation returns a ball that contains the image of all points of
/// its inputs, accounting for the rounding of the midpoint computation.
class Ball {
public:
    Ball();
    Ball(long value);  // NOLINT(google-explicit-constructor): exact integers
    Ball(const Ball& other);
    Ball(Ball&& other) noexcept;
    Ball& operator=(const Ball& other);
    Ball& operator=(Ball&& other) noexcept;
    ~Ball();

    static Ball from_double(double value, double radius = 0.0);
    static Ball from_long_double(long double value, double radius = 0.0);
    /// Parses a signed decimal literal (optional fraction and exponent).
    /// Throws ParseError on malformed input.
    static Ball from_decimal(std::string_view text);
    static Ball from_rational(const mpq_class& q);
    static Ball from_mpfr(mpfr_srcptr value, double radius = 0.0);

    static Ball pi();
    static Ball euler_gamma();

    mpfr_srcptr mid() const noexcept { return mid_; }
    double rad() const noexcept { return rad_; }
    double mid_double() const;
    long double mid_long_double() const;

    /// Upper bound on |x| for every x in the ball.
    double mag_upper() const;
    /// Lower bound on |x| for every x in the ball (0 if the ball contains 0).
    double mag_lower() const;
    double upper() const;
    double lower() const;

    bool is_exact() const noexcept { return rad_ == 0.0; }
    bool is_positive() const;
    bool is_negative() const;
    bool is_nonzero() const { return is_positive() || is_negative(); }

    bool contains(double v) const;
    bool contains(mpfr_srcptr v) const;
    /// Containment of the exact rational value of a decimal literal.
    bool contains_decimal(std::string_view text) const;
    bool contains(const Ball& other) const;
    bool overlaps(const Ball& other) const;

    /// Same midpoint, radius increased by `extra` (>= 0).
    Ball widened(double extra) const;
    /// Same midpoint, radius increased by an upper bound of |bound|.
    Ball widened(const Ball& bound) const;
    /// Midpoint-only copy with zero radius.
    Ball center() const;

    /// "m ± r" with the midpoint printed to the digits the radius supports
    /// plus two guard digits.
    std::string to_string() const;
    /// Midpoint with a fixed number of decimals (no radius).
    std::string mid_fixed(int decimals) const;

    friend Ball operator-(const Ball& x);
    friend Ball operator+(const Ball& x, const Ball& y);
    friend Ball operator-(const Ball& x, const Ball& y);
    friend Ball operator*(const Ball& x, const Ball& y);
    friend Ball operator/(const Ball& x, const Ball& y);

    Ball& operator+=(const Ball& y) { return *this = *this + y; }
    Ball& operator-=(const Ball& y) { return *this = *this - y; }
    Ball& operator*=(const Ball& y) { return *this = *this * y; }
    Ball& operator/=(const Ball& y) { return *this = *this / y; }

    /// Multiplication / division by 2^k, exact apart from the radius scaling.
    Ball ldexp(long k) const;

private:
    friend struct BallBuilder;
    mpfr_t mid_;
    double rad_ = 0.0;
};

Ball abs(const Ball& x);
/// x^2, never extending below zero.
Ball sqr(const Ball& x);
Ball sqrt(const Ball& x);
Ball log(const Ball& x);
Ball exp(const Ball& x);
Ball cos(const Ball& x);
Ball sin(const Ball& x);
/// Principal argument of x + iy; the box must not touch the branch cut
/// (x <= 0, y = 0) or the origin.
Ball atan2(const Ball& y, const Ball& x);
Ball pow(const Ball& x, long n);
/// x^y = exp(y log x), x must be strictly positive.
Ball pow(const Ball& x, const Ball& y);

/// Smallest ball containing both arguments.
Ball hull(const Ball& a, const Ball& b);

/// Rounding helpers for radius arithmetic (results never below the exact
/// value).
double add_up(double a, double b);
double mul_up(double a, double b);
double div_up(double a, double b);

}  // namespace zetasum::numeric

namespace zetasum {
using numeric::Ball;
}
