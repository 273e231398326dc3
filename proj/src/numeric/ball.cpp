#include "zetasum/ball.hpp"

#include "zetasum/errors.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace zetasum::numeric {

namespace {

std::atomic<mpfr_prec_t> g_precision{128};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = std::numeric_limits<double>::denorm_min();
// Relative slack applied when a double approximates an MPFR magnitude.
constexpr double kSlack = 1.0 + 4.0 * std::numeric_limits<double>::epsilon();

[[noreturn]] void domain_error(const char* op, const std::string& msg) {
    throw DomainError("numeric", op, msg);
}

/// RAII temporary for intermediate MPFR values.
class Scratch {
public:
    explicit Scratch(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Scratch() { mpfr_clear(v_); }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

double mag_up(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return 0.0;
    return std::fabs(mpfr_get_d(x, MPFR_RNDA));
}

double mag_down(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return 0.0;
    return std::fabs(mpfr_get_d(x, MPFR_RNDZ));
}

// Bound on the rounding error of a correctly rounded result (one ulp).
double rounding_error(mpfr_srcptr result, int ternary) {
    if (ternary == 0) return 0.0;
    if (mpfr_zero_p(result)) return kTiny;
    const double e = std::ldexp(1.0, static_cast<int>(std::max<long>(
                                         std::min<long>(mpfr_get_exp(result) - mpfr_get_prec(result), 2000),
                                         -2000)));
    return e == 0.0 ? kTiny : e;
}

double sub_down(double a, double b) {
    const double d = a - b;
    return std::nextafter(d, -kInf);
}

}  // namespace

struct BallBuilder {
    static Ball make() { return Ball(); }
    static mpfr_ptr mid(Ball& b) { return b.mid_; }
    static void set_rad(Ball& b, double r) { b.rad_ = r; }
};

namespace {

mpfr_ptr mut(Ball& b) { return BallBuilder::mid(b); }
void set_rad(Ball& b, double r) { BallBuilder::set_rad(b, r); }

}  // namespace

double add_up(double a, double b) {
    if (a == 0.0) return b;
    if (b == 0.0) return a;
    return std::nextafter(a + b, kInf);
}

double mul_up(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return std::nextafter(a * b, kInf);
}

double div_up(double a, double b) {
    if (a == 0.0) return 0.0;
    return std::nextafter(a / b, kInf);
}

mpfr_prec_t working_precision() noexcept { return g_precision.load(std::memory_order_relaxed); }

void set_working_precision(mpfr_prec_t bits) {
    if (bits < 24 || bits > 1 << 16) {
        domain_error("set_working_precision", "precision must be in [24, 65536] bits");
    }
    g_precision.store(bits, std::memory_order_relaxed);
}

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(working_precision()) {
    set_working_precision(bits);
}

PrecisionScope::~PrecisionScope() { g_precision.store(saved_, std::memory_order_relaxed); }

// ---------------------------------------------------------------------------
// construction

Ball::Ball() {
    mpfr_init2(mid_, working_precision());
    mpfr_set_zero(mid_, 1);
}

Ball::Ball(long value) {
    mpfr_init2(mid_, working_precision());
    const int t = mpfr_set_si(mid_, value, MPFR_RNDN);
    rad_ = rounding_error(mid_, t);
}

Ball::Ball(const Ball& other) : rad_(other.rad_) {
    mpfr_init2(mid_, mpfr_get_prec(other.mid_));
    mpfr_set(mid_, other.mid_, MPFR_RNDN);
}

Ball::Ball(Ball&& other) noexcept : rad_(other.rad_) {
    mpfr_init2(mid_, mpfr_get_prec(other.mid_));
    mpfr_swap(mid_, other.mid_);
}

Ball& Ball::operator=(const Ball& other) {
    if (this != &other) {
        mpfr_set_prec(mid_, mpfr_get_prec(other.mid_));
        mpfr_set(mid_, other.mid_, MPFR_RNDN);
        rad_ = other.rad_;
    }
    return *this;
}

Ball& Ball::operator=(Ball&& other) noexcept {
    if (this != &other) {
        mpfr_swap(mid_, other.mid_);
        rad_ = other.rad_;
    }
    return *this;
}

Ball::~Ball() { mpfr_clear(mid_); }

Ball Ball::from_double(double value, double radius) {
    Ball b;
    mpfr_set_d(b.mid_, value, MPFR_RNDN);  // exact for prec >= 53
    b.rad_ = radius;
    if (mpfr_get_prec(b.mid_) < 53 && mpfr_get_d(b.mid_, MPFR_RNDN) != value) {
        b.rad_ = add_up(b.rad_, std::fabs(value) * 1e-7);
    }
    return b;
}

Ball Ball::from_long_double(long double value, double radius) {
    Ball b;
    const int t = mpfr_set_ld(b.mid_, value, MPFR_RNDN);
    b.rad_ = add_up(radius, rounding_error(b.mid_, t));
    return b;
}

Ball Ball::from_decimal(std::string_view text) {
    // [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto digits = [&] {
        const std::size_t start = i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        return i - start;
    };
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
    std::size_t mantissa = digits();
    if (i < n && text[i] == '.') {
        ++i;
        mantissa += digits();
    }
    bool ok = mantissa > 0;
    if (ok && i < n && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
        ok = digits() > 0;
    }
    if (!ok || i != n) {
        throw ParseError("numeric", "ball_from_decimal",
                         "malformed decimal literal '" + std::string(text) + "' at position " +
                             std::to_string(i));
    }
    Ball b;
    const std::string s(text);
    const int t = mpfr_strtofr(b.mid_, s.c_str(), nullptr, 10, MPFR_RNDN);
    b.rad_ = rounding_error(b.mid_, t);
    return b;
}

Ball Ball::from_rational(const mpq_class& q) {
    Ball b;
    const int t = mpfr_set_q(b.mid_, q.get_mpq_t(), MPFR_RNDN);
    b.rad_ = rounding_error(b.mid_, t);
    return b;
}

Ball Ball::from_mpfr(mpfr_srcptr value, double radius) {
    Ball b;
    const int t = mpfr_set(b.mid_, value, MPFR_RNDN);
    b.rad_ = add_up(radius, rounding_error(b.mid_, t));
    return b;
}

Ball Ball::pi() {
    Ball b;
    const int t = mpfr_const_pi(b.mid_, MPFR_RNDN);
    b.rad_ = rounding_error(b.mid_, t);
    return b;
}

Ball Ball::euler_gamma() {
    Ball b;
    const int t = mpfr_const_euler(b.mid_, MPFR_RNDN);
    b.rad_ = rounding_error(b.mid_, t);
    return b;
}

// ---------------------------------------------------------------------------
// queries

double Ball::mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }

long double Ball::mid_long_double() const { return mpfr_get_ld(mid_, MPFR_RNDN); }

double Ball::mag_upper() const { return add_up(mag_up(mid_), rad_); }

double Ball::mag_lower() const {
    const double m = mag_down(mid_);
    if (m <= rad_) return 0.0;
    return std::max(0.0, sub_down(m, rad_));
}

double Ball::upper() const {
    if (rad_ == 0.0) return mpfr_get_d(mid_, MPFR_RNDU);
    Scratch x(mpfr_get_prec(mid_) + 64);
    mpfr_add_d(x.get(), mid_, rad_, MPFR_RNDU);
    return mpfr_get_d(x.get(), MPFR_RNDU);
}

double Ball::lower() const {
    if (rad_ == 0.0) return mpfr_get_d(mid_, MPFR_RNDD);
    Scratch x(mpfr_get_prec(mid_) + 64);
    mpfr_sub_d(x.get(), mid_, rad_, MPFR_RNDD);
    return mpfr_get_d(x.get(), MPFR_RNDD);
}

bool Ball::is_positive() const {
    if (mpfr_sgn(mid_) <= 0) return false;
    if (rad_ == 0.0) return true;
    Scratch lo(std::max<mpfr_prec_t>(mpfr_get_prec(mid_), 64));
    mpfr_sub_d(lo.get(), mid_, rad_, MPFR_RNDD);
    return mpfr_sgn(lo.get()) > 0;
}

bool Ball::is_negative() const {
    if (mpfr_sgn(mid_) >= 0) return false;
    if (rad_ == 0.0) return true;
    Scratch hi(std::max<mpfr_prec_t>(mpfr_get_prec(mid_), 64));
    mpfr_add_d(hi.get(), mid_, rad_, MPFR_RNDU);
    return mpfr_sgn(hi.get()) < 0;
}

bool Ball::contains(mpfr_srcptr v) const {
    const mpfr_prec_t p = std::max(mpfr_get_prec(mid_), mpfr_get_prec(v)) + 64;
    Scratch d(p);
    mpfr_sub(d.get(), v, mid_, MPFR_RNDA);
    mpfr_abs(d.get(), d.get(), MPFR_RNDU);
    return mpfr_cmp_d(d.get(), rad_) <= 0;
}

bool Ball::contains(double v) const {
    Scratch x(64);
    mpfr_set_d(x.get(), v, MPFR_RNDN);
    return contains(x.get());
}

bool Ball::contains_decimal(std::string_view text) const {
    // Enough bits that the conversion error is far below any radius in use.
    Scratch x(4 * mpfr_get_prec(mid_) + 256);
    const std::string s(text);
    if (mpfr_set_str(x.get(), s.c_str(), 10, MPFR_RNDN) != 0 && !mpfr_number_p(x.get())) {
        throw ParseError("numeric", "contains_decimal", "malformed decimal literal '" + s + "'");
    }
    return contains(x.get());
}

bool Ball::contains(const Ball& other) const {
    const mpfr_prec_t p = std::max(mpfr_get_prec(mid_), mpfr_get_prec(other.mid_)) + 64;
    Scratch d(p);
    mpfr_sub(d.get(), other.mid_, mid_, MPFR_RNDA);
    mpfr_abs(d.get(), d.get(), MPFR_RNDU);
    mpfr_add_d(d.get(), d.get(), other.rad_, MPFR_RNDU);
    return mpfr_cmp_d(d.get(), rad_) <= 0;
}

bool Ball::overlaps(const Ball& other) const {
    const mpfr_prec_t p = std::max(mpfr_get_prec(mid_), mpfr_get_prec(other.mid_)) + 64;
    Scratch d(p);
    mpfr_sub(d.get(), other.mid_, mid_, MPFR_RNDN);
    mpfr_abs(d.get(), d.get(), MPFR_RNDN);
    return mpfr_cmp_d(d.get(), add_up(rad_, other.rad_)) <= 0;
}

Ball Ball::widened(double extra) const {
    Ball b(*this);
    b.rad_ = add_up(rad_, std::fabs(extra));
    return b;
}

Ball Ball::widened(const Ball& bound) const { return widened(bound.mag_upper()); }

Ball Ball::center() const {
    Ball b(*this);
    b.rad_ = 0.0;
    return b;
}

Ball Ball::ldexp(long k) const {
    Ball b(*this);
    mpfr_mul_2si(b.mid_, mid_, k, MPFR_RNDN);
    b.rad_ = rad_ == 0.0 ? 0.0 : std::nextafter(std::ldexp(rad_, static_cast<int>(k)), kInf);
    return b;
}

// ---------------------------------------------------------------------------
// formatting

namespace {

std::string format_mpfr(const char* fmt, int digits, mpfr_srcptr x) {
    char* buf = nullptr;
    const int len = mpfr_asprintf(&buf, fmt, digits, x);
    std::string out = len >= 0 ? std::string(buf, static_cast<std::size_t>(len)) : std::string();
    mpfr_free_str(buf);
    return out;
}

// Radius printed with two significant digits, rounded upwards.
std::string format_radius(double r) {
    if (r == 0.0) return "0";
    if (!std::isfinite(r)) return "inf";
    int e = static_cast<int>(std::floor(std::log10(r)));
    const double scaled = r / std::pow(10.0, e - 1);
    long m = static_cast<long>(std::ceil(scaled));
    if (m >= 100) {
        m = (m + 9) / 10;
        ++e;
    }
    if (m < 10) m = 10;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%ld.%lde%+03d", m / 10, m % 10, e);
    return buf;
}

}  // namespace

std::string Ball::to_string() const {
    if (rad_ == 0.0) {
        const int digits = static_cast<int>(static_cast<double>(mpfr_get_prec(mid_)) * 0.30103);
        return format_mpfr("%.*RNg", digits, mid_);
    }
    if (!std::isfinite(rad_)) return format_mpfr("%.*RNg", 6, mid_) + " ± inf";
    const int er = static_cast<int>(std::floor(std::log10(rad_)));
    int nsig = 2;
    double display_err = 0.0;
    if (!mpfr_zero_p(mid_)) {
        Scratch a(64);
        mpfr_abs(a.get(), mid_, MPFR_RNDN);
        mpfr_log10(a.get(), a.get(), MPFR_RNDN);
        const long em = static_cast<long>(std::floor(mpfr_get_d(a.get(), MPFR_RNDN)));
        nsig = static_cast<int>(std::max<long>(2, em - er + 3));
        display_err = 0.5 * std::pow(10.0, static_cast<double>(em - nsig + 1));
    }
    return format_mpfr("%.*RNg", nsig, mid_) + " ± " + format_radius(add_up(rad_, display_err));
}

std::string Ball::mid_fixed(int decimals) const { return format_mpfr("%.*RNf", decimals, mid_); }

// ---------------------------------------------------------------------------
// arithmetic

Ball operator-(const Ball& x) {
    Ball r = BallBuilder::make();
    mpfr_neg(mut(r), x.mid(), MPFR_RNDN);
    set_rad(r, x.rad());
    return r;
}

Ball operator+(const Ball& x, const Ball& y) {
    Ball r = BallBuilder::make();
    const int t = mpfr_add(mut(r), x.mid(), y.mid(), MPFR_RNDN);
    set_rad(r, add_up(add_up(x.rad(), y.rad()), rounding_error(r.mid(), t)));
    return r;
}

Ball operator-(const Ball& x, const Ball& y) {
    Ball r = BallBuilder::make();
    const int t = mpfr_sub(mut(r), x.mid(), y.mid(), MPFR_RNDN);
    set_rad(r, add_up(add_up(x.rad(), y.rad()), rounding_error(r.mid(), t)));
    return r;
}

Ball operator*(const Ball& x, const Ball& y) {
    Ball r = BallBuilder::make();
    const int t = mpfr_mul(mut(r), x.mid(), y.mid(), MPFR_RNDN);
    double rad = mul_up(mag_up(x.mid()), y.rad());
    rad = add_up(rad, mul_up(mag_up(y.mid()), x.rad()));
    rad = add_up(rad, mul_up(x.rad(), y.rad()));
    set_rad(r, add_up(rad, rounding_error(r.mid(), t)));
    return r;
}

Ball operator/(const Ball& x, const Ball& y) {
    if (!y.is_nonzero()) domain_error("ball_div", "divisor ball contains zero");
    const double den = y.mag_lower();
    Ball r = BallBuilder::make();
    const int t = mpfr_div(mut(r), x.mid(), y.mid(), MPFR_RNDN);
    const double num = add_up(x.rad(), mul_up(mul_up(mag_up(r.mid()), kSlack), y.rad()));
    const double rad = num == 0.0 ? 0.0 : (den > 0.0 ? div_up(num, den) : kInf);
    set_rad(r, add_up(rad, rounding_error(r.mid(), t)));
    return r;
}

Ball abs(const Ball& x) { return mpfr_sgn(x.mid()) < 0 ? -x : x; }

Ball sqr(const Ball& x) {
    if (x.mag_lower() > 0.0) return x * x;
    // [0, |x|max^2]: midpoint and radius both exactly u/2
    const double half = mul_up(x.mag_upper(), x.mag_upper()) * 0.5;
    return Ball::from_double(half, half);
}

Ball sqrt(const Ball& x) {
    if (x.lower() < 0.0) domain_error("ball_sqrt", "argument ball extends below zero");
    Ball r = BallBuilder::make();
    const int t = mpfr_sqrt(mut(r), x.mid(), MPFR_RNDN);
    double rad = 0.0;
    if (x.rad() > 0.0) {
        // sqrt(m) - sqrt(m - r) <= r / sqrt(m) for m >= r
        const double m = mag_down(x.mid());
        rad = m >= x.rad() ? div_up(x.rad(), std::nextafter(std::sqrt(m), 0.0)) : kInf;
        rad = std::min(rad, std::nextafter(std::sqrt(x.upper()) * kSlack, kInf));
    }
    set_rad(r, add_up(rad, rounding_error(r.mid(), t)));
    return r;
}

Ball log(const Ball& x) {
    if (!x.is_positive()) domain_error("ball_log", "argument ball is not strictly positive");
    const double lo = x.lower();
    Ball r = BallBuilder::make();
    const int t = mpfr_log(mut(r), x.mid(), MPFR_RNDN);
    const double rad = x.rad() == 0.0 ? 0.0 : (lo > 0.0 ? div_up(x.rad(), lo) : kInf);
    set_rad(r, add_up(rad, rounding_error(r.mid(), t)));
    return r;
}

Ball exp(const Ball& x) {
    Ball r = BallBuilder::make();
    const int t = mpfr_exp(mut(r), x.mid(), MPFR_RNDN);
    double rad = 0.0;
    if (x.rad() > 0.0) {
        rad = mul_up(mul_up(mag_up(r.mid()), kSlack), std::nextafter(std::expm1(x.rad()) * kSlack, kInf));
    }
    set_rad(r, add_up(rad, rounding_error(r.mid(), t)));
    return r;
}

Ball cos(const Ball& x) {
    Ball r = BallBuilder::make();
    const int t = mpfr_cos(mut(r), x.mid(), MPFR_RNDN);
    set_rad(r, add_up(std::min(x.rad(), 2.0), rounding_error(r.mid(), t)));
    return r;
}

Ball sin(const Ball& x) {
    Ball r = BallBuilder::make();
    const int t = mpfr_sin(mut(r), x.mid(), MPFR_RNDN);
    set_rad(r, add_up(std::min(x.rad(), 2.0), rounding_error(r.mid(), t)));
    return r;
}

Ball atan2(const Ball& y, const Ball& x) {
    const bool on_cut = !x.is_positive() && !y.is_nonzero();
    if (on_cut) domain_error("ball_atan2", "argument box touches the branch cut or the origin");
    const double xl = x.mag_lower();
    const double yl = y.mag_lower();
    const double modulus = std::nextafter(std::hypot(xl, yl) / kSlack, 0.0);
    if (!(modulus > 0.0)) domain_error("ball_atan2", "argument box contains the origin");
    Ball r = BallBuilder::make();
    const int t = mpfr_atan2(mut(r), y.mid(), x.mid(), MPFR_RNDN);
    set_rad(r, add_up(div_up(add_up(x.rad(), y.rad()), modulus), rounding_error(r.mid(), t)));
    return r;
}

Ball pow(const Ball& x, long n) {
    if (n == 0) return Ball(1);
    if (n < 0) return Ball(1) / pow(x, -n);
    Ball result(1);
    Ball base(x);
    bool first = true;
    auto k = static_cast<unsigned long>(n);
    while (k > 0) {
        if (k & 1UL) {
            result = first ? base : result * base;
            first = false;
        }
        k >>= 1UL;
        if (k > 0) base = base * base;
    }
    return result;
}

Ball pow(const Ball& x, const Ball& y) { return exp(y * log(x)); }

Ball hull(const Ball& a, const Ball& b) {
    const mpfr_prec_t p = std::max(mpfr_get_prec(a.mid()), mpfr_get_prec(b.mid())) + 8;
    Scratch lo(p), hi(p), tmp(p);
    mpfr_sub_d(lo.get(), a.mid(), a.rad(), MPFR_RNDD);
    mpfr_sub_d(tmp.get(), b.mid(), b.rad(), MPFR_RNDD);
    mpfr_min(lo.get(), lo.get(), tmp.get(), MPFR_RNDD);
    mpfr_add_d(hi.get(), a.mid(), a.rad(), MPFR_RNDU);
    mpfr_add_d(tmp.get(), b.mid(), b.rad(), MPFR_RNDU);
    mpfr_max(hi.get(), hi.get(), tmp.get(), MPFR_RNDU);
    Ball r = BallBuilder::make();
    mpfr_add(mut(r), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(mut(r), r.mid(), 1, MPFR_RNDN);
    // radius = max(hi - mid, mid - lo)
    mpfr_sub(tmp.get(), hi.get(), r.mid(), MPFR_RNDU);
    double rad = mpfr_get_d(tmp.get(), MPFR_RNDU);
    mpfr_sub(tmp.get(), r.mid(), lo.get(), MPFR_RNDU);
    rad = std::max(rad, mpfr_get_d(tmp.get(), MPFR_RNDU));
    set_rad(r, std::max(rad, 0.0));
    return r;
}

}  // namespace zetasum::numeric
