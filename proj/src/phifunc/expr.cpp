#include "zetasum/errors.hpp"
#include "zetasum/phifunc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

namespace zetasum::phi {

namespace {

bool is_const_value(const ExprPtr& e, long v) { return e->kind == Kind::constant && e->value == v; }

bool terminating(const mpq_class& q) {
    mpz_class d = q.get_den();
    while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) d /= 2;
    while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) d /= 5;
    return d == 1;
}

std::optional<long> integer_value(const ExprPtr& e) {
    if (e->kind == Kind::constant && e->value.get_den() == 1 && e->value.get_num().fits_slong_p()) {
        return e->value.get_num().get_si();
    }
    return std::nullopt;
}

std::string decimal(const mpq_class& q) {
    // q is a terminating decimal
    mpz_class num = q.get_num(), den = q.get_den();
    std::string sign = num < 0 ? "-" : "";
    num = abs(num);
    mpz_class whole = num / den;
    mpz_class rest = num % den;
    std::string out = sign + whole.get_str();
    if (rest != 0) {
        out += ".";
        while (rest != 0) {
            rest *= 10;
            out += mpz_class(rest / den).get_str();
            rest %= den;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// parser

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("phifunc", "parse_phi", msg + " at position " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (accept('+')) e = make_binary(Kind::add, e, term());
            else if (accept('-')) e = make_binary(Kind::sub, e, term());
            else return e;
        }
    }
    ExprPtr term() {
        ExprPtr e = unary();
        for (;;) {
            if (accept('*')) e = make_binary(Kind::mul, e, unary());
            else if (accept('/')) e = make_binary(Kind::div, e, unary());
            else return e;
        }
    }
    ExprPtr unary() {
        if (accept('-')) {
            ExprPtr inner = unary();
            if (inner->kind == Kind::constant) return constant(-inner->value);
            return make_unary(Kind::neg, inner);
        }
        return power();
    }
    ExprPtr power() {
        ExprPtr b = base();
        if (accept('^')) return make_binary(Kind::pow, b, unary());
        return b;
    }
    ExprPtr base() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string_view id = s_.substr(start, pos_ - start);
            if (id == "t") return variable();
            if (id == "pi") return pi();
            if (id == "log" || id == "exp") {
                if (!accept('(')) fail("expected '(' after " + std::string(id));
                ExprPtr arg = expr();
                if (!accept(')')) fail("expected ')'");
                return make_unary(id == "log" ? Kind::log : Kind::exp, arg);
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(id) + "'");
        }
        if (accept('(')) {
            ExprPtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    ExprPtr number() {
        const std::size_t start = pos_;
        std::size_t digits = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++digits;
        std::string frac;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) frac += s_[pos_++];
            digits += frac.size();
        }
        if (digits == 0) {
            pos_ = start;
            fail("malformed number");
        }
        std::string whole(s_.substr(start, pos_ - start));
        whole.erase(std::remove(whole.begin(), whole.end(), '.'), whole.end());
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        mpq_class v(mpz_class(whole, 10), den);
        v.canonicalize();
        return constant(v);
    }
};

// ---------------------------------------------------------------------------
// printer

int precedence(const ExprPtr& e) {
    switch (e->kind) {
        case Kind::add:
        case Kind::sub: return 1;
        case Kind::mul:
        case Kind::div: return 2;
        case Kind::neg: return 3;
        case Kind::pow: return 4;
        case Kind::constant: return e->value < 0 ? 3 : 5;
        default: return 5;
    }
}

std::string print(const ExprPtr& e, int min_prec);

std::string wrap(const ExprPtr& e, int min_prec) {
    const std::string s = print(e, 0);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string print(const ExprPtr& e, int) {
    switch (e->kind) {
        case Kind::constant: return decimal(e->value);
        case Kind::variable: return "t";
        case Kind::pi: return "pi";
        case Kind::neg: return "-" + wrap(e->a, 3);
        case Kind::log: return "log(" + print(e->a, 0) + ")";
        case Kind::exp: return "exp(" + print(e->a, 0) + ")";
        case Kind::add: return wrap(e->a, 1) + " + " + wrap(e->b, 2);
        case Kind::sub: return wrap(e->a, 1) + " - " + wrap(e->b, 2);
        case Kind::mul: return wrap(e->a, 2) + "*" + wrap(e->b, 3);
        case Kind::div: return wrap(e->a, 2) + "/" + wrap(e->b, 3);
        case Kind::pow: return wrap(e->a, 5) + "^" + wrap(e->b, 3);
    }
    return "";
}

// ---------------------------------------------------------------------------
// folding constructors

ExprPtr fold_neg(const ExprPtr& a) {
    if (a->kind == Kind::constant) return constant(-a->value);
    if (a->kind == Kind::neg) return a->a;
    return make_unary(Kind::neg, a);
}

ExprPtr fold_add(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind == Kind::constant && b->kind == Kind::constant) return constant(a->value + b->value);
    if (is_const_value(a, 0)) return b;
    if (is_const_value(b, 0)) return a;
    if (b->kind == Kind::neg) return make_binary(Kind::sub, a, b->a);
    return make_binary(Kind::add, a, b);
}

ExprPtr fold_sub(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind == Kind::constant && b->kind == Kind::constant) return constant(a->value - b->value);
    if (is_const_value(b, 0)) return a;
    if (is_const_value(a, 0)) return fold_neg(b);
    if (b->kind == Kind::neg) return make_binary(Kind::add, a, b->a);
    return make_binary(Kind::sub, a, b);
}

ExprPtr fold_mul(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind == Kind::constant && b->kind == Kind::constant) return constant(a->value * b->value);
    if (is_const_value(a, 0) || is_const_value(b, 0)) return constant(0);
    if (is_const_value(a, 1)) return b;
    if (is_const_value(b, 1)) return a;
    if (is_const_value(a, -1)) return fold_neg(b);
    if (is_const_value(b, -1)) return fold_neg(a);
    // c1 * (c2 * x) -> (c1 c2) * x
    if (a->kind == Kind::constant && b->kind == Kind::mul && b->a->kind == Kind::constant) {
        return fold_mul(constant(a->value * b->a->value), b->b);
    }
    if (b->kind == Kind::constant) return fold_mul(b, a);
    return make_binary(Kind::mul, a, b);
}

ExprPtr fold_div(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind == Kind::constant && b->kind == Kind::constant && b->value != 0) {
        mpq_class q = a->value / b->value;
        q.canonicalize();
        if (terminating(q)) return constant(q);
    }
    if (is_const_value(a, 0)) return constant(0);
    if (is_const_value(b, 1)) return a;
    return make_binary(Kind::div, a, b);
}

ExprPtr fold_pow(const ExprPtr& a, const ExprPtr& b) {
    if (is_const_value(b, 0)) return constant(1);
    if (is_const_value(b, 1)) return a;
    if (a->kind == Kind::constant) {
        if (auto n = integer_value(b); n && std::labs(*n) <= 64 && (a->value != 0 || *n > 0)) {
            mpq_class r = 1;
            for (long i = 0; i < std::labs(*n); ++i) r *= a->value;
            if (*n < 0) r = 1 / r;
            r.canonicalize();
            if (terminating(r)) return constant(r);
        }
    }
    return make_binary(Kind::pow, a, b);
}

ExprPtr fold_log(const ExprPtr& a) { return make_unary(Kind::log, a); }

}  // namespace

ExprPtr constant(const mpq_class& v) { return std::make_shared<const Expr>(Expr{Kind::constant, v, nullptr, nullptr}); }
ExprPtr variable() { return std::make_shared<const Expr>(Expr{Kind::variable, 0, nullptr, nullptr}); }
ExprPtr pi() { return std::make_shared<const Expr>(Expr{Kind::pi, 0, nullptr, nullptr}); }
ExprPtr make_unary(Kind kind, ExprPtr a) {
    return std::make_shared<const Expr>(Expr{kind, 0, std::move(a), nullptr});
}
ExprPtr make_binary(Kind kind, ExprPtr a, ExprPtr b) {
    return std::make_shared<const Expr>(Expr{kind, 0, std::move(a), std::move(b)});
}

ExprPtr parse_phi(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const ExprPtr& e) { return print(e, 0); }

bool structurally_equal(const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    if (x->kind != y->kind) return false;
    if (x->kind == Kind::constant && x->value != y->value) return false;
    return structurally_equal(x->a, y->a) && structurally_equal(x->b, y->b);
}

bool is_constant(const ExprPtr& e) {
    if (!e) return true;
    if (e->kind == Kind::variable) return false;
    return is_constant(e->a) && is_constant(e->b);
}

ExprPtr differentiate(const ExprPtr& e) {
    switch (e->kind) {
        case Kind::constant:
        case Kind::pi: return constant(0);
        case Kind::variable: return constant(1);
        case Kind::neg: return fold_neg(differentiate(e->a));
        case Kind::add: return fold_add(differentiate(e->a), differentiate(e->b));
        case Kind::sub: return fold_sub(differentiate(e->a), differentiate(e->b));
        case Kind::mul: {
            if (is_constant(e->a)) return fold_mul(e->a, differentiate(e->b));
            if (is_constant(e->b)) return fold_mul(differentiate(e->a), e->b);
            return fold_add(fold_mul(differentiate(e->a), e->b), fold_mul(e->a, differentiate(e->b)));
        }
        case Kind::div: {
            const ExprPtr& u = e->a;
            const ExprPtr& v = e->b;
            if (is_constant(v)) return fold_div(differentiate(u), v);
            if (is_constant(u)) {
                // c / w^n -> -n c w' / w^(n+1)
                ExprPtr w = v;
                long n = 1;
                if (v->kind == Kind::pow) {
                    if (auto k = integer_value(v->b)) {
                        w = v->a;
                        n = *k;
                    }
                }
                if (w != v || v->kind != Kind::pow) {
                    const ExprPtr num = fold_mul(fold_mul(constant(-n), u), differentiate(w));
                    return fold_div(num, fold_pow(w, constant(n + 1)));
                }
            }
            const ExprPtr num = fold_sub(fold_mul(differentiate(u), v), fold_mul(u, differentiate(v)));
            return fold_div(num, fold_pow(v, constant(2)));
        }
        case Kind::log: {
            const ExprPtr& u = e->a;
            // log(x / c) and log(c x) differentiate like log x
            if (u->kind == Kind::div && is_constant(u->b)) return fold_div(differentiate(u->a), u->a);
            if (u->kind == Kind::mul && is_constant(u->a)) return fold_div(differentiate(u->b), u->b);
            if (u->kind == Kind::mul && is_constant(u->b)) return fold_div(differentiate(u->a), u->a);
            return fold_div(differentiate(u), u);
        }
        case Kind::exp: return fold_mul(differentiate(e->a), e);
        case Kind::pow: {
            const ExprPtr& f = e->a;
            const ExprPtr& g = e->b;
            if (auto n = integer_value(g)) {
                return fold_mul(fold_mul(constant(*n), fold_pow(f, constant(*n - 1))), differentiate(f));
            }
            if (is_constant(f)) {
                // c^g = exp(g log c)
                return fold_mul(fold_mul(e, fold_log(f)), differentiate(g));
            }
            // f^g (g' log f + g f' / f)
            const ExprPtr inner = fold_add(fold_mul(differentiate(g), fold_log(f)),
                                           fold_div(fold_mul(g, differentiate(f)), f));
            return fold_mul(e, inner);
        }
    }
    return constant(0);
}

Ball evaluate(const ExprPtr& e, const Ball& t) {
    switch (e->kind) {
        case Kind::constant: return Ball::from_rational(e->value);
        case Kind::variable: return t;
        case Kind::pi: return Ball::pi();
        case Kind::neg: return -evaluate(e->a, t);
        case Kind::log: return numeric::log(evaluate(e->a, t));
        case Kind::exp: return numeric::exp(evaluate(e->a, t));
        case Kind::add: return evaluate(e->a, t) + evaluate(e->b, t);
        case Kind::sub: return evaluate(e->a, t) - evaluate(e->b, t);
        case Kind::mul: return evaluate(e->a, t) * evaluate(e->b, t);
        case Kind::div: return evaluate(e->a, t) / evaluate(e->b, t);
        case Kind::pow: {
            if (auto n = integer_value(e->b)) return numeric::pow(evaluate(e->a, t), *n);
            return numeric::pow(evaluate(e->a, t), evaluate(e->b, t));
        }
    }
    return Ball();
}

long double evaluate_fast(const ExprPtr& e, long double t) {
    switch (e->kind) {
        case Kind::constant: return static_cast<long double>(e->value.get_d());
        case Kind::variable: return t;
        case Kind::pi: return 3.141592653589793238462643383279502884L;
        case Kind::neg: return -evaluate_fast(e->a, t);
        case Kind::log: return std::log(evaluate_fast(e->a, t));
        case Kind::exp: return std::exp(evaluate_fast(e->a, t));
        case Kind::add: return evaluate_fast(e->a, t) + evaluate_fast(e->b, t);
        case Kind::sub: return evaluate_fast(e->a, t) - evaluate_fast(e->b, t);
        case Kind::mul: return evaluate_fast(e->a, t) * evaluate_fast(e->b, t);
        case Kind::div: return evaluate_fast(e->a, t) / evaluate_fast(e->b, t);
        case Kind::pow: {
            const long double base = evaluate_fast(e->a, t);
            if (auto n = integer_value(e->b)) {
                long double r = 1.0L, x = base;
                long k = std::labs(*n);
                while (k) {
                    if (k & 1) r *= x;
                    x *= x;
                    k >>= 1;
                }
                return *n < 0 ? 1.0L / r : r;
            }
            return std::pow(base, evaluate_fast(e->b, t));
        }
    }
    return 0.0L;
}

}  // namespace zetasum::phi
