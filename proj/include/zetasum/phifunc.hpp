#pragma once

#include "zetasum/ball.hpp"

#include <gmpxx.h>

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

/// Weight functions phi: expression trees, the parser and printer, symbolic
/// derivatives, built-ins and the admissibility check.
namespace zetasum::phi {

enum class Kind { constant, variable, pi, neg, log, exp, add, sub, mul, div, pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    Kind kind;
    mpq_class value;  // constant: an exact terminating decimal
    ExprPtr a;
    ExprPtr b;
};

ExprPtr constant(const mpq_class& v);
ExprPtr variable();
ExprPtr pi();
ExprPtr make_unary(Kind kind, ExprPtr a);
ExprPtr make_binary(Kind kind, ExprPtr a, ExprPtr b);

/// expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
/// unary := '-' unary | power ; power := base ('^' unary)? ;
/// base := number | 't' | 'pi' | ('log'|'exp') '(' expr ')' | '(' expr ')'
ExprPtr parse_phi(std::string_view text);
std::string to_string(const ExprPtr& e);
bool structurally_equal(const ExprPtr& x, const ExprPtr& y);
/// True when the tree does not mention t.
bool is_constant(const ExprPtr& e);

/// d/dt with folding of literal subexpressions.
ExprPtr differentiate(const ExprPtr& e);

Ball evaluate(const ExprPtr& e, const Ball& t);
long double evaluate_fast(const ExprPtr& e, long double t);

enum class Builtin { none, inv_power, inv_t, inv_square, inv_log_sq, inv_t2_plus_quarter };

/// Closed form G with (1/2pi) int_a^b phi(t) log(t/2pi) dt = G(b) - G(a).
struct Antiderivative {
    std::function<Ball(const Ball&)> at;
    bool zero_at_infinity = false;  // G(t) -> 0 as t -> infinity
};

class PhiSpec {
public:
    std::string name;
    ExprPtr body, d1, d2;
    Ball T0;
    Builtin builtin = Builtin::none;
    mpq_class power;  // exponent c for inv_power
    std::optional<Antiderivative> tail_antiderivative;
    /// Known convergence of int^inf phi log t dt and int^inf phi / t dt.
    std::optional<bool> log_tail_converges;
    std::optional<bool> over_t_tail_converges;

    Ball phi(const Ball& t) const;
    Ball dphi(const Ball& t) const;
    Ball d2phi(const Ball& t) const;
    long double phi_fast(long double t) const { return evaluate_fast(body, t); }
    long double dphi_fast(long double t) const { return evaluate_fast(d1, t); }
    long double d2phi_fast(long double t) const { return evaluate_fast(d2, t); }

    /// Grid check of phi >= 0, phi' <= 0, phi'' >= 0 up to max(T0 1e3, 10 t).
    /// Repeated calls only sample the part of the range not yet covered.
    void ensure_admissible(double t_query = 0.0) const;
    double checked_upper() const;

private:
    void require_domain(const Ball& t, const char* op) const;
    struct Checked {
        std::mutex mutex;
        double upper = 0.0;
    };
    std::shared_ptr<Checked> checked_ = std::make_shared<Checked>();
};

/// "builtin:<name>[:<param>]" or a DSL expression. T0 >= 2 pi.
PhiSpec make_phi(std::string_view text, const Ball& T0);
/// DSL text for each built-in, as used to build its trees.
std::string builtin_text(Builtin b, const mpq_class& power = 2);

}  // namespace zetasum::phi
