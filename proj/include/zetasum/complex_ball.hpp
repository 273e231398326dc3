#pragma once

#include "zetasum/ball.hpp"

namespace zetasum::numeric {

/// Rectangular complex enclosure built from two real balls. Only the handful
/// of operations needed by the log-Gamma and zeta evaluations are provided.
struct ComplexBall {
    Ball re;
    Ball im;

    friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ComplexBall operator*(const ComplexBall& a, const Ball& s) { return {a.re * s, a.im * s}; }

    ComplexBall& operator+=(const ComplexBall& b) { return *this = *this + b; }

    Ball norm_squared() const { return sqr(re) + sqr(im); }
    Ball modulus() const { return sqrt(norm_squared()); }
    /// Principal argument; requires the box to avoid the negative real axis.
    Ball arg() const { return atan2(im, re); }

    ComplexBall reciprocal() const {
        const Ball n = norm_squared();
        return {re / n, -im / n};
    }

    friend ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) {
        return a * b.reciprocal();
    }
};

}  // namespace zetasum::numeric
