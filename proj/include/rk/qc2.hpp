#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "rk/rational.hpp"

namespace rk {

// The three roots of z (z - 1/2) (z - 1) = 1/24, in closed trigonometric
// form. z1 and z2 are the nodes c2 and c3 of the 8-stage (4,8) method.
inline double qc2_c2() {
    return 0.5 - std::sin(2.0 * std::numbers::pi / 9.0) / std::sqrt(3.0);
}
inline double qc2_c3() {
    return 0.5 - std::sin(std::numbers::pi / 9.0) / std::sqrt(3.0);
}
inline double cubic_root_z3() {
    return 0.5 - std::sin(2.0 * std::numbers::pi / 9.0 + 4.0 * std::numbers::pi / 3.0) /
                     std::sqrt(3.0);
}

/// Residual of the defining cubic, z(z - 1/2)(z - 1) - 1/24.
inline double cubic_residual(double z) {
    return z * (z - 0.5) * (z - 1.0) - 1.0 / 24.0;
}

/// Element a1 + a2*c2 + a3*c3 of the cubic extension field Q(c2).
///
/// Products close over the (1, c2, c3) basis through the reduction rules
///   c2^2  = -1/12 + 7/6 c2 - 1/6 c3
///   c2 c3 = -1/12 + 1/6 c2 + 1/3 c3
///   c3^2  = -1/3  + 1/6 c2 + 4/3 c3
/// which encode that c2, c3 are roots of the cubic above.
struct Qc2 {
    Rational a1{0}, a2{0}, a3{0};

    Qc2() = default;
    Qc2(Rational r1, Rational r2, Rational r3)
        : a1(std::move(r1)), a2(std::move(r2)), a3(std::move(r3)) {}
    // NOLINTNEXTLINE(google-explicit-constructor): rationals embed naturally.
    Qc2(const Rational& r) : a1(r) {}
    Qc2(long long n) : a1(n) {}

    static Qc2 c2() { return {0, 1, 0}; }
    static Qc2 c3() { return {0, 0, 1}; }

    bool is_rational() const { return a2 == 0 && a3 == 0; }

    double embed() const {
        return to_double(a1) + to_double(a2) * qc2_c2() + to_double(a3) * qc2_c3();
    }

    friend Qc2 operator+(const Qc2& x, const Qc2& y) {
        return {x.a1 + y.a1, x.a2 + y.a2, x.a3 + y.a3};
    }
    friend Qc2 operator-(const Qc2& x, const Qc2& y) {
        return {x.a1 - y.a1, x.a2 - y.a2, x.a3 - y.a3};
    }
    friend Qc2 operator-(const Qc2& x) { return {-x.a1, -x.a2, -x.a3}; }

    friend Qc2 operator*(const Qc2& x, const Qc2& y) {
        Rational r1 = x.a1 * y.a1;
        Rational r2 = x.a1 * y.a2 + x.a2 * y.a1;
        Rational r3 = x.a1 * y.a3 + x.a3 * y.a1;
        const Rational p22 = x.a2 * y.a2;              // coefficient of c2^2
        const Rational p23 = x.a2 * y.a3 + x.a3 * y.a2;  // of c2 c3
        const Rational p33 = x.a3 * y.a3;              // of c3^2
        r1 += p22 * Rational(-1, 12) + p23 * Rational(-1, 12) + p33 * Rational(-1, 3);
        r2 += p22 * Rational(7, 6) + p23 * Rational(1, 6) + p33 * Rational(1, 6);
        r3 += p22 * Rational(-1, 6) + p23 * Rational(1, 3) + p33 * Rational(4, 3);
        return {r1, r2, r3};
    }

    friend bool operator==(const Qc2& x, const Qc2& y) {
        return x.a1 == y.a1 && x.a2 == y.a2 && x.a3 == y.a3;
    }
    friend bool operator!=(const Qc2& x, const Qc2& y) { return !(x == y); }
};

inline Qc2 qc2_mul(const Qc2& x, const Qc2& y) { return x * y; }
inline double qc2_embed(const Qc2& x) { return x.embed(); }

inline std::string to_string(const Qc2& x) {
    if (x.is_rational()) return to_string(x.a1);
    return to_string(x.a1) + " + " + to_string(x.a2) + "*c2 + " + to_string(x.a3) + "*c3";
}

}  // namespace rk
