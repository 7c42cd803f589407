#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "rk/errors.hpp"

namespace rk {

/// Complete elliptic integral of the first kind in the parameter convention,
/// K(m) = integral of (1 - m sin^2 t)^(-1/2) over [0, pi/2], computed as
/// pi / (2 agm(1, sqrt(1 - m))).
inline double complete_elliptic_k(double m) {
    if (!(m >= 0.0 && m < 1.0))
        throw ValidationError("complete_elliptic_k: m must satisfy 0 <= m < 1");
    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    for (int i = 0; i < 64 && std::abs(a - b) > std::numeric_limits<double>::epsilon() * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2.0 * a);
}

struct JacobiValues {
    double sn = 0.0;
    double cn = 1.0;
    double dn = 1.0;
};

/// Jacobi elliptic functions sn, cn, dn of argument u and parameter m
/// (m = k^2), by the descending Landen / arithmetic-geometric-mean scheme:
/// run the AGM until the co-modulus term c_n is negligible, set
/// phi_N = 2^N a_N u, and recover the amplitude through
/// phi_{n-1} = (phi_n + asin(c_n sin(phi_n) / a_n)) / 2.
///
/// dn = cos(phi_0)/cos(phi_1 - phi_0) degenerates to 0/0 at quarter
/// periods, where sn^2 is farthest from 1; there dn falls back to
/// sqrt(1 - m sn^2). Accuracy is ~1e-14 for m <= 48/49 over |u| <= 4K(m).
inline JacobiValues jacobi_elliptic(double u, double m) {
    if (!(m >= 0.0 && m < 1.0))
        throw ValidationError("jacobi_elliptic: m must satisfy 0 <= m < 1");
    if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};

    constexpr int kMaxLevels = 32;
    std::array<double, kMaxLevels> a_arr{};
    std::array<double, kMaxLevels> c_arr{};
    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    double c = std::sqrt(m);
    int levels = 0;
    a_arr[0] = a;
    c_arr[0] = c;
    while (std::abs(c) > std::numeric_limits<double>::epsilon() * a && levels + 1 < kMaxLevels) {
        ++levels;
        const double an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = std::sqrt(a * b);
        a = an;
        a_arr[levels] = a;
        c_arr[levels] = c;
    }

    double phi = std::ldexp(a * u, levels);  // 2^N a_N u
    double phi_prev = phi;                   // becomes phi_1 after the loop
    for (int n = levels; n >= 1; --n) {
        phi_prev = phi;
        phi = 0.5 * (phi + std::asin(std::clamp(c_arr[n] * std::sin(phi) / a_arr[n], -1.0, 1.0)));
    }

    JacobiValues out;
    out.sn = std::sin(phi);
    out.cn = std::cos(phi);
    const double denom = (levels >= 1) ? std::cos(phi_prev - phi) : 1.0;
    if (std::abs(denom) > 0.1)
        out.dn = out.cn / denom;
    else
        out.dn = std::sqrt(1.0 - m * out.sn * out.sn);
    return out;
}

}  // namespace rk
