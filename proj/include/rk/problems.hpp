#pragma once

#include <cmath>
#include <utility>

#include "rk/elliptic.hpp"
#include "rk/integrate.hpp"
#include "rk/linalg.hpp"

namespace rk {

// ---------------------------------------------------------------------------
// Torque-free rigid body with principal moments of inertia (1, 2, 3),
// started at omega = (12, 0, 7). The angular velocity obeys
//   w1' = -w2 w3,  w2' = w1 w3,  w3' = -w1 w2 / 3,
// which conserves Q1 = w1^2 + w2^2 = 144 and Q2 = w2^2 + 3 w3^2 = 147.

inline Vec rigid_body_rhs(const Vec& w) {
    return {-w[1] * w[2], w[0] * w[2], -w[0] * w[1] / 3.0};
}

inline std::pair<double, double> quadratic_invariants(const Vec& w) {
    return {w[0] * w[0] + w[1] * w[1], w[1] * w[1] + 3.0 * w[2] * w[2]};
}

inline Vec rigid_body_initial() { return {12.0, 0.0, 7.0}; }

/// Closed-form solution (12 cn, 12 sn, 7 dn)(7t, 48/49).
inline Vec rigid_body_exact(double t) {
    const JacobiValues j = jacobi_elliptic(7.0 * t, 48.0 / 49.0);
    return {12.0 * j.cn, 12.0 * j.sn, 7.0 * j.dn};
}

/// Period of the motion, 4 K(48/49) / 7.
inline double rigid_body_period() { return 4.0 * complete_elliptic_k(48.0 / 49.0) / 7.0; }

inline ODESystem rigid_body_system() {
    ODESystem sys;
    sys.dim = 3;
    sys.rhs = [](double, const Vec& w) { return rigid_body_rhs(w); };
    sys.invariants = {
        {"Q1", [](const Vec& w) { return w[0] * w[0] + w[1] * w[1]; }},
        {"Q2", [](const Vec& w) { return w[1] * w[1] + 3.0 * w[2] * w[2]; }},
    };
    sys.exact_solution = [](double t) { return rigid_body_exact(t); };
    return sys;
}

// ---------------------------------------------------------------------------
// Pendulum with the non-separable Hamiltonian
//   H(p, x) = p^2/2 - (1 - p/6) cos x,
// state ordered as (x, p), started on the closed level curve H = 0.8 at
// (x, p) = (arccos(-0.8), 0).

inline double pendulum_hamiltonian(double x, double p) {
    return 0.5 * p * p - (1.0 - p / 6.0) * std::cos(x);
}

inline double pendulum_hamiltonian(const Vec& state) {
    return pendulum_hamiltonian(state[0], state[1]);
}

/// (dx/dt, dp/dt) = (dH/dp, -dH/dx), differentiated analytically.
inline Vec pendulum_rhs(double /*t*/, const Vec& state) {
    const double x = state[0];
    const double p = state[1];
    return {p + std::cos(x) / 6.0, -(1.0 - p / 6.0) * std::sin(x)};
}

inline Vec pendulum_initial() { return {std::acos(-0.8), 0.0}; }

inline ODESystem pendulum_system() {
    ODESystem sys;
    sys.dim = 2;
    sys.rhs = pendulum_rhs;
    sys.invariants = {{"H", [](const Vec& s) { return pendulum_hamiltonian(s); }}};
    return sys;
}

}  // namespace rk
