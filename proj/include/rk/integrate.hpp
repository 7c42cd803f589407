#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rk/errors.hpp"
#include "rk/linalg.hpp"
#include "rk/tableau.hpp"

namespace rk {

/// Right-hand side dx/dt = f(t, x) plus optional invariants and an optional
/// exact solution. Evaluators must be deterministic and side-effect free as
/// far as the integrator can tell.
struct ODESystem {
    int dim = 0;
    std::function<Vec(double, const Vec&)> rhs;
    std::vector<std::pair<std::string, std::function<double(const Vec&)>>> invariants;
    std::function<Vec(double)> exact_solution;  // may be empty
};

struct StepRecord {
    double t = 0.0;
    Vec x;
    int iterations = 0;              // implicit solves only; 0 for explicit steps
    std::vector<double> invariants;  // values of sys.invariants at (t, x)
};

namespace detail {

inline Vec eval_rhs(const ODESystem& sys, double t, const Vec& x, int stage) {
    Vec f = sys.rhs(t, x);
    if (static_cast<int>(f.size()) != sys.dim)
        throw NumericalError("rhs returned a vector of wrong dimension at stage " +
                             std::to_string(stage + 1));
    if (!all_finite(f))
        throw NumericalError("rhs returned a non-finite value at stage " +
                             std::to_string(stage + 1));
    return f;
}

/// h * sum_j b_j F_j, accumulated in fixed ascending stage order.
inline Vec weighted_increment(const ButcherTableau& tab, const std::vector<Vec>& f, double h,
                              int dim) {
    Vec delta = zeros(dim);
    for (int j = 0; j < tab.stages(); ++j) {
        const double w = h * tab.b[j];
        for (int d = 0; d < dim; ++d) delta[d] += w * f[j][d];
    }
    return delta;
}

inline Vec erk_increment(const ODESystem& sys, const ButcherTableau& tab, double t, const Vec& x,
                         double h) {
    const int s = tab.stages();
    std::vector<Vec> f(s);
    Vec stage(sys.dim);
    for (int i = 0; i < s; ++i) {
        stage = x;
        for (int j = 0; j < i; ++j) {
            if (tab.A[i][j] == 0.0) continue;
            const double w = h * tab.A[i][j];
            for (int d = 0; d < sys.dim; ++d) stage[d] += w * f[j][d];
        }
        f[i] = eval_rhs(sys, t + tab.c[i] * h, stage, i);
    }
    return weighted_increment(tab, f, h, sys.dim);
}

struct IrkIncrement {
    Vec delta;
    int iterations = 0;
};

inline IrkIncrement irk_increment(const ODESystem& sys, const ButcherTableau& tab, double t,
                                  const Vec& x, double h, double tol, int max_iter) {
    const int s = tab.stages();
    std::vector<Vec> z(s, zeros(sys.dim));
    std::vector<Vec> z_next(s, zeros(sys.dim));
    std::vector<Vec> f(s, zeros(sys.dim));
    Vec stage(sys.dim);
    double change = 0.0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        for (int j = 0; j < s; ++j) {
            stage = x;
            for (int d = 0; d < sys.dim; ++d) stage[d] += z[j][d];
            f[j] = eval_rhs(sys, t + tab.c[j] * h, stage, j);
        }
        change = 0.0;
        for (int i = 0; i < s; ++i) {
            for (int d = 0; d < sys.dim; ++d) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += tab.A[i][j] * f[j][d];
                z_next[i][d] = h * acc;
                change = std::max(change, std::abs(z_next[i][d] - z[i][d]));
            }
        }
        z.swap(z_next);
        if (change < tol) {
            // stage derivatives at the converged stage values, then combine
            for (int j = 0; j < s; ++j) {
                stage = x;
                for (int d = 0; d < sys.dim; ++d) stage[d] += z[j][d];
                f[j] = eval_rhs(sys, t + tab.c[j] * h, stage, j);
            }
            return {weighted_increment(tab, f, h, sys.dim), iter};
        }
    }
    throw ConvergenceError("irk_step: fixed-point iteration did not reach tol " +
                               std::to_string(tol) + " in " + std::to_string(max_iter) +
                               " sweeps (last change " + std::to_string(change) + ")",
                           change);
}

}  // namespace detail

/// One explicit step: stages evaluated in index order, update accumulated in
/// fixed ascending stage order.
inline Vec erk_step(const ODESystem& sys, const ButcherTableau& tab, double t, const Vec& x,
                    double h) {
    if (tab.kind != TableauKind::Explicit)
        throw ValidationError("erk_step needs an explicit tableau");
    if (!(h > 0.0)) throw ValidationError("erk_step: h must be positive");
    const Vec delta = detail::erk_increment(sys, tab, t, x, h);
    Vec out = x;
    for (int d = 0; d < sys.dim; ++d) out[d] += delta[d];
    return out;
}

struct IrkResult {
    Vec x;
    int iterations = 0;
};

/// One implicit step by fixed-point iteration on the stage increments
/// Z_i = h sum_j a_ij F_j, stopping when the sweep-to-sweep change drops
/// below `tol` in the sup norm. Suited to nonstiff problems and moderate h;
/// at h = 0 the initial guess is already the fixed point (one sweep).
inline IrkResult irk_step(const ODESystem& sys, const ButcherTableau& tab, double t, const Vec& x,
                          double h, double tol = 1e-14, int max_iter = 50) {
    if (tab.kind != TableauKind::Implicit)
        throw ValidationError("irk_step needs an implicit tableau");
    if (h < 0.0) throw ValidationError("irk_step: h must be nonnegative");
    detail::IrkIncrement inc = detail::irk_increment(sys, tab, t, x, h, tol, max_iter);
    Vec out = x;
    for (int d = 0; d < sys.dim; ++d) out[d] += inc.delta[d];
    return {std::move(out), inc.iterations};
}

struct IntegrateOptions {
    int sample_every = 1;      // record every k-th step (plus t0 and the final state)
    bool compensated = false;  // Kahan accumulation of the x-updates
    double irk_tol = 1e-14;
    int irk_max_iter = 50;
};

/// Fixed-step integration for n_steps steps of size h from (t0, x0).
/// Records t0, then every sample_every-th state, then the final state.
/// Invariant evaluators, when present, are evaluated at recorded states.
inline std::vector<StepRecord> integrate(const ODESystem& sys, const ButcherTableau& tab,
                                         double t0, const Vec& x0, double h, long long n_steps,
                                         const IntegrateOptions& options = {}) {
    if (n_steps < 1) throw ValidationError("integrate: n_steps must be >= 1");
    if (options.sample_every < 1) throw ValidationError("integrate: sample_every must be >= 1");
    if (static_cast<int>(x0.size()) != sys.dim)
        throw ValidationError("integrate: x0 dimension does not match the system");
    if (tab.kind == TableauKind::Explicit && !(h > 0.0))
        throw ValidationError("integrate: h must be positive");

    std::vector<StepRecord> records;
    records.reserve(static_cast<std::size_t>(n_steps / options.sample_every) + 2);
    auto record = [&](double t, const Vec& x, int iterations) {
        StepRecord rec;
        rec.t = t;
        rec.x = x;
        rec.iterations = iterations;
        rec.invariants.reserve(sys.invariants.size());
        for (const auto& [label, eval] : sys.invariants) rec.invariants.push_back(eval(x));
        records.push_back(std::move(rec));
    };

    Vec x = x0;
    Vec carry = zeros(sys.dim);  // Kahan compensation (unused when disabled)
    record(t0, x, 0);
    for (long long n = 0; n < n_steps; ++n) {
        const double t = t0 + static_cast<double>(n) * h;
        int iterations = 0;
        Vec delta;
        try {
            if (tab.kind == TableauKind::Explicit) {
                delta = detail::erk_increment(sys, tab, t, x, h);
            } else {
                detail::IrkIncrement inc =
                    detail::irk_increment(sys, tab, t, x, h, options.irk_tol, options.irk_max_iter);
                delta = std::move(inc.delta);
                iterations = inc.iterations;
            }
        } catch (const NumericalError& err) {
            throw NumericalError("step " + std::to_string(n + 1) + " (t = " + std::to_string(t) +
                                 "): " + err.what());
        }
        if (options.compensated) {
            for (int d = 0; d < sys.dim; ++d) {
                const double y = delta[d] - carry[d];
                const double sum = x[d] + y;
                carry[d] = (sum - x[d]) - y;
                x[d] = sum;
            }
        } else {
            for (int d = 0; d < sys.dim; ++d) x[d] += delta[d];
        }
        const bool last = (n + 1 == n_steps);
        if (last || (n + 1) % options.sample_every == 0)
            record(t0 + static_cast<double>(n + 1) * h, x, iterations);
    }
    return records;
}

}  // namespace rk
