#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rk/csv.hpp"
#include "rk/errors.hpp"
#include "rk/integrate.hpp"
#include "rk/parallel.hpp"
#include "rk/problems.hpp"
#include "rk/tableau.hpp"

namespace rk {

enum class Problem { RigidBody, Pendulum };

inline Problem parse_problem(std::string_view name) {
    if (name == "rigid") return Problem::RigidBody;
    if (name == "pendulum") return Problem::Pendulum;
    throw ValidationError("unknown problem '" + std::string(name) + "' (rigid | pendulum)");
}

/// Wraps a system so every rhs evaluation bumps *counter. The equal-work
/// axis of the drift experiments is h1 = h/s, so evaluations are counted,
/// not assumed.
inline ODESystem with_eval_counter(ODESystem sys, std::shared_ptr<long long> counter) {
    auto inner = sys.rhs;
    sys.rhs = [inner, counter](double t, const Vec& x) {
        ++*counter;
        return inner(t, x);
    };
    return sys;
}

/// Invariant deviations along one long fixed-step run. The step size is
/// h = s * h1, so equal h1 means an equal number of rhs evaluations per
/// unit time across explicit methods.
struct DriftSeries {
    std::string method;
    double h1 = 0.0;
    double h = 0.0;
    std::vector<std::string> labels;               // one per tracked invariant
    std::vector<double> times;                     // sample times, t0 first
    std::vector<std::vector<double>> deviations;   // [sample][invariant]
    double reference_magnitude = 0.0;              // scale of the invariants at t0
    long long rhs_evaluations = 0;
};

/// Integrates the chosen benchmark with h = s*h1 up to t_end, recording
/// invariant deviations roughly every sample_dt: |Q_i - Q_i(0)| for the
/// rigid body, signed H - H(0) for the pendulum.
inline DriftSeries drift_experiment(Problem problem, const ButcherTableau& tab, double h1,
                                    double t_end, double sample_dt,
                                    const IntegrateOptions& base_options = {}) {
    if (!(h1 > 0.0) || !(t_end > 0.0) || !(sample_dt > 0.0))
        throw ValidationError("drift_experiment: h1, t_end, sample_dt must be positive");
    const double h = tab.stages() * h1;
    const long long n_steps = std::llround(t_end / h);
    if (n_steps < 1) throw ValidationError("drift_experiment: t_end shorter than one step");

    IntegrateOptions options = base_options;
    options.sample_every = static_cast<int>(
        std::clamp<long long>(std::llround(sample_dt / h), 1, std::numeric_limits<int>::max()));
    if (n_steps / options.sample_every < 10)
        throw ValidationError("drift_experiment: fewer than 10 samples; shrink sample_dt");

    const bool rigid = problem == Problem::RigidBody;
    ODESystem sys = rigid ? rigid_body_system() : pendulum_system();
    const Vec x0 = rigid ? rigid_body_initial() : pendulum_initial();
    auto counter = std::make_shared<long long>(0);
    sys = with_eval_counter(std::move(sys), counter);

    DriftSeries series;
    series.method = tab.name;
    series.h1 = h1;
    series.h = h;
    for (const auto& [label, eval] : sys.invariants) series.labels.push_back(label);

    std::vector<StepRecord> records;
    try {
        records = integrate(sys, tab, 0.0, x0, h, n_steps, options);
    } catch (const Error& err) {
        throw NumericalError("drift_experiment(" + tab.name + ", h1=" + std::to_string(h1) +
                             "): " + err.what());
    }

    const std::vector<double>& base = records.front().invariants;
    series.reference_magnitude = 0.0;
    for (double v : base) series.reference_magnitude = std::max(series.reference_magnitude, std::abs(v));
    series.times.reserve(records.size());
    series.deviations.reserve(records.size());
    for (const StepRecord& rec : records) {
        series.times.push_back(rec.t);
        std::vector<double> devs(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            const double d = rec.invariants[i] - base[i];
            devs[i] = rigid ? std::abs(d) : d;
        }
        series.deviations.push_back(std::move(devs));
    }
    series.rhs_evaluations = *counter;
    return series;
}

/// Weighted moving average with sin^2 weights over the window (t, t + W):
/// sum sin^2(pi (t_n - t)/W) v_n / sum sin^2(pi (t_n - t)/W). The default
/// window is the full-scale choice of 20000 time units; the desk-scale
/// slope fits pass t_end/10 instead.
inline double weighted_moving_average(const std::vector<double>& times,
                                      const std::vector<double>& values, double t,
                                      double window = 20000.0) {
    if (times.size() != values.size())
        throw ValidationError("weighted_moving_average: times/values size mismatch");
    if (!(window > 0.0)) throw ValidationError("weighted_moving_average: window must be positive");
    const auto first = std::upper_bound(times.begin(), times.end(), t);
    const auto last = std::lower_bound(times.begin(), times.end(), t + window);
    if (std::distance(first, last) < 2)
        throw ValidationError("weighted_moving_average: window covers fewer than 2 samples");
    double num = 0.0;
    double den = 0.0;
    for (auto it = first; it != last; ++it) {
        const double s = std::sin(std::numbers::pi * (*it - t) / window);
        const double w = s * s;
        num += w * values[static_cast<std::size_t>(it - times.begin())];
        den += w;
    }
    if (den == 0.0) throw ValidationError("weighted_moving_average: all weights vanish");
    return num / den;
}

/// Drift speed from the first and last full averaging windows of a series:
/// (<v>(t_last) - <v>(t_first)) / (t_last - t_first). The sin^2 windows are
/// symmetric, so each average represents its window midpoint and the
/// midpoints are (t_end - W) apart.
inline double drift_speed_from_series(const DriftSeries& series, double window,
                                      std::size_t invariant_index = 0) {
    if (series.times.size() < 2) throw ValidationError("drift_speed_from_series: empty series");
    std::vector<double> values(series.times.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = series.deviations[i][invariant_index];
    const double t0 = series.times.front();
    const double t1 = series.times.back() - window;
    if (t1 <= t0)
        throw ValidationError("drift_speed_from_series: series shorter than two windows");
    const double early = weighted_moving_average(series.times, values, t0, window);
    const double late = weighted_moving_average(series.times, values, t1, window);
    return (late - early) / (t1 - t0);
}

/// A point is round-off-floor-dominated when its drift speed falls under
/// 100 x (machine epsilon x reference magnitude / h1): the random-walk
/// regime where systematic drift is unreadable.
inline double floor_speed_threshold(double h1, double reference_magnitude) {
    return 100.0 * std::numeric_limits<double>::epsilon() * reference_magnitude / h1;
}

struct DriftSpeed {
    double h1 = 0.0;
    double h = 0.0;
    double speed = 0.0;  // absolute drift speed
    bool floor = false;
};

struct DriftSpeedFit {
    std::vector<DriftSpeed> speeds;       // one per requested h1, in input order
    bool all_floor = false;               // no usable points at all
    std::optional<double> slope;          // log-log slope over non-floor points
    double h_min_used = 0.0;              // h-window that entered the fit
    double h_max_used = 0.0;
};

/// Least-squares slope of log(speed) vs log(h) over the non-floor points.
inline DriftSpeedFit fit_drift_slope(std::vector<DriftSpeed> speeds) {
    DriftSpeedFit fit;
    fit.speeds = std::move(speeds);
    std::vector<std::pair<double, double>> pts;  // (log h, log speed)
    for (const DriftSpeed& p : fit.speeds)
        if (!p.floor && p.speed > 0.0) pts.emplace_back(std::log(p.h), std::log(p.speed));
    if (pts.empty()) {
        fit.all_floor = true;
        return fit;
    }
    if (pts.size() < 2) return fit;  // a single usable point fixes no slope
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double hmin = std::numeric_limits<double>::infinity();
    double hmax = 0.0;
    for (const DriftSpeed& p : fit.speeds)
        if (!p.floor && p.speed > 0.0) {
            hmin = std::min(hmin, p.h);
            hmax = std::max(hmax, p.h);
        }
    fit.h_min_used = hmin;
    fit.h_max_used = hmax;
    return fit;
}

/// Runs the drift experiment over a grid of h1 values and fits the
/// drift-speed power law. W defaults to t_end/10; the (method, h1) cells
/// run independently under the RK_THREADS budget and merge by index.
inline DriftSpeedFit drift_speed_slope(Problem problem, const ButcherTableau& tab,
                                       const std::vector<double>& h1_list, double t_end,
                                       const IntegrateOptions& options = {}) {
    if (h1_list.size() < 3)
        throw ValidationError("drift_speed_slope: need at least 3 step sizes");
    const double window = t_end / 10.0;
    std::vector<DriftSpeed> speeds(h1_list.size());
    parallel_for(static_cast<int>(h1_list.size()), [&](int i) {
        const double h1 = h1_list[i];
        const double sample_dt = window / 400.0;
        const DriftSeries series =
            drift_experiment(problem, tab, h1, t_end, sample_dt, options);
        DriftSpeed point;
        point.h1 = h1;
        point.h = series.h;
        point.speed = std::abs(drift_speed_from_series(series, window));
        point.floor = point.speed < floor_speed_threshold(h1, series.reference_magnitude);
        speeds[i] = point;
    });
    return fit_drift_slope(std::move(speeds));
}

/// CSV view of a drift series: t plus one deviation column per invariant.
inline CsvTable drift_series_csv(const DriftSeries& series) {
    CsvTable table;
    table.header.push_back("t");
    for (const std::string& label : series.labels) table.header.push_back("dev_" + label);
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        std::vector<std::string> row;
        row.push_back(csv_double(series.times[i]));
        for (double d : series.deviations[i]) row.push_back(csv_double(d));
        table.rows.push_back(std::move(row));
    }
    return table;
}

/// CSV view of a slope fit: one row per h1.
inline CsvTable drift_fit_csv(const DriftSpeedFit& fit) {
    CsvTable table;
    table.header = {"h1", "h", "speed", "floor"};
    for (const DriftSpeed& p : fit.speeds)
        table.rows.push_back(
            {csv_double(p.h1), csv_double(p.h), csv_double(p.speed), p.floor ? "1" : "0"});
    return table;
}

}  // namespace rk
