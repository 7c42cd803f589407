#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rk/integrate.hpp"
#include "rk/problems.hpp"
#include "rk/tableau.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using rk::ODESystem;
using rk::Vec;

namespace {

ODESystem scalar_linear(double lambda) {
    ODESystem sys;
    sys.dim = 1;
    sys.rhs = [lambda](double, const Vec& x) { return Vec{lambda * x[0]}; };
    return sys;
}

double rigid_error_at(const rk::ButcherTableau& tab, double t_end, long long n) {
    const auto recs =
        rk::integrate(rk::rigid_body_system(), tab, 0.0, rk::rigid_body_initial(), t_end / n, n);
    const Vec exact = rk::rigid_body_exact(t_end);
    double err = 0.0;
    for (int d = 0; d < 3; ++d) err = std::max(err, std::abs(recs.back().x[d] - exact[d]));
    return err;
}

}  // namespace

TEST_CASE("erk_step reproduces the degree-4 stability polynomial") {
    const double lambda = -0.7;
    const double h = 0.19;
    const double x0 = 1.3;
    const Vec out = rk::erk_step(scalar_linear(lambda), rk::catalog("rk4"), 0.0, {x0}, h);
    const double z = lambda * h;
    const double expected = x0 * (1.0 + z + z * z / 2 + z * z * z / 6 + z * z * z * z / 24);
    CHECK_THAT(out[0], WithinRel(expected, 1e-15));
}

TEST_CASE("constant right-hand side advances by exactly h") {
    ODESystem sys;
    sys.dim = 1;
    sys.rhs = [](double, const Vec&) { return Vec{1.0}; };
    for (const char* name : {"rk4", "eq2", "eq3"}) {
        const Vec out = rk::erk_step(sys, rk::catalog(name), 0.0, {0.25}, 0.37);
        CHECK_THAT(out[0], WithinAbs(0.25 + 0.37, 1e-15));
    }
}

TEST_CASE("erk_step validates its inputs") {
    const auto sys = scalar_linear(-1.0);
    CHECK_THROWS_AS(rk::erk_step(sys, rk::catalog("gl4"), 0.0, {1.0}, 0.1), rk::ValidationError);
    CHECK_THROWS_AS(rk::erk_step(sys, rk::catalog("rk4"), 0.0, {1.0}, 0.0), rk::ValidationError);
}

TEST_CASE("non-finite stage values carry the stage index") {
    ODESystem sys;
    sys.dim = 1;
    sys.rhs = [](double t, const Vec&) {
        return Vec{t > 0.4 ? std::numeric_limits<double>::quiet_NaN() : 1.0};
    };
    try {
        rk::erk_step(sys, rk::catalog("rk4"), 0.0, {0.0}, 1.0);
        FAIL("expected a numerical error");
    } catch (const rk::NumericalError& err) {
        CHECK(std::string(err.what()).find("stage 2") != std::string::npos);
    }
}

TEST_CASE("irk_step on the linear test equation matches the Pade form") {
    const double lambda = -1.1;
    const double h = 0.23;
    const double x0 = 0.83;
    const double z = lambda * h;
    const auto result = rk::irk_step(scalar_linear(lambda), rk::catalog("gl4"), 0.0, {x0}, h);
    const double pade = (1 + z / 2 + z * z / 12) / (1 - z / 2 + z * z / 12);
    CHECK_THAT(result.x[0], WithinAbs(x0 * pade, 1e-13));
    CHECK(result.iterations > 1);
}

TEST_CASE("gl4 conserves the harmonic-oscillator invariant per step") {
    ODESystem sys;
    sys.dim = 2;
    sys.rhs = [](double, const Vec& s) { return Vec{s[1], -s[0]}; };
    const auto tab = rk::catalog("gl4");
    Vec x = {1.0, 0.0};
    double previous = x[0] * x[0] + x[1] * x[1];
    for (int n = 0; n < 500; ++n) {
        x = rk::irk_step(sys, tab, 0.0, x, 0.05, 1e-14, 50).x;
        const double energy = x[0] * x[0] + x[1] * x[1];
        CHECK_THAT(energy, WithinAbs(previous, 1e-12));
        previous = energy;
    }
}

TEST_CASE("irk_step at h = 0 returns x unchanged after one sweep") {
    const auto result = rk::irk_step(scalar_linear(2.0), rk::catalog("gl4"), 0.0, {1.7}, 0.0);
    CHECK(result.x[0] == 1.7);
    CHECK(result.iterations == 1);
}

TEST_CASE("irk_step reports non-contraction") {
    try {
        rk::irk_step(scalar_linear(-3.0), rk::catalog("gl4"), 0.0, {1.0}, 5.0, 1e-14, 5);
        FAIL("expected a convergence error");
    } catch (const rk::ConvergenceError& err) {
        CHECK(err.last_residual > 0.0);
    }
}

TEST_CASE("integrate base case equals a single step") {
    const auto sys = rk::rigid_body_system();
    const auto tab = rk::catalog("eq3");
    const Vec x0 = rk::rigid_body_initial();
    const Vec single = rk::erk_step(sys, tab, 0.0, x0, 0.01);
    const auto recs = rk::integrate(sys, tab, 0.0, x0, 0.01, 1);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].t == 0.0);
    for (int d = 0; d < 3; ++d) CHECK(recs[1].x[d] == single[d]);
}

TEST_CASE("sampling always includes t0 and the final state") {
    const auto sys = rk::rigid_body_system();
    const auto tab = rk::catalog("rk4");
    rk::IntegrateOptions options;
    options.sample_every = 10;
    auto recs = rk::integrate(sys, tab, 0.0, rk::rigid_body_initial(), 0.01, 10, options);
    CHECK(recs.size() == 2);  // t0 plus the final state

    options.sample_every = 3;
    recs = rk::integrate(sys, tab, 0.0, rk::rigid_body_initial(), 0.01, 10, options);
    REQUIRE(recs.size() == 5);  // steps 0, 3, 6, 9, 10
    CHECK_THAT(recs[3].t, WithinAbs(0.09, 1e-15));
    CHECK_THAT(recs[4].t, WithinAbs(0.10, 1e-15));
    CHECK(recs[0].invariants.size() == 2);
}

TEST_CASE("integrate validates its inputs") {
    const auto sys = rk::rigid_body_system();
    const auto tab = rk::catalog("rk4");
    CHECK_THROWS_AS(rk::integrate(sys, tab, 0.0, rk::rigid_body_initial(), 0.01, 0),
                    rk::ValidationError);
    CHECK_THROWS_AS(rk::integrate(sys, tab, 0.0, {1.0}, 0.01, 5), rk::ValidationError);
    rk::IntegrateOptions options;
    options.sample_every = 0;
    CHECK_THROWS_AS(rk::integrate(sys, tab, 0.0, rk::rigid_body_initial(), 0.01, 5, options),
                    rk::ValidationError);
}

TEST_CASE("step failures carry the step index") {
    ODESystem sys;
    sys.dim = 1;
    sys.rhs = [](double t, const Vec&) {
        return Vec{t > 0.05 ? std::numeric_limits<double>::infinity() : 1.0};
    };
    try {
        rk::integrate(sys, rk::catalog("rk4"), 0.0, {0.0}, 0.02, 10);
        FAIL("expected a numerical error");
    } catch (const rk::NumericalError& err) {
        CHECK(std::string(err.what()).find("step ") != std::string::npos);
    }
}

TEST_CASE("stages see the c-node time offsets") {
    std::vector<double> seen;
    rk::ODESystem sys;
    sys.dim = 1;
    sys.rhs = [&seen](double t, const Vec&) {
        seen.push_back(t);
        return Vec{t};
    };
    const auto tab = rk::catalog("eq3");
    const double t0 = 0.5;
    const double h = 0.125;
    rk::erk_step(sys, tab, t0, {0.0}, h);
    REQUIRE(seen.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(seen[i] == t0 + tab.c[i] * h);

    // a time-only rhs turns the step into Simpson quadrature, whose error
    // here is h^5 f''''(xi)/2880 ~ 3.5e-9
    rk::ODESystem cosine;
    cosine.dim = 1;
    cosine.rhs = [](double t, const Vec&) { return Vec{std::cos(t)}; };
    const Vec out = rk::erk_step(cosine, rk::catalog("rk4"), 0.0, {0.0}, 0.1);
    CHECK_THAT(out[0], WithinAbs(std::sin(0.1), 5e-9));
}

TEST_CASE("affine equivariance of the integrator") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> shift(-2.0, 2.0);
    ODESystem base;
    base.dim = 3;
    base.rhs = [](double, const Vec& y) {
        return Vec{std::sin(y[1]) - 0.3 * y[0], std::cos(y[2]) * 0.5, std::sin(y[0] + y[1]) * 0.2};
    };
    for (int trial = 0; trial < 5; ++trial) {
        const Vec d = {shift(rng), shift(rng), shift(rng)};
        ODESystem shifted;
        shifted.dim = 3;
        shifted.rhs = [&base, d](double t, const Vec& z) {
            Vec y(3);
            for (int i = 0; i < 3; ++i) y[i] = z[i] - d[i];
            return base.rhs(t, y);
        };
        const Vec y0 = {0.4, -0.2, 0.9};
        Vec z0 = y0;
        for (int i = 0; i < 3; ++i) z0[i] += d[i];
        const auto ys = rk::integrate(base, rk::catalog("rk4"), 0.0, y0, 0.05, 50);
        const auto zs = rk::integrate(shifted, rk::catalog("rk4"), 0.0, z0, 0.05, 50);
        for (std::size_t k = 0; k < ys.size(); ++k)
            for (int i = 0; i < 3; ++i)
                CHECK_THAT(zs[k].x[i] - ys[k].x[i], WithinAbs(d[i], 1e-12));
    }
}

TEST_CASE("trajectories are bit-reproducible") {
    const auto sys = rk::rigid_body_system();
    const auto tab = rk::catalog("eq3");
    const auto a = rk::integrate(sys, tab, 0.0, rk::rigid_body_initial(), 0.01, 200);
    const auto b = rk::integrate(sys, tab, 0.0, rk::rigid_body_initial(), 0.01, 200);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        for (int d = 0; d < 3; ++d) CHECK(a[k].x[d] == b[k].x[d]);
}

TEST_CASE("eq3 halves the rigid-body error sixteen-fold per step halving") {
    const double period = rk::rigid_body_period();
    const double e1 = rigid_error_at(rk::catalog("eq3"), period, 128);
    const double e2 = rigid_error_at(rk::catalog("eq3"), period, 256);
    CHECK(e1 / e2 > 14.0);
    CHECK(e1 / e2 < 18.0);
}

TEST_CASE("rk4 returns near the initial point after one period") {
    const double period = rk::rigid_body_period();
    // h = period/512 (about 2^-8); the tighter run is the reference oracle
    CHECK(rigid_error_at(rk::catalog("rk4"), period, 512) < 1e-6);
    CHECK(rigid_error_at(rk::catalog("rk4"), period, 4096) < 1e-9);
}

TEST_CASE("empirical convergence order matches p on the rigid body") {
    struct Row {
        const char* name;
        double p;
    };
    for (const Row& row : {Row{"rk4", 4}, Row{"eq2", 4}, Row{"eq3", 4}, Row{"gl4", 4},
                           Row{"pointR", 4}}) {
        const double t_end = 1.875;  // 60 steps of 2^-5, near one period
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int k = 5; k <= 9; ++k) {
            const long long n = static_cast<long long>(t_end * (1 << k));
            const double err = rigid_error_at(rk::catalog(row.name), t_end, n);
            const double lx = std::log(t_end / static_cast<double>(n));
            const double ly = std::log(err);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++m;
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        CAPTURE(row.name, slope);
        CHECK_THAT(slope, WithinAbs(row.p, 0.2));
    }
}

TEST_CASE("compensated accumulation stays consistent with the plain path") {
    const auto sys = rk::rigid_body_system();
    const auto tab = rk::catalog("rk4");
    rk::IntegrateOptions plain;
    rk::IntegrateOptions comp;
    comp.compensated = true;
    const auto a = rk::integrate(sys, tab, 0.0, rk::rigid_body_initial(), 0.01, 1000, plain);
    const auto b = rk::integrate(sys, tab, 0.0, rk::rigid_body_initial(), 0.01, 1000, comp);
    for (int d = 0; d < 3; ++d) CHECK_THAT(b.back().x[d], WithinAbs(a.back().x[d], 1e-9));
}
