#include <doctest.h>

#include "invevo/augment.hpp"
#include "invevo/errors.hpp"
#include "invevo/reference.hpp"
#include "invevo/verify.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numeric>

using namespace invevo;
using namespace invevo::testing;

namespace {

RefConfig euler(double dt) {
    RefConfig r;
    r.dt_ref = dt;
    r.method = RefMethod::ExplicitEuler;
    return r;
}

RefConfig cn(double dt) {
    RefConfig r;
    r.dt_ref = dt;
    r.method = RefMethod::SemiImplicitSpectralCN;
    return r;
}

} // namespace

TEST_CASE("initial conditions") {
    for (PdeKind kind : {PdeKind::Heat1D, PdeKind::Burgers1D, PdeKind::AllenCahn2D, PdeKind::NavierStokes2D}) {
        const PdeSpec spec = default_spec(kind);
        const Grid g(dim_of(kind), 32);
        std::mt19937_64 a(42), b(42);
        const Field fa = sample_initial_condition(spec, g, a);
        CHECK(fa == sample_initial_condition(spec, g, b));
        CHECK(fa.all_finite());
        if (kind == PdeKind::AllenCahn2D) {
            CHECK(max_value(fa) < 1.0);
            CHECK(min_value(fa) > -1.0);
        } else {
            CHECK(max_abs(fa) == doctest::Approx(1.0));
            CHECK(std::abs(mean(fa)) < 1e-14);
        }
    }
    SUBCASE("ensemble mean is zero within three standard errors") {
        const PdeSpec spec = default_spec(PdeKind::NavierStokes2D);
        const Grid g(2, 32);
        std::vector<double> point;
        for (std::uint64_t i = 0; i < 100; ++i) {
            auto rng = split_rng(9, i, 3);
            point.push_back(sample_initial_condition(spec, g, rng)[37]);
        }
        const double m = std::accumulate(point.begin(), point.end(), 0.0) / 100.0;
        double var = 0.0;
        for (double p : point) var += (p - m) * (p - m);
        const double se = std::sqrt(var / 99.0 / 100.0);
        CHECK(std::abs(m) <= 3.0 * se);
    }
    SUBCASE("amplitude and offset") {
        IcParams ic;
        ic.amplitude = 0.05;
        ic.offset = 1.0;
        std::mt19937_64 rng(3);
        const Field f = sample_initial_condition(default_spec(PdeKind::Heat1D), Grid(1, 64), rng, ic);
        CHECK(mean(f) == doctest::Approx(1.0));
        CHECK(max_abs(f - Field::constant(f.grid(), 1.0)) == doctest::Approx(0.05));
    }
}

TEST_CASE("stability bounds") {
    const Grid g(1, 256);
    const PdeSpec heat = default_spec(PdeKind::Heat1D);
    CHECK(diffusion_step_bound(heat, g) == doctest::Approx(g.h() * g.h() / 2.0));
    PdeSpec sp = heat;
    sp.disc = Disc::PseudoSpectral;
    CHECK(diffusion_step_bound(sp, g) == doctest::Approx(2.0 * g.h() * g.h() / (std::numbers::pi * std::numbers::pi)));
    const PdeSpec ac = default_spec(PdeKind::AllenCahn2D);
    const Grid g2(2, 128);
    CHECK(diffusion_step_bound(ac, g2, 0.5) == doctest::Approx(0.5 * g2.h() * g2.h() / (4.0 * 0.0025)));
    const Field u = Field::constant(g, 2.0);
    const PdeSpec burgers = default_spec(PdeKind::Burgers1D);
    CHECK(stable_explicit_step(burgers, u) <= g.h() / 2.0);
    const RefConfig r = default_ref_config(heat, u);
    CHECK(r.method == RefMethod::ExplicitEuler);
    CHECK(r.dt_ref == 1e-6);
    CHECK(default_ref_config(default_spec(PdeKind::NavierStokes2D), Field(Grid(2, 64))).method ==
          RefMethod::SemiImplicitSpectralCN);
}

TEST_CASE("forward_evolve basics") {
    const Grid g(1, 64);
    const Field s = Field::sample(g, [](double x) { return std::sin(kTwoPi * x); });
    const PdeSpec heat = default_spec(PdeKind::Heat1D);
    CHECK(forward_evolve(heat, s, 0.0, euler(1e-5)) == s);
    CHECK_THROWS_AS(forward_evolve(heat, s, 0.01, euler(1.0)), ConfigurationError);
    CHECK_THROWS_AS(forward_evolve(heat, s, 0.01, cn(1e-4)), ConfigurationError);
    CHECK_THROWS_AS(forward_evolve(heat, s, -1.0, euler(1e-5)), ArgumentError);
    RefConfig bad = euler(1e-5);
    bad.cfl_safety = 1.5;
    CHECK_THROWS_AS(forward_evolve(heat, s, 0.01, bad), ConfigurationError);

    const Field one = Field::constant(Grid(2, 32), 1.0);
    CHECK(max_abs(forward_evolve(default_spec(PdeKind::AllenCahn2D), one, 0.5, euler(1e-3)) - one) == 0.0);
}

TEST_CASE("heat oracle matches the analytic kernel") {
    const Grid g(1, 256);
    const Field s = Field::sample(g, [](double x) { return std::sin(kTwoPi * x); });
    const double t = 0.01;
    const Field evolved = forward_evolve(default_spec(PdeKind::Heat1D), s, t, euler(1e-6));
    const Field exact = std::exp(-kTwoPi * kTwoPi * t) * s;
    CHECK(relative_l2(evolved, exact) <= 1e-4);
}

TEST_CASE("explicit Euler diverges on an unresolved shock") {
    const Grid g(1, 64);
    const Field big = 1e4 * Field::sample(g, [](double x) { return std::sin(kTwoPi * x); });
    const PdeSpec burgers = default_spec(PdeKind::Burgers1D);
    try {
        forward_evolve(burgers, big, 1.0, euler(1e-4));
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.time_reached() > 0.0);
        CHECK(e.time_reached() <= 1.0);
    }
}

TEST_CASE("trajectory layouts") {
    const PdeSpec ac = default_spec(PdeKind::AllenCahn2D);
    std::mt19937_64 rng(1);
    const Field u0 = sample_initial_condition(ac, Grid(2, 16), rng);
    const Trajectory t = solve_trajectory(ac, u0, 16.0, 0.5, euler(5e-3));
    CHECK(t.states.size() == 33);
    CHECK(t.times.size() == 33);
    CHECK(t.states.front() == u0);
    CHECK(t.times.back() == doctest::Approx(16.0));
    for (std::size_t i = 1; i < t.times.size(); ++i) CHECK(t.times[i] > t.times[i - 1]);

    const PdeSpec burgers = default_spec(PdeKind::Burgers1D);
    const Field b0 = sample_initial_condition(burgers, Grid(1, 32), rng);
    CHECK(solve_trajectory(burgers, b0, 2.0, 0.05, euler(1e-3)).states.size() == 41);
    CHECK_THROWS_AS(solve_trajectory(burgers, b0, 1.0, 0.3, euler(1e-3)), ArgumentError);
}

TEST_CASE("Euler self-convergence is first order") {
    for (PdeKind kind : {PdeKind::Heat1D, PdeKind::Burgers1D, PdeKind::AllenCahn2D}) {
        CAPTURE(to_string(kind));
        const PdeSpec spec = default_spec(kind);
        const Grid g(dim_of(kind), 32);
        const Field u0 = 0.5 * unit(band_limited(g, 2, 8));
        const double base = 0.25 * diffusion_step_bound(spec, g);
        const double t = 200 * base;
        const Field fine = forward_evolve(spec, u0, t, euler(base / 8));
        std::vector<double> dts, diffs;
        for (double f : {1.0, 0.5, 0.25}) {
            dts.push_back(base * f);
            diffs.push_back(norm_l2(forward_evolve(spec, u0, t, euler(base * f)) - fine));
        }
        CHECK(loglog_slope(dts, diffs) == doctest::Approx(1.0).epsilon(0.3));
    }
}

TEST_CASE("Crank-Nicolson on a decaying mode is second order") {
    PdeSpec spec = default_spec(PdeKind::NavierStokes2D);
    spec.forcing_amplitude = 0.0;
    spec.nu = 0.05;
    const Grid g(2, 32);
    const Field w0 = Field::sample(g, [](double x, double y) { return std::sin(kTwoPi * x) * std::sin(kTwoPi * y); });
    const double t = 0.5;
    const Field exact = std::exp(-2.0 * kTwoPi * kTwoPi * spec.nu * t) * w0;
    std::vector<double> dts, errs;
    for (double dt : {0.05, 0.025, 0.0125}) {
        dts.push_back(dt);
        errs.push_back(relative_l2(forward_evolve(spec, w0, t, cn(dt)), exact));
    }
    CHECK(loglog_slope(dts, errs) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("Allen-Cahn maximum principle") {
    const PdeSpec spec = default_spec(PdeKind::AllenCahn2D);
    std::mt19937_64 rng(12);
    const Field u0 = sample_initial_condition(spec, Grid(2, 64), rng);
    const Field u = forward_evolve(spec, u0, 1.0, default_ref_config(spec, u0));
    CHECK(max_value(u) <= 1.0 + 1e-3);
    CHECK(min_value(u) >= -1.0 - 1e-3);
}

TEST_CASE("unforced NS enstrophy does not grow") {
    PdeSpec spec = default_spec(PdeKind::NavierStokes2D);
    spec.forcing_amplitude = 0.0;
    spec.nu = 0.01;
    std::mt19937_64 rng(5);
    const Field w0 = sample_initial_condition(spec, Grid(2, 32), rng);
    const Trajectory traj = solve_trajectory(spec, w0, 1.0, 0.1, cn(1e-3));
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        CHECK(norm_l2(traj.states[i]) <= norm_l2(traj.states[i - 1]) + 1e-10);
    }
}
