#include <doctest.h>

#include "invevo/augment.hpp"
#include "invevo/errors.hpp"
#include "invevo/verify.hpp"
#include "test_support.hpp"

#include <json.hpp>

#include <cmath>

using namespace invevo;
using namespace invevo::testing;

namespace {

Field heat_data(int n, std::uint64_t seed) {
    return Field::constant(Grid(1, n), 1.0) + 0.05 * unit(zero_mean(band_limited(Grid(1, n), 3, seed)));
}

} // namespace

TEST_CASE("trivial pair has zero error") {
    const PdeSpec ac = default_spec(PdeKind::AllenCahn2D);
    const DataPair p = make_pair(ac, Field::constant(Grid(2, 16), 1.0), 0.1, SchemeOrder(3));
    CHECK(pair_relative_error(p) <= 1e-12);

    Dataset ds(ac, Grid(2, 16), 0.1, 3);
    ds.pairs.push_back(p);
    ds.tally.attempts = 1;
    const AccuracyReport r = accuracy_report(ds);
    CHECK(r.mean <= 1e-12);
    CHECK(r.median == r.mean);
    CHECK(r.max == r.mean);
    CHECK(r.attempts == 1);
    CHECK(r.rejected_count == 0);
}

TEST_CASE("rejected pairs are not measured") {
    const PdeSpec heat = default_spec(PdeKind::Heat1D);
    DataPair p = make_pair(heat, heat_data(32, 1), 0.01, SchemeOrder(1));
    p.flags.reason = RejectReason::Blowup;
    CHECK_THROWS_AS(pair_relative_error(p), ArgumentError);
}

TEST_CASE("summary statistics and headline") {
    AccuracyReport r;
    r.per_pair_errors = {4.0e-4, 1.0e-4, 2.0e-4, 3.0e-4};
    summarize(r);
    CHECK(r.mean == doctest::Approx(2.5e-4));
    CHECK(r.median == doctest::Approx(2.5e-4));
    CHECK(r.max == 4.0e-4);
    CHECK(r.headline() == "2.5000e-04");
    r.per_pair_errors = {0.5, 2.0, 3.0};
    summarize(r);
    CHECK(r.median == 2.0);
    CHECK(r.headline() == "—");
    r.per_pair_errors.clear();
    summarize(r);
    CHECK(r.headline() == "—");
}

TEST_CASE("report totals and determinism") {
    SourceSpec src;
    src.count = 4;
    src.t_final = 0.2;
    src.save_every = 0.05;
    const Dataset source = generate_reference_dataset(default_spec(PdeKind::Burgers1D), 64, src, 2);
    AugmentConfig cfg;
    cfg.spec = default_spec(PdeKind::Burgers1D);
    cfg.resolution = 64;
    cfg.dt = 0.05;
    cfg.order = SchemeOrder(1);
    cfg.count = 10;
    cfg.blowup_factor = 1.02;
    const Dataset ds = generate_augmented(source, cfg, 4);
    REQUIRE(ds.tally.rejected() > 0);
    const AccuracyReport a = accuracy_report(ds);
    CHECK(a.rejected_count + a.per_pair_errors.size() == ds.tally.attempts);
    CHECK(a.attempts == ds.tally.attempts);
    const AccuracyReport b = accuracy_report(ds);
    CHECK(a.per_pair_errors == b.per_pair_errors);
    CHECK(to_json(a) == to_json(b));

    Dataset mixed = ds;
    mixed.pairs[1].dt = 0.04;
    CHECK_THROWS_AS(accuracy_report(mixed), ArgumentError);
}

TEST_CASE("oracle sanity") {
    const PdeSpec heat = default_spec(PdeKind::Heat1D);
    const Field u0 = heat_data(64, 9);
    const double dt_ref = 1e-5;
    RefConfig coarse;
    coarse.dt_ref = dt_ref;
    const DataPair p{u0, forward_evolve(heat, u0, 0.01, coarse), 0.01, heat, std::nullopt, {}, {}};
    CHECK(pair_relative_error(p, coarse) == 0.0);
    CHECK(pair_relative_error(p) <= 5.0 * dt_ref);
}

TEST_CASE("error grows with dt") {
    const PdeSpec heat = default_spec(PdeKind::Heat1D);
    const Field u = heat_data(64, 5);
    for (int order = 1; order <= 3; ++order) {
        const auto r = convergence_order(heat, u, {0.002, 0.004, 0.008, 0.016}, SchemeOrder(order));
        for (std::size_t i = 1; i < r.errors.size(); ++i) CHECK(r.errors[i] > r.errors[i - 1]);
    }
}

TEST_CASE("local truncation order") {
    const PdeSpec heat = default_spec(PdeKind::Heat1D);
    const Field u = Field::constant(Grid(1, 32), 1.0) + 0.05 * unit(zero_mean(band_limited(Grid(1, 32), 1, 7)));
    RefConfig ref;
    ref.dt_ref = 1e-8;
    for (int order = 1; order <= 3; ++order) {
        const auto r = convergence_order(heat, u, {0.002, 0.004, 0.008, 0.016}, SchemeOrder(order), ref);
        CHECK(std::abs(r.slope - (order + 1)) <= 0.4);
    }
}

TEST_CASE("convergence sweep validation") {
    const PdeSpec heat = default_spec(PdeKind::Heat1D);
    const Field u = heat_data(32, 5);
    CHECK_THROWS_AS(convergence_order(heat, u, {0.002, 0.004}, SchemeOrder(1)), ArgumentError);
    CHECK_THROWS_AS(convergence_order(heat, u, {0.002, 0.003, 0.004}, SchemeOrder(1)), ArgumentError);
    Field rough(Grid(1, 256));
    for (int i = 0; i < 256; ++i) rough[i] = i % 2 == 0 ? 1.0 : -1.0;
    CHECK_THROWS_AS(convergence_order(heat, rough, {0.01, 0.02, 0.04}, SchemeOrder(1)), InstabilityError);
    CHECK(loglog_slope({1.0, 2.0, 4.0}, {1.0, 4.0, 16.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(loglog_slope({1.0, 2.0}, {0.0, 1.0}), ArgumentError);
}

TEST_CASE("benchmark reports") {
    BenchConfig cfg;
    cfg.spec = default_spec(PdeKind::Burgers1D);
    cfg.resolution = 64;
    cfg.count = 4;
    cfg.dt = 0.01;
    const auto [inv, expl] = benchmark_generation(cfg);
    CHECK(inv.pairs == 4);
    CHECK(expl.pairs == 4);
    CHECK(inv.dt_ref == 0.0);
    CHECK(expl.dt_ref > 0.0);
    CHECK(inv.wall_seconds >= 0.0);
    const auto j = nlohmann::json::parse(to_json(std::pair{inv, expl}));
    CHECK(j.is_object());
    cfg.count = 0;
    CHECK_THROWS_AS(benchmark_generation(cfg), ArgumentError);
}

TEST_CASE("report documents") {
    AccuracyReport r;
    r.per_pair_errors = {1e-4, 2e-4, 4e-3};
    r.spec = default_spec(PdeKind::Heat1D);
    r.dt = 0.01;
    r.order = 2;
    r.resolution = 256;
    r.attempts = 3;
    summarize(r);
    const auto j = nlohmann::json::parse(to_json(r));
    CHECK(j.at("mean").get<double>() == r.mean);
    CHECK(j.at("per_pair_errors").size() == 3);
    CHECK(j.at("headline").get<std::string>() == r.headline());
    const std::string svg = error_histogram_svg(r);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    ConvergenceResult c{{0.002, 0.004, 0.008}, {1e-6, 4e-6, 1.6e-5}, 2.0};
    CHECK(nlohmann::json::parse(to_json(c)).at("slope").get<double>() == 2.0);
    CHECK(error_vs_dt_svg(c).find("<polyline") != std::string::npos);
}
