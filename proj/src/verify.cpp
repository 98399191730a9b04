#include "invevo/verify.hpp"

#include "invevo/augment.hpp"
#include "invevo/errors.hpp"

#include <json.hpp>
#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>

namespace invevo {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

json spec_json(const PdeSpec& spec) {
    return {{"pde", std::string(to_string(spec.kind))},
            {"nu", spec.nu},
            {"epsilon", spec.epsilon},
            {"disc", std::string(to_string(spec.disc))}};
}

std::string environment_note(int threads) {
    std::string note = "threads=" + std::to_string(threads);
#ifdef __VERSION__
    note += "; compiler=" __VERSION__;
#endif
    note += "; fftw=";
    note += fftw_version;
    return note;
}

void rethrow_first(const std::vector<std::exception_ptr>& errors) {
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace

std::string AccuracyReport::headline() const {
    if (per_pair_errors.empty() || !(mean < 1.0)) return "—";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", mean);
    return buf;
}

double pair_relative_error(const DataPair& pair, const std::optional<RefConfig>& ref) {
    if (!pair.flags.accepted()) throw ArgumentError("pair_relative_error needs an accepted pair");
    const RefConfig cfg = ref ? *ref : default_ref_config(pair.spec, pair.input);
    const Field evolved = forward_evolve(pair.spec, pair.input, pair.dt, cfg);
    const double den = norm_l2(pair.output);
    const double num = norm_l2(evolved - pair.output);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

void summarize(AccuracyReport& report) {
    const auto& e = report.per_pair_errors;
    if (e.empty()) {
        report.mean = report.median = report.max = 0.0;
        return;
    }
    report.mean = std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
    std::vector<double> sorted(e);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    report.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    report.max = sorted.back();
}

AccuracyReport accuracy_report(const Dataset& ds, const std::optional<RefConfig>& ref) {
    require_homogeneous(ds);
    AccuracyReport report;
    report.spec = ds.spec;
    report.dt = ds.dt;
    report.order = ds.scheme_order;
    report.resolution = ds.grid.n();

    std::vector<std::size_t> accepted;
    std::uint64_t rejected_here = 0;
    for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
        if (ds.pairs[i].flags.accepted()) {
            accepted.push_back(i);
        } else {
            ++rejected_here;
        }
    }

    std::vector<double> errors(accepted.size());
    std::vector<std::exception_ptr> failures(accepted.size());
    const auto n = static_cast<std::int64_t>(accepted.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < n; ++j) {
        const std::size_t i = accepted[static_cast<std::size_t>(j)];
        try {
            errors[j] = pair_relative_error(ds.pairs[i], ref);
        } catch (const DivergenceError& e) {
            failures[j] = std::make_exception_ptr(
                DivergenceError("oracle diverged on pair " + std::to_string(i) + ": " + e.what(), e.time_reached()));
        } catch (...) {
            failures[j] = std::current_exception();
        }
    }
    rethrow_first(failures);

    report.per_pair_errors = std::move(errors);
    report.rejected_count = ds.tally.rejected() + rejected_here;
    report.attempts = report.per_pair_errors.size() + report.rejected_count;
    summarize(report);
    return report;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ArgumentError("slope fit needs matching samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ArgumentError("slope fit needs positive samples");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ConvergenceResult convergence_order(const PdeSpec& spec, const Field& u_star, const std::vector<double>& dts,
                                    SchemeOrder order, const std::optional<RefConfig>& ref) {
    if (dts.size() < 3) throw ArgumentError("convergence sweep needs at least three step sizes");
    const auto [lo, hi] = std::minmax_element(dts.begin(), dts.end());
    if (!(*lo > 0.0) || *hi < 4.0 * *lo) throw ArgumentError("convergence sweep must span a factor of four");

    ConvergenceResult result;
    result.dts = dts;
    result.errors.resize(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const DataPair pair = make_pair(spec, u_star, dts[i], order);
        if (!pair.flags.accepted()) {
            throw InstabilityError("pair at dt=" + std::to_string(dts[i]) + " rejected: " +
                                       std::string(to_string(pair.flags.reason)),
                                   max_abs(pair.input));
        }
        result.errors[i] = pair_relative_error(pair, ref);
    }
    result.slope = loglog_slope(result.dts, result.errors);
    return result;
}

std::pair<BenchReport, BenchReport> benchmark_generation(const BenchConfig& cfg) {
    cfg.spec.validate();
    if (cfg.count < 1) throw ArgumentError("benchmark needs count >= 1");
    if (!(cfg.dt > 0.0)) throw ArgumentError("benchmark needs dt > 0");
    const int threads = std::max(1, cfg.threads);
    const Grid grid(dim_of(cfg.spec.kind), cfg.resolution);

    std::vector<Field> inits;
    inits.reserve(cfg.count);
    for (std::uint64_t i = 0; i < cfg.count; ++i) {
        auto rng = split_rng(cfg.seed, i, 3);
        inits.push_back(sample_initial_condition(cfg.spec, grid, rng, cfg.ic));
    }
    const auto n = static_cast<std::int64_t>(cfg.count);

    std::vector<double> sink(cfg.count);
    const auto t0 = Clock::now();
#pragma omp parallel for num_threads(threads) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const DataPair p = make_pair(cfg.spec, inits[i], cfg.dt, cfg.order);
        sink[i] = p.input[0];
    }
    const double inverse_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    std::vector<double> steps(cfg.count);
    std::vector<std::exception_ptr> failures(cfg.count);
    const auto t1 = Clock::now();
#pragma omp parallel for num_threads(threads) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            RefConfig ref;
            ref.method = RefMethod::ExplicitEuler;
            ref.dt_ref = cfg.dt_ref ? *cfg.dt_ref : stable_explicit_step(cfg.spec, inits[i], cfg.cfl_safety);
            steps[i] = ref.dt_ref;
            const Field out = forward_evolve(cfg.spec, inits[i], cfg.dt, ref);
            sink[i] += out[0];
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    const double explicit_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
    rethrow_first(failures);

    const std::string env = environment_note(threads);
    BenchReport inverse{"inverse-evolution order " + std::to_string(cfg.order.value()),
                        cfg.count,
                        std::max(inverse_seconds, 1e-9),
                        0.0,
                        threads,
                        0.0,
                        env};
    BenchReport forward{"explicit-euler", cfg.count, std::max(explicit_seconds, 1e-9), 0.0, threads,
                        *std::min_element(steps.begin(), steps.end()), env};
    inverse.pairs_per_second = static_cast<double>(inverse.pairs) / inverse.wall_seconds;
    forward.pairs_per_second = static_cast<double>(forward.pairs) / forward.wall_seconds;
    return {inverse, forward};
}

std::string to_json(const AccuracyReport& r) {
    json j{{"kind", "accuracy"},
           {"config", spec_json(r.spec)},
           {"dt", r.dt},
           {"order", r.order},
           {"resolution", r.resolution},
           {"pairs", r.per_pair_errors.size()},
           {"attempts", r.attempts},
           {"rejected_count", r.rejected_count},
           {"mean", r.mean},
           {"median", r.median},
           {"max", r.max},
           {"headline", r.headline()},
           {"per_pair_errors", r.per_pair_errors}};
    return j.dump(1);
}

std::string to_json(const std::pair<BenchReport, BenchReport>& reports) {
    auto one = [](const BenchReport& b) {
        return json{{"label", b.label},
                    {"pairs", b.pairs},
                    {"wall_seconds", b.wall_seconds},
                    {"pairs_per_second", b.pairs_per_second},
                    {"threads", b.threads},
                    {"dt_ref", b.dt_ref},
                    {"environment", b.environment}};
    };
    json j{{"kind", "benchmark"},
           {"inverse", one(reports.first)},
           {"explicit", one(reports.second)},
           {"speedup", reports.second.wall_seconds / reports.first.wall_seconds}};
    return j.dump(1);
}

std::string to_json(const ConvergenceResult& r) {
    json j{{"kind", "convergence"}, {"dts", r.dts}, {"errors", r.errors}, {"slope", r.slope}};
    return j.dump(1);
}

} // namespace invevo
