#pragma once

#include "invevo/dataset.hpp"
#include "invevo/reference.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace invevo {

/// Accuracy of a dataset against the forward oracle.
struct AccuracyReport {
    std::vector<double> per_pair_errors;
    double mean = 0.0;
    double median = 0.0;
    double max = 0.0;
    std::uint64_t rejected_count = 0;
    std::uint64_t attempts = 0;
    PdeSpec spec;
    double dt = 0.0;
    int order = 0;
    int resolution = 0;

    /// Mean in scientific notation, or "—" when it is at least 1.
    std::string headline() const;
};

/// ‖forward_evolve(input, dt) − output‖₂ / ‖output‖₂. Uses the per-pair
/// default oracle when `ref` is empty. Throws ArgumentError for a rejected
/// pair and DivergenceError when the oracle diverges.
double pair_relative_error(const DataPair& pair, const std::optional<RefConfig>& ref = std::nullopt);

/// Errors of every accepted pair in parallel plus summary statistics.
AccuracyReport accuracy_report(const Dataset& ds, const std::optional<RefConfig>& ref = std::nullopt);

/// Mean, median and max of `errors` written into `report`.
void summarize(AccuracyReport& report);

struct ConvergenceResult {
    std::vector<double> dts;
    std::vector<double> errors;
    double slope = 0.0;
};

/// Least-squares slope of log(error) against log(dt) for pairs built from
/// `u_star`. Needs at least three step sizes spanning a factor of four.
/// A rejected pair raises InstabilityError.
ConvergenceResult convergence_order(const PdeSpec& spec, const Field& u_star, const std::vector<double>& dts,
                                    SchemeOrder order, const std::optional<RefConfig>& ref = std::nullopt);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct BenchReport {
    std::string label;
    std::uint64_t pairs = 0;
    double wall_seconds = 0.0;
    double pairs_per_second = 0.0;
    int threads = 1;
    /// Step used by the explicit solver, 0 for inverse evolution.
    double dt_ref = 0.0;
    std::string environment;
};

struct BenchConfig {
    PdeSpec spec;
    int resolution = 256;
    std::uint64_t count = 100;
    double dt = 0.05;
    SchemeOrder order{3};
    /// Explicit solver step; the stability bound of each state when empty.
    std::optional<double> dt_ref;
    double cfl_safety = 0.9;
    IcParams ic;
    std::uint64_t seed = 0;
    int threads = 1;
};

/// Times inverse-evolution generation of `count` pairs and explicit Euler
/// covering the same gap from the same sampled states. Initial-condition
/// sampling is outside the timed regions.
std::pair<BenchReport, BenchReport> benchmark_generation(const BenchConfig& cfg);

std::string to_json(const AccuracyReport& report);
std::string to_json(const std::pair<BenchReport, BenchReport>& reports);
std::string to_json(const ConvergenceResult& result);

/// SVG histogram of log10 pair errors.
std::string error_histogram_svg(const AccuracyReport& report, int bins = 20);
/// SVG log-log line of error against dt.
std::string error_vs_dt_svg(const ConvergenceResult& result);

} // namespace invevo
