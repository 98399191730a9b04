#include "invevo/dataset.hpp"

#include "invevo/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace invevo {

std::uint64_t RejectionTally::rejected() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [reason, n] : by_reason) total += n;
    return total;
}

RejectReason RejectionTally::dominant() const noexcept {
    RejectReason best = RejectReason::None;
    std::uint64_t best_count = 0;
    for (const auto& [reason, n] : by_reason) {
        if (n > best_count) {
            best = reason;
            best_count = n;
        }
    }
    return best;
}

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_pair(const DataPair& a, const DataPair& b) {
    return a.input == b.input && a.output == b.output && same_bits(a.dt, b.dt) && a.spec == b.spec &&
           a.order == b.order && a.flags == b.flags && a.provenance == b.provenance;
}

} // namespace

bool Dataset::operator==(const Dataset& other) const {
    return spec == other.spec && grid == other.grid && same_bits(dt, other.dt) &&
           scheme_order == other.scheme_order && layout == other.layout && tally == other.tally &&
           seed == other.seed && run_config == other.run_config && source_digest == other.source_digest &&
           std::equal(pairs.begin(), pairs.end(), other.pairs.begin(), other.pairs.end(), same_pair);
}

Dataset dataset_from_trajectories(const std::vector<Trajectory>& trajectories) {
    if (trajectories.empty()) throw ArgumentError("dataset_from_trajectories: no trajectories");
    const Trajectory& first = trajectories.front();
    if (first.states.size() < 2) throw ArgumentError("dataset_from_trajectories: need at least two states");
    const double dt = first.times[1] - first.times[0];
    Dataset ds{first.spec, first.states.front().grid(), dt};
    ds.layout = TrajectoryLayout{static_cast<std::uint32_t>(trajectories.size()),
                                 static_cast<std::uint32_t>(first.states.size()), first.times};
    for (const auto& traj : trajectories) {
        if (!(traj.spec == first.spec) || traj.times != first.times) {
            throw ArgumentError("dataset_from_trajectories: trajectories disagree on spec or save times");
        }
        for (std::size_t s = 0; s + 1 < traj.states.size(); ++s) {
            ds.pairs.push_back(DataPair{traj.states[s], traj.states[s + 1], dt, traj.spec, std::nullopt, {}, {}});
        }
    }
    ds.tally.attempts = ds.pairs.size();
    require_homogeneous(ds);
    return ds;
}

std::vector<Trajectory> trajectories_of(const Dataset& ds) {
    if (!ds.layout) throw ArgumentError("dataset carries no trajectory layout");
    const auto& layout = *ds.layout;
    const std::size_t per = layout.states - 1;
    if (ds.pairs.size() != layout.count * per) throw ArgumentError("trajectory layout does not match pair count");
    std::vector<Trajectory> out;
    out.reserve(layout.count);
    for (std::size_t t = 0; t < layout.count; ++t) {
        Trajectory traj{ds.spec, layout.times, {}};
        traj.states.reserve(layout.states);
        traj.states.push_back(ds.pairs[t * per].input);
        for (std::size_t s = 0; s < per; ++s) traj.states.push_back(ds.pairs[t * per + s].output);
        out.push_back(std::move(traj));
    }
    return out;
}

void require_homogeneous(const Dataset& ds) {
    for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
        const auto& p = ds.pairs[i];
        const int order = p.order ? p.order->value() : kReferenceOrder;
        if (!(p.spec == ds.spec) || !(p.input.grid() == ds.grid) || !(p.output.grid() == ds.grid) ||
            !same_bits(p.dt, ds.dt) || order != ds.scheme_order) {
            throw ArgumentError("pair " + std::to_string(i) + " does not match the dataset configuration");
        }
    }
}

} // namespace invevo
