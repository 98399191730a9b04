#pragma once

#include "invevo/inverse.hpp"
#include "invevo/reference.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace invevo {

/// Attempts made by a generation run and why rejected ones failed.
struct RejectionTally {
    std::uint64_t attempts = 0;
    std::map<RejectReason, std::uint64_t> by_reason;

    std::uint64_t rejected() const noexcept;
    /// Reason with the largest count, None when nothing was rejected.
    RejectReason dominant() const noexcept;
    bool operator==(const RejectionTally&) const = default;
};

/// Reference-solver data: `count` trajectories with `states` saves each,
/// stored as consecutive pairs (s_k, s_{k+1}).
struct TrajectoryLayout {
    std::uint32_t count = 0;
    std::uint32_t states = 0;
    std::vector<double> times;
    bool operator==(const TrajectoryLayout&) const = default;
};

/// Scheme order recorded for reference-solver datasets.
inline constexpr std::uint8_t kReferenceOrder = 0;

/// Homogeneous collection of pairs plus generation metadata.
struct Dataset {
    Dataset(PdeSpec spec_, Grid grid_, double dt_, std::uint8_t order = kReferenceOrder)
        : spec(std::move(spec_)), grid(grid_), dt(dt_), scheme_order(order) {}

    PdeSpec spec;
    Grid grid;
    double dt = 0.0;
    /// 1..3 for inverse-evolution data, kReferenceOrder for reference data.
    std::uint8_t scheme_order = kReferenceOrder;
    std::vector<DataPair> pairs;
    std::optional<TrajectoryLayout> layout;
    RejectionTally tally;
    std::uint64_t seed = 0;
    /// Resolved configuration text that produced the dataset.
    std::string run_config;
    /// Payload checksum of the source dataset, empty if none.
    std::string source_digest;

    /// Value equality: bitwise fields, metadata and provenance.
    bool operator==(const Dataset& other) const;
};

/// Packs trajectories into a reference dataset of consecutive pairs.
/// All trajectories must share spec, grid and save times.
Dataset dataset_from_trajectories(const std::vector<Trajectory>& trajectories);

/// Recovers the trajectories of a reference dataset. Throws ArgumentError
/// when the dataset has no trajectory layout.
std::vector<Trajectory> trajectories_of(const Dataset& ds);

/// Throws ArgumentError unless every pair matches the dataset spec, grid,
/// dt and order.
void require_homogeneous(const Dataset& ds);

} // namespace invevo
