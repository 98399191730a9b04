#pragma once

#include "invevo/dataset.hpp"
#include "invevo/inverse.hpp"
#include "invevo/reference.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace invevo {

/// Deterministic generator for (seed, index, stream); independent of the
/// order in which indices are processed.
std::mt19937_64 split_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

enum class LambdaMode : std::uint8_t { Convex = 0, Fixed = 1 };

/// Parameters of U* = Σ_{j=0..k} λ_j·U_{R_j(i)} + C.
struct MixSpec {
    int k = 2;
    LambdaMode lambda_mode = LambdaMode::Convex;
    /// k+1 weights, used in Fixed mode.
    std::vector<double> lambdas;
    double c_min = -0.1;
    double c_max = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const MixSpec&) const = default;
};

/// Parameters of a·(U − mean(U)) + C.
struct PreprocessSpec {
    bool enabled = false;
    double a = 1.0;
    double c_min = -0.1;
    double c_max = 0.1;

    void validate() const;
    bool operator==(const PreprocessSpec&) const = default;
};

/// Preprocessing defaults: enabled for Burgers with ν ≤ 0.001, off elsewhere.
PreprocessSpec default_preprocess(const PdeSpec& spec);

struct AugmentConfig {
    PdeSpec spec;
    int resolution = 128;
    MixSpec mix;
    PreprocessSpec preprocess;
    double dt = 0.01;
    SchemeOrder order{3};
    std::uint64_t count = 100;
    double blowup_factor = kDefaultBlowupFactor;

    void validate() const;
};

/// Reference trajectories used as mixing sources when no source file is given.
struct SourceSpec {
    std::uint32_t count = 8;
    /// Burn-in: the first saved state is at t_start, the last at t_final.
    double t_start = 0.0;
    double t_final = 1.0;
    double save_every = 0.1;
    /// Solver step; the oracle default is used when empty.
    std::optional<double> dt_ref;
    IcParams ic;
    /// Round saved states to float32, like externally generated
    /// single-precision data files.
    bool single_precision = false;
    /// Solve on a grid `refine` times finer per axis and keep every
    /// refine-th point.
    int refine = 1;

    bool operator==(const SourceSpec&) const = default;
};

SourceSpec default_source_spec(PdeKind kind);

/// Every factor-th point per axis of a periodic field.
Field subsample(const Field& fine, int factor);

/// Solves `source.count` trajectories from sampled initial conditions.
Dataset generate_reference_dataset(const PdeSpec& spec, int resolution, const SourceSpec& source,
                                   std::uint64_t seed);

/// One mixed initialization and how it was formed.
struct MixedInit {
    Field state;
    Provenance provenance;
};

/// Draw number `draw` of the mixing sequence. Draws are grouped in blocks of
/// series.size(): block b shares k random permutations R₁..R_k and draw
/// d = b·n + i combines series i with R_j(i) at one shared time index.
MixedInit mix_draw(const std::vector<Trajectory>& series, const MixSpec& mix, std::uint64_t draw);

/// The first `count` draws.
std::vector<MixedInit> mix_initializations(const std::vector<Trajectory>& series, const MixSpec& mix,
                                           std::uint64_t count);

/// a·(f − mean(f)) + C.
Field preprocess(const Field& f, double a, double c);

/// Rejected when the pair holds non-finite values, when the blowup guard
/// fires, or when a supplied reference error is ≥ 1.
PairFlags stability_filter(const DataPair& pair, std::optional<double> ref_error,
                           double blowup_factor = kDefaultBlowupFactor);

/// Produces exactly cfg.count accepted inverse-evolution pairs from the
/// trajectories in `source`, replacing rejected attempts. Throws
/// GenerationError once more than 90% of a 10·count attempt budget is spent.
Dataset generate_augmented(const Dataset& source, const AugmentConfig& cfg, std::uint64_t seed);

} // namespace invevo
