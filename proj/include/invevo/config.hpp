#pragma once

#include "invevo/augment.hpp"
#include "invevo/reference.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace invevo {

/// Every setting of a CLI run, serialized as a flat `key = value` document
/// whose keys mirror the field names (pde, nu, mix.k, preprocess.a,
/// ref.dt_ref, source.t_final, …). Lines starting with '#' are comments.
struct RunConfig {
    AugmentConfig augment;
    SourceSpec source;
    std::string source_path;
    /// Oracle overrides; empty means the per-state default.
    std::optional<RefMethod> ref_method;
    std::optional<double> ref_dt;
    double ref_cfl_safety = 1.0;
    std::uint64_t seed = 0;
    int threads = 0;
};

/// Defaults for an equation, including its preprocessing and source spec.
RunConfig default_run_config(PdeKind kind);

/// Applies the keys in `text` over `base`. Unknown keys and malformed
/// values raise ArgumentError naming the line.
RunConfig parse_run_config(std::string_view text, RunConfig base);

/// Parses `text` over the defaults of the `pde` key it contains.
RunConfig parse_run_config(std::string_view text);

/// Canonical serialization: every key, fixed order, round-trip exact doubles.
std::string to_text(const RunConfig& cfg);

/// Keys of AugmentConfig only, same format.
std::string to_text(const AugmentConfig& cfg);

/// Sets one key; returns false when the key is unknown.
bool set_config_key(RunConfig& cfg, std::string_view key, std::string_view value);

/// Oracle configuration for `state` honoring the overrides.
RefConfig resolve_ref(const RunConfig& cfg, const PdeSpec& spec, const Field& state);

} // namespace invevo
