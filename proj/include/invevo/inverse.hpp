#pragma once

#include "invevo/pde.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace invevo {

/// Order of the Taylor inverse-evolution scheme: 1, 2 or 3.
class SchemeOrder {
public:
    /// Throws ArgumentError outside {1, 2, 3}.
    explicit SchemeOrder(int order);
    int value() const noexcept { return order_; }
    bool operator==(const SchemeOrder&) const noexcept = default;

private:
    int order_;
};

enum class RejectReason : std::uint8_t { None = 0, NonFinite = 1, Blowup = 2, ErrorAboveOne = 3 };

std::string_view to_string(RejectReason reason) noexcept;

/// Accepted, or rejected with a reason.
struct PairFlags {
    RejectReason reason = RejectReason::None;

    bool accepted() const noexcept { return reason == RejectReason::None; }
    bool operator==(const PairFlags&) const noexcept = default;
};

/// Where an inverse-evolution start came from.
struct Provenance {
    bool augmented = false;
    /// Draw index inside the generation run (seed offset).
    std::uint64_t draw = 0;
    /// Source series used, R₀(i) first.
    std::vector<std::uint32_t> sources;
    std::uint32_t time_index = 0;
    std::vector<double> lambdas;
    double mix_constant = 0.0;
    bool preprocessed = false;
    double preprocess_a = 1.0;
    double preprocess_constant = 0.0;

    bool operator==(const Provenance&) const = default;
};

/// Reversed inverse-evolution pair: `input` is the earlier state W produced
/// by the inverse step, `output` the later state V it started from.
struct DataPair {
    Field input;
    Field output;
    double dt;
    PdeSpec spec;
    /// Empty for pairs taken from reference-solver trajectories.
    std::optional<SchemeOrder> order;
    PairFlags flags;
    Provenance provenance;
};

/// Default blowup guard: reject when ‖W‖∞ > 20·max(1, ‖V‖∞).
inline constexpr double kDefaultBlowupFactor = 20.0;

/// [U_t], [U_t, U_tt] or [U_t, U_tt, U_ttt] at `state`, where
/// U_t = F(U), U_tt = F′(U)U_t, U_ttt = F′(U)U_tt + F″(U)(U_t, U_t).
std::vector<Field> time_derivatives(const PdeSpec& spec, const Field& state, SchemeOrder order);

/// One explicit Taylor step of the time-reversed equation, all derivatives
/// taken at `start`:
///   W = V − Δt·U_t + Δt²/2·U_tt − Δt³/6·U_ttt   (truncated at `order`).
/// Throws InstabilityError if W is not finite.
Field inverse_step(const PdeSpec& spec, const Field& start, double dt, SchemeOrder order);

/// True when W is non-finite or ‖W‖∞ > factor·max(1, ‖V‖∞).
bool blowup_guard_fired(const Field& inverse_output, const Field& start, double factor);

/// Builds the reversed pair (input = inverse_step(start), output = start).
/// Instability does not throw; it marks the pair rejected.
DataPair make_pair(const PdeSpec& spec, const Field& start, double dt, SchemeOrder order,
                   double blowup_factor = kDefaultBlowupFactor);

} // namespace invevo
