#include "invevo/inverse.hpp"

#include "invevo/augment.hpp"
#include "invevo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace invevo {

SchemeOrder::SchemeOrder(int order) : order_(order) {
    if (order < 1 || order > 3) {
        throw ArgumentError("scheme order must be 1, 2 or 3, got " + std::to_string(order));
    }
}

std::string_view to_string(RejectReason reason) noexcept {
    switch (reason) {
    case RejectReason::None:
        return "accepted";
    case RejectReason::NonFinite:
        return "non-finite";
    case RejectReason::Blowup:
        return "blowup";
    case RejectReason::ErrorAboveOne:
        return "error>=1";
    }
    return "unknown";
}

std::vector<Field> time_derivatives(const PdeSpec& spec, const Field& state, SchemeOrder order) {
    std::vector<Field> out;
    out.reserve(order.value());
    out.push_back(apply_F(spec, state));
    if (order.value() >= 2) out.push_back(apply_JVP(spec, state, out[0]));
    if (order.value() >= 3) {
        Field uttt = apply_JVP(spec, state, out[1]);
        uttt += apply_F2(spec, state, out[0]);
        out.push_back(std::move(uttt));
    }
    return out;
}

Field inverse_step(const PdeSpec& spec, const Field& start, double dt, SchemeOrder order) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("inverse_step: dt must be positive");
    const auto derivs = time_derivatives(spec, start, order);
    // Taylor coefficients of the reversed flow: (−Δt)^m / m!
    Field w = start;
    double coeff = 1.0;
    for (std::size_t m = 0; m < derivs.size(); ++m) {
        coeff *= -dt / static_cast<double>(m + 1);
        w.add_scaled(coeff, derivs[m]);
    }
    if (!w.all_finite()) {
        throw InstabilityError("inverse step produced non-finite values", max_abs(w));
    }
    return w;
}

bool blowup_guard_fired(const Field& inverse_output, const Field& start, double factor) {
    const double norm = max_abs(inverse_output);
    if (!std::isfinite(norm)) return true;
    return norm > factor * std::max(1.0, max_abs(start));
}

DataPair make_pair(const PdeSpec& spec, const Field& start, double dt, SchemeOrder order, double blowup_factor) {
    DataPair pair{start, start, dt, spec, order, {}, {}};
    try {
        pair.input = inverse_step(spec, start, dt, order);
    } catch (const InstabilityError&) {
        pair.input = Field::constant(start.grid(), std::numeric_limits<double>::quiet_NaN());
    }
    pair.flags = stability_filter(pair, std::nullopt, blowup_factor);
    return pair;
}

} // namespace invevo
