#pragma once

#include "invevo/grid.hpp"
#include "invevo/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace invevo {

enum class PdeKind : std::uint8_t { Heat1D = 0, Burgers1D = 1, AllenCahn2D = 2, NavierStokes2D = 3 };

/// Equation plus physical parameters and spatial backend.
///
///   Heat1D          u_t = u_xx
///   Burgers1D       u_t = −u·u_x + (ν/π)·u_xx
///   AllenCahn2D     u_t = u − u³ + ε²Δu
///   NavierStokes2D  ω_t = −u·ω_x − v·ω_y + νΔω + f,   v_x − u_y = ω
struct PdeSpec {
    PdeKind kind = PdeKind::Heat1D;
    double nu = 0.1;
    double epsilon = 0.05;
    Disc disc = Disc::FiniteDifference;
    /// NS forcing f = A·(sin(2π(x+y)) + cos(2π(x+y))); A = 0 disables it.
    double forcing_amplitude = 0.1;
    /// Replaces the closed-form forcing when set.
    std::optional<Field> forcing_override;

    /// Validates parameter ranges; throws ArgumentError.
    void validate() const;

    bool operator==(const PdeSpec& other) const;
};

/// Default parameters for an equation: Burgers ν = 0.1, NS ν = 0.001 with
/// pseudo-spectral backend, Allen-Cahn ε = 0.05.
PdeSpec default_spec(PdeKind kind);

int dim_of(PdeKind kind) noexcept;

/// Coefficient in front of the Laplacian: 1, ν/π, ε² or ν.
double diffusion_coefficient(const PdeSpec& spec) noexcept;

std::string_view to_string(PdeKind kind) noexcept;
std::string_view to_string(Disc disc) noexcept;
/// Accepts heat | burgers | allen-cahn | navier-stokes.
PdeKind parse_pde_kind(std::string_view s);
/// Accepts fd | spectral.
Disc parse_disc(std::string_view s);

/// Velocity recovered from vorticity.
struct VelocityPair {
    Field u;
    Field v;
};

/// ψ = poisson_inverse(−ω), u = ψ_y, v = −ψ_x, so that v_x − u_y = ω.
/// Always spectral. Throws SolvabilityError for non-zero-mean ω.
VelocityPair velocity_from_vorticity(const Field& omega);

/// Forcing field of an NS spec on a grid (zero for other equations).
Field forcing_field(const PdeSpec& spec, const Grid& grid);

/// Right-hand side F(u). The pseudo-spectral backend dealiases every
/// nonlinear product with the 2/3 rule. NS vorticity is mean-removed
/// before the stream-function solve.
Field apply_F(const PdeSpec& spec, const Field& state);

/// Jacobian-vector product F′(state)·dir.
Field apply_JVP(const PdeSpec& spec, const Field& state, const Field& dir);

/// Second directional derivative F″(state)(dir, dir).
Field apply_F2(const PdeSpec& spec, const Field& state, const Field& dir);

} // namespace invevo
