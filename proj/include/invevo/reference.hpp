#pragma once

#include "invevo/pde.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace invevo {

/// States of one forward solve at uniformly spaced save times.
struct Trajectory {
    PdeSpec spec;
    std::vector<double> times;
    std::vector<Field> states;
};

enum class RefMethod : std::uint8_t { ExplicitEuler = 0, SemiImplicitSpectralCN = 1 };

std::string_view to_string(RefMethod method) noexcept;
/// Accepts euler | cn.
RefMethod parse_ref_method(std::string_view s);

/// Inner stepping of the reference solver.
struct RefConfig {
    double dt_ref = 1e-4;
    RefMethod method = RefMethod::ExplicitEuler;
    double cfl_safety = 1.0;

    bool operator==(const RefConfig&) const = default;
};

/// Initial-condition spectrum parameters.
///
/// 2D fields are Gaussian random fields with power spectrum
/// (|k|² + τ²)^(−α). 1D fields superpose `waves` sinusoids whose integer
/// wavenumbers are drawn from 1..max_wavenumber. Both are zero-mean and
/// scaled to unit L∞; Allen-Cahn passes the result through tanh(·/width).
/// The result is finally mapped to offset + amplitude·u.
struct IcParams {
    double alpha = 2.5;
    double tau = 7.0;
    int waves = 2;
    int max_wavenumber = 4;
    double tanh_width = 0.5;
    double amplitude = 1.0;
    double offset = 0.0;

    bool operator==(const IcParams&) const = default;
};

Field sample_initial_condition(const PdeSpec& spec, const Grid& grid, std::mt19937_64& rng,
                               const IcParams& params = {});

/// Largest explicit-Euler step allowed for the diffusion term:
/// cfl_safety·h²/(2·dim·D) for finite differences and
/// cfl_safety·2h²/(π²·dim·D) for the pseudo-spectral backend.
double diffusion_step_bound(const PdeSpec& spec, const Grid& grid, double cfl_safety = 1.0);

/// Stable explicit step for `state`, also respecting the advective limits
/// h/|u|max and (for central differences) 2D/|u|²max.
double stable_explicit_step(const PdeSpec& spec, const Field& state, double cfl_safety = 1.0);

/// Default oracle configuration: Crank-Nicolson for Navier-Stokes at
/// dt_ref = 1e-4, explicit Euler elsewhere at 1e-6 in 1D and 1e-4 in 2D,
/// tightened to the stability bound of `state` when that is smaller.
RefConfig default_ref_config(const PdeSpec& spec, const Field& state);

/// Integrates u_t = F(u) from 0 to t_total; the final sub-step is shortened
/// to land on t_total exactly.
///
/// ExplicitEuler checks the diffusion bound (ConfigurationError).
/// SemiImplicitSpectralCN is Navier-Stokes only: diffusion by Crank-Nicolson
/// in Fourier space, advection and forcing by a Heun predictor-corrector,
/// dealiased. Non-finite state raises DivergenceError.
Field forward_evolve(const PdeSpec& spec, const Field& u0, double t_total, const RefConfig& ref);

/// States at 0, save_every, …, t_final. states[0] is u0 itself.
Trajectory solve_trajectory(const PdeSpec& spec, const Field& u0, double t_final, double save_every,
                            const RefConfig& ref);

} // namespace invevo
