#include "invevo/reference.hpp"

#include "invevo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace invevo {

namespace {

constexpr double kPi = std::numbers::pi;

Field normalized(Field f) {
    const double m = mean(f);
    for (double& v : f.data()) v -= m;
    const double peak = max_abs(f);
    if (peak > 0.0) f *= 1.0 / peak;
    return f;
}

Field sinusoid_superposition(const Grid& grid, std::mt19937_64& rng, const IcParams& p) {
    std::uniform_int_distribution<int> wave(1, std::max(1, p.max_wavenumber));
    std::uniform_real_distribution<double> amp(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    Field out(grid);
    for (int w = 0; w < std::max(1, p.waves); ++w) {
        const int k = wave(rng);
        const double a = amp(rng);
        const double phi = phase(rng);
        for (int i = 0; i < grid.n(); ++i) out[i] += a * std::sin(2.0 * kPi * k * i * grid.h() + phi);
    }
    return out;
}

Field gaussian_random_field(const Grid& grid, std::mt19937_64& rng, const IcParams& p) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Field noise(grid);
    for (double& v : noise.data()) v = normal(rng);
    auto& ws = workspace_for(grid);
    auto spec = ws.forward(noise);
    spec[0] = Complex{};
    for (std::size_t idx = 1; idx < spec.size(); ++idx) {
        spec[idx] *= std::pow(ws.k_squared(idx) + p.tau * p.tau, -0.5 * p.alpha);
    }
    return ws.inverse(spec);
}

// N̂(ω̂) = −P(FFT(u·ω_x + v·ω_y)) + f̂ with P the 2/3 projection.
class NavierStokesNonlinear {
public:
    NavierStokesNonlinear(SpectralWorkspace& ws, std::vector<Complex> forcing_hat)
        : ws_(ws), forcing_hat_(std::move(forcing_hat)), scratch_(ws.spectral_size()),
          u_(ws.grid()), v_(ws.grid()), gx_(ws.grid()), gy_(ws.grid()) {}

    std::vector<Complex> operator()(const std::vector<Complex>& w_hat) {
        const std::size_t m = w_hat.size();
        for (int pass = 0; pass < 4; ++pass) {
            for (std::size_t idx = 0; idx < m; ++idx) {
                if (idx == 0) {
                    scratch_[idx] = Complex{};
                    continue;
                }
                const int axis = (pass == 0 || pass == 3) ? 1 : 0;
                if (ws_.is_nyquist(idx, axis)) {
                    scratch_[idx] = Complex{};
                    continue;
                }
                const Complex ik(0.0, ws_.k_along(idx, axis));
                switch (pass) {
                case 0:  // u = ψ_y
                    scratch_[idx] = ik * w_hat[idx] / ws_.k_squared(idx);
                    break;
                case 1:  // v = −ψ_x
                    scratch_[idx] = -ik * w_hat[idx] / ws_.k_squared(idx);
                    break;
                default:  // ω_x, ω_y
                    scratch_[idx] = ik * w_hat[idx];
                    break;
                }
            }
            Field& target = pass == 0 ? u_ : pass == 1 ? v_ : pass == 2 ? gx_ : gy_;
            ws_.inverse_into(scratch_, target.data());
        }
        for (std::size_t i = 0; i < u_.size(); ++i) u_[i] = u_[i] * gx_[i] + v_[i] * gy_[i];
        auto adv_hat = ws_.forward(u_);
        ws_.apply_dealias(adv_hat);
        for (std::size_t idx = 0; idx < m; ++idx) adv_hat[idx] = forcing_hat_[idx] - adv_hat[idx];
        return adv_hat;
    }

private:
    SpectralWorkspace& ws_;
    std::vector<Complex> forcing_hat_;
    std::vector<Complex> scratch_;
    Field u_, v_, gx_, gy_;
};

bool spectrum_finite(const std::vector<Complex>& s) {
    return std::all_of(s.begin(), s.end(),
                       [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

Field evolve_cn(const PdeSpec& spec, const Field& w0, double t_total, double dt_ref) {
    auto& ws = workspace_for(w0.grid());
    NavierStokesNonlinear nonlinear(ws, ws.forward(forcing_field(spec, w0.grid())));
    auto w_hat = ws.forward(w0);
    const std::size_t m = w_hat.size();
    std::vector<double> lin(m);
    for (std::size_t idx = 0; idx < m; ++idx) lin[idx] = -spec.nu * ws.k_squared(idx);

    std::vector<double> explicit_factor(m), implicit_factor(m);
    double factors_dt = -1.0;
    auto step = [&](double dt) {
        if (dt != factors_dt) {
            for (std::size_t idx = 0; idx < m; ++idx) {
                explicit_factor[idx] = 1.0 + 0.5 * dt * lin[idx];
                implicit_factor[idx] = 1.0 / (1.0 - 0.5 * dt * lin[idx]);
            }
            factors_dt = dt;
        }
        const auto n0 = nonlinear(w_hat);
        std::vector<Complex> predictor(m);
        for (std::size_t idx = 0; idx < m; ++idx) {
            predictor[idx] = implicit_factor[idx] * (explicit_factor[idx] * w_hat[idx] + dt * n0[idx]);
        }
        const auto n1 = nonlinear(predictor);
        for (std::size_t idx = 0; idx < m; ++idx) {
            w_hat[idx] = implicit_factor[idx] *
                         (explicit_factor[idx] * w_hat[idx] + 0.5 * dt * (n0[idx] + n1[idx]));
        }
    };

    const auto full_steps = static_cast<long long>(std::floor(t_total / dt_ref));
    for (long long s = 0; s < full_steps; ++s) {
        step(dt_ref);
        if ((s + 1) % 64 == 0 && !spectrum_finite(w_hat)) {
            throw DivergenceError("Crank-Nicolson solve diverged", (s + 1) * dt_ref);
        }
    }
    const double rest = t_total - full_steps * dt_ref;
    if (rest > 1e-12 * t_total) step(rest);
    Field out = ws.inverse(w_hat);
    if (!out.all_finite()) throw DivergenceError("Crank-Nicolson solve diverged", t_total);
    return out;
}

Field evolve_euler(const PdeSpec& spec, const Field& u0, double t_total, double dt_ref) {
    Field u = u0;
    const auto full_steps = static_cast<long long>(std::floor(t_total / dt_ref));
    for (long long s = 0; s < full_steps; ++s) {
        u.add_scaled(dt_ref, apply_F(spec, u));
        if ((s + 1) % 256 == 0 && !u.all_finite()) {
            throw DivergenceError("explicit Euler solve diverged", (s + 1) * dt_ref);
        }
    }
    const double rest = t_total - full_steps * dt_ref;
    if (rest > 1e-12 * t_total) u.add_scaled(rest, apply_F(spec, u));
    if (!u.all_finite()) throw DivergenceError("explicit Euler solve diverged", t_total);
    return u;
}

double max_speed(const PdeSpec& spec, const Field& state) {
    switch (spec.kind) {
    case PdeKind::Burgers1D:
        return max_abs(state);
    case PdeKind::NavierStokes2D: {
        Field centered = state;
        const double m = mean(state);
        for (double& v : centered.data()) v -= m;
        const auto vel = velocity_from_vorticity(centered);
        return std::max(max_abs(vel.u), max_abs(vel.v));
    }
    default:
        return 0.0;
    }
}

} // namespace

std::string_view to_string(RefMethod method) noexcept {
    return method == RefMethod::ExplicitEuler ? "euler" : "cn";
}

RefMethod parse_ref_method(std::string_view s) {
    if (s == "euler") return RefMethod::ExplicitEuler;
    if (s == "cn") return RefMethod::SemiImplicitSpectralCN;
    throw ArgumentError("unknown reference method '" + std::string(s) + "'");
}

Field sample_initial_condition(const PdeSpec& spec, const Grid& grid, std::mt19937_64& rng, const IcParams& params) {
    if (grid.dim() != dim_of(spec.kind)) throw ArgumentError("sample_initial_condition: grid dimension mismatch");
    Field f = grid.dim() == 1 ? normalized(sinusoid_superposition(grid, rng, params))
                              : normalized(gaussian_random_field(grid, rng, params));
    if (spec.kind == PdeKind::AllenCahn2D) {
        for (double& v : f.data()) v = std::tanh(v / params.tanh_width);
    }
    if (params.amplitude != 1.0 || params.offset != 0.0) {
        for (double& v : f.data()) v = params.offset + params.amplitude * v;
    }
    return f;
}

double diffusion_step_bound(const PdeSpec& spec, const Grid& grid, double cfl_safety) {
    const double d = diffusion_coefficient(spec);
    const double h2 = grid.h() * grid.h();
    if (spec.disc == Disc::PseudoSpectral) return cfl_safety * 2.0 * h2 / (kPi * kPi * grid.dim() * d);
    return cfl_safety * h2 / (2.0 * grid.dim() * d);
}

double stable_explicit_step(const PdeSpec& spec, const Field& state, double cfl_safety) {
    double bound = diffusion_step_bound(spec, state.grid(), cfl_safety);
    const double speed = max_speed(spec, state);
    if (speed > 0.0) {
        const double d = diffusion_coefficient(spec);
        bound = std::min(bound, cfl_safety * state.grid().h() / speed);
        bound = std::min(bound, cfl_safety * 2.0 * d / (speed * speed));
    }
    return bound;
}

RefConfig default_ref_config(const PdeSpec& spec, const Field& state) {
    RefConfig ref;
    if (spec.kind == PdeKind::NavierStokes2D) {
        ref.method = RefMethod::SemiImplicitSpectralCN;
        ref.dt_ref = 1e-4;
        const double speed = max_speed(spec, state);
        if (speed > 0.0) ref.dt_ref = std::min(ref.dt_ref, 0.5 * state.grid().h() / speed);
        return ref;
    }
    ref.method = RefMethod::ExplicitEuler;
    ref.dt_ref = std::min(state.grid().dim() == 1 ? 1e-6 : 1e-4, stable_explicit_step(spec, state, 0.9));
    return ref;
}

Field forward_evolve(const PdeSpec& spec, const Field& u0, double t_total, const RefConfig& ref) {
    spec.validate();
    if (u0.grid().dim() != dim_of(spec.kind)) throw ArgumentError("forward_evolve: grid dimension mismatch");
    if (!(t_total >= 0.0) || !std::isfinite(t_total)) throw ArgumentError("forward_evolve: t_total must be >= 0");
    if (!(ref.dt_ref > 0.0)) throw ConfigurationError("dt_ref must be positive");
    if (!(ref.cfl_safety > 0.0) || ref.cfl_safety > 1.0) throw ConfigurationError("cfl_safety must lie in (0, 1]");
    if (t_total == 0.0) return u0;

    if (ref.method == RefMethod::SemiImplicitSpectralCN) {
        if (spec.kind != PdeKind::NavierStokes2D || spec.disc != Disc::PseudoSpectral) {
            throw ConfigurationError("Crank-Nicolson reference requires pseudo-spectral Navier-Stokes");
        }
        return evolve_cn(spec, u0, t_total, ref.dt_ref);
    }
    const double bound = diffusion_step_bound(spec, u0.grid(), ref.cfl_safety);
    if (ref.dt_ref > bound) {
        throw ConfigurationError("dt_ref " + std::to_string(ref.dt_ref) + " exceeds explicit stability bound " +
                                 std::to_string(bound));
    }
    return evolve_euler(spec, u0, t_total, ref.dt_ref);
}

Trajectory solve_trajectory(const PdeSpec& spec, const Field& u0, double t_final, double save_every,
                            const RefConfig& ref) {
    if (!(save_every > 0.0) || !(t_final > 0.0)) throw ArgumentError("solve_trajectory: times must be positive");
    const auto saves = static_cast<long long>(std::llround(t_final / save_every));
    if (saves < 1 || std::abs(saves * save_every - t_final) > 1e-9 * std::max(1.0, t_final)) {
        throw ArgumentError("solve_trajectory: save_every must divide t_final");
    }
    Trajectory traj{spec, {0.0}, {u0}};
    traj.times.reserve(saves + 1);
    traj.states.reserve(saves + 1);
    for (long long s = 1; s <= saves; ++s) {
        traj.states.push_back(forward_evolve(spec, traj.states.back(), save_every, ref));
        traj.times.push_back(s * save_every);
    }
    return traj;
}

} // namespace invevo
