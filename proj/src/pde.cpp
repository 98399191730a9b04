#include "invevo/pde.hpp"

#include "invevo/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace invevo {

namespace {

constexpr double kPi = std::numbers::pi;

void check_state(const PdeSpec& spec, const Field& f, const char* where) {
    if (f.grid().dim() != dim_of(spec.kind)) {
        throw ArgumentError(std::string(where) + ": " + std::string(to_string(spec.kind)) + " expects a " +
                            std::to_string(dim_of(spec.kind)) + "D field");
    }
}

// Projects a pointwise nonlinear product onto the 2/3-rule band for the
// spectral backend; identity for finite differences.
Field finish_nonlinear(Field product, Disc disc) {
    if (disc == Disc::FiniteDifference) return product;
    auto& ws = workspace_for(product.grid());
    auto spec = ws.forward(product);
    ws.apply_dealias(spec);
    ws.inverse_into(spec, product.data());
    return product;
}

// NS vorticity enters every term mean-free.
Field centered(const Field& w) {
    const double m = mean(w);
    if (m == 0.0) return w;
    Field out(w);
    for (double& v : out.data()) v -= m;
    return out;
}

// Velocity and gradient of a scalar vorticity-like field.
struct Kinematics {
    Field u;
    Field v;
    Field gx;
    Field gy;
};

std::vector<Complex> velocity_spectra(SpectralWorkspace& ws, const std::vector<Complex>& w_hat, bool want_u) {
    std::vector<Complex> out(w_hat.size());
    // Index 0 is skipped: the mean of ω never enters the stream function.
    for (std::size_t idx = 1; idx < w_hat.size(); ++idx) {
        const Complex psi = w_hat[idx] / ws.k_squared(idx);
        const int axis = want_u ? 1 : 0;
        if (ws.is_nyquist(idx, axis)) continue;
        const Complex d = Complex(0.0, ws.k_along(idx, axis)) * psi;
        out[idx] = want_u ? d : -d;
    }
    return out;
}

Kinematics kinematics(const Field& w, Disc disc) {
    auto& ws = workspace_for(w.grid());
    const auto w_hat = ws.forward(w);
    Field u = ws.inverse(velocity_spectra(ws, w_hat, true));
    Field v = ws.inverse(velocity_spectra(ws, w_hat, false));
    if (disc == Disc::FiniteDifference) {
        return {std::move(u), std::move(v), fd_derivative(w, 0, 1), fd_derivative(w, 1, 1)};
    }
    auto gx_hat = w_hat;
    ws.differentiate(gx_hat, 0, 1);
    auto gy_hat = w_hat;
    ws.differentiate(gy_hat, 1, 1);
    return {std::move(u), std::move(v), ws.inverse(gx_hat), ws.inverse(gy_hat)};
}

// u·gx + v·gy with velocity from `carrier` and gradient from `advected`.
void accumulate_advection(Field& acc, const Kinematics& carrier, const Kinematics& advected, double scale) {
    auto a = acc.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += scale * (carrier.u[i] * advected.gx[i] + carrier.v[i] * advected.gy[i]);
    }
}

Field burgers_fd_rhs(const Field& u, double diff) {
    const int n = u.grid().n();
    const double h = u.grid().h();
    const double c1 = 1.0 / (2.0 * h);
    const double c2 = diff / (h * h);
    Field out(u.grid());
    for (int i = 0; i < n; ++i) {
        const double up = u[(i + 1) % n];
        const double um = u[(i + n - 1) % n];
        out[i] = -u[i] * (up - um) * c1 + (up - 2.0 * u[i] + um) * c2;
    }
    return out;
}

Field burgers_fd_jvp(const Field& u, const Field& d, double diff) {
    const int n = u.grid().n();
    const double h = u.grid().h();
    const double c1 = 1.0 / (2.0 * h);
    const double c2 = diff / (h * h);
    Field out(u.grid());
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        const int im = (i + n - 1) % n;
        out[i] = -(u[i] * (d[ip] - d[im]) + d[i] * (u[ip] - u[im])) * c1 + (d[ip] - 2.0 * d[i] + d[im]) * c2;
    }
    return out;
}

Field burgers_fd_f2(const Field& d) {
    const int n = d.grid().n();
    const double c = -1.0 / d.grid().h();
    Field out(d.grid());
    for (int i = 0; i < n; ++i) out[i] = c * d[i] * (d[(i + 1) % n] - d[(i + n - 1) % n]);
    return out;
}

Field allen_cahn_fd_rhs(const Field& u, double eps2) {
    const int n = u.grid().n();
    const auto N = static_cast<std::size_t>(n);
    const double c2 = eps2 / (u.grid().h() * u.grid().h());
    Field out(u.grid());
    for (int j = 0; j < n; ++j) {
        const std::size_t row = j * N;
        const std::size_t up = ((j + 1) % n) * N;
        const std::size_t down = ((j + n - 1) % n) * N;
        for (int i = 0; i < n; ++i) {
            const double c = u[row + i];
            const double lap =
                u[row + (i + 1) % n] + u[row + (i + n - 1) % n] + u[up + i] + u[down + i] - 4.0 * c;
            out[row + i] = c - c * c * c + c2 * lap;
        }
    }
    return out;
}

} // namespace

void PdeSpec::validate() const {
    switch (kind) {
    case PdeKind::Heat1D:
        break;
    case PdeKind::Burgers1D:
    case PdeKind::NavierStokes2D:
        if (!(nu > 0.0) || !std::isfinite(nu)) throw ArgumentError("nu must be positive and finite");
        break;
    case PdeKind::AllenCahn2D:
        if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw ArgumentError("epsilon must lie in (0, 1)");
        break;
    default:
        throw ArgumentError("unknown PDE kind");
    }
    if (disc != Disc::FiniteDifference && disc != Disc::PseudoSpectral) {
        throw ArgumentError("unknown discretization");
    }
    if (!std::isfinite(forcing_amplitude)) throw ArgumentError("forcing amplitude must be finite");
    if (forcing_override && forcing_override->grid().dim() != 2) {
        throw ArgumentError("forcing override must be a 2D field");
    }
}

bool PdeSpec::operator==(const PdeSpec& other) const {
    return kind == other.kind && nu == other.nu && epsilon == other.epsilon && disc == other.disc &&
           forcing_amplitude == other.forcing_amplitude && forcing_override == other.forcing_override;
}

PdeSpec default_spec(PdeKind kind) {
    PdeSpec spec;
    spec.kind = kind;
    switch (kind) {
    case PdeKind::Heat1D:
    case PdeKind::Burgers1D:
        spec.nu = 0.1;
        break;
    case PdeKind::AllenCahn2D:
        spec.epsilon = 0.05;
        break;
    case PdeKind::NavierStokes2D:
        spec.nu = 0.001;
        spec.disc = Disc::PseudoSpectral;
        break;
    }
    return spec;
}

int dim_of(PdeKind kind) noexcept {
    return kind == PdeKind::Heat1D || kind == PdeKind::Burgers1D ? 1 : 2;
}

double diffusion_coefficient(const PdeSpec& spec) noexcept {
    switch (spec.kind) {
    case PdeKind::Heat1D:
        return 1.0;
    case PdeKind::Burgers1D:
        return spec.nu / kPi;
    case PdeKind::AllenCahn2D:
        return spec.epsilon * spec.epsilon;
    case PdeKind::NavierStokes2D:
        return spec.nu;
    }
    return 1.0;
}

std::string_view to_string(PdeKind kind) noexcept {
    switch (kind) {
    case PdeKind::Heat1D:
        return "heat";
    case PdeKind::Burgers1D:
        return "burgers";
    case PdeKind::AllenCahn2D:
        return "allen-cahn";
    case PdeKind::NavierStokes2D:
        return "navier-stokes";
    }
    return "unknown";
}

std::string_view to_string(Disc disc) noexcept {
    return disc == Disc::FiniteDifference ? "fd" : "spectral";
}

PdeKind parse_pde_kind(std::string_view s) {
    if (s == "heat") return PdeKind::Heat1D;
    if (s == "burgers") return PdeKind::Burgers1D;
    if (s == "allen-cahn") return PdeKind::AllenCahn2D;
    if (s == "navier-stokes") return PdeKind::NavierStokes2D;
    throw ArgumentError("unknown PDE '" + std::string(s) + "'");
}

Disc parse_disc(std::string_view s) {
    if (s == "fd") return Disc::FiniteDifference;
    if (s == "spectral") return Disc::PseudoSpectral;
    throw ArgumentError("unknown discretization '" + std::string(s) + "'");
}

VelocityPair velocity_from_vorticity(const Field& omega) {
    if (omega.grid().dim() != 2) throw ArgumentError("velocity_from_vorticity: 2D field required");
    const double m = mean(omega);
    if (std::abs(m) > 1e-10 * std::max(1.0, max_abs(omega))) {
        throw SolvabilityError("velocity_from_vorticity: vorticity has non-zero mean " + std::to_string(m));
    }
    auto& ws = workspace_for(omega.grid());
    const auto w_hat = ws.forward(omega);
    return {ws.inverse(velocity_spectra(ws, w_hat, true)), ws.inverse(velocity_spectra(ws, w_hat, false))};
}

Field forcing_field(const PdeSpec& spec, const Grid& grid) {
    if (spec.kind != PdeKind::NavierStokes2D) return Field(grid);
    if (spec.forcing_override) {
        if (!(spec.forcing_override->grid() == grid)) throw ArgumentError("forcing override grid mismatch");
        return *spec.forcing_override;
    }
    const double a = spec.forcing_amplitude;
    return Field::sample(grid, [a](double x, double y) {
        const double phase = 2.0 * kPi * (x + y);
        return a * (std::sin(phase) + std::cos(phase));
    });
}

Field apply_F(const PdeSpec& spec, const Field& state) {
    check_state(spec, state, "apply_F");
    const Disc disc = spec.disc;
    const double diff = diffusion_coefficient(spec);
    switch (spec.kind) {
    case PdeKind::Heat1D:
        return laplacian(state, disc);
    case PdeKind::Burgers1D: {
        if (disc == Disc::FiniteDifference) return burgers_fd_rhs(state, diff);
        Field out = -finish_nonlinear(hadamard(state, sp_derivative(state, 0, 1)), disc);
        return out.add_scaled(diff, laplacian(state, disc));
    }
    case PdeKind::AllenCahn2D: {
        if (disc == Disc::FiniteDifference) return allen_cahn_fd_rhs(state, diff);
        Field cube(state.grid());
        for (std::size_t i = 0; i < cube.size(); ++i) cube[i] = state[i] * state[i] * state[i];
        Field out = state - finish_nonlinear(std::move(cube), disc);
        return out.add_scaled(diff, laplacian(state, disc));
    }
    case PdeKind::NavierStokes2D: {
        const Field w = centered(state);
        const Kinematics k = kinematics(w, disc);
        Field adv(state.grid());
        accumulate_advection(adv, k, k, 1.0);
        Field out = -finish_nonlinear(std::move(adv), disc);
        out.add_scaled(diff, laplacian(w, disc));
        return out += forcing_field(spec, state.grid());
    }
    }
    throw ArgumentError("apply_F: unknown PDE kind");
}

Field apply_JVP(const PdeSpec& spec, const Field& state, const Field& dir) {
    check_state(spec, state, "apply_JVP");
    require_same_grid(state, dir, "apply_JVP");
    const Disc disc = spec.disc;
    const double diff = diffusion_coefficient(spec);
    switch (spec.kind) {
    case PdeKind::Heat1D:
        return laplacian(dir, disc);
    case PdeKind::Burgers1D: {
        if (disc == Disc::FiniteDifference) return burgers_fd_jvp(state, dir, diff);
        const Field ux = derivative(state, 0, 1, disc);
        const Field dx = derivative(dir, 0, 1, disc);
        Field prod(state.grid());
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = state[i] * dx[i] + dir[i] * ux[i];
        Field out = -finish_nonlinear(std::move(prod), disc);
        return out.add_scaled(diff, laplacian(dir, disc));
    }
    case PdeKind::AllenCahn2D: {
        Field prod(state.grid());
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = 3.0 * state[i] * state[i] * dir[i];
        Field out = dir - finish_nonlinear(std::move(prod), disc);
        return out.add_scaled(diff, laplacian(dir, disc));
    }
    case PdeKind::NavierStokes2D: {
        const Field d = centered(dir);
        const Kinematics ks = kinematics(centered(state), disc);
        const Kinematics kd = kinematics(d, disc);
        Field adv(state.grid());
        accumulate_advection(adv, kd, ks, 1.0);
        accumulate_advection(adv, ks, kd, 1.0);
        Field out = -finish_nonlinear(std::move(adv), disc);
        return out.add_scaled(diff, laplacian(d, disc));
    }
    }
    throw ArgumentError("apply_JVP: unknown PDE kind");
}

Field apply_F2(const PdeSpec& spec, const Field& state, const Field& dir) {
    check_state(spec, state, "apply_F2");
    require_same_grid(state, dir, "apply_F2");
    const Disc disc = spec.disc;
    switch (spec.kind) {
    case PdeKind::Heat1D:
        return Field(state.grid());
    case PdeKind::Burgers1D: {
        if (disc == Disc::FiniteDifference) return burgers_fd_f2(dir);
        Field prod = hadamard(dir, derivative(dir, 0, 1, disc));
        return -2.0 * finish_nonlinear(std::move(prod), disc);
    }
    case PdeKind::AllenCahn2D: {
        Field prod(state.grid());
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = 6.0 * state[i] * dir[i] * dir[i];
        return -finish_nonlinear(std::move(prod), disc);
    }
    case PdeKind::NavierStokes2D: {
        const Kinematics kd = kinematics(centered(dir), disc);
        Field adv(state.grid());
        accumulate_advection(adv, kd, kd, 2.0);
        return -finish_nonlinear(std::move(adv), disc);
    }
    }
    throw ArgumentError("apply_F2: unknown PDE kind");
}

} // namespace invevo
