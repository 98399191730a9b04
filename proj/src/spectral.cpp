#include "invevo/spectral.hpp"

#include "invevo/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace invevo {

namespace {

// The FFTW planner is not re-entrant; execution with distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void check_axis_order(const Field& f, int axis, int order, const char* where) {
    if (axis < 0 || axis >= f.grid().dim()) {
        throw ArgumentError(std::string(where) + ": axis " + std::to_string(axis) + " invalid for " +
                            std::to_string(f.grid().dim()) + "D grid");
    }
    if (order != 1 && order != 2) {
        throw ArgumentError(std::string(where) + ": derivative order must be 1 or 2");
    }
}

} // namespace

struct SpectralWorkspace::Plans {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
        fftw_free(real);
        fftw_free(spec);
    }
};

SpectralWorkspace::SpectralWorkspace(Grid grid)
    : grid_(grid),
      half_(grid.n() / 2 + 1),
      spectral_size_(grid.dim() == 1 ? static_cast<std::size_t>(half_)
                                     : static_cast<std::size_t>(grid.n()) * half_),
      plans_(std::make_unique<Plans>()) {
    const int n = grid_.n();
    freq_.resize(n);
    k_.resize(n);
    for (int j = 0; j < n; ++j) {
        freq_[j] = j < n / 2 ? j : j - n;
        k_[j] = 2.0 * std::numbers::pi * freq_[j];
    }
    k2_.resize(spectral_size_);
    keep_.resize(spectral_size_);
    for (std::size_t idx = 0; idx < spectral_size_; ++idx) {
        double k2 = 0.0;
        bool keep = true;
        for (int axis = 0; axis < grid_.dim(); ++axis) {
            const double k = k_along(idx, axis);
            k2 += k * k;
            keep = keep && 3 * std::abs(freq_along(idx, axis)) <= n;
        }
        k2_[idx] = k2;
        keep_[idx] = keep ? 1 : 0;
    }

    std::lock_guard lock(planner_mutex());
    plans_->real = fftw_alloc_real(grid_.size());
    plans_->spec = fftw_alloc_complex(spectral_size_);
    // FFTW_ESTIMATE keeps the algorithm choice, and hence the rounding,
    // identical from run to run.
    const unsigned flags = FFTW_ESTIMATE | FFTW_DESTROY_INPUT;
    if (grid_.dim() == 1) {
        plans_->r2c = fftw_plan_dft_r2c_1d(n, plans_->real, plans_->spec, flags);
        plans_->c2r = fftw_plan_dft_c2r_1d(n, plans_->spec, plans_->real, flags);
    } else {
        plans_->r2c = fftw_plan_dft_r2c_2d(n, n, plans_->real, plans_->spec, flags);
        plans_->c2r = fftw_plan_dft_c2r_2d(n, n, plans_->spec, plans_->real, flags);
    }
    if (!plans_->r2c || !plans_->c2r) {
        throw Error("FFTW plan creation failed for n=" + std::to_string(n));
    }
}

SpectralWorkspace::~SpectralWorkspace() = default;

std::vector<Complex> SpectralWorkspace::forward(std::span<const double> values) {
    if (values.size() != grid_.size()) throw ArgumentError("forward transform: size mismatch");
    std::memcpy(plans_->real, values.data(), values.size() * sizeof(double));
    fftw_execute(plans_->r2c);
    std::vector<Complex> out(spectral_size_);
    std::memcpy(static_cast<void*>(out.data()), plans_->spec, spectral_size_ * sizeof(fftw_complex));
    return out;
}

Field SpectralWorkspace::inverse(std::span<const Complex> spectrum) {
    Field out(grid_);
    inverse_into(spectrum, out.data());
    return out;
}

void SpectralWorkspace::inverse_into(std::span<const Complex> spectrum, std::span<double> out) {
    if (spectrum.size() != spectral_size_ || out.size() != grid_.size()) {
        throw ArgumentError("inverse transform: size mismatch");
    }
    std::memcpy(plans_->spec, spectrum.data(), spectral_size_ * sizeof(fftw_complex));
    fftw_execute(plans_->c2r);
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = plans_->real[i] * scale;
}

int SpectralWorkspace::freq_along(std::size_t idx, int axis) const noexcept {
    if (grid_.dim() == 1) return freq_[idx];
    if (axis == 0) return freq_[idx % half_];
    return freq_[idx / half_];
}

double SpectralWorkspace::k_along(std::size_t idx, int axis) const noexcept {
    return 2.0 * std::numbers::pi * freq_along(idx, axis);
}

bool SpectralWorkspace::is_nyquist(std::size_t idx, int axis) const noexcept {
    return 2 * std::abs(freq_along(idx, axis)) == grid_.n();
}

void SpectralWorkspace::differentiate(std::span<Complex> spectrum, int axis, int order) const {
    for (std::size_t idx = 0; idx < spectrum.size(); ++idx) {
        const double k = k_along(idx, axis);
        if (order == 1) {
            spectrum[idx] = is_nyquist(idx, axis) ? Complex{} : Complex(0.0, k) * spectrum[idx];
        } else {
            spectrum[idx] *= -k * k;
        }
    }
}

void SpectralWorkspace::apply_dealias(std::span<Complex> spectrum) const {
    for (std::size_t idx = 0; idx < spectrum.size(); ++idx) {
        if (!keep_[idx]) spectrum[idx] = Complex{};
    }
}

SpectralWorkspace& workspace_for(const Grid& grid) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<SpectralWorkspace>> cache;
    auto& slot = cache[{grid.dim(), grid.n()}];
    if (!slot) slot = std::make_unique<SpectralWorkspace>(grid);
    return *slot;
}

Field fd_derivative(const Field& f, int axis, int order) {
    check_axis_order(f, axis, order, "fd_derivative");
    const Grid& g = f.grid();
    const int n = g.n();
    const double h = g.h();
    const double c1 = 1.0 / (2.0 * h);
    const double c2 = 1.0 / (h * h);
    Field out(g);
    const std::size_t stride = axis == 0 ? 1 : static_cast<std::size_t>(n);
    const std::size_t lines = g.dim() == 1 ? 1 : static_cast<std::size_t>(n);
    const std::size_t line_step = axis == 0 ? static_cast<std::size_t>(n) : 1;
    for (std::size_t line = 0; line < lines; ++line) {
        const std::size_t base = line * line_step;
        for (int i = 0; i < n; ++i) {
            const std::size_t c = base + i * stride;
            const std::size_t p = base + ((i + 1) % n) * stride;
            const std::size_t m = base + ((i + n - 1) % n) * stride;
            out[c] = order == 1 ? (f[p] - f[m]) * c1 : (f[p] - 2.0 * f[c] + f[m]) * c2;
        }
    }
    return out;
}

Field sp_derivative(const Field& f, int axis, int order) {
    check_axis_order(f, axis, order, "sp_derivative");
    auto& ws = workspace_for(f.grid());
    auto spec = ws.forward(f);
    ws.differentiate(spec, axis, order);
    return ws.inverse(spec);
}

Field derivative(const Field& f, int axis, int order, Disc disc) {
    return disc == Disc::FiniteDifference ? fd_derivative(f, axis, order) : sp_derivative(f, axis, order);
}

Field laplacian(const Field& f, Disc disc) {
    const Grid& g = f.grid();
    if (disc == Disc::PseudoSpectral) {
        auto& ws = workspace_for(g);
        auto spec = ws.forward(f);
        for (std::size_t idx = 0; idx < spec.size(); ++idx) spec[idx] *= -ws.k_squared(idx);
        return ws.inverse(spec);
    }
    const int n = g.n();
    const double c2 = 1.0 / (g.h() * g.h());
    Field out(g);
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i) {
            out[i] = (f[(i + 1) % n] - 2.0 * f[i] + f[(i + n - 1) % n]) * c2;
        }
        return out;
    }
    const auto N = static_cast<std::size_t>(n);
    for (int j = 0; j < n; ++j) {
        const std::size_t row = j * N;
        const std::size_t up = ((j + 1) % n) * N;
        const std::size_t down = ((j + n - 1) % n) * N;
        for (int i = 0; i < n; ++i) {
            const int ip = (i + 1) % n;
            const int im = (i + n - 1) % n;
            out[row + i] =
                (f[row + ip] + f[row + im] + f[up + i] + f[down + i] - 4.0 * f[row + i]) * c2;
        }
    }
    return out;
}

Field poisson_inverse(const Field& g) {
    const double m = mean(g);
    if (std::abs(m) > 1e-10 * std::max(1.0, max_abs(g))) {
        throw SolvabilityError("poisson_inverse: right-hand side has non-zero mean " + std::to_string(m));
    }
    auto& ws = workspace_for(g.grid());
    auto spec = ws.forward(g);
    spec[0] = Complex{};
    for (std::size_t idx = 1; idx < spec.size(); ++idx) spec[idx] /= -ws.k_squared(idx);
    return ws.inverse(spec);
}

Field dealias(const Field& f) {
    auto& ws = workspace_for(f.grid());
    auto spec = ws.forward(f);
    double kept = 0.0;
    double removed = 0.0;
    for (std::size_t idx = 0; idx < spec.size(); ++idx) {
        (ws.keep(idx) ? kept : removed) += std::norm(spec[idx]);
    }
    // Already band-limited up to transform rounding: return the input
    // untouched so that dealias is idempotent bit-for-bit.
    if (removed <= 1e-26 * kept) return f;
    ws.apply_dealias(spec);
    return ws.inverse(spec);
}

} // namespace invevo
