#pragma once

#include "invevo/grid.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace invevo {

using Complex = std::complex<double>;

/// Spatial discretization backend.
enum class Disc : std::uint8_t { FiniteDifference = 0, PseudoSpectral = 1 };

/// Cached real-to-complex FFT plans and wavenumber tables for one grid.
///
/// Spectra use the half-complex layout: n/2+1 entries in 1D, and
/// n rows (y frequency) by n/2+1 columns (x frequency) in 2D. Transforms
/// are unnormalized forward and 1/N-normalized inverse, so
/// inverse(forward(f)) reproduces f.
///
/// Not thread-safe; use workspace_for() to obtain the calling thread's copy.
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(Grid grid);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const Grid& grid() const noexcept { return grid_; }

    /// Number of complex coefficients in a spectrum.
    std::size_t spectral_size() const noexcept { return spectral_size_; }
    /// Number of x-frequency columns, n/2+1.
    int half() const noexcept { return half_; }

    std::vector<Complex> forward(std::span<const double> values);
    std::vector<Complex> forward(const Field& f) { return forward(f.values()); }
    Field inverse(std::span<const Complex> spectrum);
    void inverse_into(std::span<const Complex> spectrum, std::span<double> out);

    /// Signed integer frequency per axis index, numpy convention: the
    /// Nyquist entry is -n/2.
    const std::vector<int>& frequencies() const noexcept { return freq_; }
    /// k = 2π·frequency for the full axis (n entries).
    const std::vector<double>& wavenumbers() const noexcept { return k_; }

    /// Wavenumber of spectral entry idx along axis (0 = x, 1 = y).
    double k_along(std::size_t idx, int axis) const noexcept;
    /// Integer frequency of spectral entry idx along axis.
    int freq_along(std::size_t idx, int axis) const noexcept;
    /// |k|² of spectral entry idx.
    double k_squared(std::size_t idx) const noexcept { return k2_[idx]; }
    /// True when entry idx is a Nyquist mode along axis.
    bool is_nyquist(std::size_t idx, int axis) const noexcept;
    /// 2/3-rule mask: false for modes with |frequency| > n/3 on any axis.
    bool keep(std::size_t idx) const noexcept { return keep_[idx] != 0; }

    /// Multiplies a spectrum by (i·k)^order along axis, zeroing the Nyquist
    /// entry for odd orders.
    void differentiate(std::span<Complex> spectrum, int axis, int order) const;
    void apply_dealias(std::span<Complex> spectrum) const;

private:
    struct Plans;

    Grid grid_;
    int half_;
    std::size_t spectral_size_;
    std::vector<int> freq_;
    std::vector<double> k_;
    std::vector<double> k2_;
    std::vector<std::uint8_t> keep_;
    std::unique_ptr<Plans> plans_;
};

/// The calling thread's workspace for this grid, created on first use.
SpectralWorkspace& workspace_for(const Grid& grid);

/// Central second-order periodic stencils: order 1 is (f[i+1]−f[i−1])/(2h),
/// order 2 is (f[i+1]−2f[i]+f[i−1])/h².
Field fd_derivative(const Field& f, int axis, int order);

/// Fourier derivative. Odd orders drop the Nyquist mode so the result is
/// real and the operator antisymmetric.
Field sp_derivative(const Field& f, int axis, int order);

Field derivative(const Field& f, int axis, int order, Disc disc);

/// Sum of second derivatives over all axes.
Field laplacian(const Field& f, Disc disc);

/// Solves Δψ = g with zero-mean ψ. Throws SolvabilityError when
/// |mean(g)| > 1e-10·max(1, ‖g‖∞).
Field poisson_inverse(const Field& g);

/// 2/3 rule: zero every mode with |frequency| > n/3 on any axis.
Field dealias(const Field& f);

} // namespace invevo
