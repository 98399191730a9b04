#pragma once

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace invevo {

/// Uniform periodic mesh on the unit interval or unit square.
///
/// The number of points per axis must be even and at least 8 so that the
/// Nyquist mode is well defined. Spacing is h = 1/n.
class Grid {
public:
    Grid(int dim, int n);

    int dim() const noexcept { return dim_; }
    int n() const noexcept { return n_; }
    double length() const noexcept { return 1.0; }
    double h() const noexcept { return h_; }

    /// Number of samples, n or n².
    std::size_t size() const noexcept;

    bool operator==(const Grid& other) const noexcept = default;

private:
    int dim_;
    int n_;
    double h_;
};

/// Real samples of a function on a Grid.
///
/// 2D storage is row-major with axes ordered (y, x) and x fastest: sample
/// (i, j) sits at x = i·h, y = j·h and lives at index j·n + i.
class Field {
public:
    explicit Field(Grid grid);
    Field(Grid grid, std::vector<double> values);

    /// Samples f(x) in 1D or f(x, y) in 2D.
    template <typename F>
    static Field sample(const Grid& grid, F&& f) {
        Field out(grid);
        const int n = grid.n();
        const double h = grid.h();
        if constexpr (std::is_invocable_r_v<double, F, double>) {
            require_dim(grid, 1);
            for (int i = 0; i < n; ++i) out.values_[i] = f(i * h);
        } else {
            require_dim(grid, 2);
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    out.values_[static_cast<std::size_t>(j) * n + i] = f(i * h, j * h);
                }
            }
        }
        return out;
    }

    static Field constant(const Grid& grid, double c);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> data() noexcept { return values_; }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    bool all_finite() const noexcept;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s) noexcept;

    /// this += s·other
    Field& add_scaled(double s, const Field& other);

    /// Bitwise equality of grid and samples.
    bool operator==(const Field& other) const noexcept;

private:
    static void require_dim(const Grid& grid, int dim);

    Grid grid_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator-(Field a);
Field operator*(double s, Field a);
Field operator*(Field a, double s);

/// Pointwise product.
Field hadamard(const Field& a, const Field& b);

/// Throws ArgumentError unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* where);

double mean(const Field& f) noexcept;
double max_abs(const Field& f) noexcept;
double min_value(const Field& f) noexcept;
double max_value(const Field& f) noexcept;

/// Discrete L2 norm sqrt(h^dim · Σ v²).
double norm_l2(const Field& f) noexcept;

/// ‖a − b‖₂ / ‖b‖₂ in the discrete L2 norm.
double relative_l2(const Field& a, const Field& reference);

/// Cyclic shift by `shift` samples along `axis` (0 = x, 1 = y).
Field cyclic_shift(const Field& f, int shift, int axis);

} // namespace invevo
