#include "invevo/grid.hpp"

#include "invevo/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

namespace invevo {

Grid::Grid(int dim, int n) : dim_(dim), n_(n), h_(0.0) {
    if (dim != 1 && dim != 2) {
        throw ArgumentError("grid dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (n < 8 || n % 2 != 0) {
        throw ArgumentError("grid size must be even and >= 8, got " + std::to_string(n));
    }
    h_ = 1.0 / n;
    if (h_ * n != 1.0) {
        throw ArgumentError("grid size " + std::to_string(n) + " has no exact spacing");
    }
}

std::size_t Grid::size() const noexcept {
    const auto n = static_cast<std::size_t>(n_);
    return dim_ == 1 ? n : n * n;
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw ArgumentError("field has " + std::to_string(values_.size()) + " values, grid expects " +
                            std::to_string(grid_.size()));
    }
}

void Field::require_dim(const Grid& grid, int dim) {
    if (grid.dim() != dim) {
        throw ArgumentError("sampling function arity does not match grid dimension");
    }
}

Field Field::constant(const Grid& grid, double c) {
    return Field(grid, std::vector<double>(grid.size(), c));
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Field& Field::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

Field& Field::add_scaled(double s, const Field& other) {
    require_same_grid(*this, other, "add_scaled");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
    return *this;
}

bool Field::operator==(const Field& other) const noexcept {
    if (!(grid_ == other.grid_)) return false;
    // memcmp semantics: distinguishes -0.0 from 0.0 and compares NaN payloads.
    return std::equal(values_.begin(), values_.end(), other.values_.begin(), [](double a, double b) {
        return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
    });
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator-(Field a) { return a *= -1.0; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }

Field hadamard(const Field& a, const Field& b) {
    require_same_grid(a, b, "hadamard");
    Field out(a.grid());
    auto o = out.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = a[i] * b[i];
    return out;
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid() == b.grid())) {
        throw ArgumentError(std::string(where) + ": fields live on different grids");
    }
}

double mean(const Field& f) noexcept {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

double max_abs(const Field& f) noexcept {
    double m = 0.0;
    for (double v : f.values()) {
        if (!(std::abs(v) <= m)) m = std::abs(v);  // propagates NaN
    }
    return m;
}

double min_value(const Field& f) noexcept {
    return *std::min_element(f.values().begin(), f.values().end());
}

double max_value(const Field& f) noexcept {
    return *std::max_element(f.values().begin(), f.values().end());
}

double norm_l2(const Field& f) noexcept {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return std::sqrt(std::pow(f.grid().h(), f.grid().dim()) * s);
}

double relative_l2(const Field& a, const Field& reference) {
    require_same_grid(a, reference, "relative_l2");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - reference[i];
        num += d * d;
        den += reference[i] * reference[i];
    }
    return std::sqrt(num / den);
}

Field cyclic_shift(const Field& f, int shift, int axis) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim()) throw ArgumentError("cyclic_shift: invalid axis");
    const int n = g.n();
    const int s = ((shift % n) + n) % n;
    Field out(g);
    if (g.dim() == 1) {
        for (int i = 0; i < n; ++i) out[(i + s) % n] = f[i];
        return out;
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int ti = axis == 0 ? (i + s) % n : i;
            const int tj = axis == 1 ? (j + s) % n : j;
            out[static_cast<std::size_t>(tj) * n + ti] = f[static_cast<std::size_t>(j) * n + i];
        }
    }
    return out;
}

} // namespace invevo
