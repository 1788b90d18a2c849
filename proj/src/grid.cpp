#include "ifde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ifde/errors.hpp"

namespace ifde {

UniformGrid::UniformGrid(double horizon, std::size_t intervals)
    : horizon_(horizon), intervals_(intervals) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("UniformGrid: horizon must be positive and finite");
    }
    if (intervals < 2) {
        throw DomainError("UniformGrid: at least 2 intervals required");
    }
}

double UniformGrid::node(std::size_t k) const noexcept {
    if (k == intervals_) {
        return horizon_;
    }
    return horizon_ * static_cast<double>(k) / static_cast<double>(intervals_);
}

GridFunction::GridFunction(UniformGrid grid, std::size_t dim)
    : grid_(grid), dim_(dim), values_(grid.size() * dim, 0.0) {
    if (dim == 0) {
        throw DomainError("GridFunction: dimension must be positive");
    }
}

GridFunction GridFunction::constant(UniformGrid grid, std::span<const double> value) {
    GridFunction out(grid, value.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::copy(value.begin(), value.end(), out.node(k).begin());
    }
    return out;
}

void GridFunction::set_node(std::size_t k, std::span<const double> value) {
    if (value.size() != dim_) {
        throw GridMismatchError("GridFunction: node value has dimension " +
                                std::to_string(value.size()) + ", expected " +
                                std::to_string(dim_));
    }
    std::copy(value.begin(), value.end(), node(k).begin());
}

std::vector<double> GridFunction::component(std::size_t c) const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < size(); ++k) {
        out[k] = at(k, c);
    }
    return out;
}

bool GridFunction::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_layout(*this, other, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_layout(*this, other, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] -= other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator*=(double scale) noexcept {
    for (double& v : values_) {
        v *= scale;
    }
    return *this;
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs) {
    lhs += rhs;
    return lhs;
}

GridFunction operator-(GridFunction lhs, const GridFunction& rhs) {
    lhs -= rhs;
    return lhs;
}

GridFunction operator*(double scale, GridFunction f) {
    f *= scale;
    return f;
}

void require_same_layout(const GridFunction& a, const GridFunction& b, const char* where) {
    if (!(a.grid() == b.grid())) {
        throw GridMismatchError(std::string(where) + ": grid functions live on different grids");
    }
    if (a.dim() != b.dim()) {
        throw GridMismatchError(std::string(where) + ": dimension mismatch");
    }
}

double euclidean_norm(std::span<const double> v) noexcept {
    if (v.size() == 1) {
        return std::abs(v[0]);
    }
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

}  // namespace ifde
