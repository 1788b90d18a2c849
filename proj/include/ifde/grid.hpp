#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ifde {

using Vector = std::vector<double>;

/// Uniform partition t_k = k T / n of [0, T].
class UniformGrid {
public:
    /// Throws DomainError unless horizon > 0 and intervals >= 2.
    UniformGrid(double horizon, std::size_t intervals);

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t intervals() const noexcept { return intervals_; }
    [[nodiscard]] std::size_t size() const noexcept { return intervals_ + 1; }
    [[nodiscard]] double step() const noexcept { return horizon_ / static_cast<double>(intervals_); }

    /// Node t_k; t_0 = 0 and t_n = T exactly.
    [[nodiscard]] double node(std::size_t k) const noexcept;

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

private:
    double horizon_;
    std::size_t intervals_;
};

/// Vector-valued function sampled on the nodes of a UniformGrid.
///
/// Values are stored node-major: node k occupies [k*dim, (k+1)*dim).
class GridFunction {
public:
    /// Zero function of dimension dim.
    GridFunction(UniformGrid grid, std::size_t dim);

    /// Every node set to value.
    static GridFunction constant(UniformGrid grid, std::span<const double> value);

    /// Samples fn(t) at every node; fn returns a Vector of size dim.
    template <typename Fn>
    static GridFunction sample(UniformGrid grid, std::size_t dim, Fn&& fn) {
        GridFunction out(grid, dim);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            out.set_node(k, fn(grid.node(k)));
        }
        return out;
    }

    [[nodiscard]] const UniformGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }

    [[nodiscard]] std::span<double> node(std::size_t k) noexcept {
        return {values_.data() + k * dim_, dim_};
    }
    [[nodiscard]] std::span<const double> node(std::size_t k) const noexcept {
        return {values_.data() + k * dim_, dim_};
    }
    [[nodiscard]] double at(std::size_t k, std::size_t component) const noexcept {
        return values_[k * dim_ + component];
    }

    /// Copies value into node k; throws GridMismatchError on a size mismatch.
    void set_node(std::size_t k, std::span<const double> value);

    /// Single component as a plain series over nodes.
    [[nodiscard]] std::vector<double> component(std::size_t c) const;

    [[nodiscard]] std::span<const double> data() const noexcept { return values_; }
    [[nodiscard]] std::span<double> data() noexcept { return values_; }

    /// True when every entry is finite.
    [[nodiscard]] bool all_finite() const noexcept;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double scale) noexcept;

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    UniformGrid grid_;
    std::size_t dim_;
    std::vector<double> values_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(double scale, GridFunction f);

/// Throws GridMismatchError unless a and b share grid and dimension.
void require_same_layout(const GridFunction& a, const GridFunction& b, const char* where);

/// Euclidean norm of a vector.
[[nodiscard]] double euclidean_norm(std::span<const double> v) noexcept;

}  // namespace ifde
