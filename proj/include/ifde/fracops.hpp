#pragma once

#include <cstddef>
#include <vector>

#include "ifde/grid.hpp"

namespace ifde {

/// Product-trapezoidal quadrature weights for the Riemann-Liouville integral
/// of order alpha on a uniform grid.
///
/// On each subinterval the integrand is interpolated linearly and integrated
/// against (t_k - s)^(alpha-1) / Gamma(alpha) in closed form, so the rule is
/// exact for piecewise-linear integrands. On a uniform grid the weight w[k][j]
/// depends on k - j except in column 0, so only O(n) coefficients are stored.
class FracWeights {
public:
    /// Throws DomainError unless alpha lies in (0, 1).
    FracWeights(double alpha, UniformGrid grid);

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] const UniformGrid& grid() const noexcept { return grid_; }

    /// w[k][j]; zero for j > k and for the whole of row 0.
    [[nodiscard]] double weight(std::size_t k, std::size_t j) const noexcept;

    /// Sum of row k, which equals t_k^alpha / Gamma(alpha + 1) up to rounding.
    [[nodiscard]] double row_sum(std::size_t k) const noexcept;

private:
    friend GridFunction frac_integral(const FracWeights&, const GridFunction&);

    double alpha_;
    UniformGrid grid_;
    double scale_;                 // h^alpha / Gamma(alpha + 2)
    std::vector<double> first_;    // column-0 coefficient of each row
    std::vector<double> interior_; // coefficient for lag m = k - j, 1 <= j < k
};

[[nodiscard]] FracWeights build_weights(double alpha, UniformGrid grid);

/// Discrete I^alpha z at every node; node 0 is the zero vector.
/// Throws GridMismatchError when z lives on another grid.
[[nodiscard]] GridFunction frac_integral(const FracWeights& weights, const GridFunction& z);

/// L1 approximation of the Caputo derivative of order alpha in (0, 1).
///
/// Node 0 has no stencil and is filled with the node-1 value.
[[nodiscard]] GridFunction caputo_l1(double alpha, const GridFunction& x);

}  // namespace ifde
