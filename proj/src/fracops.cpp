#include "ifde/fracops.hpp"

#include <cmath>
#include <sstream>

#include "ifde/errors.hpp"
#include "ifde/specfun.hpp"

namespace ifde {

namespace {

// Lags at or above this use the binomial series below; the direct
// difference formulas lose about log10(m) digits to cancellation.
constexpr std::size_t kSeriesLag = 8;

// (m+1)^p - 2 m^p + (m-1)^p = 2 m^p sum_{j even >= 2} C(p, j) m^-j
double second_difference(double p, std::size_t lag) {
    const double m = static_cast<double>(lag);
    if (lag < kSeriesLag) {
        return std::pow(m + 1.0, p) - 2.0 * std::pow(m, p) + std::pow(m - 1.0, p);
    }
    const double u = 1.0 / m;
    double coeff = 1.0;  // C(p, j) built incrementally
    double upow = 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 40; ++j) {
        coeff *= (p - (j - 1)) / j;
        upow *= u;
        if (j % 2 == 0) {
            const double term = coeff * upow;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
    }
    return 2.0 * std::pow(m, p) * sum;
}

// (k-1)^p - (k-p) k^(p-1) = k^p sum_{j >= 2} C(p, j) (-1/k)^j
double first_column(double p, std::size_t row) {
    const double k = static_cast<double>(row);
    if (row < kSeriesLag) {
        return std::pow(k - 1.0, p) - (k - p) * std::pow(k, p - 1.0);
    }
    const double u = -1.0 / k;
    double coeff = p;
    double upow = u;
    double sum = 0.0;
    for (int j = 2; j <= 40; ++j) {
        coeff *= (p - (j - 1)) / j;
        upow *= u;
        const double term = coeff * upow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
    }
    return std::pow(k, p) * sum;
}

void require_order(double alpha, const char* where) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream os;
        os << where << ": order " << alpha << " outside (0, 1)";
        throw DomainError(os.str());
    }
}

}  // namespace

FracWeights::FracWeights(double alpha, UniformGrid grid)
    : alpha_(alpha), grid_(grid), scale_(0.0) {
    require_order(alpha, "FracWeights");
    const std::size_t n = grid.intervals();
    const double p = alpha + 1.0;
    scale_ = std::pow(grid.step(), alpha) / gamma_function(alpha + 2.0);
    first_.assign(n + 1, 0.0);
    interior_.assign(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        first_[k] = first_column(p, k);
        interior_[k] = second_difference(p, k);
    }
    interior_[0] = 1.0;
}

double FracWeights::weight(std::size_t k, std::size_t j) const noexcept {
    if (k == 0 || j > k) {
        return 0.0;
    }
    if (j == 0) {
        return scale_ * first_[k];
    }
    return scale_ * interior_[k - j];
}

double FracWeights::row_sum(std::size_t k) const noexcept {
    if (k == 0) {
        return 0.0;
    }
    double s = first_[k];
    for (std::size_t m = 0; m < k; ++m) {
        s += interior_[m];
    }
    return scale_ * s;
}

FracWeights build_weights(double alpha, UniformGrid grid) {
    return FracWeights(alpha, grid);
}

GridFunction frac_integral(const FracWeights& weights, const GridFunction& z) {
    if (!(weights.grid() == z.grid())) {
        throw GridMismatchError("frac_integral: weights and function use different grids");
    }
    const std::size_t d = z.dim();
    const std::size_t n = z.grid().intervals();
    GridFunction out(z.grid(), d);
    const auto src = z.data();
    auto dst = out.data();
    const auto& lag = weights.interior_;
    for (std::size_t k = 1; k <= n; ++k) {
        double* row = dst.data() + k * d;
        for (std::size_t c = 0; c < d; ++c) {
            double acc = weights.first_[k] * src[c];
            for (std::size_t j = 1; j <= k; ++j) {
                acc += lag[k - j] * src[j * d + c];
            }
            row[c] = weights.scale_ * acc;
        }
    }
    return out;
}

GridFunction caputo_l1(double alpha, const GridFunction& x) {
    require_order(alpha, "caputo_l1");
    const std::size_t d = x.dim();
    const std::size_t n = x.grid().intervals();
    const double beta = 1.0 - alpha;

    // b_m = (m+1)^(1-alpha) - m^(1-alpha)
    std::vector<double> b(n);
    b[0] = 1.0;
    for (std::size_t m = 1; m < n; ++m) {
        const double mm = static_cast<double>(m);
        b[m] = std::pow(mm, beta) * std::expm1(beta * std::log1p(1.0 / mm));
    }
    const double scale = std::pow(x.grid().step(), -alpha) / gamma_function(2.0 - alpha);

    GridFunction out(x.grid(), d);
    const auto src = x.data();
    auto dst = out.data();
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            double acc = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                acc += b[k - 1 - j] * (src[(j + 1) * d + c] - src[j * d + c]);
            }
            dst[k * d + c] = scale * acc;
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        dst[c] = dst[d + c];
    }
    return out;
}

}  // namespace ifde
