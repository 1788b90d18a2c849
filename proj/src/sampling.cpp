#include "ifde/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ifde/errors.hpp"

namespace ifde {

namespace {
constexpr std::array<unsigned, 16> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                              23, 29, 31, 37, 41, 43, 47, 53};
}

double radical_inverse(std::size_t index, unsigned base) noexcept {
    double inv = 1.0 / base;
    double factor = inv;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv;
    }
    return result;
}

HaltonSequence::HaltonSequence(std::size_t dims, std::size_t skip)
    : dims_(dims), index_(skip) {
    if (dims == 0 || dims > kPrimes.size()) {
        throw DomainError("HaltonSequence: dimension must lie in [1, 16]");
    }
}

std::vector<double> HaltonSequence::next() {
    std::vector<double> p(dims_);
    for (std::size_t i = 0; i < dims_; ++i) {
        p[i] = radical_inverse(index_, kPrimes[i]);
    }
    ++index_;
    return p;
}

std::vector<double> cube_to_ball(const std::vector<double>& unit, double radius) {
    std::vector<double> u(unit.size());
    double inf_norm = 0.0;
    double two_norm = 0.0;
    for (std::size_t i = 0; i < unit.size(); ++i) {
        u[i] = 2.0 * unit[i] - 1.0;
        inf_norm = std::max(inf_norm, std::abs(u[i]));
        two_norm += u[i] * u[i];
    }
    two_norm = std::sqrt(two_norm);
    const double scale = two_norm > 0.0 ? radius * inf_norm / two_norm : 0.0;
    for (double& v : u) {
        v *= scale;
    }
    return u;
}

}  // namespace ifde
