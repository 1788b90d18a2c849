#pragma once

#include <cstddef>
#include <vector>

namespace ifde {

/// Radical inverse of index in the given prime base (van der Corput).
[[nodiscard]] double radical_inverse(std::size_t index, unsigned base) noexcept;

/// Deterministic Halton points in the unit cube [0,1)^dims.
class HaltonSequence {
public:
    /// Supports up to 16 dimensions; throws DomainError otherwise.
    explicit HaltonSequence(std::size_t dims, std::size_t skip = 1);

    [[nodiscard]] std::vector<double> next();

private:
    std::size_t dims_;
    std::size_t index_;
};

/// Maps a point of [0,1)^d into the closed ball of radius R about the origin.
///
/// The cube is first centred on [-1,1]^d, then each point is rescaled radially
/// by |u|_inf / |u|_2 so the cube boundary lands on the sphere.
[[nodiscard]] std::vector<double> cube_to_ball(const std::vector<double>& unit, double radius);

}  // namespace ifde
