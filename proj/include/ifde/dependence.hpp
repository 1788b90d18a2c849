#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ifde/grid.hpp"
#include "ifde/solver.hpp"

namespace ifde {

/// Two problems on the same order and horizon, together with the constants
/// bounding the gap between their right-hand sides.
struct ProblemPair {
    ProblemSpec f;
    ProblemSpec g;
    double K_eta = 0.0;  // sup over J x X x X of |f - g|
    double K_ml = 0.0;   // |f - g| <= K_ml E_alpha(theta t^alpha)

    /// Throws DomainError when the orders, horizons or dimensions differ or a
    /// constant is negative.
    void validate() const;

    /// max of the two M2 values and max of the two M3 values.
    [[nodiscard]] double M2() const noexcept;
    [[nodiscard]] double M3() const noexcept;
};

/// |x0_f - x0_g| + K_eta / (theta (1 - (M2/theta + M3))).
///
/// Throws PreconditionError when M2/theta + M3 >= 1 for the larger constants.
[[nodiscard]] double dependence_bound(const ProblemPair& pair, double theta);

/// Bielecki distance between two solutions on one grid.
[[nodiscard]] double measured_distance(const GridFunction& xf, const GridFunction& xg,
                                       double alpha, double theta);

/// Pompeiu-Hausdorff distance between two finite sets in the Bielecki metric.
///
/// Throws DomainError if either set is empty and GridMismatchError if the
/// members do not share one grid.
[[nodiscard]] double hausdorff_distance(std::span<const GridFunction> a,
                                        std::span<const GridFunction> b, double alpha,
                                        double theta);

struct AnchorCheck {
    bool passed = false;
    double worst_violation = 0.0;
    Vector worst_point;
};

/// Samples max |f(0, x, x) - x| over the ball of radius R (Halton points plus
/// the centre); passes when the worst violation is at most 1e-10.
[[nodiscard]] AnchorCheck check_anchor_condition(const ProblemSpec& spec, double R,
                                                 std::size_t samples);

/// One anchored solve per anchor: the iteration z -> f(t, z(0) + I^alpha z, z)
/// restricted to functions with z(0) = anchor.
struct SolutionFamily {
    std::vector<Vector> anchors;
    std::vector<SolveReport> members;
    AnchorCheck anchor_check;
    double anchor_radius = 0.0;
};

/// Solves every anchored member, using up to `threads` worker threads
/// (0 picks the hardware concurrency).
///
/// The anchor condition is sampled over a ball containing every anchor and
/// the invariant radius R computed with the largest anchor in place of x0;
/// PreconditionError is thrown when it fails or when the contraction check
/// fails without config.force.
[[nodiscard]] SolutionFamily solve_family(const ProblemSpec& spec,
                                          const std::vector<Vector>& anchors,
                                          const SolverConfig& config, std::size_t threads = 0);

/// K_ml T^alpha / (Gamma(alpha+1) (1 - (M2/theta + M3))).
///
/// Both problems must pass check_anchor_condition on the ball of radius
/// anchor_radius.
[[nodiscard]] double family_hausdorff_bound(const ProblemPair& pair, double theta,
                                            double anchor_radius = 1.0,
                                            std::size_t samples = 512);

/// Sampled estimate of K_eta: 1.1 * max |f - g| over J x B_R x B_R.
[[nodiscard]] double estimate_k_eta(const ProblemPair& pair, double R, std::size_t samples);

/// Sampled estimate of K_ml: 1.1 * max |f - g| / E_alpha(theta t^alpha) over J x B_R x B_R.
[[nodiscard]] double estimate_k_ml(const ProblemPair& pair, double theta, double R,
                                   std::size_t samples);

}  // namespace ifde
