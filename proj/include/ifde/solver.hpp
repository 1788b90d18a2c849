#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ifde/fracops.hpp"
#include "ifde/grid.hpp"

namespace ifde {

/// Right-hand side f(t, x, y) of D^alpha x = f(t, x, D^alpha x).
using Rhs = std::function<Vector(double t, std::span<const double> x, std::span<const double> y)>;

/// One implicit Caputo problem D^alpha x(t) = f(t, x(t), D^alpha x(t)), x(0) = x0, on [0, T].
///
/// M1, M2, M3 are the caller's Lipschitz constants of f in t, x and y. They
/// are taken on trust; rhsdsl::estimate_lipschitz offers a sampled estimate.
struct ProblemSpec {
    double alpha = 0.5;
    double T = 1.0;
    Vector x0;
    Rhs rhs;
    double M1 = 0.0;
    double M2 = 0.0;
    double M3 = 0.0;

    [[nodiscard]] std::size_t dim() const noexcept { return x0.size(); }

    /// Throws DomainError unless alpha in (0,1), T > 0, M1 >= 0, M2 > 0,
    /// 0 < M3 < 1, x0 non-empty and finite, and rhs set.
    void validate() const;
};

/// Constants certifying that the Picard operator is a contraction.
struct ContractionReport {
    double q_global = 0.0;            // M2 T^alpha / Gamma(alpha+1) + M3
    bool contraction_ok = false;      // q_global < 1
    double K = 0.0;                   // 1.1 * max_k |f(t_k, 0, 0)|
    std::optional<double> R;          // radius of the invariant ball
    std::optional<double> L;          // Lipschitz constant of the invariant class
    double theta = 1.0;               // Bielecki exponent
    double q_bielecki = 0.0;          // M2 / theta + M3
};

struct SolverConfig {
    std::size_t n = 1024;
    double tol = 1e-10;
    int max_iter = 500;
    std::optional<double> theta_override;
    std::optional<GridFunction> initial_guess;
    /// Solve even when q_global >= 1; the run is then reported as uncertified.
    bool force = false;
};

struct SolveReport {
    int iterations = 0;
    std::vector<double> step_norms;       // Bielecki distance of consecutive iterates
    std::vector<double> ratio_estimates;  // step_norms[i+1] / step_norms[i]
    double a_posteriori_bound = 0.0;      // q / (1 - q) * last step
    bool converged = false;
    bool certified = false;
    double theta = 1.0;
    double q_bielecki = 0.0;
    double max_anchor_drift = 0.0;        // only meaningful for anchored solves
    ContractionReport contraction;
    GridFunction z;
    GridFunction x;
};

/// Pair of residuals for a candidate (x, z).
struct Residuals {
    GridFunction caputo;     // caputo_l1(x) - f(t, x, caputo_l1(x))
    GridFunction algebraic;  // z - f(t, x, z)
};

/// theta = max(1, 2 M2 / (1 - M3)), so that M2/theta + M3 <= (1 + M3)/2.
[[nodiscard]] double select_theta(const ProblemSpec& spec);

/// Checks the smallness condition and derives K, R, L and theta.
///
/// A failed check is reported through contraction_ok rather than thrown;
/// R and L are left empty in that case.
[[nodiscard]] ContractionReport check_contraction(const ProblemSpec& spec, std::size_t n);

/// One application of (Tz)(t) = f(t, x0 + I^alpha z(t), z(t)).
[[nodiscard]] GridFunction picard_step(const ProblemSpec& spec, const FracWeights& weights,
                                       const GridFunction& z);

/// x = x0 + I^alpha z; node 0 equals x0 exactly.
[[nodiscard]] GridFunction reconstruct_x(const ProblemSpec& spec, const FracWeights& weights,
                                         const GridFunction& z);

/// max_k |z(t_k)| / E_alpha(theta t_k^alpha).
[[nodiscard]] double bielecki_norm(const GridFunction& z, double alpha, double theta);

/// max_k |z(t_k)|.
[[nodiscard]] double chebyshev_norm(const GridFunction& z);

/// Picard iteration for the functional equation in z followed by reconstruction of x.
///
/// Throws PreconditionError when the contraction check fails and config.force
/// is not set, or when the chosen theta does not give M2/theta + M3 < 1.
/// Hitting max_iter is not an error: the report carries converged = false.
[[nodiscard]] SolveReport solve(const ProblemSpec& spec, const SolverConfig& config);

[[nodiscard]] Residuals residual_caputo(const ProblemSpec& spec, const GridFunction& x,
                                        const GridFunction& z);

/// Largest node norm of f over nodes first_node..n.
[[nodiscard]] double max_norm_from(const GridFunction& f, std::size_t first_node);

/// E_alpha(theta t_k^alpha) for every node of grid.
[[nodiscard]] std::vector<double> bielecki_weights(const UniformGrid& grid, double alpha,
                                                   double theta);

/// bielecki_norm with precomputed node weights.
[[nodiscard]] double bielecki_norm(const GridFunction& z, std::span<const double> weights);

namespace detail {

/// Evaluates spec.rhs at node k and validates the result.
Vector eval_rhs(const ProblemSpec& spec, double t, std::span<const double> x,
                std::span<const double> y, std::size_t node);

/// Shared iteration loop. With an anchor, node 0 of every iterate is pinned
/// to it and the base point of the integral term is z(0) instead of x0.
SolveReport run_picard(const ProblemSpec& spec, const SolverConfig& config,
                       const std::optional<Vector>& anchor);

}  // namespace detail

}  // namespace ifde
