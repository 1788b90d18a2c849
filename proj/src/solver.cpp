#include "ifde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ifde/errors.hpp"
#include "ifde/specfun.hpp"

namespace ifde {

void ProblemSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0,1)");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw DomainError("T must be positive");
    }
    if (x0.empty()) {
        throw DomainError("x0 must have at least one component");
    }
    if (!std::all_of(x0.begin(), x0.end(), [](double v) { return std::isfinite(v); })) {
        throw DomainError("x0 must be finite");
    }
    if (!rhs) {
        throw DomainError("rhs is not set");
    }
    if (!(M1 >= 0.0) || !std::isfinite(M1)) {
        throw DomainError("M1 must be non-negative");
    }
    if (!(M2 > 0.0) || !std::isfinite(M2)) {
        throw DomainError("M2 must be positive");
    }
    if (!(M3 > 0.0 && M3 < 1.0)) {
        throw DomainError("M3 must lie in (0,1)");
    }
}

double select_theta(const ProblemSpec& spec) {
    if (!(spec.M3 < 1.0)) {
        throw PreconditionError("select_theta: M3 must be below 1");
    }
    return std::max(1.0, 2.0 * spec.M2 / (1.0 - spec.M3));
}

ContractionReport check_contraction(const ProblemSpec& spec, std::size_t n) {
    spec.validate();
    const UniformGrid grid(spec.T, n);
    ContractionReport report;
    const double gamma_ratio = gamma_function(spec.alpha + 1.0);
    report.q_global = spec.M2 * std::pow(spec.T, spec.alpha) / gamma_ratio + spec.M3;
    report.contraction_ok = report.q_global < 1.0;

    const Vector zero(spec.dim(), 0.0);
    double sup = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Vector v = detail::eval_rhs(spec, grid.node(k), zero, zero, k);
        sup = std::max(sup, euclidean_norm(v));
    }
    report.K = 1.1 * sup;

    if (report.contraction_ok) {
        const double R = (spec.M2 * euclidean_norm(spec.x0) + report.K) / (1.0 - report.q_global);
        report.R = R;
        report.L = (spec.M1 + 2.0 * spec.M2 * R / gamma_ratio) / (1.0 - spec.M3);
    }
    report.theta = select_theta(spec);
    report.q_bielecki = spec.M2 / report.theta + spec.M3;
    return report;
}

std::vector<double> bielecki_weights(const UniformGrid& grid, double alpha, double theta) {
    std::vector<double> w(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        w[k] = bielecki_weight(alpha, theta, grid.node(k));
    }
    return w;
}

double bielecki_norm(const GridFunction& z, std::span<const double> weights) {
    double sup = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        sup = std::max(sup, euclidean_norm(z.node(k)) / weights[k]);
    }
    return sup;
}

double bielecki_norm(const GridFunction& z, double alpha, double theta) {
    if (!(theta > 0.0)) {
        throw DomainError("bielecki_norm: theta must be positive");
    }
    return bielecki_norm(z, bielecki_weights(z.grid(), alpha, theta));
}

double chebyshev_norm(const GridFunction& z) {
    return max_norm_from(z, 0);
}

double max_norm_from(const GridFunction& f, std::size_t first_node) {
    double sup = 0.0;
    for (std::size_t k = first_node; k < f.size(); ++k) {
        sup = std::max(sup, euclidean_norm(f.node(k)));
    }
    return sup;
}

namespace detail {

Vector eval_rhs(const ProblemSpec& spec, double t, std::span<const double> x,
                std::span<const double> y, std::size_t node) {
    Vector v = spec.rhs(t, x, y);
    if (v.size() != spec.dim()) {
        std::ostringstream os;
        os << "rhs returned " << v.size() << " components at node " << node << " (t = " << t
           << "), expected " << spec.dim();
        throw EvaluationError(os.str(), node);
    }
    for (double c : v) {
        if (!std::isfinite(c)) {
            std::ostringstream os;
            os << "rhs returned a non-finite value at node " << node << " (t = " << t << ")";
            throw EvaluationError(os.str(), node);
        }
    }
    return v;
}

namespace {

void require_matching(const ProblemSpec& spec, const FracWeights& weights,
                      const GridFunction& z, const char* where) {
    if (!(weights.grid() == z.grid())) {
        throw GridMismatchError(std::string(where) + ": weights and z use different grids");
    }
    if (weights.alpha() != spec.alpha) {
        throw PreconditionError(std::string(where) + ": weights built for another order");
    }
    if (z.dim() != spec.dim()) {
        throw GridMismatchError(std::string(where) + ": z has the wrong dimension");
    }
}

// f(t_k, base + I^alpha z(t_k), z(t_k)) at every node.
GridFunction apply_operator(const ProblemSpec& spec, const FracWeights& weights,
                            const GridFunction& z, std::span<const double> base) {
    GridFunction out = frac_integral(weights, z);
    const std::size_t d = z.dim();
    Vector x(d);
    for (std::size_t k = 0; k < z.size(); ++k) {
        auto integral = out.node(k);
        for (std::size_t c = 0; c < d; ++c) {
            x[c] = base[c] + integral[c];
        }
        out.set_node(k, eval_rhs(spec, z.grid().node(k), x, z.node(k), k));
    }
    return out;
}

constexpr double kMaxAnchorDrift = 1e-12;

}  // namespace

SolveReport run_picard(const ProblemSpec& spec, const SolverConfig& config,
                       const std::optional<Vector>& anchor) {
    spec.validate();
    if (!(config.tol > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }
    if (config.max_iter < 1) {
        throw DomainError("max_iter must be at least 1");
    }
    const ContractionReport contraction = check_contraction(spec, config.n);
    const double theta = config.theta_override.value_or(contraction.theta);
    if (!(theta > 0.0)) {
        throw PreconditionError("theta must be positive");
    }
    const double q = spec.M2 / theta + spec.M3;
    if (!(q < 1.0)) {
        std::ostringstream os;
        os << "theta = " << theta << " gives M2/theta + M3 = " << q << " >= 1";
        throw PreconditionError(os.str());
    }
    if (!contraction.contraction_ok && !config.force) {
        std::ostringstream os;
        os << "contraction check failed: q_global = " << contraction.q_global << " >= 1";
        throw PreconditionError(os.str());
    }

    const UniformGrid grid(spec.T, config.n);
    const FracWeights weights(spec.alpha, grid);
    const std::vector<double> bw = bielecki_weights(grid, spec.alpha, theta);

    GridFunction z(grid, spec.dim());
    if (config.initial_guess) {
        if (!(config.initial_guess->grid() == grid) || config.initial_guess->dim() != spec.dim()) {
            throw GridMismatchError("initial guess does not match the solver grid");
        }
        z = *config.initial_guess;
    } else if (anchor) {
        z = GridFunction::constant(grid, *anchor);
    } else {
        const Vector zero(spec.dim(), 0.0);
        z = GridFunction::constant(grid, eval_rhs(spec, 0.0, spec.x0, zero, 0));
    }
    if (anchor) {
        z.set_node(0, *anchor);
    }
    const Vector base = anchor ? *anchor : spec.x0;

    std::vector<double> steps;
    std::vector<double> ratios;
    double drift = 0.0;
    bool converged = false;
    int iterations = 0;
    while (iterations < config.max_iter) {
        GridFunction next = apply_operator(spec, weights, z, base);
        ++iterations;
        if (anchor) {
            double d = 0.0;
            auto node0 = next.node(0);
            for (std::size_t c = 0; c < node0.size(); ++c) {
                d = std::max(d, std::abs(node0[c] - (*anchor)[c]));
            }
            drift = std::max(drift, d);
            if (d > kMaxAnchorDrift) {
                std::ostringstream os;
                os << "anchored iterate drifted by " << d << " at t = 0";
                throw PreconditionError(os.str());
            }
            next.set_node(0, *anchor);
        }
        const double step = bielecki_norm(next - z, bw);
        if (!steps.empty() && steps.back() > 0.0) {
            ratios.push_back(step / steps.back());
        }
        steps.push_back(step);
        z = std::move(next);
        if (step <= config.tol) {
            converged = true;
            break;
        }
    }

    GridFunction x = frac_integral(weights, z);
    for (std::size_t k = 0; k < x.size(); ++k) {
        auto node = x.node(k);
        for (std::size_t c = 0; c < node.size(); ++c) {
            node[c] += base[c];
        }
    }
    x.set_node(0, base);

    return SolveReport{
        .iterations = iterations,
        .step_norms = steps,
        .ratio_estimates = ratios,
        .a_posteriori_bound = q * steps.back() / (1.0 - q),
        .converged = converged,
        .certified = contraction.contraction_ok,
        .theta = theta,
        .q_bielecki = q,
        .max_anchor_drift = drift,
        .contraction = contraction,
        .z = std::move(z),
        .x = std::move(x),
    };
}

}  // namespace detail

GridFunction picard_step(const ProblemSpec& spec, const FracWeights& weights,
                         const GridFunction& z) {
    detail::require_matching(spec, weights, z, "picard_step");
    return detail::apply_operator(spec, weights, z, spec.x0);
}

GridFunction reconstruct_x(const ProblemSpec& spec, const FracWeights& weights,
                           const GridFunction& z) {
    detail::require_matching(spec, weights, z, "reconstruct_x");
    GridFunction x = frac_integral(weights, z);
    for (std::size_t k = 0; k < x.size(); ++k) {
        auto node = x.node(k);
        for (std::size_t c = 0; c < node.size(); ++c) {
            node[c] += spec.x0[c];
        }
    }
    x.set_node(0, spec.x0);
    return x;
}

SolveReport solve(const ProblemSpec& spec, const SolverConfig& config) {
    return detail::run_picard(spec, config, std::nullopt);
}

Residuals residual_caputo(const ProblemSpec& spec, const GridFunction& x,
                          const GridFunction& z) {
    require_same_layout(x, z, "residual_caputo");
    GridFunction derivative = caputo_l1(spec.alpha, x);
    Residuals out{.caputo = derivative, .algebraic = z};
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double t = x.grid().node(k);
        const Vector fc = detail::eval_rhs(spec, t, x.node(k), derivative.node(k), k);
        const Vector fa = detail::eval_rhs(spec, t, x.node(k), z.node(k), k);
        auto rc = out.caputo.node(k);
        auto ra = out.algebraic.node(k);
        for (std::size_t c = 0; c < rc.size(); ++c) {
            rc[c] -= fc[c];
            ra[c] -= fa[c];
        }
    }
    return out;
}

}  // namespace ifde
