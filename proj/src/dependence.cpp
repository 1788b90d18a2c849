#include "ifde/dependence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "ifde/errors.hpp"
#include "ifde/sampling.hpp"
#include "ifde/specfun.hpp"

namespace ifde {

namespace {

constexpr double kAnchorTolerance = 1e-10;

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double bielecki_distance(const GridFunction& u, const GridFunction& v,
                         std::span<const double> weights) {
    double sup = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        sup = std::max(sup, distance(u.node(k), v.node(k)) / weights[k]);
    }
    return sup;
}

double admissible_gap(double M2, double M3, double theta, const char* where) {
    if (!(theta > 0.0)) {
        throw PreconditionError(std::string(where) + ": theta must be positive");
    }
    const double q = M2 / theta + M3;
    if (!(q < 1.0)) {
        std::ostringstream os;
        os << where << ": M2/theta + M3 = " << q << " is not below 1";
        throw PreconditionError(os.str());
    }
    return 1.0 - q;
}

// Samples (t, x, y) over [0, T] x B_R x B_R and returns the largest
// |f - g| / weight(t).
template <typename Weight>
double sample_gap(const ProblemPair& pair, double R, std::size_t samples, Weight&& weight) {
    pair.validate();
    const std::size_t d = pair.f.dim();
    HaltonSequence seq(1 + 2 * d);
    double worst = 0.0;
    std::vector<double> xs(d);
    std::vector<double> ys(d);
    for (std::size_t i = 0; i < samples; ++i) {
        const std::vector<double> u = seq.next();
        const std::vector<double> xu(u.begin() + 1, u.begin() + 1 + static_cast<long>(d));
        const std::vector<double> yu(u.begin() + 1 + static_cast<long>(d), u.end());
        xs = cube_to_ball(xu, R);
        ys = cube_to_ball(yu, R);
        // Both ends of J are visited at every state sample.
        for (const double t : {u[0] * pair.f.T, 0.0, pair.f.T}) {
            const Vector fv = detail::eval_rhs(pair.f, t, xs, ys, 0);
            const Vector gv = detail::eval_rhs(pair.g, t, xs, ys, 0);
            worst = std::max(worst, distance(fv, gv) / weight(t));
        }
    }
    return worst;
}

}  // namespace

void ProblemPair::validate() const {
    f.validate();
    g.validate();
    if (f.alpha != g.alpha || f.T != g.T) {
        throw DomainError("problem pair must share alpha and T");
    }
    if (f.dim() != g.dim()) {
        throw DomainError("problem pair must share the state dimension");
    }
    if (!(K_eta >= 0.0) || !(K_ml >= 0.0)) {
        throw DomainError("K_eta and K_ml must be non-negative");
    }
}

double ProblemPair::M2() const noexcept { return std::max(f.M2, g.M2); }
double ProblemPair::M3() const noexcept { return std::max(f.M3, g.M3); }

double dependence_bound(const ProblemPair& pair, double theta) {
    pair.validate();
    const double gap = admissible_gap(pair.M2(), pair.M3(), theta, "dependence_bound");
    return distance(pair.f.x0, pair.g.x0) + pair.K_eta / (theta * gap);
}

double measured_distance(const GridFunction& xf, const GridFunction& xg, double alpha,
                         double theta) {
    require_same_layout(xf, xg, "measured_distance");
    return bielecki_norm(xf - xg, alpha, theta);
}

double hausdorff_distance(std::span<const GridFunction> a, std::span<const GridFunction> b,
                          double alpha, double theta) {
    if (a.empty() || b.empty()) {
        throw DomainError("hausdorff_distance: both sets must be non-empty");
    }
    for (const auto& u : a) {
        require_same_layout(u, a.front(), "hausdorff_distance");
    }
    for (const auto& v : b) {
        require_same_layout(v, a.front(), "hausdorff_distance");
    }
    const std::vector<double> w = bielecki_weights(a.front().grid(), alpha, theta);

    std::vector<double> dist(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            dist[i * b.size() + j] = bielecki_distance(a[i], b[j], w);
        }
    }
    double forward = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            nearest = std::min(nearest, dist[i * b.size() + j]);
        }
        forward = std::max(forward, nearest);
    }
    double backward = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.size(); ++i) {
            nearest = std::min(nearest, dist[i * b.size() + j]);
        }
        backward = std::max(backward, nearest);
    }
    return std::max(forward, backward);
}

AnchorCheck check_anchor_condition(const ProblemSpec& spec, double R, std::size_t samples) {
    if (!(R > 0.0)) {
        throw DomainError("check_anchor_condition: R must be positive");
    }
    const std::size_t d = spec.dim();
    HaltonSequence seq(d);
    AnchorCheck out;
    out.worst_point.assign(d, 0.0);
    Vector p(d, 0.0);
    for (std::size_t i = 0; i <= samples; ++i) {
        if (i > 0) {
            p = cube_to_ball(seq.next(), R);
        }
        const Vector v = detail::eval_rhs(spec, 0.0, p, p, 0);
        const double violation = distance(v, p);
        if (violation > out.worst_violation || i == 0) {
            out.worst_violation = violation;
            out.worst_point = p;
        }
    }
    out.passed = out.worst_violation <= kAnchorTolerance;
    return out;
}

SolutionFamily solve_family(const ProblemSpec& spec, const std::vector<Vector>& anchors,
                            const SolverConfig& config, std::size_t threads) {
    spec.validate();
    if (anchors.empty()) {
        throw DomainError("solve_family: at least one anchor required");
    }
    double largest = 0.0;
    for (const auto& a : anchors) {
        if (a.size() != spec.dim()) {
            throw DomainError("solve_family: anchor dimension does not match the problem");
        }
        largest = std::max(largest, euclidean_norm(a));
    }

    const ContractionReport contraction = check_contraction(spec, config.n);
    if (!contraction.contraction_ok && !config.force) {
        std::ostringstream os;
        os << "contraction check failed: q_global = " << contraction.q_global << " >= 1";
        throw PreconditionError(os.str());
    }
    // Invariant radius with the largest anchor playing the role of x0.
    double radius = largest;
    if (contraction.contraction_ok) {
        radius = std::max(radius, (spec.M2 * largest + contraction.K) / (1.0 - contraction.q_global));
    }
    radius = std::max(radius, 1e-12);

    SolutionFamily family;
    family.anchors = anchors;
    family.anchor_radius = radius;
    family.anchor_check = check_anchor_condition(spec, radius, 512);
    if (!family.anchor_check.passed) {
        std::ostringstream os;
        os << "anchor condition f(0,x,x) = x fails: worst violation "
           << family.anchor_check.worst_violation;
        throw AnchorConditionError(os.str(), family.anchor_check.worst_violation);
    }

    std::vector<std::optional<SolveReport>> results(anchors.size());
    std::size_t workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
    workers = std::clamp<std::size_t>(workers, 1, anchors.size());

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto work = [&] {
        for (std::size_t i = cursor++; i < anchors.size(); i = cursor++) {
            try {
                results[i] = detail::run_picard(spec, config, anchors[i]);
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    for (auto& r : results) {
        family.members.push_back(std::move(*r));
    }
    return family;
}

double family_hausdorff_bound(const ProblemPair& pair, double theta, double anchor_radius,
                              std::size_t samples) {
    pair.validate();
    const double gap = admissible_gap(pair.M2(), pair.M3(), theta, "family_hausdorff_bound");
    for (const ProblemSpec* p : {&pair.f, &pair.g}) {
        const AnchorCheck check = check_anchor_condition(*p, anchor_radius, samples);
        if (!check.passed) {
            std::ostringstream os;
            os << "family_hausdorff_bound: anchor condition fails (violation "
               << check.worst_violation << ")";
            throw AnchorConditionError(os.str(), check.worst_violation);
        }
    }
    const double alpha = pair.f.alpha;
    return pair.K_ml * std::pow(pair.f.T, alpha) / (gamma_function(alpha + 1.0) * gap);
}

double estimate_k_eta(const ProblemPair& pair, double R, std::size_t samples) {
    return 1.1 * sample_gap(pair, R, samples, [](double) { return 1.0; });
}

double estimate_k_ml(const ProblemPair& pair, double theta, double R, std::size_t samples) {
    const double alpha = pair.f.alpha;
    return 1.1 * sample_gap(pair, R, samples, [&](double t) {
               return bielecki_weight(alpha, theta, t);
           });
}

}  // namespace ifde
