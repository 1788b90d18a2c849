// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ifde/dependence.hpp"
#include "ifde/fixtures.hpp"
#include "ifde/fracops.hpp"
#include "ifde/solver.hpp"
#include "ifde/specfun.hpp"
#include "oracles.hpp"

using namespace ifde;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double report_value(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + " = ");
    if (pos == std::string::npos) {
        return std::nan("");
    }
    return std::strtod(text.c_str() + pos + key.size() + 3, nullptr);
}

Verdict contraction_constant() {
    const auto fx = fixtures::worked_example_f();
    const auto start = std::chrono::steady_clock::now();
    const ContractionReport r = check_contraction(fx.spec, 1024);
    const double elapsed = seconds_since(start);
    const bool ok = std::abs(r.q_global - 0.8989) <= 5e-4 && r.contraction_ok && elapsed < 0.1;
    return {ok, fmt("q_global = %.6f (0.8989 +- 5e-4), %.2e s (< 0.1 s)", r.q_global, elapsed)};
}

Verdict exact_solution() {
    const auto fx = fixtures::worked_example_f();
    SolverConfig config;
    config.n = 1024;
    config.tol = 1e-10;
    config.theta_override = 2.0;
    const auto start = std::chrono::steady_clock::now();
    const SolveReport r = solve(fx.spec, config);
    const double elapsed = seconds_since(start);
    double worst = 0.0, worst_tail = 0.0;
    for (std::size_t k = 0; k <= config.n; ++k) {
        const double e = std::abs(r.x.at(k, 0) - fx.exact_solution(r.x.grid().node(k))[0]);
        worst = std::max(worst, e);
        if (k >= config.n / 8) {
            worst_tail = std::max(worst_tail, e);
        }
    }
    const bool ok = r.converged && r.iterations <= 60 && worst <= 1e-2 && worst_tail <= 3e-3 &&
                    elapsed < 5.0;
    return {ok, fmt("%.0f iterations, max error %.2e, error k >= n/8 %.2e", r.iterations, worst,
                    worst_tail) +
                    fmt(", %.3f s", elapsed)};
}

Verdict contraction_rate() {
    std::vector<ProblemSpec> specs{fixtures::worked_example_f().spec};
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> order(0.2, 0.9);
    std::uniform_real_distribution<double> horizon(0.2, 2.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    while (specs.size() < 21) {
        const double alpha = order(rng);
        const double T = horizon(rng);
        const double cap = gamma_function(alpha + 1.0) / std::pow(T, alpha);
        const double lambda = unit(rng) * 0.95 * cap;
        if (std::abs(lambda) < 1e-3) {
            continue;
        }
        const auto fx = fixtures::linear_eigen_problem(lambda, alpha, 2.0 * unit(rng), T);
        if (check_contraction(fx.spec, 256).contraction_ok) {
            specs.push_back(fx.spec);
        }
    }
    double worst_excess = -1.0;
    std::size_t ratios = 0;
    bool all_converged = true;
    for (const ProblemSpec& spec : specs) {
        SolverConfig config;
        config.n = 512;
        const SolveReport r = solve(spec, config);
        all_converged = all_converged && r.converged;
        for (double q : r.ratio_estimates) {
            worst_excess = std::max(worst_excess, q - r.q_bielecki);
            ++ratios;
        }
    }
    return {all_converged && worst_excess <= 0.05,
            fmt("%.0f problems, %.0f ratios, max(ratio - q_bielecki) = %.4f (<= 0.05)",
                static_cast<double>(specs.size()), static_cast<double>(ratios), worst_excess)};
}

Verdict dependence_bound_reproduction() {
    std::ostringstream out, err;
    const int code =
        cli::run({"depend", std::string(IFDE_SOURCE_DIR) + "/configs/worked_pair.cfg"}, out, err);
    const double bound = report_value(out.str(), "bound");
    const double measured = report_value(out.str(), "measured");
    const bool ok = code == 0 && std::abs(bound - (kSqrtPi / 2.0 + 2.3004)) <= 1e-3 &&
                    measured <= kSqrtPi / 2.0 + 1e-2 && kSqrtPi / 2.0 + 1e-2 <= bound;
    return {ok, fmt("bound = %.6f (%.6f +- 1e-3), measured = %.6f", bound, kSqrtPi / 2.0 + 2.3004,
                    measured)};
}

Verdict special_functions() {
    double e1 = 0.0;
    for (double z : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        e1 = std::max(e1, std::abs(mittag_leffler(1.0, z) - std::exp(z)) / std::exp(z));
    }
    double e_half = 0.0;
    for (double z : {0.0, 0.25, 0.5, 1.0, 2.0, 3.0}) {
        e_half = std::max(e_half,
                          std::abs(mittag_leffler(0.5, z) - std::exp(z * z) * std::erfc(-z)));
    }
    double rec = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = 0.5 * std::pow(40.0, i / 99.0);
        const double g1 = gamma_function(x + 1.0);
        rec = std::max(rec, std::abs(g1 - x * gamma_function(x)) / g1);
    }
    return {e1 <= 1e-12 && e_half <= 1e-10 && rec <= 1e-12,
            fmt("E_1 rel %.1e, E_1/2 abs %.1e, Gamma recurrence rel %.1e", e1, e_half, rec)};
}

Verdict power_rule() {
    const UniformGrid grid(1.0, 1024);
    const FracWeights w = build_weights(0.5, grid);
    double worst_rel = 0.0, worst_exact = 0.0;
    for (int beta : {0, 1, 2}) {
        const GridFunction f = GridFunction::sample(
            grid, 1, [beta](double t) { return Vector{std::pow(t, beta)}; });
        const GridFunction If = frac_integral(w, f);
        const double c = std::tgamma(beta + 1.0) / std::tgamma(beta + 1.5);
        const double exact_T = c;
        worst_rel = std::max(worst_rel, std::abs(If.at(1024, 0) - exact_T) / exact_T);
        if (beta <= 1) {
            for (std::size_t k = 0; k <= 1024; ++k) {
                const double t = grid.node(k);
                worst_exact = std::max(worst_exact,
                                       std::abs(If.at(k, 0) - c * std::pow(t, beta + 0.5)));
            }
        }
    }
    return {worst_rel <= 2e-3 && worst_exact <= 1e-12,
            fmt("max relative error at T %.2e (<= 2e-3), beta in {0,1} max error %.2e (<= 1e-12)",
                worst_rel, worst_exact)};
}

Verdict ml_integral_identity() {
    const UniformGrid grid(1.0, 1024);
    double worst = 0.0;
    for (const auto& [alpha, theta] : {std::pair{0.5, 2.0}, {1.0 / 3.0, 3.0}, {0.75, 1.0}}) {
        const GridFunction e = GridFunction::sample(grid, 1, [&](double t) {
            return Vector{mittag_leffler(alpha, theta * std::pow(t, alpha))};
        });
        const double lhs = frac_integral(build_weights(alpha, grid), e).at(1024, 0);
        const double rhs = (mittag_leffler(alpha, theta) - 1.0) / theta;
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    return {worst <= 5e-3, fmt("max relative error %.2e (<= 5e-3)", worst)};
}

Verdict hausdorff_oracle() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    std::normal_distribution<double> g;
    const UniformGrid grid(0.5, 32);
    auto random_set = [&] {
        std::vector<GridFunction> s;
        const std::size_t n = size(rng);
        for (std::size_t i = 0; i < n; ++i) {
            GridFunction u(grid, 2);
            for (double& v : u.data()) {
                v = g(rng);
            }
            s.push_back(std::move(u));
        }
        return s;
    };
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_set();
        const auto b = random_set();
        if (hausdorff_distance(a, b, 0.5, 2.0) != oracle::hausdorff(a, b, 0.5, 2.0)) {
            ++mismatches;
        }
    }
    return {mismatches == 0, fmt("%.0f of 100 pairs differ from the brute-force oracle",
                                 static_cast<double>(mismatches))};
}

Verdict anchored_family() {
    const double lambda = 1.0;
    const auto fx = fixtures::linear_eigen_problem(lambda, 0.5, 1.0, 0.5);
    SolverConfig config;
    config.n = 1024;
    config.tol = 1e-10;
    const std::vector<Vector> anchors{{0.25}, {0.5}, {1.0}};
    const SolutionFamily family = solve_family(fx.spec, anchors, config);
    bool pinned = true;
    double worst_fit = 0.0;
    double worst_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const SolveReport& m = family.members[i];
        const double a = anchors[i][0];
        pinned = pinned && m.converged && m.z.at(0, 0) == a && m.x.at(0, 0) == a;
        for (std::size_t k = 0; k <= config.n; ++k) {
            const double t = m.x.grid().node(k);
            worst_fit = std::max(
                worst_fit, std::abs(m.x.at(k, 0) - a * mittag_leffler(0.5, lambda * std::sqrt(t))));
        }
        for (std::size_t j = i + 1; j < anchors.size(); ++j) {
            const double need = (1.0 - m.q_bielecki) * std::abs(a - anchors[j][0]) - 10.0 * config.tol;
            const double got = measured_distance(m.z, family.members[j].z, 0.5, m.theta);
            worst_gap = std::min(worst_gap, got - need);
        }
    }
    return {pinned && worst_gap >= 0.0 && worst_fit <= 1e-2,
            std::string(pinned ? "node 0 exact" : "node 0 drifted") +
                fmt(", min separation slack %.3e, max error %.2e (<= 1e-2)", worst_gap, worst_fit)};
}

Verdict uniqueness() {
    const auto fx = fixtures::worked_example_f();
    const UniformGrid grid(0.5, 1024);
    SolverConfig a;
    a.n = 1024;
    a.tol = 1e-10;
    a.initial_guess = GridFunction(grid, 1);
    SolverConfig b = a;
    b.initial_guess = GridFunction::constant(grid, Vector{5.0});
    const SolveReport ra = solve(fx.spec, a);
    const SolveReport rb = solve(fx.spec, b);
    const double d = bielecki_norm(ra.x - rb.x, 0.5, ra.theta);
    return {ra.converged && rb.converged && d <= 10.0 * a.tol,
            fmt("Bielecki distance %.2e (<= %.0e)", d, 10.0 * a.tol)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "contraction constant", contraction_constant},
        {2, "exact solution", exact_solution},
        {3, "contraction rate", contraction_rate},
        {4, "dependence bound", dependence_bound_reproduction},
        {5, "special functions", special_functions},
        {6, "quadrature power rule", power_rule},
        {7, "Mittag-Leffler integral identity", ml_integral_identity},
        {8, "Hausdorff oracle", hausdorff_oracle},
        {9, "anchored family", anchored_family},
        {10, "uniqueness", uniqueness},
    };
    int failures = 0;
    int property_checks_run = 0;
    for (const Criterion& c : criteria) {
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s criterion %2d %-34s %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                    v.detail.c_str());
        failures += v.pass ? 0 : 1;
        if (c.id == 3 || c.id >= 5) {
            ++property_checks_run;
        }
    }
    // Beyond the three reproduced numbers, coverage rests on the property criteria.
    const bool covered = property_checks_run == 7;
    std::printf("%s criterion 11 %-34s %d property-based criteria executed (3, 5-10)\n",
                covered ? "PASS" : "FAIL", "property coverage", property_checks_run);
    failures += covered ? 0 : 1;
    return failures == 0 ? 0 : 1;
}
