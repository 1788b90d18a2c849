#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ifde/errors.hpp"
#include "ifde/fixtures.hpp"
#include "ifde/solver.hpp"
#include "ifde/specfun.hpp"
#include "oracles.hpp"

using namespace ifde;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

ProblemSpec scalar_problem(double alpha, double T, double x0,
                           std::function<double(double, double, double)> f, double M1,
                           double M2, double M3) {
    ProblemSpec spec;
    spec.alpha = alpha;
    spec.T = T;
    spec.x0 = {x0};
    spec.rhs = [f = std::move(f)](double t, std::span<const double> x, std::span<const double> y) {
        return Vector{f(t, x[0], y[0])};
    };
    spec.M1 = M1;
    spec.M2 = M2;
    spec.M3 = M3;
    return spec;
}

double max_error_against(const GridFunction& x, const fixtures::TimeFunction& exact,
                         std::size_t first = 0) {
    double worst = 0.0;
    for (std::size_t k = first; k < x.size(); ++k) {
        worst = std::max(worst, std::abs(x.at(k, 0) - exact(x.grid().node(k))[0]));
    }
    return worst;
}

SolverConfig config_with(std::size_t n, double tol = 1e-10) {
    SolverConfig c;
    c.n = n;
    c.tol = tol;
    return c;
}

}  // namespace

TEST_CASE("check_contraction on the worked example") {
    const auto fx = fixtures::worked_example_f();
    const ContractionReport r = check_contraction(fx.spec, 1024);
    CHECK(std::abs(r.q_global - 0.8989) <= 5e-4);
    CHECK(r.q_global == doctest::Approx(std::sqrt(0.5 / std::numbers::pi) + 0.5).epsilon(1e-14));
    CHECK(r.contraction_ok);
    // K = 1.1 * sup |f(t,0,0)|, attained at t = 0 where f = sqrt(pi)/4.
    CHECK(r.K == doctest::Approx(1.1 * kSqrtPi / 4.0).epsilon(1e-14));
    REQUIRE(r.R.has_value());
    REQUIRE(r.L.has_value());
    CHECK(*r.R == doctest::Approx((0.5 * 1.0 + r.K) / (1.0 - r.q_global)).epsilon(1e-14));
    CHECK(*r.L == doctest::Approx((0.5 + 2.0 * 0.5 * *r.R / gamma_function(1.5)) / 0.5).epsilon(1e-14));
    CHECK(r.theta == 2.0);
    CHECK(r.q_bielecki == 0.75);
}

TEST_CASE("check_contraction degenerate coupling") {
    const ProblemSpec spec = scalar_problem(
        0.5, 3.0, 2.0, [](double t, double x, double) { return 1.0 + t + 1e-12 * x; }, 1.0,
        1e-12, 0.5);
    const ContractionReport r = check_contraction(spec, 64);
    CHECK(r.q_global == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(*r.R == doctest::Approx(r.K / 0.5).epsilon(1e-10));
    CHECK(r.K == doctest::Approx(1.1 * 4.0).epsilon(1e-14));
}

TEST_CASE("check_contraction reports failure without throwing") {
    const ProblemSpec spec = scalar_problem(
        0.5, 4.0, 1.0, [](double, double x, double y) { return x + 0.5 * y; }, 0.0, 1.0, 0.5);
    const ContractionReport r = check_contraction(spec, 64);
    CHECK(r.q_global == doctest::Approx(2.0 / 0.8862269254527580 + 0.5).epsilon(1e-12));
    CHECK(std::abs(r.q_global - 2.7568) <= 1e-4);
    CHECK_FALSE(r.contraction_ok);
    CHECK_FALSE(r.R.has_value());
    CHECK_FALSE(r.L.has_value());
}

TEST_CASE("ProblemSpec validation") {
    auto fx = fixtures::worked_example_f();
    fx.spec.M3 = 1.5;
    CHECK_THROWS_AS(fx.spec.validate(), DomainError);
    fx.spec.M3 = 0.5;
    fx.spec.alpha = 1.0;
    CHECK_THROWS_AS(fx.spec.validate(), DomainError);
    fx.spec.alpha = 0.5;
    fx.spec.T = -1.0;
    CHECK_THROWS_AS(fx.spec.validate(), DomainError);
}

TEST_CASE("select_theta") {
    ProblemSpec spec = fixtures::worked_example_f().spec;
    CHECK(select_theta(spec) == 2.0);
    CHECK(spec.M2 / select_theta(spec) + spec.M3 == 0.75);
    spec.M2 = 0.1;
    spec.M3 = 0.1;
    CHECK(select_theta(spec) == 1.0);
    CHECK(spec.M2 / select_theta(spec) + spec.M3 == doctest::Approx(0.2));
    spec.M2 = 10.0;
    spec.M3 = 0.9;
    CHECK(select_theta(spec) == doctest::Approx(200.0).epsilon(1e-12));
    CHECK(spec.M2 / select_theta(spec) + spec.M3 == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("picard_step examples") {
    const auto fx = fixtures::worked_example_f();
    SUBCASE("zero input gives f(t, 1, 0)") {
        const UniformGrid grid(0.5, 128);
        const FracWeights w(0.5, grid);
        const GridFunction out = picard_step(fx.spec, w, GridFunction(grid, 1));
        for (std::size_t k = 0; k <= 128; ++k) {
            const double t = grid.node(k);
            CHECK(out.at(k, 0) == doctest::Approx(kSqrtPi / 4.0 - std::sqrt(t) / 2.0 + 0.5).epsilon(1e-15));
        }
    }
    SUBCASE("exact z* is nearly fixed") {
        const UniformGrid grid(0.5, 2048);
        const FracWeights w(0.5, grid);
        const GridFunction zstar = GridFunction::sample(grid, 1, fx.exact_derivative);
        CHECK(chebyshev_norm(picard_step(fx.spec, w, zstar) - zstar) <= 5e-3);
    }
    SUBCASE("constant right-hand side") {
        ProblemSpec spec = fx.spec;
        spec.rhs = [x0 = spec.x0](double, std::span<const double>, std::span<const double>) {
            return x0;
        };
        const UniformGrid grid(0.5, 32);
        const FracWeights w(0.5, grid);
        GridFunction z(grid, 1);
        for (std::size_t k = 0; k <= 32; ++k) {
            z.node(k)[0] = std::sin(static_cast<double>(k));
        }
        const GridFunction out = picard_step(spec, w, z);
        for (double v : out.data()) {
            CHECK(v == 1.0);
        }
    }
    SUBCASE("mismatches") {
        const UniformGrid grid(0.5, 32);
        CHECK_THROWS_AS((void)picard_step(fx.spec, FracWeights(0.5, UniformGrid(0.5, 16)),
                                          GridFunction(grid, 1)),
                        GridMismatchError);
        CHECK_THROWS_AS((void)picard_step(fx.spec, FracWeights(0.4, grid), GridFunction(grid, 1)),
                        PreconditionError);
    }
    SUBCASE("non-finite rhs names the node") {
        ProblemSpec spec = fx.spec;
        spec.rhs = [](double t, std::span<const double>, std::span<const double>) {
            return Vector{t > 0.25 ? std::nan("") : 0.0};
        };
        const UniformGrid grid(0.5, 4);
        try {
            (void)picard_step(spec, FracWeights(0.5, grid), GridFunction(grid, 1));
            FAIL("expected EvaluationError");
        } catch (const EvaluationError& e) {
            CHECK(e.node() == 3);
        }
    }
}

TEST_CASE("bielecki_norm and chebyshev_norm") {
    const UniformGrid grid(0.5, 256);
    CHECK(bielecki_norm(GridFunction(grid, 2), 0.5, 2.0) == 0.0);
    const Vector c{3.0, -4.0};
    for (double theta : {0.5, 2.0, 7.0}) {
        CHECK(bielecki_norm(GridFunction::constant(grid, c), 0.5, theta) == doctest::Approx(5.0));
    }
    const GridFunction ml = GridFunction::sample(
        grid, 1, [](double t) { return Vector{mittag_leffler(0.5, 2.0 * std::sqrt(t))}; });
    CHECK(std::abs(bielecki_norm(ml, 0.5, 2.0) - 1.0) <= 1e-10);

    CHECK(chebyshev_norm(GridFunction(grid, 1)) == 0.0);
    GridFunction spike(grid, 2);
    spike.node(17)[0] = 3.0;
    CHECK(chebyshev_norm(spike) == 3.0);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        GridFunction z(grid, 2);
        for (double& v : z.data()) {
            v = g(rng);
        }
        CHECK(chebyshev_norm(z) >= bielecki_norm(z, 0.5, 0.1 + 0.5 * trial));
    }
}

TEST_CASE("solve reproduces the worked example") {
    const auto fx = fixtures::worked_example_f();
    SolverConfig config = config_with(1024);
    config.theta_override = 2.0;
    const SolveReport r = solve(fx.spec, config);
    CHECK(r.converged);
    CHECK(r.certified);
    CHECK(r.iterations <= 60);
    CHECK(r.step_norms.back() <= 1e-10);
    CHECK(r.a_posteriori_bound == doctest::Approx(0.75 * r.step_norms.back() / 0.25));
    CHECK(r.x.at(0, 0) == 1.0);
    CHECK(max_error_against(r.x, fx.exact_solution) <= 1e-2);
    CHECK(max_error_against(r.x, fx.exact_solution, 128) <= 3e-3);
    CHECK(r.z.at(0, 0) == doctest::Approx(kSqrtPi / 2.0 + 1.0).epsilon(1e-9));
}

TEST_CASE("solve with a zero right-hand side") {
    const ProblemSpec spec = scalar_problem(
        0.5, 1.0, 3.25, [](double, double, double) { return 0.0; }, 0.0, 0.1, 0.1);
    const SolveReport r = solve(spec, config_with(64));
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
    for (std::size_t k = 0; k <= 64; ++k) {
        CHECK(r.x.at(k, 0) == 3.25);
        CHECK(r.z.at(k, 0) == 0.0);
    }
}

TEST_CASE("solve matches an independent Adams predictor-corrector") {
    const double lambda = 0.5;
    const auto fx = fixtures::linear_eigen_problem(lambda, 0.5, 1.0, 0.5);
    const SolveReport r = solve(fx.spec, config_with(1024));
    REQUIRE(r.converged);
    const std::size_t dense = 8192;
    const std::vector<double> ref = oracle::fractional_abm(
        [&](double, double y) { return lambda * y; }, 0.5, 1.0, 0.5, dense);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 1024; ++k) {
        worst = std::max(worst, std::abs(r.x.at(k, 0) - ref[k * (dense / 1024)]));
    }
    CHECK(worst <= 1e-2);
    CHECK(max_error_against(r.x, fx.exact_solution) <= 1e-2);
}

TEST_CASE("solve preconditions and outcomes") {
    const ProblemSpec hot = scalar_problem(
        0.5, 4.0, 1.0, [](double, double x, double y) { return 0.1 * x + 0.5 * std::sin(y); },
        0.0, 1.0, 0.5);
    SolverConfig config = config_with(128);
    CHECK_THROWS_AS((void)solve(hot, config), PreconditionError);

    config.force = true;
    const SolveReport forced = solve(hot, config);
    CHECK_FALSE(forced.certified);
    CHECK(forced.converged);

    const auto fx = fixtures::worked_example_f();
    SolverConfig bad_theta = config_with(128);
    bad_theta.theta_override = 1.0;  // 0.5/1 + 0.5 = 1
    CHECK_THROWS_AS((void)solve(fx.spec, bad_theta), PreconditionError);

    SolverConfig short_run = config_with(128);
    short_run.max_iter = 3;
    const SolveReport partial = solve(fx.spec, short_run);
    CHECK_FALSE(partial.converged);
    CHECK(partial.iterations == 3);
    CHECK(partial.step_norms.size() == 3);

    SolverConfig wrong_guess = config_with(128);
    wrong_guess.initial_guess = GridFunction(UniformGrid(0.5, 64), 1);
    CHECK_THROWS_AS((void)solve(fx.spec, wrong_guess), GridMismatchError);
}

TEST_CASE("reconstruct_x") {
    const auto fx = fixtures::worked_example_f();
    const UniformGrid grid(0.5, 256);
    const FracWeights w(0.5, grid);
    const GridFunction x = reconstruct_x(fx.spec, w, GridFunction(grid, 1));
    for (double v : x.data()) {
        CHECK(v == 1.0);
    }
    ProblemSpec zero_start = fx.spec;
    zero_start.x0 = {0.0};
    const GridFunction power = reconstruct_x(
        zero_start, w, GridFunction::constant(grid, Vector{gamma_function(1.5)}));
    for (std::size_t k = 1; k <= 256; ++k) {
        CHECK(std::abs(power.at(k, 0) / std::sqrt(grid.node(k)) - 1.0) <= 1e-12);
    }
    const SolveReport r = solve(fx.spec, config_with(256));
    CHECK(reconstruct_x(fx.spec, w, r.z).at(0, 0) == 1.0);
}

TEST_CASE("residual_caputo") {
    const auto fx = fixtures::worked_example_f();
    SUBCASE("exact solution") {
        const UniformGrid grid(0.5, 4096);
        const GridFunction x = GridFunction::sample(grid, 1, fx.exact_solution);
        const GridFunction z = GridFunction::sample(grid, 1, fx.exact_derivative);
        const Residuals r = residual_caputo(fx.spec, x, z);
        CHECK(max_norm_from(r.algebraic, 512) <= 1e-2);
        CHECK(max_norm_from(r.caputo, 512) <= 1e-2);
    }
    SUBCASE("constant solution of the zero problem") {
        const ProblemSpec spec = scalar_problem(
            0.5, 1.0, 2.0, [](double, double, double) { return 0.0; }, 0.0, 0.1, 0.1);
        const UniformGrid grid(1.0, 128);
        const GridFunction x = GridFunction::constant(grid, Vector{2.0});
        const Residuals r = residual_caputo(spec, x, GridFunction(grid, 1));
        CHECK(max_norm_from(r.caputo, 1) <= 1e-10);
        CHECK(max_norm_from(r.algebraic, 1) <= 1e-10);
    }
    SUBCASE("discriminates a non-solution") {
        const SolveReport solved = solve(fx.spec, config_with(1024));
        const Residuals good = residual_caputo(fx.spec, solved.x, solved.z);
        const GridFunction wrong = GridFunction::sample(solved.x.grid(), 1, [](double t) {
            return Vector{1.0 + std::sin(3.0 * t) + t * t};
        });
        const Residuals bad = residual_caputo(fx.spec, wrong, caputo_l1(0.5, wrong));
        CHECK(max_norm_from(bad.caputo, 128) > 10.0 * max_norm_from(good.caputo, 128));
    }
}

TEST_CASE("measured contraction ratios stay below the Bielecki modulus") {
    const auto fx = fixtures::worked_example_f();
    const SolveReport r = solve(fx.spec, config_with(1024));
    REQUIRE_FALSE(r.ratio_estimates.empty());
    for (double ratio : r.ratio_estimates) {
        CHECK(ratio <= r.q_bielecki + 0.05);
    }
}

TEST_CASE("grid refinement does not increase the error") {
    const auto fx = fixtures::worked_example_f();
    auto error_at = [&](std::size_t n) {
        return max_error_against(solve(fx.spec, config_with(n)).x, fx.exact_solution);
    };
    const double e256 = error_at(256);
    const double e512 = error_at(512);
    const double e1024 = error_at(1024);
    CHECK(e1024 <= e512);
    CHECK(e1024 <= e256);
}

TEST_CASE("solution does not depend on the initial guess") {
    const auto fx = fixtures::worked_example_f();
    const UniformGrid grid(0.5, 1024);
    SolverConfig from_zero = config_with(1024);
    from_zero.initial_guess = GridFunction(grid, 1);
    SolverConfig from_five = config_with(1024);
    from_five.initial_guess = GridFunction::constant(grid, Vector{5.0});
    const SolveReport a = solve(fx.spec, from_zero);
    const SolveReport b = solve(fx.spec, from_five);
    CHECK(bielecki_norm(a.x - b.x, 0.5, a.theta) <= 10.0 * 1e-10);
}

TEST_CASE("converged z stays in the certified ball and Lipschitz class") {
    const auto fx = fixtures::worked_example_f();
    const SolveReport r = solve(fx.spec, config_with(1024));
    const double R = *r.contraction.R;
    const double L = *r.contraction.L;
    CHECK(chebyshev_norm(r.z) <= R + 1e-6);
    const double h = r.z.grid().step();
    for (std::size_t k = 1; k < 1024; ++k) {
        CHECK(std::abs(r.z.at(k + 1, 0) - r.z.at(k, 0)) <= (L + 0.1) * h);
    }
}

TEST_CASE("solve handles vector problems componentwise") {
    ProblemSpec spec;
    spec.alpha = 0.5;
    spec.T = 0.5;
    spec.x0 = {1.0, -2.0};
    spec.rhs = [](double, std::span<const double> x, std::span<const double>) {
        return Vector{0.5 * x[0], -0.25 * x[1]};
    };
    spec.M1 = 0.0;
    spec.M2 = 0.5;
    spec.M3 = 1e-6;
    const SolveReport r = solve(spec, config_with(512));
    REQUIRE(r.converged);
    const double t = 0.5;
    CHECK(r.x.at(512, 0) == doctest::Approx(mittag_leffler(0.5, 0.5 * std::sqrt(t))).epsilon(1e-3));
    CHECK(r.x.at(512, 1) == doctest::Approx(-2.0 * mittag_leffler(0.5, -0.25 * std::sqrt(t))).epsilon(1e-3));
}
