#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ifde/errors.hpp"
#include "ifde/fixtures.hpp"
#include "ifde/rhsdsl.hpp"
#include "ifde/specfun.hpp"

using namespace ifde;
using namespace ifde::fixtures;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

void check_text_matches_lambdas(const Fixture& fx) {
    REQUIRE(fx.rhs_text.size() == fx.spec.dim());
    const rhsdsl::Expr e = rhsdsl::parse(fx.rhs_text.front());
    for (int i = 0; i <= 20; ++i) {
        const double t = fx.spec.T * i / 20.0;
        for (double x : {-1.5, 0.0, 0.7, 2.0}) {
            for (double y : {-0.3, 0.0, 1.1}) {
                const Vector xs{x}, ys{y};
                CHECK(rhsdsl::eval(e, t, x, y) ==
                      doctest::Approx(fx.spec.rhs(t, xs, ys)[0]).epsilon(1e-14));
            }
        }
        if (fx.exact_text) {
            CHECK(rhsdsl::eval(rhsdsl::parse(*fx.exact_text), t, 0.0, 0.0) ==
                  doctest::Approx(fx.exact_solution(t)[0]).epsilon(1e-14));
        }
    }
}

}  // namespace

TEST_CASE("worked example f") {
    const Fixture fx = worked_example_f();
    CHECK(fx.spec.alpha == 0.5);
    CHECK(fx.spec.T == 0.5);
    CHECK(fx.spec.x0 == Vector{1.0});
    CHECK(fx.spec.M1 == 0.5);
    CHECK(fx.spec.M2 == 0.5);
    CHECK(fx.spec.M3 == 0.5);
    CHECK(fx.origin == Origin::Published);
    REQUIRE(fx.has_exact());
    CHECK(fx.exact_solution(0.0)[0] == 1.0);
    CHECK(fx.exact_derivative(0.0)[0] == doctest::Approx(kSqrtPi / 2.0 + 1.0).epsilon(1e-15));
    CHECK(std::abs(check_contraction(fx.spec, 1024).q_global - 0.8989) <= 5e-4);
    check_text_matches_lambdas(fx);
}

TEST_CASE("corrected companion problem") {
    const Fixture fx = worked_example_g_corrected();
    CHECK(fx.spec.x0[0] == doctest::Approx(1.0 - kSqrtPi / 2.0).epsilon(1e-15));
    REQUIRE(fx.has_exact());
    CHECK(fx.exact_solution(0.0)[0] == doctest::Approx(0.1138).epsilon(1e-3));
    REQUIRE(fx.published_k_eta.has_value());
    CHECK(*fx.published_k_eta == 1.1502);
    REQUIRE(fx.published_eta_text.has_value());
    // The recorded eta peaks at t = T with value sqrt(pi)/4 + sqrt(1/2).
    CHECK(rhsdsl::eval(rhsdsl::parse(*fx.published_eta_text), 0.5, 0.0, 0.0) ==
          doctest::Approx(1.1502).epsilon(1e-4));
    check_text_matches_lambdas(fx);
    const Fixture f = worked_example_f();
    for (double t : {0.0, 0.1, 0.5}) {
        CHECK(f.exact_solution(t)[0] - fx.exact_solution(t)[0] ==
              doctest::Approx(kSqrtPi / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("printed companion problem has no exact solution") {
    const Fixture fx = worked_example_g_printed();
    CHECK_FALSE(fx.has_exact());
    CHECK_FALSE(fx.exact_text.has_value());
    check_text_matches_lambdas(fx);
    // Substituting the corrected solution leaves a residual of sqrt(pi)/2 - t^{1/2}:
    // far from zero, so the printed form cannot be exact.
    const Fixture g = worked_example_g_corrected();
    const Vector x = g.exact_solution(0.25);
    const Vector z = g.exact_derivative(0.25);
    CHECK(std::abs(z[0] - fx.spec.rhs(0.25, x, z)[0]) > 0.3);
}

TEST_CASE("exact solutions validate by substitution") {
    for (const Fixture& fx : {worked_example_f(), worked_example_g_corrected(),
                              linear_eigen_problem(0.5, 0.5, 1.0, 0.5),
                              linear_eigen_problem(-1.0, 0.3, 2.0, 1.0),
                              linear_eigen_problem(0.8, 0.75, -1.0, 0.8)}) {
        const FixtureValidation v = validate_fixture(fx);
        CHECK_MESSAGE(v.passed, fx.name);
        CHECK(v.algebraic_residual <= 1e-2);
        CHECK(v.caputo_residual <= 1e-2);
        CHECK(v.fixed_point_residual <= 1e-2);
    }
    CHECK_FALSE(validate_fixture(worked_example_g_printed()).passed);
}

TEST_CASE("linear eigenproblem fixtures") {
    const Fixture flat = linear_eigen_problem(0.0, 0.5, 3.0, 1.0);
    for (double t : {0.0, 0.3, 1.0}) {
        CHECK(flat.exact_solution(t)[0] == 3.0);
    }
    CHECK(flat.spec.M2 > 0.0);
    const Fixture ode = linear_eigen_problem(1.0, 1.0, 1.0, 1.0);
    for (double t : {0.0, 0.5, 1.0}) {
        CHECK(ode.exact_solution(t)[0] == doctest::Approx(std::exp(t)).epsilon(1e-14));
    }
    const Fixture half = linear_eigen_problem(0.5, 0.5, 1.0, 0.5);
    CHECK(half.exact_solution(0.5)[0] ==
          doctest::Approx(mittag_leffler(0.5, 0.5 * std::sqrt(0.5))).epsilon(1e-15));
    CHECK(half.spec.M1 == 0.0);
    CHECK(half.spec.M2 == 0.5);
    CHECK(half.spec.M3 == 1e-6);
    check_text_matches_lambdas(half);
}

TEST_CASE("worked example converges within sixty iterations") {
    SolverConfig config;
    config.n = 1024;
    config.tol = 1e-10;
    const SolveReport r = solve(worked_example_f().spec, config);
    CHECK(r.converged);
    CHECK(r.iterations <= 60);
}

TEST_CASE("exported problem sections") {
    const std::string text = export_problem_section(worked_example_f());
    CHECK(text.find("[problem]\n") != std::string::npos);
    CHECK(text.find("alpha = 0.5\n") != std::string::npos);
    CHECK(text.find("x0 = 1\n") != std::string::npos);
    CHECK(text.find("rhs = sqrt(pi)/4 - t^(1/2)/2 + (x + abs(y))/2\n") != std::string::npos);
    CHECK(text.find("exact = t^(1/2) + ml(0.5, t^(1/2))\n") != std::string::npos);
    CHECK(export_problem_section(worked_example_g_printed()).find("\nexact =") == std::string::npos);
}
