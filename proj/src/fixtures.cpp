#include "ifde/fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ifde/fracops.hpp"
#include "ifde/specfun.hpp"

namespace ifde::fixtures {

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);
constexpr double kValidationBound = 1e-2;

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// x*(t) = t^{1/2} + E_{1/2}(t^{1/2}) and its half derivative sqrt(pi)/2 + E_{1/2}(t^{1/2}).
double worked_solution(double t) { return std::sqrt(t) + mittag_leffler(0.5, std::sqrt(t)); }
double worked_derivative(double t) { return kSqrtPi / 2.0 + mittag_leffler(0.5, std::sqrt(t)); }

}  // namespace

Fixture worked_example_f() {
    Fixture fx;
    fx.name = "worked_example_f";
    fx.spec.alpha = 0.5;
    fx.spec.T = 0.5;
    fx.spec.x0 = {1.0};
    fx.spec.rhs = [](double t, std::span<const double> x, std::span<const double> y) {
        return Vector{kSqrtPi / 4.0 - 0.5 * std::sqrt(t) + 0.5 * (x[0] + std::abs(y[0]))};
    };
    fx.spec.M1 = fx.spec.M2 = fx.spec.M3 = 0.5;
    fx.exact_solution = [](double t) { return Vector{worked_solution(t)}; };
    fx.exact_derivative = [](double t) { return Vector{worked_derivative(t)}; };
    fx.origin = Origin::Published;
    fx.note = "worked example; exact solution t^(1/2) + E_(1/2)(t^(1/2))";
    fx.rhs_text = {"sqrt(pi)/4 - t^(1/2)/2 + (x + abs(y))/2"};
    fx.exact_text = "t^(1/2) + ml(0.5, t^(1/2))";
    return fx;
}

Fixture worked_example_g_corrected() {
    Fixture fx;
    fx.name = "worked_example_g_corrected";
    fx.spec.alpha = 0.5;
    fx.spec.T = 0.5;
    fx.spec.x0 = {1.0 - kSqrtPi / 2.0};
    fx.spec.rhs = [](double t, std::span<const double> x, std::span<const double> y) {
        return Vector{kSqrtPi / 2.0 - 0.5 * std::sqrt(t) + 0.5 * (x[0] + std::abs(y[0]))};
    };
    fx.spec.M1 = fx.spec.M2 = fx.spec.M3 = 0.5;
    fx.exact_solution = [](double t) { return Vector{worked_solution(t) - kSqrtPi / 2.0}; };
    fx.exact_derivative = [](double t) { return Vector{worked_derivative(t)}; };
    fx.origin = Origin::Derived;
    fx.note = "companion problem, constant term shifted so that x* - sqrt(pi)/2 is exact";
    fx.rhs_text = {"sqrt(pi)/2 - t^(1/2)/2 + (x + abs(y))/2"};
    fx.exact_text = "t^(1/2) + ml(0.5, t^(1/2)) - sqrt(pi)/2";
    fx.published_k_eta = 1.1502;
    fx.published_eta_text = "sqrt(pi)/4 + t^(1/2)";
    return fx;
}

Fixture worked_example_g_printed() {
    Fixture fx;
    fx.name = "worked_example_g_printed";
    fx.spec.alpha = 0.5;
    fx.spec.T = 0.5;
    fx.spec.x0 = {1.0 - kSqrtPi / 2.0};
    fx.spec.rhs = [](double t, std::span<const double> x, std::span<const double> y) {
        return Vector{0.5 * std::sqrt(t) + 0.5 * (x[0] + std::abs(y[0]))};
    };
    fx.spec.M1 = fx.spec.M2 = fx.spec.M3 = 0.5;
    fx.origin = Origin::Published;
    fx.note = "companion problem as printed; no exact solution";
    fx.rhs_text = {"t^(1/2)/2 + (x + abs(y))/2"};
    fx.published_k_eta = 1.1502;
    fx.published_eta_text = "sqrt(pi)/4 + t^(1/2)";
    return fx;
}

Fixture linear_eigen_problem(double lambda, double alpha, double x0, double T) {
    Fixture fx;
    fx.name = "linear_eigen(lambda=" + short_number(lambda) + ",alpha=" + short_number(alpha) + ")";
    fx.spec.alpha = alpha;
    fx.spec.T = T;
    fx.spec.x0 = {x0};
    fx.spec.rhs = [lambda](double, std::span<const double> x, std::span<const double>) {
        return Vector{lambda * x[0]};
    };
    fx.spec.M1 = 0.0;
    fx.spec.M2 = lambda == 0.0 ? 1e-12 : std::abs(lambda);
    fx.spec.M3 = 1e-6;
    fx.exact_solution = [=](double t) {
        return Vector{x0 * mittag_leffler(alpha, lambda * std::pow(t, alpha))};
    };
    fx.exact_derivative = [=](double t) {
        return Vector{lambda * x0 * mittag_leffler(alpha, lambda * std::pow(t, alpha))};
    };
    fx.origin = Origin::Identity;
    fx.note = "E_alpha(lambda t^alpha) is an eigenfunction of the Caputo derivative";
    fx.rhs_text = {number(lambda) + " * x"};
    fx.exact_text = number(x0) + " * ml(" + number(alpha) + ", " + number(lambda) +
                    " * t^" + number(alpha) + ")";
    return fx;
}

FixtureValidation validate_fixture(const Fixture& fixture, std::size_t n) {
    FixtureValidation out;
    if (!fixture.has_exact()) {
        return out;
    }
    const ProblemSpec& spec = fixture.spec;
    const UniformGrid grid(spec.T, n);
    const std::size_t d = spec.dim();
    const GridFunction x = GridFunction::sample(grid, d, fixture.exact_solution);
    const GridFunction z = GridFunction::sample(grid, d, fixture.exact_derivative);
    const std::size_t first = n / 8;

    const Residuals r = residual_caputo(spec, x, z);
    out.caputo_residual = max_norm_from(r.caputo, first);
    out.algebraic_residual = max_norm_from(r.algebraic, first);

    const FracWeights weights(spec.alpha, grid);
    out.fixed_point_residual = max_norm_from(picard_step(spec, weights, z) - z, first);

    out.passed = out.caputo_residual <= kValidationBound &&
                 out.algebraic_residual <= kValidationBound &&
                 out.fixed_point_residual <= kValidationBound;
    return out;
}

std::string export_problem_section(const Fixture& fixture) {
    const ProblemSpec& s = fixture.spec;
    std::ostringstream os;
    os << "# " << fixture.name << ": " << fixture.note << "\n";
    os << "[problem]\n";
    os << "alpha = " << number(s.alpha) << "\n";
    os << "T = " << number(s.T) << "\n";
    os << "x0 = ";
    for (std::size_t i = 0; i < s.x0.size(); ++i) {
        os << (i ? ", " : "") << number(s.x0[i]);
    }
    os << "\n";
    for (const auto& r : fixture.rhs_text) {
        os << "rhs = " << r << "\n";
    }
    os << "M1 = " << number(s.M1) << "\n";
    os << "M2 = " << number(s.M2) << "\n";
    os << "M3 = " << number(s.M3) << "\n";
    if (fixture.exact_text) {
        os << "exact = " << *fixture.exact_text << "\n";
    }
    return os.str();
}

}  // namespace ifde::fixtures
