#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifde/errors.hpp"
#include "ifde/rhsdsl.hpp"
#include "ifde/solver.hpp"

/// Run configuration files:
///
///     # comment
///     [problem]
///     alpha = 0.5
///     T = 0.5
///     x0 = 1                      # comma separated, one value per component
///     rhs = x + abs(y)            # repeated once per component
///     exact = ml(0.5, t^(1/2))    # optional, repeated once per component
///     M1 = 0.5
///     M2 = 0.5
///     M3 = 0.5
///
///     [solver]                    # every key optional
///     n = 1024
///     tol = 1e-10
///     max_iter = 500
///     theta = 2
///     force = false
///
///     [compare]                   # second problem on the same alpha and T
///     x0 = ...
///     rhs = ...
///     M1 = ...                    # M1..M3 default to the [problem] values
///     K_eta = 1.1502              # optional, sampled when absent
///     K_ml = 0.5                  # optional, sampled when absent
///
///     [family]
///     anchors = 0.5, 1.0          # ';' separates anchors, ',' components
///
/// Numeric values may be constant formulas such as 1 - sqrt(pi)/2.
namespace ifde::cli {

class ConfigError : public Error {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& message);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ProblemSection {
    ProblemSpec spec;
    std::vector<rhsdsl::Expr> rhs;
    std::vector<rhsdsl::Expr> exact;  // empty, or one per component
};

struct CompareSection {
    ProblemSection problem;
    std::optional<double> K_eta;
    std::optional<double> K_ml;
};

struct RunConfig {
    ProblemSection problem;
    SolverConfig solver;
    std::optional<CompareSection> compare;
    std::vector<Vector> anchors;  // empty when there is no [family] section
    bool has_family = false;
};

[[nodiscard]] RunConfig parse_run_config(std::string_view text, const std::string& source);
[[nodiscard]] RunConfig load_run_config(const std::string& path);

/// Evaluates every exact formula at t.
[[nodiscard]] Vector eval_exact(const ProblemSection& p, double t);

}  // namespace ifde::cli
