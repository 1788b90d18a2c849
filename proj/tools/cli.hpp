#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ifde/solver.hpp"

namespace ifde::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,          // I/O problems and selftest failures
    kConfigError = 2,      // unreadable config, bad value, domain error
    kContraction = 3,      // smallness condition fails and force is off
    kNotConverged = 4,
    kBoundViolated = 5,
    kAnchorFailed = 6,
};

/// Entry point shared by the executable and the tests; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_check(const std::string& config_path, std::ostream& out);
int cmd_solve(const std::string& config_path, const std::string& csv_path, std::ostream& out);
int cmd_depend(const std::string& config_path, std::ostream& out);
int cmd_family(const std::string& config_path, const std::string& out_dir, std::ostream& out);
int cmd_mlf(const std::string& alpha, const std::string& z, std::ostream& out);
int cmd_selftest(std::ostream& out);

/// One row per node: t, x_1..x_d, z_1..z_d, alg_residual, caputo_residual.
[[nodiscard]] std::string solution_csv(const ProblemSpec& spec, const GridFunction& x,
                                       const GridFunction& z);

/// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);

/// Worker cap from IFDE_THREADS; 0 (use every core) when unset.
[[nodiscard]] std::size_t thread_limit();

}  // namespace ifde::cli
