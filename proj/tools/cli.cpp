#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "ifde/dependence.hpp"
#include "ifde/errors.hpp"
#include "ifde/fixtures.hpp"
#include "ifde/specfun.hpp"

namespace ifde::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::size_t kGapSamples = 4096;

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void append_number(std::string& line, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    line.append(buf, res.ptr);
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

double chosen_theta(const SolverConfig& solver, double M2, double M3) {
    if (solver.theta_override) {
        return *solver.theta_override;
    }
    ProblemSpec probe;
    probe.M2 = M2;
    probe.M3 = M3;
    return select_theta(probe);
}

ContractionReport print_contraction(const ProblemSpec& spec, const SolverConfig& solver,
                                    std::ostream& out) {
    ContractionReport r = check_contraction(spec, solver.n);
    if (solver.theta_override) {
        r.theta = *solver.theta_override;
        r.q_bielecki = spec.M2 / r.theta + spec.M3;
    }
    out << "q_global = " << fixed(r.q_global, 4) << " " << verdict(r.contraction_ok) << "\n";
    out << "q_bielecki = " << fixed(r.q_bielecki, 4) << " " << verdict(r.q_bielecki < 1.0) << "\n";
    out << "theta = " << general(r.theta) << "\n";
    out << "K = " << general(r.K) << "\n";
    out << "R = " << (r.R ? general(*r.R) : std::string("n/a")) << "\n";
    out << "L = " << (r.L ? general(*r.L) : std::string("n/a")) << "\n";
    return r;
}

bool certified(const ContractionReport& r) { return r.contraction_ok && r.q_bielecki < 1.0; }

double max_exact_error(const ProblemSection& p, const GridFunction& x) {
    double worst = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const Vector ex = eval_exact(p, x.grid().node(k));
        double sq = 0.0;
        for (std::size_t c = 0; c < x.dim(); ++c) {
            const double d = x.at(k, c) - ex[c];
            sq += d * d;
        }
        worst = std::max(worst, std::sqrt(sq));
    }
    return worst;
}

void print_solve(const SolveReport& r, std::ostream& out) {
    out << "iterations = " << r.iterations << "\n";
    out << "final_step = " << general(r.step_norms.empty() ? 0.0 : r.step_norms.back()) << "\n";
    out << "a_posteriori_bound = " << general(r.a_posteriori_bound) << "\n";
    out << "converged = " << (r.converged ? "yes" : "no") << "\n";
    out << "certified = " << (r.certified ? "yes" : "no") << "\n";
}

std::vector<GridFunction> member_states(const SolutionFamily& family) {
    std::vector<GridFunction> xs;
    for (const auto& m : family.members) {
        xs.push_back(m.x);
    }
    return xs;
}

}  // namespace

std::string solution_csv(const ProblemSpec& spec, const GridFunction& x, const GridFunction& z) {
    const Residuals res = residual_caputo(spec, x, z);
    const std::size_t d = x.dim();
    std::string text = "t";
    for (std::size_t c = 1; c <= d; ++c) {
        text += ",x_" + std::to_string(c);
    }
    for (std::size_t c = 1; c <= d; ++c) {
        text += ",z_" + std::to_string(c);
    }
    text += ",alg_residual,caputo_residual\n";
    for (std::size_t k = 0; k < x.size(); ++k) {
        append_number(text, x.grid().node(k));
        for (double v : x.node(k)) {
            text += ',';
            append_number(text, v);
        }
        for (double v : z.node(k)) {
            text += ',';
            append_number(text, v);
        }
        text += ',';
        append_number(text, euclidean_norm(res.algebraic.node(k)));
        text += ',';
        append_number(text, euclidean_norm(res.caputo.node(k)));
        text += '\n';
    }
    return text;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        o.write(content.data(), static_cast<std::streamsize>(content.size()));
        o.close();
        if (!o) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::size_t thread_limit() {
    const char* env = std::getenv("IFDE_THREADS");
    if (!env || !*env) {
        return 0;
    }
    std::size_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || ptr != end || v == 0) {
        throw DomainError(std::string("IFDE_THREADS must be a positive integer, got '") + env + "'");
    }
    return v;
}

int cmd_check(const std::string& config_path, std::ostream& out) {
    const RunConfig cfg = load_run_config(config_path);
    const ContractionReport r = print_contraction(cfg.problem.spec, cfg.solver, out);
    return certified(r) ? kOk : kContraction;
}

int cmd_solve(const std::string& config_path, const std::string& csv_path, std::ostream& out) {
    const RunConfig cfg = load_run_config(config_path);
    const ProblemSpec& spec = cfg.problem.spec;
    const ContractionReport c = print_contraction(spec, cfg.solver, out);
    if (!certified(c) && !cfg.solver.force) {
        out << "contraction check failed; set force = true under [solver] to iterate anyway\n";
        return kContraction;
    }
    const SolveReport r = solve(spec, cfg.solver);
    print_solve(r, out);
    if (!cfg.problem.exact.empty()) {
        out << "max_abs_error = " << general(max_exact_error(cfg.problem, r.x)) << "\n";
    }
    write_file_atomic(csv_path, solution_csv(spec, r.x, r.z));
    return r.converged ? kOk : kNotConverged;
}

int cmd_depend(const std::string& config_path, std::ostream& out) {
    const RunConfig cfg = load_run_config(config_path);
    if (!cfg.compare) {
        throw ConfigError(config_path, 0, "depend needs a [compare] section");
    }
    ProblemPair pair{cfg.problem.spec, cfg.compare->problem.spec, 0.0, 0.0};
    const double theta = chosen_theta(cfg.solver, pair.M2(), pair.M3());
    const double q = pair.M2() / theta + pair.M3();
    out << "theta = " << general(theta) << "\n";
    out << "q_bielecki = " << fixed(q, 4) << " " << verdict(q < 1.0) << "\n";
    if (!(q < 1.0)) {
        return kContraction;
    }
    const ContractionReport cf = check_contraction(pair.f, cfg.solver.n);
    const ContractionReport cg = check_contraction(pair.g, cfg.solver.n);
    out << "q_global[f] = " << fixed(cf.q_global, 4) << " " << verdict(cf.contraction_ok) << "\n";
    out << "q_global[g] = " << fixed(cg.q_global, 4) << " " << verdict(cg.contraction_ok) << "\n";
    if (!(cf.contraction_ok && cg.contraction_ok) && !cfg.solver.force) {
        return kContraction;
    }
    if (cfg.compare->K_eta) {
        pair.K_eta = *cfg.compare->K_eta;
        out << "K_eta = " << general(pair.K_eta) << " (given)\n";
    } else {
        const double R = std::max(cf.R.value_or(1.0), cg.R.value_or(1.0));
        pair.K_eta = estimate_k_eta(pair, R, kGapSamples);
        out << "K_eta = " << general(pair.K_eta) << " (sampled estimate)\n";
    }
    const double bound = dependence_bound(pair, theta);

    SolverConfig solver = cfg.solver;
    solver.force = true;
    const SolveReport rf = solve(pair.f, solver);
    const SolveReport rg = solve(pair.g, solver);
    const double measured = measured_distance(rf.x, rg.x, pair.f.alpha, theta);
    out << "bound = " << fixed(bound, 6) << "\n";
    out << "measured = " << fixed(measured, 6) << "\n";
    out << "margin = " << fixed(bound - measured, 6) << "\n";
    if (!rf.converged || !rg.converged) {
        out << "result = NOT CONVERGED\n";
        return kNotConverged;
    }
    const bool ok = measured <= bound + 10.0 * cfg.solver.tol;
    out << "result = " << verdict(ok) << "\n";
    return ok ? kOk : kBoundViolated;
}

int cmd_family(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
    const RunConfig cfg = load_run_config(config_path);
    if (!cfg.has_family) {
        throw ConfigError(config_path, 0, "family needs a [family] section");
    }
    const ProblemSpec& spec = cfg.problem.spec;
    const ContractionReport c = print_contraction(spec, cfg.solver, out);
    if (!certified(c) && !cfg.solver.force) {
        return kContraction;
    }
    const std::size_t threads = thread_limit();
    SolutionFamily family;
    try {
        family = solve_family(spec, cfg.anchors, cfg.solver, threads);
    } catch (const AnchorConditionError& e) {
        out << "anchor condition FAIL: worst |f(0,x,x) - x| = " << general(e.worst_violation())
            << "\n";
        return kAnchorFailed;
    }
    out << "anchor condition PASS (radius " << general(family.anchor_radius) << ")\n";

    fs::create_directories(out_dir);
    bool all_converged = true;
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        const SolveReport& m = family.members[i];
        ProblemSpec pinned = spec;
        pinned.x0 = cfg.anchors[i];
        const std::string name = "family_" + std::to_string(i + 1) + ".csv";
        write_file_atomic((fs::path(out_dir) / name).string(), solution_csv(pinned, m.x, m.z));
        out << "member " << i + 1 << ": iterations = " << m.iterations
            << ", converged = " << (m.converged ? "yes" : "no") << ", file = " << name << "\n";
        all_converged = all_converged && m.converged;
    }
    const double theta = chosen_theta(cfg.solver, spec.M2, spec.M3);
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        for (std::size_t j = i + 1; j < family.members.size(); ++j) {
            out << "distance(" << i + 1 << "," << j + 1 << ") = "
                << general(measured_distance(family.members[i].x, family.members[j].x, spec.alpha,
                                             theta))
                << "\n";
        }
    }
    if (!all_converged) {
        return kNotConverged;
    }
    if (!cfg.compare) {
        return kOk;
    }

    ProblemPair pair{spec, cfg.compare->problem.spec, 0.0, 0.0};
    const double pair_theta = chosen_theta(cfg.solver, pair.M2(), pair.M3());
    SolutionFamily other;
    try {
        other = solve_family(pair.g, cfg.anchors, cfg.solver, threads);
    } catch (const AnchorConditionError& e) {
        out << "compare anchor condition FAIL: worst |g(0,x,x) - x| = "
            << general(e.worst_violation()) << "\n";
        return kAnchorFailed;
    }
    const double radius = std::max(family.anchor_radius, other.anchor_radius);
    if (cfg.compare->K_ml) {
        pair.K_ml = *cfg.compare->K_ml;
        out << "K_ml = " << general(pair.K_ml) << " (given)\n";
    } else {
        pair.K_ml = estimate_k_ml(pair, pair_theta, radius, kGapSamples);
        out << "K_ml = " << general(pair.K_ml) << " (sampled estimate)\n";
    }
    const double bound = family_hausdorff_bound(pair, pair_theta, radius);
    const double h = hausdorff_distance(member_states(family), member_states(other), spec.alpha,
                                        pair_theta);
    out << "hausdorff_bound = " << fixed(bound, 6) << "\n";
    out << "hausdorff = " << fixed(h, 6) << "\n";
    const bool ok = h <= bound + 10.0 * cfg.solver.tol;
    out << "result = " << verdict(ok) << "\n";
    return ok ? kOk : kBoundViolated;
}

int cmd_mlf(const std::string& alpha, const std::string& z, std::ostream& out) {
    auto parse = [](const std::string& s, const char* what) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw DomainError(std::string(what) + " is not a number: '" + s + "'");
        }
        return v;
    };
    const double value = mittag_leffler(parse(alpha, "alpha"), parse(z, "z"));
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    out << std::string(buf, res.ptr) << "\n";
    return kOk;
}

int cmd_selftest(std::ostream& out) {
    using namespace fixtures;
    const std::vector<Fixture> all{worked_example_f(), worked_example_g_corrected(),
                                   linear_eigen_problem(0.5, 0.5, 1.0, 0.5),
                                   linear_eigen_problem(-1.0, 0.3, 2.0, 1.0)};
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %12s %12s %12s  %s\n", "fixture", "caputo",
                  "algebraic", "fixed_point", "result");
    out << line;
    bool ok = true;
    for (const Fixture& fx : all) {
        const FixtureValidation v = validate_fixture(fx);
        std::snprintf(line, sizeof line, "%-28s %12.3e %12.3e %12.3e  %s\n", fx.name.c_str(),
                      v.caputo_residual, v.algebraic_residual, v.fixed_point_residual,
                      verdict(v.passed));
        out << line;
        ok = ok && v.passed;
    }
    return ok ? kOk : kFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Implicit Caputo fractional differential equation solver"};
    app.require_subcommand(1);
    std::string config, target, alpha, z;

    auto* check = app.add_subcommand("check", "Check the contraction condition");
    check->add_option("config", config, "Problem config file")->required();
    auto* solve_cmd = app.add_subcommand("solve", "Solve and write a CSV");
    solve_cmd->add_option("config", config, "Problem config file")->required();
    solve_cmd->add_option("--out", target, "Output CSV path")->required();
    auto* depend = app.add_subcommand("depend", "Compare a problem with its [compare] problem");
    depend->add_option("config", config, "Problem config file")->required();
    auto* family = app.add_subcommand("family", "Solve the anchored family");
    family->add_option("config", config, "Problem config file")->required();
    family->add_option("--out-dir", target, "Directory for family_<i>.csv")->required();
    auto* mlf = app.add_subcommand("mlf", "Print E_alpha(z)");
    mlf->add_option("alpha", alpha, "Order in (0,1]")->required();
    mlf->add_option("z", z, "Argument in [-5,200]")->required();
    auto* selftest = app.add_subcommand("selftest", "Validate the built-in fixtures");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*check) return cmd_check(config, out);
        if (*solve_cmd) return cmd_solve(config, target, out);
        if (*depend) return cmd_depend(config, out);
        if (*family) return cmd_family(config, target, out);
        if (*mlf) return cmd_mlf(alpha, z, out);
        if (*selftest) return cmd_selftest(out);
    } catch (const AnchorConditionError& e) {
        err << "error: " << e.what() << "\n";
        return kAnchorFailed;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kContraction;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        // Domain, evaluation, grid and series errors all trace back to inputs.
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace ifde::cli
