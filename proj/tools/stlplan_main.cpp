#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stlplan/artifacts.hpp"
#include "stlplan/encoder.hpp"
#include "stlplan/errors.hpp"
#include "stlplan/kernels.hpp"
#include "stlplan/lp_format.hpp"
#include "stlplan/milp.hpp"
#include "stlplan/plot.hpp"
#include "stlplan/scenarios.hpp"
#include "stlplan/verifier.hpp"

namespace {

namespace fs = std::filesystem;
using namespace stlplan;

constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kInfeasible = 2;
constexpr int kInputError = 3;
constexpr int kSolverLimit = 4;

struct ScenarioArgs {
  std::string builtin;
  std::string path;
  std::string spec;  // inline formula override
  int segments = 0;
  int degree = 0;
  double rho_star = 0.0;
  double dt = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--builtin", builtin, "built-in mission name");
    app->add_option("--scenario", path, "scenario JSON file");
    app->add_option("--spec", spec, "inline formula overriding the scenario's");
    app->add_option("--segments", segments, "number of curve segments N");
    app->add_option("--degree", degree, "curve degree n");
    app->add_option("--rho-star", rho_star, "required minimum robustness");
    app->add_option("--dt", dt, "segment duration (sets N = round(T/dt))");
  }

  scenarios::Scenario load() const {
    if (builtin.empty() == path.empty())
      throw input_error("exactly one of --builtin or --scenario is required");
    scenarios::Scenario sc =
        builtin.empty() ? scenarios::load(path) : scenarios::builtin(builtin);
    if (!spec.empty()) {
      sc.formula_text = spec;
      sc.formula = stl::parse(spec);
    }
    if (segments > 0) sc.segments = segments;
    if (degree > 0) sc.degree = degree;
    if (rho_star > 0.0) sc.rho_star = rho_star;
    if (dt > 0.0) {
      const int n = static_cast<int>(std::llround(sc.horizon / dt));
      if (n < 1) throw input_error("--dt larger than the horizon");
      sc.segments = n;
    }
    scenarios::validate(sc);
    return sc;
  }
};

int run_external_solver(const milp::Model& model, const fs::path& out_dir,
                        milp::Solution& sol) {
  const char* tmpl = std::getenv("STLPLAN_SOLVER_CMD");
  if (!tmpl)
    throw input_error(
        "--solver external needs STLPLAN_SOLVER_CMD, e.g. 'mysolver {lp} {sol}'");
  const std::string lp = (out_dir / "model.lp").string();
  const std::string solfile = (out_dir / "external.sol").string();
  milp::export_lp_file(model, lp);
  std::string cmd = tmpl;
  auto replace = [&cmd](const std::string& what, const std::string& with) {
    for (std::size_t pos; (pos = cmd.find(what)) != std::string::npos;)
      cmd.replace(pos, what.size(), with);
  };
  replace("{lp}", lp);
  replace("{sol}", solfile);
  std::cerr << "running external solver: " << cmd << "\n";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    std::cerr << "external solver exited with status " << rc << "\n";
    return kSolverLimit;
  }
  sol = milp::import_solution_file(model, solfile);
  return kOk;
}

void print_summary(const scenarios::Scenario& sc, const encoder::EncodedModel& em,
                   const milp::Solution& sol, const encoder::RhoProfile& rho) {
  std::ostringstream os;
  os.precision(6);
  os << "mission        " << (sc.name.empty() ? "(unnamed)" : sc.name) << "\n";
  os << "segments       N=" << em.segments << "  degree " << em.degree << "  dt " << em.dt
     << "\n";
  os << "variables      " << em.model.count_category(milp::VarCategory::Segment)
     << " continuous + " << em.model.count_category(milp::VarCategory::Literal)
     << " literal, " << em.model.num_binaries() << " binary\n";
  os << "constraints    " << em.model.num_constraints() << "\n";
  os << "status         " << milp::to_string(sol.status) << "  objective " << sol.objective
     << "  gap " << sol.gap << "\n";
  os << "search         " << sol.nodes << " nodes, " << sol.pivots << " pivots, "
     << sol.wall_seconds << " s\n";
  os << "rho (min, max) (" << rho.min_rho() << ", " << rho.max_rho() << ")\n";
  std::cout << os.str();
}

// Re-solve with one top-level conjunct dropped at a time to name the
// blocking requirement.
void diagnose_infeasibility(const scenarios::Scenario& sc, const encoder::PlanConfig& cfg) {
  stl::FormulaPtr root = stl::to_nnf(sc.formula);
  if (root->kind != stl::Kind::And) {
    std::cout << "infeasible: the specification cannot be met as a whole\n";
    return;
  }
  std::cout << "infeasible; probing top-level requirements:\n";
  for (std::size_t i = 0; i < root->children.size(); ++i) {
    std::vector<stl::FormulaPtr> rest;
    for (std::size_t j = 0; j < root->children.size(); ++j)
      if (j != i) rest.push_back(root->children[j]);
    scenarios::Scenario relaxed = sc;
    relaxed.formula = stl::make_and(std::move(rest));
    relaxed.formula_text = stl::to_string(relaxed.formula);
    try {
      encoder::EncodedModel em = encoder::build(relaxed, cfg);
      milp::BnbOptions opts;
      opts.time_limit_seconds = 120;
      const milp::Solution sol = milp::branch_and_bound(em.model, opts);
      if (sol.status == milp::SolveStatus::Optimal ||
          sol.status == milp::SolveStatus::Feasible)
        std::cout << "  dropping '" << stl::to_string(root->children[i])
                  << "' restores feasibility\n";
    } catch (const input_error&) {
      // relaxation itself unbuildable; skip
    }
  }
}

int cmd_plan(const ScenarioArgs& sargs, const std::string& out_dir_s, const std::string& export_lp,
             bool no_solve, const std::string& solver, const std::string& solution_file,
             int resolution, int trials, unsigned seed, bool strict, double time_limit,
             long long node_limit) {
  scenarios::Scenario sc = sargs.load();
  encoder::PlanConfig cfg = encoder::PlanConfig::from_scenario(sc);
  const fs::path out_dir(out_dir_s);
  fs::create_directories(out_dir);

  encoder::EncodedModel em = encoder::build(sc, cfg);
  for (const std::string& w : em.warnings) std::cerr << "warning: " << w << "\n";
  if (!export_lp.empty()) {
    milp::export_lp_file(em.model, export_lp);
    std::cout << "model written to " << export_lp << "\n";
  }
  if (no_solve) {
    std::cout << "model: " << em.model.num_variables() << " variables ("
              << em.model.num_binaries() << " binary), " << em.model.num_constraints()
              << " constraints\n";
    return kOk;
  }

  milp::Solution sol;
  if (!solution_file.empty()) {
    sol = milp::import_solution_file(em.model, solution_file);
  } else if (solver == "external") {
    const int rc = run_external_solver(em.model, out_dir, sol);
    if (rc != kOk) return rc;
  } else if (solver == "builtin") {
    milp::BnbOptions opts;
    opts.time_limit_seconds = time_limit;
    opts.node_limit = node_limit;
    if (std::getenv("STLPLAN_DEBUG")) opts.log_interval = 200;
    sol = milp::branch_and_bound(em.model, opts);
  } else {
    throw input_error("--solver must be builtin or external");
  }

  if (sol.status == milp::SolveStatus::Infeasible) {
    diagnose_infeasibility(sc, cfg);
    return kInfeasible;
  }
  if (sol.status == milp::SolveStatus::Limit || sol.status == milp::SolveStatus::Unbounded) {
    std::cout << "solver stopped: " << milp::to_string(sol.status) << " without a solution\n";
    return kSolverLimit;
  }

  encoder::DecodedPlan plan = encoder::decode(em, sol.values);
  print_summary(sc, em, sol, plan.rho);

  verifier::VerifyOptions vopts;
  vopts.resolution = resolution;
  vopts.tube_trials = trials;
  vopts.seed = seed;
  vopts.strict = strict;
  const verifier::VerificationReport report = verifier::verify_trajectory(
      plan.trajectory, sc, plan.rho, vopts);

  artifacts::save_trajectory(plan.trajectory, (out_dir / "trajectory.json").string());
  artifacts::save_rho_profile(plan.rho, (out_dir / "rho_profile.csv").string());
  artifacts::save_samples_csv(plan.trajectory, &plan.rho, 100,
                              (out_dir / "samples.csv").string());
  artifacts::write_text_file((out_dir / "report.json").string(), report.to_json());
  if (sc.workspace.dim == 2)
    artifacts::write_text_file((out_dir / "plot.svg").string(),
                               plot::render_svg(sc, &plan.trajectory, &plan.rho));

  std::cout << "verify         " << (report.pass ? "PASS" : "FAIL") << " (margin "
            << report.stl_margin;
  if (trials > 0) std::cout << ", tube " << (trials - report.tube_failures) << "/" << trials;
  std::cout << ")\n";
  std::cout << "artifacts in   " << out_dir.string() << "\n";
  return report.pass ? kOk : kVerifyFail;
}

int cmd_verify(const ScenarioArgs& sargs, const std::string& trajectory_path,
               const std::string& rho_path, int resolution, int trials, unsigned seed,
               bool strict, const std::string& report_path) {
  scenarios::Scenario sc = sargs.load();
  bezier::Trajectory y = artifacts::load_trajectory(trajectory_path);
  encoder::RhoProfile rho = artifacts::load_rho_profile(rho_path);
  verifier::VerifyOptions vopts;
  vopts.resolution = resolution;
  vopts.tube_trials = trials;
  vopts.seed = seed;
  vopts.strict = strict;
  const verifier::VerificationReport report = verifier::verify_trajectory(y, sc, rho, vopts);
  for (const auto& c : report.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << c.value
              << "  threshold=" << c.threshold << "\n";
  if (!report_path.empty()) artifacts::write_text_file(report_path, report.to_json());
  return report.pass ? kOk : kVerifyFail;
}

int cmd_plot(const ScenarioArgs& sargs, const std::string& trajectory_path,
             const std::string& rho_path, const std::string& out) {
  scenarios::Scenario sc = sargs.load();
  std::optional<bezier::Trajectory> y;
  std::optional<encoder::RhoProfile> rho;
  if (!trajectory_path.empty()) y = artifacts::load_trajectory(trajectory_path);
  if (!rho_path.empty()) rho = artifacts::load_rho_profile(rho_path);
  artifacts::write_text_file(
      out, plot::render_svg(sc, y ? &*y : nullptr, rho ? &*rho : nullptr));
  std::cout << "plot written to " << out << "\n";
  return kOk;
}

int cmd_bench(const std::string& mission_filter, const std::string& out_dir_s, unsigned seed,
              int resolution, int trials, double time_limit) {
  const fs::path out_dir(out_dir_s);
  fs::create_directories(out_dir);
  std::ostringstream csv, md;
  csv << "mission,horizon,runtime_s,rho_min,rho_max,binaries,nodes,status,verified\n";
  md << "| mission | T (s) | runtime (s) | rho (min, max) | binaries | nodes | status |\n";
  md << "|---|---|---|---|---|---|---|\n";
  int failures = 0;
  for (const std::string& name : scenarios::builtin_names()) {
    if (!mission_filter.empty() && mission_filter != name) continue;
    std::cout << "bench: " << name << "\n";
    try {
      scenarios::Scenario sc = scenarios::builtin(name);
      encoder::PlanConfig cfg = encoder::PlanConfig::from_scenario(sc);
      const auto t0 = std::chrono::steady_clock::now();
      encoder::EncodedModel em = encoder::build(sc, cfg);
      milp::BnbOptions opts;
      opts.time_limit_seconds = time_limit;
      milp::Solution sol = milp::branch_and_bound(em.model, opts);
      const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (sol.status != milp::SolveStatus::Optimal && sol.status != milp::SolveStatus::Feasible) {
        csv << name << ',' << sc.horizon << ',' << runtime << ",,," << em.model.num_binaries()
            << ',' << sol.nodes << ',' << milp::to_string(sol.status) << ",\n";
        md << "| " << name << " | " << sc.horizon << " | " << runtime << " | - | "
           << em.model.num_binaries() << " | " << sol.nodes << " | "
           << milp::to_string(sol.status) << " |\n";
        ++failures;
        continue;
      }
      encoder::DecodedPlan plan = encoder::decode(em, sol.values);
      verifier::VerifyOptions vopts;
      vopts.resolution = resolution;
      vopts.tube_trials = trials;
      vopts.seed = seed;
      const verifier::VerificationReport rep =
          verifier::verify_trajectory(plan.trajectory, sc, plan.rho, vopts);
      std::ostringstream row;
      row.precision(4);
      row << name << ',' << sc.horizon << ',' << runtime << ',' << plan.rho.min_rho() << ','
          << plan.rho.max_rho() << ',' << em.model.num_binaries() << ',' << sol.nodes << ','
          << milp::to_string(sol.status) << ',' << (rep.pass ? "yes" : "no");
      csv << row.str() << "\n";
      std::ostringstream mrow;
      mrow.precision(4);
      mrow << "| " << name << " | " << sc.horizon << " | " << runtime << " | ("
           << plan.rho.min_rho() << ", " << plan.rho.max_rho() << ") | "
           << em.model.num_binaries() << " | " << sol.nodes << " | "
           << milp::to_string(sol.status) << (rep.pass ? "" : " (verify FAIL)") << " |";
      md << mrow.str() << "\n";
      std::cout << "  " << milp::to_string(sol.status) << " in " << runtime << " s, rho ("
                << plan.rho.min_rho() << ", " << plan.rho.max_rho() << ")"
                << (rep.pass ? "" : "  VERIFY FAIL") << "\n";
      if (!rep.pass) ++failures;
    } catch (const std::exception& e) {
      std::cout << "  error: " << e.what() << "\n";
      csv << name << ",,,,,,,error,\n";
      md << "| " << name << " | - | - | - | - | - | error |\n";
      ++failures;
    }
  }
  artifacts::write_text_file((out_dir / "bench.csv").string(), csv.str());
  artifacts::write_text_file((out_dir / "bench.md").string(), md.str());
  std::cout << "results in " << out_dir.string() << "\n";
  return failures == 0 ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise Bezier trajectory planning under signal temporal logic"};
  app.require_subcommand(1);

  std::string kernels = "auto";
  app.add_option("--kernels", kernels, "SIMD backend: auto, scalar, avx2, neon");

  // plan
  auto* plan = app.add_subcommand("plan", "synthesize a trajectory");
  ScenarioArgs plan_sc;
  plan_sc.attach(plan);
  std::string out_dir = "out", export_lp, solver = "builtin", solution_file;
  bool no_solve = false, strict = false;
  int resolution = 1000, trials = 0;
  unsigned seed = 42;
  double time_limit = -1;
  long long node_limit = -1;
  plan->add_option("--out-dir", out_dir, "artifact directory");
  plan->add_option("--export-lp", export_lp, "also write the model in LP text format");
  plan->add_flag("--no-solve", no_solve, "stop after building (and exporting) the model");
  plan->add_option("--solver", solver, "builtin | external");
  plan->add_option("--solution-file", solution_file, "use an externally produced solution");
  plan->add_option("--resolution", resolution, "verification samples per segment");
  plan->add_option("--trials", trials, "tube perturbation trials (0 = skip)");
  plan->add_option("--seed", seed, "random seed for all stochastic steps");
  plan->add_flag("--strict", strict, "treat verification warnings as failures");
  plan->add_option("--time-limit", time_limit, "solver time limit in seconds");
  plan->add_option("--node-limit", node_limit, "solver node limit");

  // verify
  auto* verify = app.add_subcommand("verify", "check a trajectory against a scenario");
  ScenarioArgs ver_sc;
  ver_sc.attach(verify);
  std::string v_traj, v_rho, v_report;
  int v_res = 1000, v_trials = 200;
  unsigned v_seed = 42;
  bool v_strict = false;
  verify->add_option("--trajectory", v_traj, "trajectory JSON")->required();
  verify->add_option("--rho", v_rho, "robustness profile CSV")->required();
  verify->add_option("--resolution", v_res, "samples per segment");
  verify->add_option("--trials", v_trials, "tube perturbation trials");
  verify->add_option("--seed", v_seed, "random seed");
  verify->add_flag("--strict", v_strict, "treat warnings as failures");
  verify->add_option("--report", v_report, "write the report JSON here");

  // plot
  auto* plotc = app.add_subcommand("plot", "render a scenario (and trajectory) as SVG");
  ScenarioArgs plot_sc;
  plot_sc.attach(plotc);
  std::string p_traj, p_rho, p_out = "plot.svg";
  plotc->add_option("--trajectory", p_traj, "trajectory JSON (optional)");
  plotc->add_option("--rho", p_rho, "robustness profile CSV (optional)");
  plotc->add_option("--out", p_out, "output SVG path");

  // bench
  auto* bench = app.add_subcommand("bench", "run the built-in missions");
  std::string b_mission, b_out = "bench_out";
  unsigned b_seed = 42;
  int b_res = 300, b_trials = 0;
  double b_time_limit = 600;
  bench->add_option("--mission", b_mission, "run a single mission");
  bench->add_option("--out-dir", b_out, "output directory");
  bench->add_option("--seed", b_seed, "random seed");
  bench->add_option("--resolution", b_res, "verification samples per segment");
  bench->add_option("--trials", b_trials, "tube trials per mission");
  bench->add_option("--time-limit", b_time_limit, "per-mission solver time limit (s)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kern::select(kernels)) {
      std::cerr << "kernel backend '" << kernels << "' unavailable on this machine\n";
      return kInputError;
    }
    if (plan->parsed())
      return cmd_plan(plan_sc, out_dir, export_lp, no_solve, solver, solution_file, resolution,
                      trials, seed, strict, time_limit, node_limit);
    if (verify->parsed())
      return cmd_verify(ver_sc, v_traj, v_rho, v_res, v_trials, v_seed, v_strict, v_report);
    if (plotc->parsed()) return cmd_plot(plot_sc, p_traj, p_rho, p_out);
    if (bench->parsed())
      return cmd_bench(b_mission, b_out, b_seed, b_res, b_trials, b_time_limit);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const syntax_error& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kInputError;
  } catch (const unsupported_error& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kInputError;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
