#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "convexkit/problem_io.hpp"

namespace {

struct CommonArgs {
  std::string input;
  std::string out_dir = ".";
  std::optional<std::int64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool input_required) {
  auto* input = cmd->add_option("--input", args.input,
                                "Problem file (JSON, version 1)");
  if (input_required) input->required();
  cmd->add_option("--out", args.out_dir,
                  "Directory for report/trace artifacts");
  cmd->add_option("--seed", args.seed,
                  "Override the problem file's seed");
}

int run_file(convexkit::Task expected, const CommonArgs& args) {
  using convexkit::InputError;
  using convexkit::InputErrorCode;
  try {
    convexkit::ProblemFile pf = convexkit::parse_problem(args.input);
    if (pf.task != expected) {
      throw InputError(InputErrorCode::BadValue, "task",
                       std::string("problem file task \"") +
                           convexkit::to_string(pf.task) +
                           "\" does not match the subcommand");
    }
    if (args.seed) pf.seed = static_cast<std::uint64_t>(*args.seed);
    convexkit::RunResult result = convexkit::run_problem(pf, args.out_dir);
    std::cout << result.report.dump(2) << '\n';
    return result.exit_code;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convexkit: projections, convexity checks, projected gradient "
               "descent and the Dirichlet energy application"};
  app.require_subcommand(1);

  CommonArgs solve_args, project_args, convexity_args, certify_args,
      dirichlet_args, weak_args;

  auto* solve = app.add_subcommand(
      "solve", "Minimize an objective, optionally over a feasible set");
  add_common(solve, solve_args, true);

  auto* project = app.add_subcommand(
      "project", "Project a point onto a set and certify the result");
  add_common(project, project_args, true);

  auto* convexity = app.add_subcommand(
      "check-convexity", "Sampled Jensen/epigraph/strictness/coercivity checks");
  add_common(convexity, convexity_args, true);

  auto* certify = app.add_subcommand(
      "certify", "First-order optimality certificate at a feasible point");
  add_common(certify, certify_args, true);

  auto* dirichlet = app.add_subcommand(
      "dirichlet",
      "Solve the discretized Poisson problem as energy minimization and "
      "cross-check against conjugate gradients");
  add_common(dirichlet, dirichlet_args, false);
  int d_dim = 1;
  int d_n = 15;
  double d_constant = 1.0;
  std::string d_manufactured;
  double d_cg_tol = 1e-10;
  std::string d_json, d_csv;
  dirichlet->add_option("--dim", d_dim, "Grid dimension (1 or 2)");
  dirichlet->add_option("--n", d_n, "Interior points per axis");
  dirichlet->add_option("--rhs-constant", d_constant, "Constant load value");
  dirichlet->add_option("--rhs-manufactured", d_manufactured,
                        "Manufactured load name (sin, sinsin)");
  dirichlet->add_option("--cg-tol", d_cg_tol, "CG relative residual tolerance");
  dirichlet->add_option("--json", d_json, "Write the JSON report here");
  dirichlet->add_option("--csv", d_csv, "Write the convergence trace here");

  auto* weak = app.add_subcommand(
      "weak-demo", "Basis-sequence weak-convergence demonstration");
  add_common(weak, weak_args, true);

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return run_file(convexkit::Task::Solve, solve_args);
  if (project->parsed()) {
    return run_file(convexkit::Task::Project, project_args);
  }
  if (convexity->parsed()) {
    return run_file(convexkit::Task::CheckConvexity, convexity_args);
  }
  if (certify->parsed()) {
    return run_file(convexkit::Task::Certify, certify_args);
  }
  if (weak->parsed()) return run_file(convexkit::Task::WeakDemo, weak_args);

  if (dirichlet->parsed()) {
    if (!dirichlet_args.input.empty()) {
      return run_file(convexkit::Task::Dirichlet, dirichlet_args);
    }
    try {
      convexkit::ProblemFile pf;
      pf.task = convexkit::Task::Dirichlet;
      pf.grid = convexkit::Grid(d_dim, d_n);
      if (!d_manufactured.empty()) {
        pf.rhs = convexkit::ManufacturedLoad{d_manufactured};
      } else {
        pf.rhs = convexkit::ConstantLoad{d_constant};
      }
      pf.cg_tol = d_cg_tol;
      pf.options.grad_tol = 1e-10;
      pf.options.max_iters = 500000;
      if (dirichlet_args.seed) {
        pf.seed = static_cast<std::uint64_t>(*dirichlet_args.seed);
      }
      pf.output.json_path = d_json;
      pf.output.csv_path = d_csv;
      convexkit::RunResult result =
          convexkit::run_problem(pf, dirichlet_args.out_dir);
      std::cout << result.report.dump(2) << '\n';
      return result.exit_code;
    } catch (const convexkit::InputError& e) {
      std::cerr << "input error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 2;
}
