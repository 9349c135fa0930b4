#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "convexkit/dirichlet.hpp"
#include "convexkit/minimize.hpp"

namespace convexkit {

enum class Task { Solve, Project, CheckConvexity, Certify, Dirichlet, WeakDemo };

const char* to_string(Task t);

enum class InputErrorCode {
  Io = 10,
  Syntax = 11,
  MissingField = 12,
  UnknownField = 13,
  UnknownTag = 14,
  MalformedNumber = 15,
  BadValue = 16,
  DimensionMismatch = 17,
};

const char* to_string(InputErrorCode c);

/// Parse/validation failure; carries a distinct code and the offending field.
class InputError : public std::runtime_error {
 public:
  InputError(InputErrorCode code, std::string field, const std::string& message)
      : std::runtime_error("[" + std::string(to_string(code)) + "] " + field +
                           ": " + message),
        code_(code),
        field_(std::move(field)) {}

  InputErrorCode code() const { return code_; }
  const std::string& field() const { return field_; }

 private:
  InputErrorCode code_;
  std::string field_;
};

struct OutputSpec {
  std::string json_path;  // empty = do not write
  std::string csv_path;   // empty = do not write
};

/// Validated problem file. Field applicability depends on the task; parsing
/// rejects unknown fields and fields that do not belong to the chosen task.
struct ProblemFile {
  int version = 1;
  Task task = Task::Solve;
  std::uint64_t seed = 0;
  OutputSpec output;

  std::optional<Objective> objective;
  std::optional<ConvexSet> set;
  std::optional<Vector> x0;
  std::optional<Vector> point;
  SolveOptions options;
  int n_samples = 1000;
  int n_trials = 1000;
  int n_starts = 0;  // solve task: > 1 runs a multistart uniqueness check
  double margin = 0.25;
  int n_directions = 32;                 // coercivity probe
  std::vector<double> coercivity_radii;  // empty = default 10, 100, 1000
  double growth_floor = 1e-3;

  // dirichlet
  std::optional<Grid> grid;
  std::optional<LoadSpec> rhs;
  double cg_tol = 1e-10;

  // weak-demo
  int weak_dim = 100;
  std::vector<Vector> weak_tests;  // empty = default e1 + e2 probe vector
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile parse_problem(const std::string& path);

struct RunResult {
  int exit_code = 0;              // 0 success, 1 solver failure, 2 input error
  nlohmann::ordered_json report;  // what run_problem wrote (incl. timestamp)
};

/// Dispatches the task, writes the JSON report / CSV trace into out_dir when
/// the file requests them, and returns the report. Deterministic for a fixed
/// seed except for the report's top-level "timestamp" key.
RunResult run_problem(const ProblemFile& file, const std::string& out_dir);

}  // namespace convexkit
