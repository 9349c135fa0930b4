#include "convexkit/problem_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace convexkit {

namespace {

using json = nlohmann::ordered_json;

const char* to_cstr(Task t) {
  switch (t) {
    case Task::Solve: return "solve";
    case Task::Project: return "project";
    case Task::CheckConvexity: return "check-convexity";
    case Task::Certify: return "certify";
    case Task::Dirichlet: return "dirichlet";
    case Task::WeakDemo: return "weak-demo";
  }
  return "?";
}

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

[[noreturn]] void fail(InputErrorCode code, const std::string& field,
                       const std::string& message) {
  throw InputError(code, field, message);
}

const json& require_field(const json& obj, const std::string& path,
                          const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    fail(InputErrorCode::MissingField, join_path(path, key),
         "required field is missing");
  }
  return *it;
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      fail(InputErrorCode::UnknownField, join_path(path, item.key()),
           "unknown field");
    }
  }
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) {
    fail(InputErrorCode::MalformedNumber, path, "expected a number");
  }
  return node.get<double>();
}

long as_integer(const json& node, const std::string& path) {
  if (!node.is_number_integer()) {
    fail(InputErrorCode::MalformedNumber, path, "expected an integer");
  }
  return node.get<long>();
}

std::string as_string(const json& node, const std::string& path) {
  if (!node.is_string()) {
    fail(InputErrorCode::BadValue, path, "expected a string");
  }
  return node.get<std::string>();
}

Vector as_vector(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) {
    fail(InputErrorCode::BadValue, path, "expected a non-empty numeric array");
  }
  Vector v(static_cast<Eigen::Index>(node.size()));
  Eigen::Index i = 0;
  for (const auto& entry : node) {
    v[i++] = as_number(entry, path + "[" + std::to_string(i - 1) + "]");
  }
  if (!v.allFinite()) {
    fail(InputErrorCode::BadValue, path, "entries must be finite");
  }
  return v;
}

ConvexityClass parse_convexity_class(const json& node, const std::string& path) {
  const std::string tag = as_string(node, path);
  if (tag == "convex") return ConvexityClass::Convex;
  if (tag == "strictly_convex") return ConvexityClass::StrictlyConvex;
  if (tag == "nonconvex_unknown") return ConvexityClass::NonconvexUnknown;
  fail(InputErrorCode::UnknownTag, path, "unknown convexity class \"" + tag +
                                             "\"");
}

Eigen::MatrixXd parse_matrix(const json& node, const std::string& path,
                             Eigen::Index dim) {
  if (node.is_string()) {
    if (node.get<std::string>() == "identity") {
      return Eigen::MatrixXd::Identity(dim, dim);
    }
    fail(InputErrorCode::UnknownTag, path,
         "unknown matrix shorthand \"" + node.get<std::string>() + "\"");
  }
  if (node.is_object()) {
    reject_unknown(node, path, {"diagonal"});
    const Vector d = as_vector(require_field(node, path, "diagonal"),
                               join_path(path, "diagonal"));
    if (d.size() != dim) {
      fail(InputErrorCode::DimensionMismatch, join_path(path, "diagonal"),
           "diagonal length does not match b");
    }
    return Eigen::MatrixXd(d.asDiagonal());
  }
  if (!node.is_array()) {
    fail(InputErrorCode::BadValue, path,
         "expected \"identity\", {\"diagonal\": [...]}, or a dense row-major "
         "matrix");
  }
  const auto rows = static_cast<Eigen::Index>(node.size());
  if (rows != dim) {
    fail(InputErrorCode::DimensionMismatch, path,
         "matrix row count does not match b");
  }
  Eigen::MatrixXd A(rows, rows);
  Eigen::Index i = 0;
  for (const auto& row : node) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      fail(InputErrorCode::DimensionMismatch, row_path,
           "matrix must be square");
    }
    Eigen::Index j = 0;
    for (const auto& entry : row) {
      A(i, j++) = as_number(entry, row_path + "[" + std::to_string(j - 1) + "]");
    }
    ++i;
  }
  return A;
}

Objective parse_objective(const json& node, const std::string& path) {
  if (!node.is_object()) {
    fail(InputErrorCode::BadValue, path, "expected an object");
  }
  const std::string form = as_string(require_field(node, path, "form"),
                                     join_path(path, "form"));
  try {
    if (form == "quadratic") {
      reject_unknown(node, path, {"form", "matrix", "b", "declared_class"});
      const Vector b = as_vector(require_field(node, path, "b"),
                                 join_path(path, "b"));
      Eigen::MatrixXd A = parse_matrix(require_field(node, path, "matrix"),
                                       join_path(path, "matrix"), b.size());
      ConvexityClass declared = ConvexityClass::Convex;
      if (auto it = node.find("declared_class"); it != node.end()) {
        declared = parse_convexity_class(*it, join_path(path, "declared_class"));
      }
      return Objective::quadratic(std::move(A), b, declared);
    }
    if (form == "cosh_sum") {
      reject_unknown(node, path, {"form", "dim"});
      return Objective::cosh_sum(
          as_integer(require_field(node, path, "dim"), join_path(path, "dim")));
    }
    if (form == "linear") {
      reject_unknown(node, path, {"form", "c"});
      return Objective::linear(
          as_vector(require_field(node, path, "c"), join_path(path, "c")));
    }
    if (form == "norm_squared") {
      reject_unknown(node, path, {"form", "center"});
      return Objective::norm_squared(as_vector(
          require_field(node, path, "center"), join_path(path, "center")));
    }
  } catch (const InputError&) {
    throw;
  } catch (const DimensionError& e) {
    fail(InputErrorCode::DimensionMismatch, path, e.what());
  } catch (const std::invalid_argument& e) {
    fail(InputErrorCode::BadValue, path, e.what());
  }
  fail(InputErrorCode::UnknownTag, join_path(path, "form"),
       "unknown objective form \"" + form + "\"");
}

ConvexSet parse_set(const json& node, const std::string& path) {
  if (!node.is_object()) {
    fail(InputErrorCode::BadValue, path, "expected an object");
  }
  const std::string shape = as_string(require_field(node, path, "shape"),
                                      join_path(path, "shape"));
  try {
    if (shape == "box") {
      reject_unknown(node, path, {"shape", "lo", "hi"});
      return ConvexSet(Box{
          as_vector(require_field(node, path, "lo"), join_path(path, "lo")),
          as_vector(require_field(node, path, "hi"), join_path(path, "hi"))});
    }
    if (shape == "ball") {
      reject_unknown(node, path, {"shape", "center", "radius"});
      return ConvexSet(Ball{as_vector(require_field(node, path, "center"),
                                      join_path(path, "center")),
                            as_number(require_field(node, path, "radius"),
                                      join_path(path, "radius"))});
    }
    if (shape == "halfspace" || shape == "hyperplane") {
      reject_unknown(node, path, {"shape", "normal", "offset"});
      Vector normal = as_vector(require_field(node, path, "normal"),
                                join_path(path, "normal"));
      const double offset = as_number(require_field(node, path, "offset"),
                                      join_path(path, "offset"));
      if (shape == "halfspace") return ConvexSet(Halfspace{normal, offset});
      return ConvexSet(Hyperplane{normal, offset});
    }
    if (shape == "simplex") {
      reject_unknown(node, path, {"shape", "dim"});
      return ConvexSet(Simplex{as_integer(require_field(node, path, "dim"),
                                          join_path(path, "dim"))});
    }
    if (shape == "whole_space") {
      reject_unknown(node, path, {"shape", "dim"});
      return ConvexSet(WholeSpace{as_integer(require_field(node, path, "dim"),
                                             join_path(path, "dim"))});
    }
  } catch (const InputError&) {
    throw;
  } catch (const DimensionError& e) {
    fail(InputErrorCode::DimensionMismatch, path, e.what());
  } catch (const std::invalid_argument& e) {
    fail(InputErrorCode::BadValue, path, e.what());
  }
  fail(InputErrorCode::UnknownTag, join_path(path, "shape"),
       "unknown set shape \"" + shape + "\"");
}

SolveOptions parse_options(const json& node, const std::string& path) {
  if (!node.is_object()) {
    fail(InputErrorCode::BadValue, path, "expected an object");
  }
  reject_unknown(node, path,
                 {"step0", "armijo_c", "backtrack", "step_growth", "grad_tol",
                  "fixedpoint_tol", "max_iters", "record_every",
                  "unbounded_floor", "max_backtracks"});
  SolveOptions opts;
  auto number = [&](const char* key, double* out) {
    if (auto it = node.find(key); it != node.end()) {
      *out = as_number(*it, join_path(path, key));
    }
  };
  auto integer = [&](const char* key, int* out) {
    if (auto it = node.find(key); it != node.end()) {
      *out = static_cast<int>(as_integer(*it, join_path(path, key)));
    }
  };
  number("step0", &opts.step0);
  number("armijo_c", &opts.armijo_c);
  number("backtrack", &opts.backtrack);
  number("step_growth", &opts.step_growth);
  number("grad_tol", &opts.grad_tol);
  number("fixedpoint_tol", &opts.fixedpoint_tol);
  number("unbounded_floor", &opts.unbounded_floor);
  integer("max_iters", &opts.max_iters);
  integer("record_every", &opts.record_every);
  integer("max_backtracks", &opts.max_backtracks);
  try {
    opts.validate();
  } catch (const std::invalid_argument& e) {
    fail(InputErrorCode::BadValue, path, e.what());
  }
  return opts;
}

LoadSpec parse_rhs(const json& node, const std::string& path) {
  if (!node.is_object()) {
    fail(InputErrorCode::BadValue, path, "expected an object");
  }
  const std::string kind = as_string(require_field(node, path, "kind"),
                                     join_path(path, "kind"));
  if (kind == "constant") {
    reject_unknown(node, path, {"kind", "value"});
    return ConstantLoad{as_number(require_field(node, path, "value"),
                                  join_path(path, "value"))};
  }
  if (kind == "samples") {
    reject_unknown(node, path, {"kind", "values"});
    return SampledLoad{as_vector(require_field(node, path, "values"),
                                 join_path(path, "values"))};
  }
  if (kind == "manufactured") {
    reject_unknown(node, path, {"kind", "name"});
    return ManufacturedLoad{as_string(require_field(node, path, "name"),
                                      join_path(path, "name"))};
  }
  fail(InputErrorCode::UnknownTag, join_path(path, "kind"),
       "unknown rhs kind \"" + kind + "\"");
}

Task parse_task(const json& node, const std::string& path) {
  const std::string tag = as_string(node, path);
  if (tag == "solve") return Task::Solve;
  if (tag == "project") return Task::Project;
  if (tag == "check-convexity") return Task::CheckConvexity;
  if (tag == "certify") return Task::Certify;
  if (tag == "dirichlet") return Task::Dirichlet;
  if (tag == "weak-demo") return Task::WeakDemo;
  fail(InputErrorCode::UnknownTag, path, "unknown task \"" + tag + "\"");
}

std::set<std::string> allowed_fields(Task task) {
  std::set<std::string> common = {"version", "task", "seed", "output"};
  switch (task) {
    case Task::Solve:
      common.insert({"objective", "set", "x0", "options", "n_starts",
                     "n_samples"});
      break;
    case Task::Project:
      common.insert({"set", "point", "n_samples"});
      break;
    case Task::CheckConvexity:
      common.insert({"objective", "set", "n_trials", "margin", "radii",
                     "growth_floor", "n_directions"});
      break;
    case Task::Certify:
      common.insert({"objective", "set", "point", "n_samples"});
      break;
    case Task::Dirichlet:
      common.insert({"grid", "rhs", "options", "cg_tol"});
      break;
    case Task::WeakDemo:
      common.insert({"dim", "tests"});
      break;
  }
  return common;
}

}  // namespace

const char* to_string(Task t) { return to_cstr(t); }

const char* to_string(InputErrorCode c) {
  switch (c) {
    case InputErrorCode::Io: return "E10-io";
    case InputErrorCode::Syntax: return "E11-syntax";
    case InputErrorCode::MissingField: return "E12-missing-field";
    case InputErrorCode::UnknownField: return "E13-unknown-field";
    case InputErrorCode::UnknownTag: return "E14-unknown-tag";
    case InputErrorCode::MalformedNumber: return "E15-malformed-number";
    case InputErrorCode::BadValue: return "E16-bad-value";
    case InputErrorCode::DimensionMismatch: return "E17-dimension-mismatch";
  }
  return "?";
}

ProblemFile parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(InputErrorCode::Syntax, "<document>", e.what());
  }
  if (!doc.is_object()) {
    fail(InputErrorCode::BadValue, "<document>",
         "problem file must be a JSON object");
  }

  ProblemFile pf;
  pf.version = static_cast<int>(
      as_integer(require_field(doc, "", "version"), "version"));
  if (pf.version != 1) {
    fail(InputErrorCode::BadValue, "version", "only version 1 is supported");
  }
  pf.task = parse_task(require_field(doc, "", "task"), "task");
  reject_unknown(doc, "", allowed_fields(pf.task));

  if (auto it = doc.find("seed"); it != doc.end()) {
    const long seed = as_integer(*it, "seed");
    if (seed < 0) fail(InputErrorCode::BadValue, "seed", "seed must be >= 0");
    pf.seed = static_cast<std::uint64_t>(seed);
  }
  if (auto it = doc.find("output"); it != doc.end()) {
    reject_unknown(*it, "output", {"json_path", "csv_path"});
    if (auto jt = it->find("json_path"); jt != it->end()) {
      pf.output.json_path = as_string(*jt, "output.json_path");
    }
    if (auto ct = it->find("csv_path"); ct != it->end()) {
      pf.output.csv_path = as_string(*ct, "output.csv_path");
    }
  }
  if (auto it = doc.find("options"); it != doc.end()) {
    pf.options = parse_options(*it, "options");
  }
  if (auto it = doc.find("objective"); it != doc.end()) {
    pf.objective = parse_objective(*it, "objective");
  }
  if (auto it = doc.find("set"); it != doc.end()) {
    pf.set = parse_set(*it, "set");
  }
  if (auto it = doc.find("x0"); it != doc.end()) {
    pf.x0 = as_vector(*it, "x0");
  }
  if (auto it = doc.find("point"); it != doc.end()) {
    pf.point = as_vector(*it, "point");
  }
  if (auto it = doc.find("n_samples"); it != doc.end()) {
    pf.n_samples = static_cast<int>(as_integer(*it, "n_samples"));
    if (pf.n_samples < 1) {
      fail(InputErrorCode::BadValue, "n_samples", "must be >= 1");
    }
  }
  if (auto it = doc.find("n_trials"); it != doc.end()) {
    pf.n_trials = static_cast<int>(as_integer(*it, "n_trials"));
    if (pf.n_trials < 1) {
      fail(InputErrorCode::BadValue, "n_trials", "must be >= 1");
    }
  }
  if (auto it = doc.find("n_starts"); it != doc.end()) {
    pf.n_starts = static_cast<int>(as_integer(*it, "n_starts"));
    if (pf.n_starts < 0) {
      fail(InputErrorCode::BadValue, "n_starts", "must be >= 0");
    }
  }
  if (auto it = doc.find("margin"); it != doc.end()) {
    pf.margin = as_number(*it, "margin");
    if (!(pf.margin > 0.0)) {
      fail(InputErrorCode::BadValue, "margin", "must be > 0");
    }
  }
  if (auto it = doc.find("cg_tol"); it != doc.end()) {
    pf.cg_tol = as_number(*it, "cg_tol");
    if (!(pf.cg_tol > 0.0)) {
      fail(InputErrorCode::BadValue, "cg_tol", "must be > 0");
    }
  }
  if (auto it = doc.find("n_directions"); it != doc.end()) {
    pf.n_directions = static_cast<int>(as_integer(*it, "n_directions"));
    if (pf.n_directions < 1) {
      fail(InputErrorCode::BadValue, "n_directions", "must be >= 1");
    }
  }
  if (auto it = doc.find("radii"); it != doc.end()) {
    if (!it->is_array() || it->size() < 3) {
      fail(InputErrorCode::BadValue, "radii",
           "expected at least 3 increasing radii");
    }
    std::size_t j = 0;
    for (const auto& entry : *it) {
      pf.coercivity_radii.push_back(
          as_number(entry, "radii[" + std::to_string(j++) + "]"));
    }
    if (!std::is_sorted(pf.coercivity_radii.begin(),
                        pf.coercivity_radii.end()) ||
        std::adjacent_find(pf.coercivity_radii.begin(),
                           pf.coercivity_radii.end()) !=
            pf.coercivity_radii.end()) {
      fail(InputErrorCode::BadValue, "radii", "must be strictly increasing");
    }
  }
  if (auto it = doc.find("growth_floor"); it != doc.end()) {
    pf.growth_floor = as_number(*it, "growth_floor");
  }

  switch (pf.task) {
    case Task::Solve: {
      if (!pf.objective) {
        fail(InputErrorCode::MissingField, "objective",
             "solve requires an objective");
      }
      const Eigen::Index dim = pf.objective->dim();
      if (pf.set && pf.set->dim() != dim) {
        fail(InputErrorCode::DimensionMismatch, "set",
             "set dimension does not match the objective");
      }
      if (pf.x0 && pf.x0->size() != dim) {
        fail(InputErrorCode::DimensionMismatch, "x0",
             "x0 dimension does not match the objective");
      }
      break;
    }
    case Task::Project: {
      if (!pf.set) {
        fail(InputErrorCode::MissingField, "set", "project requires a set");
      }
      if (!pf.point) {
        fail(InputErrorCode::MissingField, "point",
             "project requires a point");
      }
      if (pf.point->size() != pf.set->dim()) {
        fail(InputErrorCode::DimensionMismatch, "point",
             "point dimension does not match the set");
      }
      break;
    }
    case Task::CheckConvexity: {
      if (!pf.objective) {
        fail(InputErrorCode::MissingField, "objective",
             "check-convexity requires an objective");
      }
      if (!pf.set) {
        fail(InputErrorCode::MissingField, "set",
             "check-convexity requires a domain set");
      }
      if (pf.objective->dim() != pf.set->dim()) {
        fail(InputErrorCode::DimensionMismatch, "set",
             "domain dimension does not match the objective");
      }
      break;
    }
    case Task::Certify: {
      if (!pf.objective) {
        fail(InputErrorCode::MissingField, "objective",
             "certify requires an objective");
      }
      if (!pf.set) {
        fail(InputErrorCode::MissingField, "set", "certify requires a set");
      }
      if (!pf.point) {
        fail(InputErrorCode::MissingField, "point",
             "certify requires a point");
      }
      if (pf.objective->dim() != pf.set->dim() ||
          pf.point->size() != pf.set->dim()) {
        fail(InputErrorCode::DimensionMismatch, "point",
             "objective, set and point dimensions must agree");
      }
      break;
    }
    case Task::Dirichlet: {
      const json& grid_node = require_field(doc, "", "grid");
      reject_unknown(grid_node, "grid", {"dim", "n_interior"});
      const long gdim = as_integer(require_field(grid_node, "grid", "dim"),
                                   "grid.dim");
      const long gn = as_integer(
          require_field(grid_node, "grid", "n_interior"), "grid.n_interior");
      try {
        pf.grid = Grid(static_cast<int>(gdim), static_cast<int>(gn));
      } catch (const std::invalid_argument& e) {
        fail(InputErrorCode::BadValue, "grid", e.what());
      }
      pf.rhs = parse_rhs(require_field(doc, "", "rhs"), "rhs");
      if (const auto* samples = std::get_if<SampledLoad>(&*pf.rhs)) {
        if (samples->values.size() != pf.grid->unknowns()) {
          fail(InputErrorCode::DimensionMismatch, "rhs.values",
               "rhs sample count does not match the grid unknowns");
        }
      }
      break;
    }
    case Task::WeakDemo: {
      if (auto it = doc.find("dim"); it != doc.end()) {
        pf.weak_dim = static_cast<int>(as_integer(*it, "dim"));
        if (pf.weak_dim < 1) {
          fail(InputErrorCode::BadValue, "dim", "must be >= 1");
        }
      }
      if (auto it = doc.find("tests"); it != doc.end()) {
        if (!it->is_array() || it->empty()) {
          fail(InputErrorCode::BadValue, "tests",
               "expected a non-empty array of vectors");
        }
        std::size_t j = 0;
        for (const auto& entry : *it) {
          Vector u = as_vector(entry, "tests[" + std::to_string(j) + "]");
          if (u.size() != pf.weak_dim) {
            fail(InputErrorCode::DimensionMismatch,
                 "tests[" + std::to_string(j) + "]",
                 "test vector dimension does not match dim");
          }
          pf.weak_tests.push_back(std::move(u));
          ++j;
        }
      }
      break;
    }
  }
  return pf;
}

ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(InputErrorCode::Io, path, "cannot open problem file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_text(buffer.str());
}

namespace {

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json certificate_to_json(const OptimalityCertificate& cert) {
  json c;
  c["grad_norm"] = cert.grad_norm;
  c["min_sampled_directional"] = cert.min_sampled_directional;
  c["vi_residual"] = cert.vi_residual;
  c["verdict"] = to_string(cert.verdict);
  return c;
}

json solve_report_to_json(const SolveReport& report) {
  json r;
  r["x_star"] = vector_to_json(report.x_star);
  r["f_star"] = report.f_star;
  r["termination"] = to_string(report.termination);
  r["iterations"] = report.iterations;
  return r;
}

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_trace_csv(const std::string& path, const SolveReport& report) {
  std::ofstream out(path);
  if (!out) {
    fail(InputErrorCode::Io, path, "cannot open trace file for writing");
  }
  out << "iter,f_value,residual\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    out << report.recorded_iters[i] << ',' << report.values[i] << ','
        << report.residuals[i] << '\n';
  }
}

ConvexSet default_whole_space(Eigen::Index dim) {
  return ConvexSet(WholeSpace{dim});
}

}  // namespace

RunResult run_problem(const ProblemFile& pf, const std::string& out_dir) {
  RunResult result;
  json& report = result.report;
  report["version"] = 1;
  report["task"] = to_string(pf.task);
  report["seed"] = pf.seed;

  SolveOptions opts = pf.options;
  opts.seed = pf.seed;

  std::optional<SolveReport> trace_source;

  try {
    switch (pf.task) {
      case Task::Solve: {
        const Objective& f = *pf.objective;
        const ConvexSet W = pf.set ? *pf.set : default_whole_space(f.dim());
        const bool constrained = !std::holds_alternative<WholeSpace>(W.shape());
        const Vector x0 = pf.x0 ? *pf.x0 : Vector(Vector::Zero(f.dim()));

        if (pf.n_starts >= 2) {
          MultistartReport ms =
              multistart_uniqueness(f, W, pf.n_starts, opts, pf.seed);
          report["multistart"] = json::object();
          report["multistart"]["n_starts"] = pf.n_starts;
          report["multistart"]["max_pairwise_distance"] =
              ms.max_pairwise_distance;
          report["multistart"]["pass"] = ms.pass;
          json runs = json::array();
          bool all_converged = true;
          for (const MultistartRun& run : ms.runs) {
            json r;
            r["start"] = vector_to_json(run.start);
            r["ok"] = run.ok;
            if (run.ok) {
              r.update(solve_report_to_json(run.report));
              if (run.report.termination != Termination::GradTol &&
                  run.report.termination != Termination::FixedPointTol) {
                all_converged = false;
              }
            } else {
              r["error"] = run.error;
              all_converged = false;
            }
            runs.push_back(std::move(r));
          }
          report["multistart"]["runs"] = std::move(runs);
          result.exit_code = all_converged ? 0 : 1;
          break;
        }

        SolveReport solve = constrained ? solve_projected(f, W, x0, opts)
                                        : solve_unconstrained(f, x0, opts);
        report.update(solve_report_to_json(solve));
        trace_source = solve;

        bool failed = false;
        if (solve.termination == Termination::Unbounded) {
          failed = true;
        } else {
          OptimalityCertificate cert =
              certify(f, W, solve.x_star, pf.n_samples, pf.seed);
          report["certificate"] = certificate_to_json(cert);
          if (solve.termination == Termination::MaxIters &&
              cert.verdict == OptimalityVerdict::Rejected) {
            failed = true;
          }
        }
        result.exit_code = failed ? 1 : 0;
        break;
      }

      case Task::Project: {
        const ConvexSet& W = *pf.set;
        const Vector& x = *pf.point;
        ProjectionCertificate cert =
            vi_certificate(W, x, pf.n_samples, pf.seed);
        report["point"] = vector_to_json(cert.point);
        report["projection"] = vector_to_json(cert.projection);
        report["distance"] = (cert.point - cert.projection).norm();
        report["member"] = contains(W, x, 0.0);
        report["max_vi_violation"] = cert.max_vi_violation;
        report["samples_used"] = cert.samples_used;
        report["vi_certificate_valid"] = cert.valid();
        result.exit_code = 0;
        break;
      }

      case Task::CheckConvexity: {
        const Objective& f = *pf.objective;
        const ConvexSet& domain = *pf.set;
        ConvexityReport jensen = jensen_check(f, domain, pf.n_trials, pf.seed);
        ConvexityReport epi = epigraph_check(f, domain, pf.n_trials, pf.seed);
        StrictnessResult strict =
            strictness_check(f, domain, pf.n_trials, pf.margin, pf.seed);

        report["declared_class"] = to_string(f.declared_class());
        report["jensen_max_violation"] = jensen.max_violation;
        report["epigraph_max_violation"] = epi.max_violation;
        report["strictness_pass"] = strict.passed;
        report["strictness_modulus"] = strict.modulus;
        if (strict.witness) {
          json w;
          w["x"] = vector_to_json(strict.witness->x);
          w["y"] = vector_to_json(strict.witness->y);
          w["beta"] = strict.witness->beta;
          w["slack"] = strict.witness->violation;
          report["strictness_witness"] = std::move(w);
        }

        const std::vector<double> radii = pf.coercivity_radii.empty()
                                              ? default_coercivity_radii()
                                              : pf.coercivity_radii;
        CoercivityReport coercive = coercivity_probe(
            f, pf.n_directions, radii, pf.growth_floor, pf.seed);
        report["coercivity"] = to_string(coercive.verdict);
        if (coercive.witness_direction) {
          report["coercivity_witness"] =
              vector_to_json(*coercive.witness_direction);
        }
        if (!coercive.note.empty()) report["coercivity_note"] = coercive.note;

        const bool convex_ok =
            jensen.max_violation <= 1e-12 && epi.max_violation <= 1e-12;
        const bool strict_ok =
            f.declared_class() != ConvexityClass::StrictlyConvex ||
            strict.passed;
        result.exit_code = (convex_ok && strict_ok) ? 0 : 1;
        break;
      }

      case Task::Certify: {
        OptimalityCertificate cert =
            certify(*pf.objective, *pf.set, *pf.point, pf.n_samples, pf.seed);
        report["point"] = vector_to_json(*pf.point);
        report["certificate"] = certificate_to_json(cert);
        result.exit_code =
            cert.verdict == OptimalityVerdict::Rejected ? 1 : 0;
        break;
      }

      case Task::Dirichlet: {
        DirichletProblem problem =
            build_problem(pf.grid->dim, pf.grid->n_interior, *pf.rhs);
        SolveReport energy_run = solve_energy(problem, opts);
        CgResult cg = cg_solve(problem, pf.cg_tol);
        trace_source = energy_run;

        report["grid"] = json::object();
        report["grid"]["dim"] = pf.grid->dim;
        report["grid"]["n_interior"] = pf.grid->n_interior;
        report["grid"]["spacing"] = pf.grid->spacing();
        report["u"] = vector_to_json(energy_run.x_star);
        report["u_cg"] = vector_to_json(cg.u);
        report["max_gap"] =
            (energy_run.x_star - cg.u).cwiseAbs().maxCoeff();
        report["energy"] = energy_run.f_star;
        report["energy_cg"] = energy(problem, cg.u);
        report["termination"] = to_string(energy_run.termination);
        report["iterations"] = energy_run.iterations;
        report["cg_iterations"] = cg.iterations;
        report["euler_lagrange_residual"] =
            energy_gradient(problem, energy_run.x_star).norm();
        if (const auto* load = std::get_if<ManufacturedLoad>(&*pf.rhs)) {
          const Vector exact = manufactured_solution(*pf.grid, load->name);
          report["manufactured"] = load->name;
          report["max_node_error"] =
              (energy_run.x_star - exact).cwiseAbs().maxCoeff();
        }
        result.exit_code =
            energy_run.termination == Termination::GradTol ? 0 : 1;
        break;
      }

      case Task::WeakDemo: {
        const int dim = pf.weak_dim;
        std::vector<Vector> sequence;
        sequence.reserve(static_cast<std::size_t>(dim));
        for (int n = 0; n < dim; ++n) {
          Vector e = Vector::Zero(dim);
          e[n] = 1.0;
          sequence.push_back(std::move(e));
        }
        std::vector<Vector> tests = pf.weak_tests;
        if (tests.empty()) {
          Vector u = Vector::Zero(dim);
          u[0] = 1.0;
          if (dim > 1) u[1] = 1.0;
          tests.push_back(std::move(u));
        }
        const Vector limit = Vector::Zero(dim);
        WeakConvergenceReport probe =
            weak_probe(sequence, limit, tests, InnerProduct::standard());
        report["dim"] = dim;
        report["verdict"] = to_string(probe.verdict);
        report["norms"] = vector_to_json(probe.norms);
        json pairings = json::array();
        for (Eigen::Index j = 0; j < probe.pairings.cols(); ++j) {
          pairings.push_back(vector_to_json(probe.pairings.col(j)));
        }
        report["pairings"] = std::move(pairings);
        result.exit_code = 0;
        break;
      }
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw InputError(InputErrorCode::BadValue, "<run>", e.what());
  } catch (const std::exception& e) {
    report["error"] = e.what();
    result.exit_code = 1;
  }

  report["timestamp"] = timestamp_utc();

  namespace fs = std::filesystem;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return path;
    return fs::path(out_dir) / path;
  };
  if (!pf.output.json_path.empty() || !pf.output.csv_path.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
  }
  if (!pf.output.json_path.empty()) {
    const fs::path path = resolve(pf.output.json_path);
    std::ofstream out(path);
    if (!out) {
      fail(InputErrorCode::Io, path.string(), "cannot open report for writing");
    }
    out << report.dump(2) << '\n';
  }
  if (!pf.output.csv_path.empty() && trace_source) {
    write_trace_csv(resolve(pf.output.csv_path).string(), *trace_source);
  }
  return result;
}

}  // namespace convexkit
