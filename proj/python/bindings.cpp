#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "convexkit/dirichlet.hpp"
#include "convexkit/minimize.hpp"

namespace py = pybind11;
using namespace convexkit;

namespace {

std::vector<Vector> sample_points(const ConvexSet& set, int n,
                                  std::uint64_t seed) {
  if (n < 1) throw PreconditionError("sample_points: n >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) points.push_back(sample(set, rng));
  return points;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Convex optimization toolkit: certified projections, convexity "
            "checks, projected gradient descent and the Dirichlet energy "
            "application.";

  py::register_exception<DimensionError>(m, "DimensionError",
                                         PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<PreconditionError>(m, "PreconditionError",
                                            PyExc_ValueError);

  // --- space ---------------------------------------------------------------
  py::class_<Grid>(m, "Grid")
      .def(py::init<int, int>(), py::arg("dim"), py::arg("n_interior"))
      .def_readonly("dim", &Grid::dim)
      .def_readonly("n_interior", &Grid::n_interior)
      .def_property_readonly("spacing", &Grid::spacing)
      .def_property_readonly("unknowns", &Grid::unknowns);

  py::class_<InnerProduct>(m, "InnerProduct")
      .def_static("standard", &InnerProduct::standard)
      .def_static("diagonal_weighted", &InnerProduct::diagonal_weighted,
                  py::arg("weights"))
      .def_static("laplacian_energy", &InnerProduct::laplacian_energy,
                  py::arg("grid"));

  m.def("inner", &inner, py::arg("u"), py::arg("v"),
        py::arg("ip") = InnerProduct::standard());
  m.def("norm", &norm, py::arg("u"),
        py::arg("ip") = InnerProduct::standard());
  m.def("apply_laplacian", &apply_laplacian, py::arg("grid"), py::arg("u"));

  py::enum_<ConvergenceVerdict>(m, "ConvergenceVerdict")
      .value("WeakOnly", ConvergenceVerdict::WeakOnly)
      .value("Strong", ConvergenceVerdict::Strong)
      .value("Neither", ConvergenceVerdict::Neither);

  py::class_<WeakConvergenceReport>(m, "WeakConvergenceReport")
      .def_readonly("pairings", &WeakConvergenceReport::pairings)
      .def_readonly("norms", &WeakConvergenceReport::norms)
      .def_readonly("verdict", &WeakConvergenceReport::verdict);

  m.def("weak_probe", &weak_probe, py::arg("sequence"), py::arg("limit"),
        py::arg("tests"), py::arg("ip") = InnerProduct::standard());

  // --- sets ----------------------------------------------------------------
  py::class_<ConvexSet>(m, "ConvexSet")
      .def_property_readonly("dim", &ConvexSet::dim)
      .def_property_readonly("shape_name", &ConvexSet::shape_name)
      .def("__repr__", [](const ConvexSet& s) {
        std::ostringstream out;
        out << "ConvexSet(" << s.shape_name() << ", dim=" << s.dim() << ")";
        return out.str();
      });

  m.def("box", [](Vector lo, Vector hi) {
    return ConvexSet(Box{std::move(lo), std::move(hi)});
  }, py::arg("lo"), py::arg("hi"));
  m.def("ball", [](Vector center, double radius) {
    return ConvexSet(Ball{std::move(center), radius});
  }, py::arg("center"), py::arg("radius"));
  m.def("halfspace", [](Vector normal, double offset) {
    return ConvexSet(Halfspace{std::move(normal), offset});
  }, py::arg("normal"), py::arg("offset"));
  m.def("hyperplane", [](Vector normal, double offset) {
    return ConvexSet(Hyperplane{std::move(normal), offset});
  }, py::arg("normal"), py::arg("offset"));
  m.def("simplex", [](Eigen::Index dim) { return ConvexSet(Simplex{dim}); },
        py::arg("dim"));
  m.def("whole_space", [](Eigen::Index dim) {
    return ConvexSet(WholeSpace{dim});
  }, py::arg("dim"));

  m.def("contains", &contains, py::arg("set"), py::arg("x"),
        py::arg("tol") = 0.0);
  m.def("project", &project, py::arg("set"), py::arg("x"));
  m.def("sample_points", &sample_points, py::arg("set"), py::arg("n"),
        py::arg("seed") = 0);

  py::class_<ProjectionCertificate>(m, "ProjectionCertificate")
      .def_readonly("point", &ProjectionCertificate::point)
      .def_readonly("projection", &ProjectionCertificate::projection)
      .def_readonly("max_vi_violation",
                    &ProjectionCertificate::max_vi_violation)
      .def_readonly("samples_used", &ProjectionCertificate::samples_used)
      .def_property_readonly("valid", &ProjectionCertificate::valid);

  m.def("vi_certificate", &vi_certificate, py::arg("set"), py::arg("x"),
        py::arg("n_samples") = 1000, py::arg("seed") = 0);

  py::class_<SegmentCounterexample>(m, "SegmentCounterexample")
      .def_readonly("x", &SegmentCounterexample::x)
      .def_readonly("y", &SegmentCounterexample::y)
      .def_readonly("beta", &SegmentCounterexample::beta);

  m.def("segment_check", &segment_check, py::arg("set"),
        py::arg("n_trials") = 1000, py::arg("seed") = 0);

  // --- functions -------------------------------------------------------------
  py::enum_<ConvexityClass>(m, "ConvexityClass")
      .value("Convex", ConvexityClass::Convex)
      .value("StrictlyConvex", ConvexityClass::StrictlyConvex)
      .value("NonconvexUnknown", ConvexityClass::NonconvexUnknown);

  py::class_<Objective>(m, "Objective")
      .def_property_readonly("dim", &Objective::dim)
      .def_property_readonly("declared_class", &Objective::declared_class)
      .def_property_readonly("form_name", &Objective::form_name)
      .def("__repr__", [](const Objective& f) {
        std::ostringstream out;
        out << "Objective(" << f.form_name() << ", dim=" << f.dim() << ")";
        return out.str();
      });

  m.def("quadratic", &Objective::quadratic, py::arg("A"), py::arg("b"),
        py::arg("declared") = ConvexityClass::Convex);
  m.def("cosh_sum", &Objective::cosh_sum, py::arg("dim"));
  m.def("linear", &Objective::linear, py::arg("c"));
  m.def("norm_squared", &Objective::norm_squared, py::arg("center"));

  m.def("evaluate", &eval, py::arg("f"), py::arg("x"));
  m.def("gradient", &gradient, py::arg("f"), py::arg("x"));

  py::enum_<DerivativeMode>(m, "DerivativeMode")
      .value("Analytic", DerivativeMode::Analytic)
      .value("OneSidedLimit", DerivativeMode::OneSidedLimit);

  py::class_<DirectionalDerivative>(m, "DirectionalDerivative")
      .def_readonly("value", &DirectionalDerivative::value)
      .def_readonly("converged", &DirectionalDerivative::converged);

  m.def("directional_derivative", &directional_derivative, py::arg("f"),
        py::arg("x"), py::arg("d"),
        py::arg("mode") = DerivativeMode::Analytic);
  m.def("jensen_slack", &jensen_slack, py::arg("f"), py::arg("x"),
        py::arg("y"), py::arg("beta"));

  py::class_<ConvexityWitness>(m, "ConvexityWitness")
      .def_readonly("x", &ConvexityWitness::x)
      .def_readonly("y", &ConvexityWitness::y)
      .def_readonly("beta", &ConvexityWitness::beta)
      .def_readonly("violation", &ConvexityWitness::violation);

  py::class_<ConvexityReport>(m, "ConvexityReport")
      .def_readonly("max_violation", &ConvexityReport::max_violation)
      .def_readonly("witness", &ConvexityReport::witness);

  m.def("jensen_check", &jensen_check, py::arg("f"), py::arg("domain"),
        py::arg("n_trials") = 1000, py::arg("seed") = 0);
  m.def("epigraph_check", &epigraph_check, py::arg("f"), py::arg("domain"),
        py::arg("n_trials") = 1000, py::arg("seed") = 0);

  py::class_<StrictnessResult>(m, "StrictnessResult")
      .def_readonly("passed", &StrictnessResult::passed)
      .def_readonly("modulus", &StrictnessResult::modulus)
      .def_readonly("witness", &StrictnessResult::witness);

  m.def("strictness_check", &strictness_check, py::arg("f"),
        py::arg("domain"), py::arg("n_trials") = 1000,
        py::arg("margin") = 0.25, py::arg("seed") = 0);

  py::enum_<CoercivityVerdict>(m, "CoercivityVerdict")
      .value("Coercive", CoercivityVerdict::Coercive)
      .value("NotCoercive", CoercivityVerdict::NotCoercive)
      .value("Inconclusive", CoercivityVerdict::Inconclusive);

  py::class_<CoercivityReport>(m, "CoercivityReport")
      .def_readonly("verdict", &CoercivityReport::verdict)
      .def_readonly("witness_direction", &CoercivityReport::witness_direction)
      .def_readonly("note", &CoercivityReport::note);

  m.def("coercivity_probe", &coercivity_probe, py::arg("f"),
        py::arg("n_directions") = 32,
        py::arg("radii") = default_coercivity_radii(),
        py::arg("growth_floor") = 1e-3, py::arg("seed") = 0);

  // --- minimize ----------------------------------------------------------
  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("step0", &SolveOptions::step0)
      .def_readwrite("armijo_c", &SolveOptions::armijo_c)
      .def_readwrite("backtrack", &SolveOptions::backtrack)
      .def_readwrite("step_growth", &SolveOptions::step_growth)
      .def_readwrite("grad_tol", &SolveOptions::grad_tol)
      .def_readwrite("fixedpoint_tol", &SolveOptions::fixedpoint_tol)
      .def_readwrite("max_iters", &SolveOptions::max_iters)
      .def_readwrite("record_every", &SolveOptions::record_every)
      .def_readwrite("seed", &SolveOptions::seed)
      .def_readwrite("unbounded_floor", &SolveOptions::unbounded_floor)
      .def_readwrite("max_backtracks", &SolveOptions::max_backtracks);

  py::enum_<Termination>(m, "Termination")
      .value("GradTol", Termination::GradTol)
      .value("FixedPointTol", Termination::FixedPointTol)
      .value("MaxIters", Termination::MaxIters)
      .value("Unbounded", Termination::Unbounded);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("x_star", &SolveReport::x_star)
      .def_readonly("f_star", &SolveReport::f_star)
      .def_readonly("recorded_iters", &SolveReport::recorded_iters)
      .def_readonly("values", &SolveReport::values)
      .def_readonly("residuals", &SolveReport::residuals)
      .def_readonly("termination", &SolveReport::termination)
      .def_readonly("iterations", &SolveReport::iterations)
      .def("__repr__", [](const SolveReport& r) {
        std::ostringstream out;
        out << "SolveReport(f_star=" << r.f_star
            << ", termination=" << to_string(r.termination)
            << ", iterations=" << r.iterations << ")";
        return out.str();
      });

  m.def("solve_unconstrained", &solve_unconstrained, py::arg("f"),
        py::arg("x0"), py::arg("opts") = SolveOptions{});
  m.def("solve_projected", &solve_projected, py::arg("f"), py::arg("set"),
        py::arg("x0"), py::arg("opts") = SolveOptions{});

  py::enum_<OptimalityVerdict>(m, "OptimalityVerdict")
      .value("FirstOrderStationary", OptimalityVerdict::FirstOrderStationary)
      .value("FeasibleFirstOrder", OptimalityVerdict::FeasibleFirstOrder)
      .value("Rejected", OptimalityVerdict::Rejected);

  py::class_<OptimalityCertificate>(m, "OptimalityCertificate")
      .def_readonly("grad_norm", &OptimalityCertificate::grad_norm)
      .def_readonly("min_sampled_directional",
                    &OptimalityCertificate::min_sampled_directional)
      .def_readonly("vi_residual", &OptimalityCertificate::vi_residual)
      .def_readonly("verdict", &OptimalityCertificate::verdict);

  m.def("certify", &certify, py::arg("f"), py::arg("set"), py::arg("x"),
        py::arg("n_samples") = 1000, py::arg("seed") = 0);

  py::class_<MultistartRun>(m, "MultistartRun")
      .def_readonly("start", &MultistartRun::start)
      .def_readonly("report", &MultistartRun::report)
      .def_readonly("ok", &MultistartRun::ok)
      .def_readonly("error", &MultistartRun::error);

  py::class_<MultistartReport>(m, "MultistartReport")
      .def_readonly("runs", &MultistartReport::runs)
      .def_readonly("max_pairwise_distance",
                    &MultistartReport::max_pairwise_distance)
      .def_readonly("pass_", &MultistartReport::pass)
      .def("__repr__", [](const MultistartReport& r) {
        std::ostringstream out;
        out << "MultistartReport(max_pairwise_distance="
            << r.max_pairwise_distance << ", pass=" << (r.pass ? "True" : "False")
            << ")";
        return out.str();
      });

  m.def("multistart_uniqueness", &multistart_uniqueness, py::arg("f"),
        py::arg("set"), py::arg("n_starts"), py::arg("opts") = SolveOptions{},
        py::arg("seed") = 0);

  // --- dirichlet -----------------------------------------------------------
  py::class_<DirichletProblem>(m, "DirichletProblem")
      .def_property_readonly("grid", &DirichletProblem::grid)
      .def_property_readonly("rhs", &DirichletProblem::rhs)
      .def("apply", &DirichletProblem::apply, py::arg("u"));

  m.def("build_problem",
        [](int dim, int n_interior, double constant) {
          return build_problem(dim, n_interior, ConstantLoad{constant});
        },
        py::arg("dim"), py::arg("n_interior"), py::arg("constant"));
  m.def("build_problem",
        [](int dim, int n_interior, const std::string& manufactured) {
          return build_problem(dim, n_interior,
                               ManufacturedLoad{manufactured});
        },
        py::arg("dim"), py::arg("n_interior"), py::arg("manufactured"));
  m.def("build_problem",
        [](int dim, int n_interior, const Vector& samples) {
          return build_problem(dim, n_interior, SampledLoad{samples});
        },
        py::arg("dim"), py::arg("n_interior"), py::arg("samples"));

  m.def("energy", &energy, py::arg("problem"), py::arg("u"));
  m.def("energy_gradient", &energy_gradient, py::arg("problem"), py::arg("u"));
  m.def("solve_energy", &solve_energy, py::arg("problem"),
        py::arg("opts") = SolveOptions{});

  py::class_<CgResult>(m, "CgResult")
      .def_readonly("u", &CgResult::u)
      .def_readonly("iterations", &CgResult::iterations)
      .def_readonly("relative_residual", &CgResult::relative_residual);

  m.def("cg_solve", &cg_solve, py::arg("problem"), py::arg("tol") = 1e-10);
  m.def("cg_oracle", &cg_oracle, py::arg("problem"), py::arg("tol") = 1e-10);

  py::class_<ComparisonRecord>(m, "ComparisonRecord")
      .def_readonly("u_energy", &ComparisonRecord::u_energy)
      .def_readonly("u_cg", &ComparisonRecord::u_cg)
      .def_readonly("max_gap", &ComparisonRecord::max_gap)
      .def_readonly("energy_energy", &ComparisonRecord::energy_energy)
      .def_readonly("energy_cg", &ComparisonRecord::energy_cg)
      .def_readonly("energy_iterations", &ComparisonRecord::energy_iterations)
      .def_readonly("cg_iterations", &ComparisonRecord::cg_iterations);

  m.def("compare", &compare, py::arg("problem"),
        py::arg("opts") = SolveOptions{});
  m.def("manufactured_solution", &manufactured_solution, py::arg("grid"),
        py::arg("name"));
  m.def("assemble_dense", &assemble_dense, py::arg("problem"));
}
