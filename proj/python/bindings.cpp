#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "urigid/affine.hpp"
#include "urigid/certify.hpp"
#include "urigid/gale.hpp"
#include "urigid/generators.hpp"
#include "urigid/io.hpp"
#include "urigid/stress.hpp"

namespace py = pybind11;
using namespace urigid;

namespace {

// Points cross the boundary as n x r arrays (one row per point); edges are
// 0-based pairs.
Framework make_framework(const Matrix& points, const std::vector<Edge>& edges) {
  return Framework(Graph(static_cast<int>(points.rows()), edges), Configuration(points.transpose()));
}

Tolerances make_tol(double rank_rtol, double psd_atol, double residual_atol) {
  Tolerances t{rank_rtol, psd_atol, residual_atol};
  t.validate();
  return t;
}

StressSearchOptions make_search(std::uint64_t seed, int restarts, int iterations, int jobs) {
  StressSearchOptions s;
  s.seed = seed;
  s.restarts = restarts;
  s.iterations = iterations;
  s.jobs = jobs;
  return s;
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

#define TOL_ARGS py::arg("rank_rtol") = 1e-9, py::arg("psd_atol") = 1e-9, py::arg("residual_atol") = 1e-8
#define SEARCH_ARGS py::arg("seed") = 0, py::arg("restarts") = 8, py::arg("iterations") = 10000, py::arg("jobs") = 1

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Universal rigidity certificates for bar frameworks";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Framework>(m, "Framework")
      .def(py::init(&make_framework), py::arg("points"), py::arg("edges"))
      .def_static("from_json", &parse_framework, py::arg("text"))
      .def("to_json", &serialize_framework)
      .def_property_readonly("points", [](const Framework& fw) { return Matrix(fw.config().points().transpose()); })
      .def_property_readonly("edges", [](const Framework& fw) { return fw.graph().edges(); })
      .def_property_readonly("non_edges", [](const Framework& fw) { return fw.graph().non_edges(); })
      .def_property_readonly("num_nodes", &Framework::num_nodes)
      .def_property_readonly("dimension", &Framework::dimension)
      .def("digest", &framework_digest)
      .def("__eq__", [](const Framework& a, const Framework& b) { return a == b; })
      .def("__repr__", [](const Framework& fw) {
        return "<Framework n=" + std::to_string(fw.num_nodes()) + " r=" + std::to_string(fw.dimension()) +
               " m=" + std::to_string(fw.graph().num_edges()) + ">";
      });

  py::class_<Certificate>(m, "Certificate")
      .def_static("from_json", &parse_certificate, py::arg("text"))
      .def("to_json", &serialize_certificate)
      .def("to_dict", [](const Certificate& c) { return to_python(certificate_to_json(c)); })
      .def_property_readonly("verdict", [](const Certificate& c) { return to_string(c.verdict); })
      .def_property_readonly("route", [](const Certificate& c) { return to_string(c.route); })
      .def_readonly("not_universally_rigid", &Certificate::not_universally_rigid)
      .def_readonly("notes", &Certificate::notes)
      .def_readonly("omega", &Certificate::omega)
      .def_readonly("spectrum", &Certificate::spectrum)
      .def_readonly("canonical_gale", &Certificate::canonical_gale)
      .def_readonly("counterexample", &Certificate::counterexample)
      .def_property_readonly("flex_phi", [](const Certificate& c) -> std::optional<Matrix> {
        if (!c.flex) return std::nullopt;
        return c.flex->phi;
      })
      .def_readonly("framework_digest", &Certificate::framework_digest)
      .def("__repr__", [](const Certificate& c) {
        return std::string("<Certificate ") + to_string(c.verdict) + " via " + to_string(c.route) + ">";
      });

  m.def(
      "certify",
      [](const Framework& fw, std::optional<Vector> omega, std::uint64_t seed, int restarts, int iterations,
         int jobs, double rank_rtol, double psd_atol, double residual_atol) {
        CertifyOptions opts;
        opts.search = make_search(seed, restarts, iterations, jobs);
        if (omega) opts.user_stress = EquilibriumStress{*omega};
        const Tolerances tol = make_tol(rank_rtol, psd_atol, residual_atol);
        py::gil_scoped_release release;
        return certify(fw, tol, opts);
      },
      py::arg("framework"), py::arg("omega") = py::none(), SEARCH_ARGS, TOL_ARGS);

  m.def(
      "verify",
      [](const Framework& fw, const Certificate& cert, double rank_rtol, double psd_atol, double residual_atol) {
        return certificate_failures(fw, cert, make_tol(rank_rtol, psd_atol, residual_atol));
      },
      py::arg("framework"), py::arg("certificate"), TOL_ARGS,
      "List of failed checks; empty when the certificate is valid.");

  m.def(
      "stress_space_basis",
      [](const Framework& fw, double rank_rtol, double psd_atol, double residual_atol) {
        const auto basis = stress_space_basis(fw, make_tol(rank_rtol, psd_atol, residual_atol));
        Matrix out(fw.graph().num_edges(), static_cast<Eigen::Index>(basis.size()));
        for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k].omega;
        return out;
      },
      py::arg("framework"), TOL_ARGS, "Columns are an orthonormal basis of the equilibrium stresses.");

  m.def(
      "stress_matrix",
      [](const Framework& fw, const Vector& omega, double rank_rtol, double psd_atol, double residual_atol) {
        return assemble_stress(fw, {omega}, make_tol(rank_rtol, psd_atol, residual_atol)).S;
      },
      py::arg("framework"), py::arg("omega"), TOL_ARGS);

  m.def(
      "find_max_rank_psd_stress",
      [](const Framework& fw, std::uint64_t seed, int restarts, int iterations, int jobs, double rank_rtol,
         double psd_atol, double residual_atol) -> py::object {
        const Tolerances tol = make_tol(rank_rtol, psd_atol, residual_atol);
        const auto opts = make_search(seed, restarts, iterations, jobs);
        std::optional<StressSearchResult> res;
        {
          py::gil_scoped_release release;
          res = find_max_rank_psd_stress(fw, tol, opts);
        }
        if (!res) return py::none();
        py::dict d;
        d["omega"] = res->stress.omega;
        d["S"] = res->matrix.S;
        d["objective"] = res->objective;
        d["restart"] = res->restart;
        return d;
      },
      py::arg("framework"), SEARCH_ARGS, TOL_ARGS);

  m.def(
      "gale_basis",
      [](const Framework& fw, double rank_rtol, double psd_atol, double residual_atol) {
        return gale_basis(fw.config(), make_tol(rank_rtol, psd_atol, residual_atol)).Z;
      },
      py::arg("framework"), TOL_ARGS);

  m.def(
      "is_general_position",
      [](const Matrix& points, double rank_rtol, double psd_atol, double residual_atol) {
        return is_general_position(Configuration(points.transpose()), make_tol(rank_rtol, psd_atol, residual_atol));
      },
      py::arg("points"), TOL_ARGS);

  m.def(
      "detect_quadric",
      [](const Framework& fw, double rank_rtol, double psd_atol, double residual_atol) -> std::optional<Matrix> {
        const auto w = detect_quadric_at_infinity(fw, make_tol(rank_rtol, psd_atol, residual_atol));
        if (!w) return std::nullopt;
        return w->phi;
      },
      py::arg("framework"), TOL_ARGS, "Unit-norm symmetric Phi vanishing on every edge direction, or None.");

  m.def(
      "affine_flex",
      [](const Framework& fw, const Matrix& phi, double rank_rtol, double psd_atol, double residual_atol) {
        const AffineFlex f = flex_motion_from_quadric(fw, {phi}, make_tol(rank_rtol, psd_atol, residual_atol));
        py::dict d;
        d["A"] = f.motion.A;
        d["t"] = f.t;
        d["points"] = Matrix(f.flexed.points().transpose());
        return d;
      },
      py::arg("framework"), py::arg("phi"), TOL_ARGS);

  m.def(
      "refute",
      [](const Framework& fw, std::vector<int> dims, int restarts, std::uint64_t seed, int jobs) -> py::object {
        RefuteOptions opts;
        opts.jobs = jobs;
        std::optional<Refutation> res;
        {
          py::gil_scoped_release release;
          res = refute_by_search(fw, dims, restarts, seed, opts);
        }
        if (!res) return py::none();
        py::dict d;
        d["points"] = Matrix(res->q.points().transpose());
        d["dimension"] = res->dimension;
        d["restart"] = res->restart;
        d["residual"] = res->residual;
        d["gap"] = res->gap;
        return d;
      },
      py::arg("framework"), py::arg("dims"), py::arg("restarts") = 20, py::arg("seed") = 0, py::arg("jobs") = 1);

  m.def("generate", [](const std::string& spec) { return generate(parse_generator_spec(spec)); }, py::arg("spec"),
        "Builds a framework from e.g. 'lateration:n=8,r=2,seed=3' or 'named:square-c4'.");

  m.def("named_examples", [] {
    std::vector<std::string> names;
    for (const auto& nf : named_examples()) names.push_back(nf.name);
    return names;
  });
}
