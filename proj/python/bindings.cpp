#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "submodstab/cube_fn.hpp"
#include "submodstab/dist_fourier.hpp"
#include "submodstab/dp_release.hpp"
#include "submodstab/io.hpp"
#include "submodstab/lowdeg_approx.hpp"
#include "submodstab/noise_stability.hpp"

namespace py = pybind11;
using namespace submodstab;

namespace {

PminConvention parse_pmin(const std::string& name) {
  if (name == "literal") return PminConvention::kLiteral;
  if (name == "symmetric") return PminConvention::kSymmetric;
  throw std::invalid_argument("pmin must be 'literal' or 'symmetric'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fourier analysis, noise stability and learning of submodular functions on the cube";

  py::register_exception<io::FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<ProductDistribution>(m, "ProductDistribution")
      .def(py::init<std::vector<double>>(), py::arg("p"))
      .def_static("uniform", &ProductDistribution::uniform, py::arg("n"))
      .def_property_readonly("n", &ProductDistribution::n)
      .def_property_readonly("p", [](const ProductDistribution& d) { return d.p(); })
      .def_property_readonly("min_probability", &ProductDistribution::min_probability)
      .def("__repr__", [](const ProductDistribution& d) {
        return "ProductDistribution(" + io::distribution_to_json(d).dump() + ")";
      });

  py::class_<CubeFunction>(m, "CubeFunction")
      .def_static("dense", &CubeFunction::dense, py::arg("n"), py::arg("values"))
      .def_static("from_json", [](const std::string& text) {
        return io::function_from_json(nlohmann::json::parse(text));
      }, py::arg("text"))
      .def("to_json", [](const CubeFunction& f) { return io::function_to_json(f).dump(); })
      .def_property_readonly("n", &CubeFunction::n)
      .def("__call__", &CubeFunction::evaluate, py::arg("mask"))
      .def("table", &CubeFunction::table);

  m.def("is_submodular", [](const CubeFunction& f) {
    const auto v = is_submodular_marginal(f);
    return py::make_tuple(v.holds, v.witness);
  }, py::arg("f"), "(holds, witness) from the local marginal check; witness is (S, T) or None");

  m.def("fourier", [](const CubeFunction& f, const ProductDistribution& dist) {
    return transform(f, dist).coeffs;
  }, py::arg("f"), py::arg("dist"), "Coefficients f^(S) indexed by mask");

  m.def("stability", [](const CubeFunction& f, double rho, const ProductDistribution& dist) {
    return stability(f, NoiseParams(rho, dist));
  }, py::arg("f"), py::arg("rho"), py::arg("dist"));

  m.def("stability_definitional", [](const CubeFunction& f, double rho, const ProductDistribution& dist) {
    return stability_definitional(f, NoiseParams(rho, dist));
  }, py::arg("f"), py::arg("rho"), py::arg("dist"));

  m.def("check_stability_bound", [](const CubeFunction& f, double rho, const ProductDistribution& dist,
                                     const std::string& pmin) {
    const auto r = check_stability_bound(f, NoiseParams(rho, dist), parse_pmin(pmin));
    py::dict out;
    out["rho"] = r.rho;
    out["p_min"] = r.p_min;
    out["stab"] = r.stab;
    out["bound"] = r.bound;
    out["norm2sq"] = r.norm2sq;
    out["slack"] = r.slack;
    out["holds"] = r.holds;
    return out;
  }, py::arg("f"), py::arg("rho"), py::arg("dist"), py::arg("pmin") = "literal");

  m.def("check_folklore_lemma", [](const CubeFunction& f, double rho, const ProductDistribution& dist) {
    const auto r = check_folklore_lemma(f, rho, dist);
    py::dict out;
    out["rho"] = r.rho;
    out["gamma"] = r.gamma;
    out["degree"] = r.degree;
    out["error"] = r.error;
    out["bound"] = r.bound;
    out["slack"] = r.slack;
    out["holds"] = r.holds;
    return out;
  }, py::arg("f"), py::arg("rho"), py::arg("dist"));

  m.def("degree_for_accuracy", [](double eps, double p_min) {
    const auto c = degree_for_accuracy(eps, p_min);
    return py::make_tuple(c.rho, c.degree);
  }, py::arg("eps"), py::arg("p_min"), "(rho, degree)");

  m.def("release_degree", &release_degree, py::arg("alpha"), py::arg("d"));
}
