#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "fblimits/binning.hpp"
#include "fblimits/bounds.hpp"
#include "fblimits/cli.hpp"
#include "fblimits/dispersion.hpp"
#include "fblimits/error.hpp"
#include "fblimits/optcode.hpp"
#include "fblimits/sources.hpp"
#include "fblimits/spectrum.hpp"

namespace py = pybind11;
using namespace fbl;

namespace {

// Counts can exceed 64 bits, so they cross the boundary as Python ints.
py::int_ to_py(const BigCount& x) {
  return py::int_(py::module_::import("builtins").attr("int")(to_decimal(x)));
}

SpectrumBudget budget_of(std::uint64_t max_type_classes, std::uint64_t max_enumeration) {
  SpectrumBudget b;
  b.max_type_classes = max_type_classes;
  b.max_enumeration = max_enumeration;
  return b;
}

py::dict report_dict(const BoundReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["kind"] = to_string(r.kind);
  d["valid"] = r.valid;
  d["validity_condition"] = r.validity_condition;
  d["n0"] = r.n0;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fblimits, m) {
  m.doc() = "Exact finite-blocklength limits of lossless compression";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", numeric.ptr());

  py::class_<FiniteDistribution>(m, "FiniteDistribution")
      .def(py::init<std::vector<double>>(), py::arg("probs"))
      .def_static("uniform", &FiniteDistribution::uniform, py::arg("m"))
      .def_static("bernoulli", &FiniteDistribution::bernoulli, py::arg("p"))
      .def_property_readonly("probs", &FiniteDistribution::probs)
      .def("__len__", &FiniteDistribution::size);

  m.def(
      "geometric",
      [](double q, double tail_bound) { return geometric(q, tail_bound).truncate(); },
      py::arg("q"), py::arg("tail_bound") = 1e-12,
      "Geometric law P(k) = q (1-q)^k, truncated and renormalized.");
  m.def("entropy", &entropy);
  m.def("varentropy", &varentropy);

  py::class_<MarkovSource>(m, "MarkovSource")
      .def(py::init<std::size_t, int, std::vector<std::vector<double>>, std::vector<double>>(),
           py::arg("alphabet_size"), py::arg("order"), py::arg("kernel"),
           py::arg("initial") = std::vector<double>{})
      .def_property_readonly("alphabet_size", &MarkovSource::alphabet_size)
      .def_property_readonly("order", &MarkovSource::order)
      .def_property_readonly("initial", &MarkovSource::initial);
  m.def("markov_entropy_rate", &markov_entropy_rate);
  m.def(
      "markov_varentropy_rate",
      [](const MarkovSource& s, double tol, long max_lags) {
        auto r = markov_varentropy_rate(s, tol, max_lags);
        return py::make_tuple(r.value, r.error_bar);
      },
      py::arg("source"), py::arg("tol") = 1e-13, py::arg("max_lags") = 1000000,
      "Returns (value, error_bar).");

  py::class_<InformationSpectrum>(m, "InformationSpectrum")
      .def_property_readonly("n", &InformationSpectrum::n)
      .def_property_readonly("is_exact", &InformationSpectrum::is_exact)
      .def("__len__", &InformationSpectrum::size)
      .def("masses",
           [](const InformationSpectrum& s) {
             py::list out;
             for (const auto& x : s.masses()) out.append(py::make_tuple(x.info, x.prob, to_py(x.count)));
             return out;
           },
           "List of (info_bits, prob, count) sorted by increasing info.")
      .def("total_count", [](const InformationSpectrum& s) { return to_py(s.total_count()); })
      .def("mean", &InformationSpectrum::mean)
      .def("variance", &InformationSpectrum::variance);

  const SpectrumBudget dflt;
  m.def(
      "iid_spectrum",
      [](const FiniteDistribution& d, int n, std::uint64_t mtc) {
        return iid_spectrum(d, n, budget_of(mtc, SpectrumBudget{}.max_enumeration));
      },
      py::arg("dist"), py::arg("n"), py::arg("max_type_classes") = dflt.max_type_classes);
  m.def("binomial_spectrum", &binomial_spectrum, py::arg("trials"), py::arg("p"));
  m.def(
      "markov_spectrum_exact",
      [](const MarkovSource& s, int n, std::uint64_t me) {
        return markov_spectrum_exact(s, n, budget_of(SpectrumBudget{}.max_type_classes, me));
      },
      py::arg("source"), py::arg("n"), py::arg("max_enumeration") = dflt.max_enumeration);
  m.def("markov_spectrum_mc", &markov_spectrum_mc, py::arg("source"), py::arg("n"),
        py::arg("samples"), py::arg("seed"), py::arg("threads") = 0u);

  m.def("ccdf", &ccdf, py::arg("spec"), py::arg("a"));
  m.def("cdf", &cdf, py::arg("spec"), py::arg("a"));
  m.def("quantile", &quantile, py::arg("spec"), py::arg("p"));
  m.def(
      "count_M", [](const InformationSpectrum& s, double beta) { return to_py(count_M(s, beta)); },
      py::arg("spec"), py::arg("beta"));

  m.def("epsilon_star", &epsilon_star, py::arg("spec"), py::arg("k"));
  m.def("R_star", &R_star, py::arg("spec"), py::arg("eps"));
  m.def(
      "R_star_via_viva",
      [](const InformationSpectrum& s, double a) {
        auto r = R_star_via_viva(s, a);
        py::dict d;
        d["eps"] = r.eps;
        d["M"] = to_py(r.M);
        d["length"] = r.length;
        d["rate"] = r.rate;
        return d;
      },
      py::arg("spec"), py::arg("a"));
  m.def("Rbar", &Rbar, py::arg("spec"));
  m.def("var_codelength", &var_codelength, py::arg("spec"));
  m.def("prefix_epsilon", &prefix_epsilon, py::arg("spec"), py::arg("j"));
  m.def("prefix_R", &prefix_R, py::arg("spec"), py::arg("eps"));
  m.def("expected_length_equiprobable", &expected_length_equiprobable, py::arg("M"));
  m.def("var_length_equiprobable", &var_length_equiprobable, py::arg("M"));
  m.def("rank_to_bits", &rank_to_bits, py::arg("rank"));
  m.def("bits_to_rank", &bits_to_rank, py::arg("bits"));

  m.def("gaussian_Q", &gaussian_Q);
  m.def("gaussian_Q_inv", &gaussian_Q_inv);
  py::class_<GaussianParams>(m, "GaussianParams")
      .def(py::init([](const FiniteDistribution& d) { return GaussianParams::of(d); }), py::arg("dist"))
      .def_readonly("H", &GaussianParams::H)
      .def_readonly("sigma2", &GaussianParams::sigma2)
      .def_readonly("mu3", &GaussianParams::mu3);
  m.def("approx_Rstar", &approx_Rstar, py::arg("params"), py::arg("n"), py::arg("eps"));
  m.def(
      "achievability_iid",
      [](const GaussianParams& p, long n, double e) { return report_dict(achievability_iid(p, n, e)); },
      py::arg("params"), py::arg("n"), py::arg("eps"));
  m.def(
      "converse_iid",
      [](const GaussianParams& p, long n, double e) { return report_dict(converse_iid(p, n, e)); },
      py::arg("params"), py::arg("n"), py::arg("eps"));
  m.def(
      "R_upper_quantile",
      [](const InformationSpectrum& s, double e) { return report_dict(R_upper_quantile(s, e)); },
      py::arg("spec"), py::arg("eps"));

  m.def("binning_error_exact",
        py::overload_cast<const FiniteDistribution&, std::uint64_t>(&binning_error_exact),
        py::arg("dist"), py::arg("N"));
  m.def("binning_error_exact",
        py::overload_cast<const InformationSpectrum&, std::uint64_t>(&binning_error_exact),
        py::arg("spec"), py::arg("N"));
  m.def(
      "binning_error_mc",
      [](const FiniteDistribution& d, std::uint64_t N, std::uint64_t trials, std::uint64_t seed) {
        auto r = binning_error_mc(d, N, trials, seed);
        return py::make_tuple(r.estimate, r.std_error);
      },
      py::arg("dist"), py::arg("N"), py::arg("trials"), py::arg("seed"),
      "Returns (estimate, std_error).");

  m.def("normalized_dispersion", py::overload_cast<const FiniteDistribution&>(&normalized_dispersion),
        py::arg("dist"));

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "fblimits");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return cli_main(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the command-line front end; returns its exit code.");
}
