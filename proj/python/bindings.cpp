#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "cylbem/analysis.hpp"
#include "cylbem/bem.hpp"
#include "cylbem/discretization.hpp"
#include "cylbem/errors.hpp"
#include "cylbem/specfun.hpp"
#include "cylbem/spectra.hpp"
#include "cylbem/validation.hpp"

namespace py = pybind11;
using namespace cylbem;
using cplx = std::complex<double>;
using spectra::FormulationId;
using spectra::OperatorId;
using spectra::ProblemConfig;

namespace {

// "S", "D~", ... or "TM-EFIE".
std::variant<OperatorId, FormulationId> parse_target(const std::string& text) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) return spectra::parse_operator(text);
  return FormulationId{spectra::parse_composite(text.substr(dash + 1)),
                       spectra::parse_polarization(text.substr(0, dash))};
}

FormulationId parse_formulation(const std::string& text) {
  const auto t = parse_target(text);
  if (!std::holds_alternative<FormulationId>(t))
    throw UsageError("expected a formulation such as TM-EFIE, got '" + text + "'");
  return std::get<FormulationId>(t);
}

py::dict report_dict(const analysis::ErrorReport& r) {
  py::dict d;
  d["ka"] = r.ka;
  d["N"] = r.N;
  d["formulation"] = spectra::to_string(r.formulation);
  d["measure"] = analysis::to_string(r.measure);
  d["r_predicted"] = r.r_predicted;
  d["r_measured"] = r.r_measured;
  d["resonance_flag"] = r.resonance_flag;
  d["warnings"] = describe_warnings(r.warnings);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral error analysis of boundary element discretizations on a circular cylinder";
  m.attr("__version__") = CYLBEM_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<AccuracyError>(m, "AccuracyError", base);
  py::register_exception<DivergenceError>(m, "DivergenceError", base);
  py::register_exception<SingularGramError>(m, "SingularGramError", base);
  py::register_exception<QuadratureError>(m, "QuadratureError", base);
  py::register_exception<PreconditionError>(m, "PreconditionError", base);
  py::register_exception<NotCirculantError>(m, "NotCirculantError", base);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base);
  py::register_exception<UsageError>(m, "UsageError", base);

  m.def("complex_wavenumber", &spectra::complex_wavenumber, py::arg("k"), py::arg("a") = 1.0);
  m.def("mesh_size", &analysis::mesh_size, py::arg("ka"));

  m.def(
      "bessel",
      [](int max_order, cplx z) {
        const auto seq = specfun::cyl_sequence(max_order, z);
        Eigen::VectorXcd j(seq.size()), h2(seq.size()), jp(seq.size()), h2p(seq.size());
        Eigen::VectorXd residual(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) {
          j[i] = seq[i].j.value();
          h2[i] = seq[i].h2.value();
          jp[i] = seq[i].jp.value();
          h2p[i] = seq[i].h2p.value();
          residual[i] = specfun::wronskian_residual(seq[i]);
        }
        py::dict d;
        d["j"] = j;
        d["h2"] = h2;
        d["jp"] = jp;
        d["h2p"] = h2p;
        d["wronskian_residual"] = residual;
        return d;
      },
      py::arg("max_order"), py::arg("z"),
      "J_q, H2_q and derivatives for q = 0..max_order (values outside the double range "
      "collapse to 0 or inf).");

  m.def(
      "eig",
      [](const std::string& target, int q, double ka, double a, double eta) {
        const auto cfg = ProblemConfig::from_ka(ka, 4, 1, a, eta);
        const auto t = parse_target(target);
        if (auto* op = std::get_if<OperatorId>(&t)) return spectra::eig_elementary(*op, q, cfg);
        return spectra::eig_composite(std::get<FormulationId>(t), q, cfg);
      },
      py::arg("target"), py::arg("q"), py::arg("ka"), py::arg("a") = 1.0, py::arg("eta") = 1.0,
      "Continuous eigenvalue of an operator (S, D, Dstar, N, I, suffix ~ for k-tilde) or a "
      "formulation such as TM-EFIE.");

  m.def(
      "discrete_eig",
      [](const std::string& target, int q, double ka, int N, int p, int smax) {
        const auto cfg = ProblemConfig::from_ka(ka, N, p);
        const disc::BasisSpec b{p, N};
        const auto t = parse_target(target);
        if (auto* op = std::get_if<OperatorId>(&t))
          return disc::discrete_eig_elementary(*op, q, cfg, b, smax).value;
        return disc::discrete_eig_composite(std::get<FormulationId>(t), q, cfg, b, smax);
      },
      py::arg("target"), py::arg("q"), py::arg("ka"), py::arg("N"), py::arg("p") = 1,
      py::arg("smax") = disc::kDefaultSmax);

  m.def(
      "spectral_error",
      [](const std::string& target, int q, double ka, int N, int p) {
        const auto r = disc::spectral_error(parse_target(target), q, ProblemConfig::from_ka(ka, N, p),
                                            {p, N});
        py::dict d;
        d["q"] = r.q;
        d["lambda"] = r.lambda_cont;
        d["lambda_hat"] = r.lambda_disc;
        d["proj_err"] = r.proj_err;
        d["alias_err"] = r.alias_err;
        d["total_err"] = r.total_err;
        d["flags"] = describe_warnings(r.flags);
        return d;
      },
      py::arg("target"), py::arg("q"), py::arg("ka"), py::arg("N"), py::arg("p") = 1);

  m.def(
      "bem_spectrum",
      [](const std::string& op, double ka, int N, int p) {
        py::list out;
        for (const auto& r : validation::bem_spectrum(spectra::parse_operator(op), ka, N, p)) {
          py::dict d;
          d["q"] = r.q;
          d["predicted"] = r.predicted;
          d["measured"] = r.measured;
          d["rel_deviation"] = r.rel_dev;
          out.append(d);
        }
        return out;
      },
      py::arg("op"), py::arg("ka"), py::arg("N"), py::arg("p") = 1,
      "DFT eigenvalues of the assembled circulant matrix next to the aliasing-sum prediction.");

  m.def(
      "solve_current",
      [](const std::string& formulation, double ka, int N, int p, double incidence) {
        const auto f = parse_formulation(formulation);
        const auto cfg = ProblemConfig::from_ka(ka, N, p);
        const disc::BasisSpec b{p, N};
        const auto sol = bem::solve_current(f, bem::Mesh(N, cfg.a), b, cfg, {incidence});
        py::dict d;
        d["angles"] = sol.sample_angles;
        d["samples"] = Eigen::VectorXcd(sol.samples);
        d["exact"] = Eigen::VectorXcd(bem::exact_current(f.pol, cfg, sol.sample_angles, {incidence}));
        d["condition_estimate"] = sol.condition_estimate;
        d["residual"] = sol.residual;
        d["warnings"] = describe_warnings(sol.warnings);
        return d;
      },
      py::arg("formulation"), py::arg("ka"), py::arg("N") = 0, py::arg("p") = 1,
      py::arg("incidence") = 0.0);

  m.def(
      "exact_current",
      [](const std::string& pol, double ka, const std::vector<double>& angles) {
        const auto cfg = ProblemConfig::from_ka(ka, 4, 1);
        return Eigen::VectorXcd(bem::exact_current(spectra::parse_polarization(pol), cfg, angles));
      },
      py::arg("polarization"), py::arg("ka"), py::arg("angles"));

  m.def(
      "error_report",
      [](const std::string& formulation, double ka, const std::string& measure, int p, int N) {
        return report_dict(analysis::error_report(parse_formulation(formulation),
                                                  analysis::parse_measure(measure), ka, p, N));
      },
      py::arg("formulation"), py::arg("ka"), py::arg("measure") = "Hks", py::arg("p") = 1,
      py::arg("N") = 0, "Predicted and BEM-measured relative current error at one frequency.");

  m.def(
      "frequency_sweep",
      [](const std::string& formulation, double ka_lo, double ka_hi, int points,
         const std::string& measure, const std::string& sampling, std::uint64_t seed, int p,
         bool measure_bem) {
        analysis::SweepOptions opt;
        opt.sampling = analysis::parse_sampling(sampling);
        opt.seed = seed;
        opt.p = p;
        opt.measure_bem = measure_bem;
        py::list out;
        for (const auto& r : analysis::frequency_sweep(parse_formulation(formulation),
                                                       analysis::parse_measure(measure), ka_lo,
                                                       ka_hi, points, opt))
          out.append(report_dict(r));
        return out;
      },
      py::arg("formulation"), py::arg("ka_lo"), py::arg("ka_hi"), py::arg("points"),
      py::arg("measure") = "Hks", py::arg("sampling") = "off_resonance", py::arg("seed") = 1,
      py::arg("p") = 1, py::arg("measure_bem") = true);

  m.def(
      "resonances",
      [](const std::string& formulation, double ka_lo, double ka_hi) {
        const auto f = parse_formulation(formulation);
        std::vector<std::pair<double, int>> out;
        for (const auto& r : analysis::resonance_locator(f.pol, f.composite, ka_lo, ka_hi))
          out.emplace_back(r.ka, r.q);
        return out;
      },
      py::arg("formulation"), py::arg("ka_lo"), py::arg("ka_hi"),
      "Interior resonances (ka, q) of the formulation inside [ka_lo, ka_hi].");

  m.def(
      "fit_power_law",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto f = analysis::fit_power_law(x, y);
        py::dict d;
        d["slope"] = f.slope;
        d["half_width"] = f.half_width;
        d["intercept"] = f.intercept;
        d["points"] = f.points;
        return d;
      },
      py::arg("x"), py::arg("y"));
}
