// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: cylbem_acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cylbem/analysis.hpp"
#include "cylbem/errors.hpp"
#include "cylbem/io.hpp"
#include "cylbem/spectra.hpp"
#include "cylbem/validation.hpp"

using namespace cylbem;
using analysis::ErrorReport;
using analysis::Measure;
using spectra::Composite;
using spectra::FormulationId;
using spectra::OperatorId;
using spectra::OperatorKind;
using spectra::Polarization;
using spectra::WaveTag;
using cplx = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

const std::vector<Composite> kEquations = {Composite::EFIO, Composite::MFIO, Composite::CCFIO};

analysis::SweepOptions figure_options() {
  analysis::SweepOptions opt;
  opt.sampling = analysis::Sampling::OffResonance;
  opt.seed = 1;
  return opt;
}

// Shared between criteria 4 and 5.
std::map<Polarization, std::vector<std::vector<ErrorReport>>> sweep_cache;

const std::vector<std::vector<ErrorReport>>& figure_sweeps(Polarization pol) {
  auto it = sweep_cache.find(pol);
  if (it != sweep_cache.end()) return it->second;
  std::vector<std::vector<ErrorReport>> out;
  for (const auto c : kEquations)
    out.push_back(analysis::frequency_sweep({c, pol}, Measure::Hks, 5.0, 150.0, 40, figure_options()));
  return sweep_cache[pol] = out;
}

std::string closure_detail(Polarization pol, double& worst, int& flagged) {
  std::string d;
  worst = 0.0;
  flagged = 0;
  const auto& sweeps = figure_sweeps(pol);
  for (std::size_t i = 0; i < sweeps.size(); ++i) {
    const double e = validation::max_closure_error(sweeps[i]);
    for (const auto& r : sweeps[i]) flagged += r.resonance_flag;
    worst = std::max(worst, e);
    d += fmt("%s %.2g%% ", analysis::equation_name(kEquations[i]).c_str(), 100 * e);
  }
  return d;
}

Outcome criterion1() {
  std::vector<cplx> args;
  for (const double ka : logspace(1.0, 500.0, 48)) args.emplace_back(ka, 0.0);
  for (const double ka : logspace(1.0, 300.0, 32))
    args.push_back(spectra::complex_wavenumber(ka, 1.0));
  const double w = validation::max_wronskian_residual(2000, args);
  std::ifstream in(CYLBEM_DATA_DIR "/bessel_reference.csv");
  const auto table = io::read_bessel_reference(in);
  const auto ref = validation::compare_reference(table);
  const bool pass = w <= 1e-10 && ref.rows >= 100 && ref.max_rel_j <= 1e-11 && ref.max_rel_h2 <= 1e-10;
  return {pass, fmt("Wronskian max %.2e over %zu arguments x 2001 orders; table %d rows, J %.2e, H2 %.2e",
                    w, args.size(), ref.rows, ref.max_rel_j, ref.max_rel_h2)};
}

Outcome criterion2() {
  double worst = 0.0;
  for (const double ka : {10.0, 50.0, 100.0, 200.0})
    worst = std::max(worst, validation::calderon_residual(ka, static_cast<int>(3 * ka)));
  return {worst <= 1e-9, fmt("max relative residual %.2e", worst)};
}

Outcome criterion3() {
  const OperatorId S{OperatorKind::SingleLayer, WaveTag::K};
  const OperatorId D{OperatorKind::DoubleLayer, WaveTag::K};
  const OperatorId Ds{OperatorKind::AdjDoubleLayer, WaveTag::K};
  const OperatorId N{OperatorKind::Hypersingular, WaveTag::K};
  const OperatorId I{OperatorKind::Identity, WaveTag::K};
  double worst = 0.0;
  std::string where;
  for (const auto [ka, n] : {std::pair{20.0, 80}, std::pair{50.0, 200}}) {
    for (int p : {0, 1}) {
      for (const OperatorId op : {S, D, Ds, I, N}) {
        if (op.kind == OperatorKind::Hypersingular && p == 0) continue;
        const double d = validation::max_deviation(validation::bem_spectrum(op, ka, n, p));
        if (d > worst) {
          worst = d;
          where = fmt("%s p=%d ka=%g", spectra::to_string(op).c_str(), p, ka);
        }
      }
    }
  }
  return {worst <= 1e-6, fmt("max relative deviation %.2e (%s)", worst, where.c_str())};
}

Outcome criterion4() {
  double worst;
  int flagged;
  const std::string d = closure_detail(Polarization::TM, worst, flagged);
  return {worst <= 0.05, "TM closure " + d + fmt("; %d flagged points excluded", flagged)};
}

Outcome criterion5() {
  double worst;
  int flagged;
  std::string d = "TE closure " + closure_detail(Polarization::TE, worst, flagged);
  bool pass = worst <= 0.05;
  std::vector<std::pair<FormulationId, analysis::ScalingFit>> fits;
  for (const auto pol : {Polarization::TM, Polarization::TE}) {
    const auto& sweeps = figure_sweeps(pol);
    for (std::size_t i = 0; i < sweeps.size(); ++i)
      fits.emplace_back(FormulationId{kEquations[i], pol}, validation::fit_from(sweeps[i], 15.0));
  }
  d += "; slopes";
  for (const auto& v : validation::judge_slopes(fits)) {
    pass = pass && v.pass;
    d += fmt(" %s %+.3f%s", spectra::to_string(v.formulation).c_str(), v.fit.slope, v.pass ? "" : "(!)");
  }
  return {pass, d};
}

Outcome criterion6() {
  const validation::ResonanceOptions opt;
  const auto scans = validation::resonance_scans(opt);
  const auto v = validation::judge_resonance_scans(scans, opt);
  std::string d = fmt("%d spikes, zero distance <= %.4f, partner offset <= %.4f, partner ratio >= %.2f, "
                      "spike closure %.2g%%",
                      v.spikes, v.worst_distance, v.worst_partner_offset, v.min_partner_ratio,
                      100 * v.worst_closure);
  bool pass = v.pass;
  if (!v.pass) d += " [" + v.detail + "]";

  for (const auto pol : {Polarization::TM, Polarization::TE}) {
    std::set<double> kas;
    for (const double ka : logspace(5.0, 100.0, 48)) kas.insert(ka);
    for (const auto& s : scans)
      if (s.formulation.pol == pol)
        for (const auto& sp : s.spikes) kas.insert(sp.ka);
    analysis::SweepOptions so;
    so.flag_resonances = false;
    const auto reps = analysis::sweep_at({Composite::CCFIO, pol}, Measure::Hks,
                                         std::vector<double>(kas.begin(), kas.end()), so);
    const double ratio = validation::max_over_median(reps);
    pass = pass && ratio < 3.0;
    d += fmt("; %s-CCFIE max/median %.2f over %zu points", spectra::to_string(pol).c_str(), ratio,
             reps.size());
  }
  return {pass, d};
}

Outcome criterion7() {
  bool pass = true;
  std::string d;
  for (const auto& c : validation::transition_exponents()) {
    pass = pass && c.pass();
    d += fmt("%s%s %+.3f (target %+.3f +- %.2f)%s", d.empty() ? "" : "; ", c.name.c_str(),
             c.fit.slope, c.target, c.tolerance, c.pass() ? "" : "(!)");
  }
  return {pass, d};
}

Outcome criterion8() {
  const std::vector<int> Ns = {40, 80, 160, 320};
  const auto r = validation::refinement_errors(10.0, Ns);
  bool pass = true;
  std::string d = "r_L2";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i > 0 && !(r[i] < r[i - 1])) pass = false;
    d += fmt(" N=%d:%.3e", Ns[i], r[i]);
  }
  return {pass, d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"special functions", criterion1},   {"Calderon identity", criterion2},
      {"predicted vs assembled spectra", criterion3},
      {"TM error closure", criterion4},    {"TE closure and scaling slopes", criterion5},
      {"resonance structure", criterion6}, {"transition-region exponents", criterion7},
      {"refinement", criterion8}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id,
                criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
