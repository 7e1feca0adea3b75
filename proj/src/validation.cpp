#include "cylbem/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cylbem/errors.hpp"
#include "cylbem/specfun.hpp"

namespace cylbem::validation {

using analysis::FitSource;
using analysis::Measure;
using spectra::Composite;
using spectra::OperatorKind;
using spectra::WaveTag;

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

double relative_difference(const ScaledComplex& a, const ScaledComplex& b) {
  if (b.is_zero()) return a.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
  const ScaledComplex d = a - b;
  if (d.is_zero()) return 0.0;
  return std::exp2(d.log2_abs() - b.log2_abs());
}

double max_wronskian_residual(int qmax, const std::vector<cplx>& args) {
  double worst = 0.0;
  for (const cplx z : args) {
    for (const auto& pair : specfun::cyl_sequence(qmax, z))
      worst = std::max(worst, specfun::wronskian_residual(pair));
  }
  return worst;
}

ReferenceComparison compare_reference(const std::vector<io::BesselReference>& table) {
  ReferenceComparison out;
  for (const auto& row : table) {
    const auto seq = specfun::cyl_sequence(row.q, row.z);
    const auto& got = seq[row.q];
    out.max_rel_j = std::max(out.max_rel_j, relative_difference(got.j, row.j));
    out.max_rel_h2 = std::max(out.max_rel_h2, relative_difference(got.h2, row.h2));
    ++out.rows;
  }
  return out;
}

double calderon_residual(double ka, int qmax) {
  const auto seq = specfun::cyl_sequence(qmax, ka);
  double worst = 0.0;
  for (const auto& pair : seq) {
    const auto e = spectra::layer_eigs(pair);
    worst = std::max(worst, std::abs(e.s * e.n + e.d * e.d - 0.25) / 0.25);
  }
  return worst;
}

std::vector<BemSpectrumRow> bem_spectrum(OperatorId op, double ka, int N, int p,
                                         const bem::QuadratureOptions& quad) {
  const auto cfg = spectra::ProblemConfig::from_ka(ka, N, p);
  const disc::BasisSpec b{p, N};
  const disc::DiscreteSpectrum ds(cfg, b);
  const auto mat = bem::assemble(op, bem::Mesh(N, cfg.a), b, cfg, quad);
  const auto eig = bem::circulant_eigs(mat);
  std::vector<BemSpectrumRow> rows;
  for (int i = 0; i < N; ++i) {
    BemSpectrumRow r;
    r.q = i - N / 2;
    r.op = op;
    r.predicted = ds.elementary(op, r.q).value;
    r.measured = eig[i];
    r.rel_dev = std::abs(r.measured - r.predicted) / std::abs(r.predicted);
    rows.push_back(r);
  }
  return rows;
}

double max_deviation(const std::vector<BemSpectrumRow>& rows) {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.rel_dev);
  return worst;
}

double max_closure_error(const std::vector<ErrorReport>& reports) {
  double worst = 0.0;
  for (const auto& r : reports) {
    if (r.resonance_flag) continue;
    worst = std::max(worst, std::abs(r.r_predicted - r.r_measured) / r.r_measured);
  }
  return worst;
}

SlopeBand slope_band(FormulationId f) {
  if (f.pol == Polarization::TE && f.composite == Composite::EFIO) return {0.2, 0.45, false};
  if (f.pol == Polarization::TE && f.composite == Composite::CCFIO) return {0.0, 0.0, true};
  return {-0.1, 0.1, false};
}

std::vector<SlopeVerdict> judge_slopes(
    const std::vector<std::pair<FormulationId, ScalingFit>>& fits) {
  const ScalingFit* te_efie = nullptr;
  for (const auto& [f, fit] : fits)
    if (f.pol == Polarization::TE && f.composite == Composite::EFIO) te_efie = &fit;
  std::vector<SlopeVerdict> out;
  for (const auto& [f, fit] : fits) {
    SlopeVerdict v{f, fit, false, {}};
    const SlopeBand band = slope_band(f);
    if (band.relative_to_efie) {
      if (te_efie == nullptr) {
        v.detail = "needs the TE-EFIE fit";
      } else {
        v.pass = fit.slope <= te_efie->slope - 0.1;
        v.detail = fmt("slope %.4f <= TE-EFIE slope %.4f - 0.1", fit.slope, te_efie->slope);
      }
    } else {
      v.pass = fit.slope >= band.lo && fit.slope <= band.hi;
      v.detail = fmt("slope %.4f in [%.2f, %.2f]", fit.slope, band.lo, band.hi);
    }
    out.push_back(v);
  }
  return out;
}

ScalingFit fit_from(const std::vector<ErrorReport>& reports, double ka_min, bool mask) {
  std::vector<ErrorReport> kept;
  for (const auto& r : reports)
    if (r.ka >= ka_min) kept.push_back(r);
  return analysis::fit_scaling_exponent(kept, mask, FitSource::Measured);
}

std::vector<ResonanceScan> resonance_scans(const ResonanceOptions& opt) {
  const FormulationId order[4] = {{Composite::EFIO, Polarization::TM},
                                  {Composite::MFIO, Polarization::TE},
                                  {Composite::MFIO, Polarization::TM},
                                  {Composite::EFIO, Polarization::TE}};
  std::vector<double> kas;
  for (long i = 0;; ++i) {
    const double ka = opt.ka_lo + static_cast<double>(i) * opt.step;
    if (ka > opt.ka_hi + 1e-12) break;
    kas.push_back(ka);
  }
  analysis::SweepOptions so;
  so.measure_bem = false;
  so.flag_resonances = false;

  std::vector<ResonanceScan> scans(4);
  for (int i = 0; i < 4; ++i) {
    scans[i].formulation = order[i];
    scans[i].partner = order[i ^ 1];
    scans[i].reports = analysis::sweep_at(order[i], Measure::Hks, kas, so);
  }
  for (int i = 0; i < 4; ++i) {
    auto& scan = scans[i];
    const auto& partner = scans[i ^ 1].reports;
    const auto zeros = analysis::resonance_locator(scan.formulation.pol,
                                                   scan.formulation.composite,
                                                   opt.ka_lo - 1.0, opt.ka_hi + 1.0);
    for (const double ka : analysis::detect_spikes(scan.reports, opt.spike_factor, opt.window,
                                                   FitSource::Predicted)) {
      Spike s;
      s.ka = ka;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& z : zeros) {
        if (std::abs(z.ka - ka) < best) {
          best = std::abs(z.ka - ka);
          s.zero = z.ka;
          s.q = z.q;
        }
      }
      for (const auto& r : scan.reports)
        if (r.ka == ka) s.r_predicted = r.r_predicted;
      if (opt.measure_spikes) {
        s.r_measured =
            analysis::error_report(scan.formulation, Measure::Hks, ka).r_measured;
      }
      std::vector<double> window;
      double peak = -1.0;
      for (const auto& r : partner) {
        if (std::abs(r.ka - ka) > opt.radius) continue;
        window.push_back(r.r_predicted);
        if (r.r_predicted > peak) {
          peak = r.r_predicted;
          s.partner_peak = r.ka;
        }
      }
      s.partner_ratio = peak / median(window);
      scan.spikes.push_back(s);
    }
  }
  return scans;
}

ScanVerdict judge_resonance_scans(const std::vector<ResonanceScan>& scans,
                                  const ResonanceOptions& opt) {
  ScanVerdict v;
  v.pass = true;
  v.min_partner_ratio = std::numeric_limits<double>::infinity();
  bool efie_found = false, mfie_found = false;
  for (const auto& scan : scans) {
    const bool family_j = (scan.formulation.pol == Polarization::TM) ==
                          (scan.formulation.composite == Composite::EFIO);
    if (!scan.spikes.empty()) (family_j ? efie_found : mfie_found) = true;
    for (const auto& s : scan.spikes) {
      ++v.spikes;
      const double dist = std::abs(s.ka - s.zero);
      const double off = std::abs(s.partner_peak - s.ka);
      v.worst_distance = std::max(v.worst_distance, dist);
      v.worst_partner_offset = std::max(v.worst_partner_offset, off);
      v.min_partner_ratio = std::min(v.min_partner_ratio, s.partner_ratio);
      const bool interior = off < opt.radius - 0.5 * opt.step;
      if (dist > opt.radius || !interior || s.partner_ratio < opt.partner_factor) {
        v.pass = false;
        v.detail += spectra::to_string(scan.formulation) +
                    fmt(" spike %.4f: zero distance %.4f, partner ratio %.2f; ", s.ka, dist,
                        s.partner_ratio);
      }
      if (opt.measure_spikes && s.r_measured > 0.0) {
        v.worst_closure = std::max(v.worst_closure,
                                   std::abs(s.r_predicted - s.r_measured) / s.r_measured);
      }
    }
  }
  if (!efie_found || !mfie_found) {
    v.pass = false;
    v.detail += "no spike found for one resonance family; ";
  }
  if (opt.measure_spikes && v.worst_closure > 0.05) {
    v.pass = false;
    v.detail += fmt("BEM error at a spike departs from prediction by %.3g; ", v.worst_closure);
  }
  if (v.spikes == 0) v.min_partner_ratio = 0.0;
  return v;
}

double max_over_median(const std::vector<ErrorReport>& reports) {
  std::vector<double> v;
  for (const auto& r : reports) v.push_back(r.r_measured);
  if (v.empty()) return 0.0;
  const double mx = *std::max_element(v.begin(), v.end());
  return mx / median(v);
}

bool ExponentCheck::pass() const { return std::abs(fit.slope - target) <= tolerance; }

std::vector<ExponentCheck> transition_exponents(double lo, double hi, int points) {
  std::vector<double> x, ls, ln, ad_x, ad, ai, cc;
  const OperatorId S{OperatorKind::SingleLayer, WaveTag::K};
  const OperatorId D{OperatorKind::DoubleLayer, WaveTag::K};
  const OperatorId Nop{OperatorKind::Hypersingular, WaveTag::K};
  const OperatorId I{OperatorKind::Identity, WaveTag::K};
  const FormulationId ccfio{Composite::CCFIO, Polarization::TE};
  for (int i = 0; i < points; ++i) {
    const double ka = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    const int N = analysis::mesh_size(ka);
    const auto cfg = spectra::ProblemConfig::from_ka(ka, N, 1);
    const disc::DiscreteSpectrum ds(cfg, disc::BasisSpec{1, N});
    const int q = static_cast<int>(std::lround(ka));
    x.push_back(ka);
    ls.push_back(std::abs(ds.continuous(S, q)));
    ln.push_back(std::abs(ds.continuous(Nop, q)));
    ai.push_back(std::abs(ds.row(I, q).alias_err));
    const auto rd = ds.row(D, static_cast<int>(std::lround(0.5 * ka)));
    if (!(rd.flags & kResonanceFlag)) {
      ad_x.push_back(ka);
      ad.push_back(std::abs(rd.alias_err));
    }
    double worst = 0.0;
    for (int dq = -3; dq <= 3; ++dq)
      worst = std::max(worst, std::abs(ds.row(ccfio, q + dq).alias_err));
    cc.push_back(worst);
  }
  using analysis::fit_power_law;
  return {
      {"|lambda_S(q=ka)|", fit_power_law(x, ls), 1.0 / 3.0, 0.08},
      {"|lambda_N(q=ka)|", fit_power_law(x, ln), -1.0 / 3.0, 0.08},
      {"|E_A(D, q=ka/2)|", fit_power_law(ad_x, ad), -1.0, 0.2},
      {"|E_A(I, q=ka)|", fit_power_law(x, ai), 0.0, 0.05},
      {"max|E_A(TE-CCFIO, q~ka)|", fit_power_law(x, cc), 1.0 / 3.0, 0.13},
  };
}

std::vector<double> refinement_errors(double ka, const std::vector<int>& Ns) {
  std::vector<double> out;
  for (const int N : Ns) {
    out.push_back(analysis::error_report({Composite::EFIO, Polarization::TM}, Measure::L2, ka,
                                         1, N)
                      .r_measured);
  }
  return out;
}

}  // namespace cylbem::validation
