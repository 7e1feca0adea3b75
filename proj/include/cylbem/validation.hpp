#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cylbem/analysis.hpp"
#include "cylbem/bem.hpp"
#include "cylbem/io.hpp"

namespace cylbem::validation {

using cplx = std::complex<double>;
using analysis::ErrorReport;
using analysis::ScalingFit;
using spectra::FormulationId;
using spectra::OperatorId;
using spectra::Polarization;

/// |a - b| / |b| for scaled values.
double relative_difference(const ScaledComplex& a, const ScaledComplex& b);

/// Largest Wronskian residual of cyl_sequence(qmax, z) over the given arguments.
double max_wronskian_residual(int qmax, const std::vector<cplx>& args);

struct ReferenceComparison {
  double max_rel_j = 0.0;
  double max_rel_h2 = 0.0;
  int rows = 0;
};
ReferenceComparison compare_reference(const std::vector<io::BesselReference>& table);

/// max over q in [0, qmax] of |S N + D^2 - 1/4| / (1/4) at real ka.
double calderon_residual(double ka, int qmax);

struct BemSpectrumRow {
  int q = 0;
  OperatorId op;
  cplx predicted;
  cplx measured;
  double rel_dev = 0.0;
};

/// DFT eigenvalues of the assembled matrix next to the aliasing-sum prediction;
/// rel_dev = |measured - predicted| / |predicted|.
std::vector<BemSpectrumRow> bem_spectrum(OperatorId op, double ka, int N, int p,
                                         const bem::QuadratureOptions& quad = {});
double max_deviation(const std::vector<BemSpectrumRow>& rows);

/// Largest |r_pred - r_meas| / r_meas over unflagged reports.
double max_closure_error(const std::vector<ErrorReport>& reports);

/// Slope bands: TE-EFIE in [0.2, 0.45]; TE-MFIE and every TM formulation in
/// [-0.1, 0.1]. TE-CCFIE is judged against the TE-EFIE slope instead.
struct SlopeBand {
  double lo = 0.0;
  double hi = 0.0;
  bool relative_to_efie = false;
};
SlopeBand slope_band(FormulationId f);

struct SlopeVerdict {
  FormulationId formulation;
  ScalingFit fit;
  bool pass = false;
  std::string detail;
};
/// `fits` may hold any subset; TE-CCFIE needs TE-EFIE alongside it.
std::vector<SlopeVerdict> judge_slopes(const std::vector<std::pair<FormulationId, ScalingFit>>& fits);

/// Fit over reports with ka >= ka_min.
ScalingFit fit_from(const std::vector<ErrorReport>& reports, double ka_min, bool mask = true);

struct Spike {
  double ka = 0.0;
  double zero = 0.0;  // nearest zero of the formulation's family
  int q = 0;
  double r_predicted = 0.0;
  double r_measured = 0.0;
  double partner_peak = 0.0;   // location of the partner's largest error near ka
  double partner_ratio = 0.0;  // that error over the partner's window median
};

struct ResonanceScan {
  FormulationId formulation;
  FormulationId partner;
  std::vector<ErrorReport> reports;  // predicted only
  std::vector<Spike> spikes;
};

struct ResonanceOptions {
  double ka_lo = 5.0;
  double ka_hi = 11.0;
  double step = 2e-4;
  double spike_factor = 3.0;
  int window = 25;
  double radius = 0.05;         // location and pairing tolerance
  double partner_factor = 1.5;  // partner bump over its window median
  bool measure_spikes = true;
};

/// Dense predicted-error scans of TM-EFIE, TE-MFIE, TM-MFIE and TE-EFIE;
/// spikes are detected on each, confirmed by a BEM solve, and matched with
/// the paired formulation (TM-EFIE with TE-MFIE, TM-MFIE with TE-EFIE).
std::vector<ResonanceScan> resonance_scans(const ResonanceOptions& opt = {});

struct ScanVerdict {
  bool pass = false;
  int spikes = 0;
  double worst_distance = 0.0;
  double worst_partner_offset = 0.0;
  double min_partner_ratio = 0.0;
  double worst_closure = 0.0;
  std::string detail;
};
ScanVerdict judge_resonance_scans(const std::vector<ResonanceScan>& scans,
                                  const ResonanceOptions& opt = {});

/// max / median of measured r.
double max_over_median(const std::vector<ErrorReport>& reports);

struct ExponentCheck {
  std::string name;
  ScalingFit fit;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass() const;
};

/// Transition-region exponents over ka in [lo, hi], N = mesh_size(ka), p = 1:
/// |lambda_S| and |lambda_N| at q = round(ka); aliasing error of D at
/// q = round(ka/2) (rows flagged resonant dropped); aliasing error of I at
/// q = round(ka); max over |q - ka| <= 3 of the TE CCFIO aliasing error.
std::vector<ExponentCheck> transition_exponents(double lo = 20.0, double hi = 200.0,
                                                int points = 40);

/// Measured L2 error of TM-EFIE at fixed ka over the given mesh sizes.
std::vector<double> refinement_errors(double ka, const std::vector<int>& Ns);

}  // namespace cylbem::validation
