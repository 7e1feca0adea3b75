#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cylbem/bem.hpp"
#include "cylbem/discretization.hpp"
#include "cylbem/spectra.hpp"

namespace cylbem::analysis {

using cplx = std::complex<double>;
using disc::BasisSpec;
using disc::DiscreteSpectrum;
using spectra::Composite;
using spectra::FormulationId;
using spectra::Polarization;
using spectra::ProblemConfig;

enum class Measure { L2, Hs, Hks };

std::string to_string(Measure m);
Measure parse_measure(const std::string& text);
/// "EFIE", "MFIE", "CCFIE" for the three solvable formulations.
std::string equation_name(Composite c);

/// -1/2 for TM, +1/2 for TE.
double sobolev_exponent(Polarization pol);
/// 1, (1 + q^2)^s or ((ka)^2 + q^2)^s.
double norm_weight(Measure m, Polarization pol, double ka, double q);

/// Points-per-wavelength rule: N = 2 round(2 ka).
int mesh_size(double ka);

struct ErrorReport {
  double ka = 0.0;
  int N = 0;
  FormulationId formulation;
  Measure measure = Measure::Hks;
  double s = 0.0;
  double r_predicted = 0.0;
  double r_measured = 0.0;
  bool resonance_flag = false;
  unsigned warnings = 0;
};

struct UpsilonEntry {
  int q = 0;
  cplx U;
  cplx upsilon;
  unsigned flags = 0;
};

struct UpsilonTable {
  FormulationId formulation;
  std::vector<UpsilonEntry> rows;  // q = -Q..Q
};

/// Predicted relative current error of harmonic q.
cplx upsilon(FormulationId f, int q, const DiscreteSpectrum& ds, unsigned* flags = nullptr);
cplx upsilon(FormulationId f, int q, const ProblemConfig& cfg, const BasisSpec& b);
UpsilonTable upsilon_table(FormulationId f, const DiscreteSpectrum& ds);

/// Predicted (J_hat_n - J_n)/J_n at the sample angles of the basis.
std::vector<cplx> pointwise_current_error(FormulationId f, const ProblemConfig& cfg,
                                          const BasisSpec& b, unsigned* flags = nullptr);

double predicted_error_norm(Measure m, const UpsilonTable& table, double ka);
double predicted_error_norm(Measure m, FormulationId f, const ProblemConfig& cfg,
                            const BasisSpec& b);
/// Same weighted ratio from samples, through the N-point DFT of the error.
double measured_error_norm(Measure m, Polarization pol, double ka,
                           const std::vector<double>& angles, const Eigen::VectorXcd& approx,
                           const Eigen::VectorXcd& exact);

/// One sweep point: predicted and BEM-measured error at (ka, N = mesh_size(ka) unless given).
ErrorReport error_report(FormulationId f, Measure m, double ka, int p = 1, int N = 0,
                         const bem::QuadratureOptions& quad = {});

struct Resonance {
  double ka = 0.0;
  int q = 0;
};

/// Zeros of J_q (TM-EFIE, TE-MFIE) or J'_q (TM-MFIE, TE-EFIE) inside the
/// range; none for the combined formulation.
std::vector<Resonance> resonance_locator(Polarization pol, Composite c, double ka_lo,
                                         double ka_hi);
double distance_to_resonance(const std::vector<Resonance>& res, double ka);

enum class Sampling {
  Grid,          // log-spaced
  Jittered,      // log-spaced with a seeded offset inside each cell
  OffResonance,  // per cell, the seeded candidate with the smallest predicted error
};

std::string to_string(Sampling s);
Sampling parse_sampling(const std::string& text);

struct SweepOptions {
  int p = 1;
  Sampling sampling = Sampling::Jittered;
  std::uint64_t seed = 1;
  int candidates = 8;
  double mask_radius = 0.05;
  double spike_factor = 1.5;
  double probe_halfwidth = 0.5;
  int probe_points = 21;
  int threads = 0;  // 0: CYLBEM_THREADS or 1
  bool measure_bem = true;
  bool flag_resonances = true;
  bem::QuadratureOptions quad;
};

std::vector<double> sample_points(double ka_lo, double ka_hi, int points, const SweepOptions& opt);

std::vector<ErrorReport> frequency_sweep(FormulationId f, Measure m, double ka_lo, double ka_hi,
                                         int points, const SweepOptions& opt = {});

/// Evaluates ka values given explicitly (dense resonance scans).
std::vector<ErrorReport> sweep_at(FormulationId f, Measure m, const std::vector<double>& kas,
                                  const SweepOptions& opt = {});

/// Resonance test for one point: inside mask_radius of a zero of the family
/// and predicted error above spike_factor times the probe-window minimum.
bool resonance_flag(FormulationId f, Measure m, double ka, const SweepOptions& opt);

struct ScalingFit {
  double slope = 0.0;
  double half_width = 0.0;  // 95 % confidence
  double intercept = 0.0;
  int points = 0;
};

enum class FitSource { Measured, Predicted };

/// Least squares of log r against log ka over unflagged reports (all reports
/// when mask is false).
ScalingFit fit_scaling_exponent(const std::vector<ErrorReport>& reports, bool mask = true,
                                FitSource source = FitSource::Measured);
ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Local maxima exceeding factor times the median of their neighbourhood.
std::vector<double> detect_spikes(const std::vector<ErrorReport>& reports, double factor = 3.0,
                                  int window = 25, FitSource source = FitSource::Measured);

int thread_count(int requested);

}  // namespace cylbem::analysis
