#pragma once

#include <complex>
#include <memory>
#include <variant>
#include <vector>

#include "cylbem/spectra.hpp"

namespace cylbem::disc {

using cplx = std::complex<double>;
using spectra::FormulationId;
using spectra::OperatorId;
using spectra::ProblemConfig;

enum class Role { Test, Source };

struct BasisSpec {
  int p = 1;
  int N = 4;
  Role role = Role::Source;
  void validate() const;
};

/// [sin(pi q/N)/(pi q/N)]^{p+1}; 1 at q = 0, 0 at nonzero multiples of N.
double fourier_coeff(const BasisSpec& b, long q);

/// Maps q into [-N/2, N/2) (N even).
int wrap_index(long q, int N);

/// Hurwitz zeta sum_{k>=0} (k + a)^{-s} for integer s >= 2, a > 0.
double hurwitz_zeta(int s, double a);

inline constexpr int kDefaultSmax = 64;

/// Result of the aliasing sum sum_s lambda_{q+sN} T_{q+sN} F_{q+sN}.
struct AliasSum {
  cplx value;            // full discrete eigenvalue
  cplx principal;        // s = 0 term
  cplx aliased;          // s != 0 terms, including the analytic tail
  double tail_estimate = 0.0;  // uncertainty left after truncation, relative to |value|
  int terms = 0;         // largest |s| summed directly
  unsigned warnings = 0;
};

struct SpectrumRow {
  int q = 0;
  cplx lambda_cont;
  cplx lambda_disc;
  cplx proj_err;
  cplx alias_err;
  cplx total_err;
  unsigned flags = 0;
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;  // q = -N/2 .. N/2-1 in order
  const SpectrumRow& at(int q) const;
};

/// Discrete spectra on one (configuration, basis) pair. Continuous eigenvalues
/// are precomputed once; beyond the tabulated range the large-order expansion
/// is used.
class DiscreteSpectrum {
 public:
  DiscreteSpectrum(const ProblemConfig& cfg, const BasisSpec& basis, int smax = kDefaultSmax);
  DiscreteSpectrum(const ProblemConfig& cfg, const BasisSpec& test, const BasisSpec& source,
                   int smax = kDefaultSmax);

  const ProblemConfig& config() const { return cfg_; }
  const spectra::EigenBank& bank() const { return *bank_; }
  int N() const { return cfg_.N; }

  /// Continuous eigenvalue at any integer order.
  cplx continuous(OperatorId op, long order) const;
  cplx continuous(FormulationId f, long order) const;

  /// T_q F_q
  double projection(long q) const;

  AliasSum elementary(OperatorId op, int q) const;
  cplx composite(FormulationId f, int q) const;

  SpectrumRow row(OperatorId op, int q) const;
  SpectrumRow row(FormulationId f, int q) const;
  SpectrumTable table(OperatorId op) const;
  SpectrumTable table(FormulationId f) const;

 private:
  spectra::ElementarySet discrete_set(int q) const;

  ProblemConfig cfg_;
  BasisSpec test_;
  BasisSpec source_;
  int smax_;
  int tabulated_;
  std::shared_ptr<const spectra::EigenBank> bank_;
};

AliasSum discrete_eig_elementary(OperatorId op, int q, const ProblemConfig& cfg,
                                 const BasisSpec& b, int smax = kDefaultSmax);
cplx discrete_eig_composite(FormulationId f, int q, const ProblemConfig& cfg, const BasisSpec& b,
                            int smax = kDefaultSmax);
SpectrumRow spectral_error(const std::variant<OperatorId, FormulationId>& what, int q,
                           const ProblemConfig& cfg, const BasisSpec& b, int smax = kDefaultSmax);

}  // namespace cylbem::disc
