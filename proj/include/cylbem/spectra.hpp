#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cylbem/specfun.hpp"

namespace cylbem::spectra {

using cplx = std::complex<double>;

enum class OperatorKind { SingleLayer, DoubleLayer, AdjDoubleLayer, Hypersingular, Identity };
enum class WaveTag { K, KTilde };

struct OperatorId {
  OperatorKind kind = OperatorKind::Identity;
  WaveTag tag = WaveTag::K;
};

enum class Composite { EFIO, MFIO, CEFIO, CMFIO, CCFIO };
enum class Polarization { TM, TE };

struct FormulationId {
  Composite composite = Composite::EFIO;
  Polarization pol = Polarization::TM;
};

/// k - 0.4i k^{1/3} a^{-2/3}
cplx complex_wavenumber(double k, double a);

struct ProblemConfig {
  double a = 1.0;
  double k = 1.0;
  double eta = 1.0;
  int N = 4;
  int p = 1;

  cplx k_tilde() const { return complex_wavenumber(k, a); }
  double ka() const { return k * a; }
  cplx kta() const { return k_tilde() * a; }
  /// Dimensionless argument for the given wavenumber tag.
  cplx argument(WaveTag tag) const { return tag == WaveTag::K ? cplx(ka()) : kta(); }

  /// Throws DomainError unless a, k > 0, eta > 0, N >= 4 and p in {0, 1}.
  void validate() const;

  static ProblemConfig from_ka(double ka, int N, int p, double a = 1.0, double eta = 1.0);
};

/// S, D (= D*) and N eigenvalues at one order and argument.
struct LayerEigs {
  cplx s, d, n;
};

LayerEigs layer_eigs(const specfun::CylPair& pair);

/// Eigenvalues for orders 0..max_order at both wavenumbers, from one
/// recurrence sweep per argument.
class EigenBank {
 public:
  EigenBank(const ProblemConfig& cfg, int max_order);

  int max_order() const { return max_order_; }
  const ProblemConfig& config() const { return cfg_; }
  /// Any integer order with |order| <= max_order.
  cplx elementary(OperatorId op, long order) const;
  cplx composite(FormulationId f, long order) const;

 private:
  ProblemConfig cfg_;
  int max_order_;
  std::vector<LayerEigs> k_;
  std::vector<LayerEigs> kt_;
};

cplx eig_elementary(OperatorId op, int q, const ProblemConfig& cfg);
cplx eig_composite(FormulationId f, int q, const ProblemConfig& cfg);

/// Composite eigenvalue from elementary ones; the same algebra is reused for
/// the discrete spectra.
struct ElementarySet {
  cplx s, d, n, s_t, d_t, n_t, identity;
};
cplx compose(FormulationId f, const ElementarySet& e);

std::string to_string(OperatorKind kind);
std::string to_string(OperatorId op);
std::string to_string(Composite c);
std::string to_string(Polarization pol);
std::string to_string(FormulationId f);

/// Accepts S, D, Dstar, N, I (and long names); "~" suffix selects k_tilde.
OperatorId parse_operator(const std::string& text);
Polarization parse_polarization(const std::string& text);
/// EFIE/EFIO, MFIE/MFIO, CEFIO, CMFIO, CCFIE/CCFIO.
Composite parse_composite(const std::string& text);

}  // namespace cylbem::spectra
