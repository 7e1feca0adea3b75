#include "cylbem/spectra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "cylbem/errors.hpp"

namespace cylbem::spectra {

namespace {

constexpr cplx kI{0.0, 1.0};

const LayerEigs& pick(const std::vector<LayerEigs>& v, long order, int max_order) {
  const long n = std::labs(order);
  if (n > max_order) throw DomainError("EigenBank: order beyond precomputed range");
  return v[static_cast<std::size_t>(n)];
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

}  // namespace

cplx complex_wavenumber(double k, double a) {
  return {k, -0.4 * std::cbrt(k) * std::pow(a, -2.0 / 3.0)};
}

void ProblemConfig::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("ProblemConfig: radius must be > 0");
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("ProblemConfig: wavenumber must be > 0");
  if (!(eta > 0.0)) throw DomainError("ProblemConfig: impedance must be > 0");
  if (N < 4) throw DomainError("ProblemConfig: N must be >= 4");
  if (p != 0 && p != 1) throw DomainError("ProblemConfig: p must be 0 or 1");
}

ProblemConfig ProblemConfig::from_ka(double ka, int N, int p, double a, double eta) {
  ProblemConfig cfg;
  cfg.a = a;
  cfg.k = ka / a;
  cfg.eta = eta;
  cfg.N = N;
  cfg.p = p;
  cfg.validate();
  return cfg;
}

LayerEigs layer_eigs(const specfun::CylPair& pair) {
  const cplx z = pair.z;
  const double pi = std::numbers::pi;
  LayerEigs e;
  e.s = -(kI * pi * z / 2.0) * (pair.j * pair.h2).value();
  e.d = -(kI * pi * z / 4.0) * (pair.jp * pair.h2 + pair.j * pair.h2p).value();
  e.n = (kI * pi * z / 2.0) * (pair.jp * pair.h2p).value();
  return e;
}

EigenBank::EigenBank(const ProblemConfig& cfg, int max_order) : cfg_(cfg), max_order_(max_order) {
  cfg_.validate();
  const auto fill = [&](cplx z, std::vector<LayerEigs>& out) {
    const auto seq = specfun::cyl_sequence(max_order, z);
    out.reserve(seq.size());
    for (const auto& pair : seq) out.push_back(layer_eigs(pair));
  };
  fill(cfg_.argument(WaveTag::K), k_);
  fill(cfg_.argument(WaveTag::KTilde), kt_);
}

cplx EigenBank::elementary(OperatorId op, long order) const {
  if (op.kind == OperatorKind::Identity) return 1.0;
  const LayerEigs& e = pick(op.tag == WaveTag::K ? k_ : kt_, order, max_order_);
  switch (op.kind) {
    case OperatorKind::SingleLayer:
      return e.s;
    case OperatorKind::DoubleLayer:
    case OperatorKind::AdjDoubleLayer:
      return e.d;
    case OperatorKind::Hypersingular:
      return e.n;
    case OperatorKind::Identity:
      break;
  }
  return 1.0;
}

cplx EigenBank::composite(FormulationId f, long order) const {
  const LayerEigs& k = pick(k_, order, max_order_);
  const LayerEigs& t = pick(kt_, order, max_order_);
  return compose(f, {k.s, k.d, k.n, t.s, t.d, t.n, 1.0});
}

cplx compose(FormulationId f, const ElementarySet& e) {
  const bool tm = f.pol == Polarization::TM;
  const cplx half = 0.5 * e.identity;
  const cplx efio = tm ? e.s : e.n;
  const cplx mfio = tm ? half + e.d : half - e.d;
  // Ratios carry the inverse Gram factor; identity = 1 in the continuous case.
  const cplx cefio = tm ? e.n_t * e.s / e.identity : e.s_t * e.n / e.identity;
  const cplx mfio_t = tm ? half - e.d_t : half + e.d_t;
  const cplx cmfio = mfio_t * mfio / e.identity;
  switch (f.composite) {
    case Composite::EFIO:
      return efio;
    case Composite::MFIO:
      return mfio;
    case Composite::CEFIO:
      return cefio;
    case Composite::CMFIO:
      return cmfio;
    case Composite::CCFIO:
      return cefio + cmfio;
  }
  return efio;
}

cplx eig_elementary(OperatorId op, int q, const ProblemConfig& cfg) {
  cfg.validate();
  if (op.kind == OperatorKind::Identity) return 1.0;
  const auto seq = specfun::cyl_sequence(std::abs(q), cfg.argument(op.tag));
  const LayerEigs e = layer_eigs(seq.back());
  switch (op.kind) {
    case OperatorKind::SingleLayer:
      return e.s;
    case OperatorKind::DoubleLayer:
    case OperatorKind::AdjDoubleLayer:
      return e.d;
    default:
      return e.n;
  }
}

cplx eig_composite(FormulationId f, int q, const ProblemConfig& cfg) {
  cfg.validate();
  const int n = std::abs(q);
  const LayerEigs k = layer_eigs(specfun::cyl_sequence(n, cfg.argument(WaveTag::K)).back());
  const LayerEigs t = layer_eigs(specfun::cyl_sequence(n, cfg.argument(WaveTag::KTilde)).back());
  return compose(f, {k.s, k.d, k.n, t.s, t.d, t.n, 1.0});
}

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::SingleLayer:
      return "S";
    case OperatorKind::DoubleLayer:
      return "D";
    case OperatorKind::AdjDoubleLayer:
      return "Dstar";
    case OperatorKind::Hypersingular:
      return "N";
    case OperatorKind::Identity:
      return "I";
  }
  return "?";
}

std::string to_string(OperatorId op) {
  return to_string(op.kind) + (op.tag == WaveTag::KTilde ? "~" : "");
}

std::string to_string(Composite c) {
  switch (c) {
    case Composite::EFIO:
      return "EFIO";
    case Composite::MFIO:
      return "MFIO";
    case Composite::CEFIO:
      return "CEFIO";
    case Composite::CMFIO:
      return "CMFIO";
    case Composite::CCFIO:
      return "CCFIO";
  }
  return "?";
}

std::string to_string(Polarization pol) { return pol == Polarization::TM ? "TM" : "TE"; }

std::string to_string(FormulationId f) { return to_string(f.pol) + "-" + to_string(f.composite); }

OperatorId parse_operator(const std::string& text) {
  std::string s = text;
  OperatorId op;
  if (!s.empty() && s.back() == '~') {
    op.tag = WaveTag::KTilde;
    s.pop_back();
  }
  const std::string u = upper(s);
  if (u == "S" || u == "SINGLELAYER") {
    op.kind = OperatorKind::SingleLayer;
  } else if (u == "D" || u == "DOUBLELAYER") {
    op.kind = OperatorKind::DoubleLayer;
  } else if (u == "DSTAR" || u == "D*" || u == "ADJDOUBLELAYER") {
    op.kind = OperatorKind::AdjDoubleLayer;
  } else if (u == "N" || u == "HYPERSINGULAR") {
    op.kind = OperatorKind::Hypersingular;
  } else if (u == "I" || u == "IDENTITY") {
    op.kind = OperatorKind::Identity;
  } else {
    throw UsageError("unknown operator '" + text + "'");
  }
  return op;
}

Polarization parse_polarization(const std::string& text) {
  const std::string u = upper(text);
  if (u == "TM") return Polarization::TM;
  if (u == "TE") return Polarization::TE;
  throw UsageError("unknown polarization '" + text + "'");
}

Composite parse_composite(const std::string& text) {
  const std::string u = upper(text);
  if (u == "EFIE" || u == "EFIO") return Composite::EFIO;
  if (u == "MFIE" || u == "MFIO") return Composite::MFIO;
  if (u == "CEFIO" || u == "CEFIE") return Composite::CEFIO;
  if (u == "CMFIO" || u == "CMFIE") return Composite::CMFIO;
  if (u == "CCFIE" || u == "CCFIO") return Composite::CCFIO;
  throw UsageError("unknown formulation '" + text + "'");
}

}  // namespace cylbem::spectra
