#include "cylbem/discretization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cylbem/errors.hpp"

namespace cylbem::disc {

namespace {

using spectra::Composite;
using spectra::OperatorKind;
using spectra::WaveTag;

constexpr double kPi = std::numbers::pi;

// Large-order expansion lambda(n) ~ sum_j c_j n^{e_j}, n = |order|.
struct Expansion {
  std::array<cplx, 4> c{};
  std::array<int, 4> e{};
  int count = 0;
};

Expansion expansion(OperatorKind kind, cplx x) {
  const cplx x2 = x * x;
  const cplx x3 = x2 * x;
  const cplx x4 = x2 * x2;
  const cplx x5 = x4 * x;
  const cplx x6 = x4 * x2;
  Expansion ex;
  switch (kind) {
    case OperatorKind::SingleLayer:
      ex.c = {x / 2.0, x3 / 4.0, (x / 2.0) * (3.0 * x4 / 8.0 + x2 / 2.0),
              (x / 2.0) * (5.0 * x6 / 16.0 + 15.0 * x4 / 8.0 + x2 / 2.0)};
      ex.e = {-1, -3, -5, -7};
      ex.count = 4;
      break;
    case OperatorKind::DoubleLayer:
    case OperatorKind::AdjDoubleLayer:
      ex.c = {x2 / 4.0, (x / 4.0) * (1.5 * x3 + x), (x / 4.0) * (15.0 * x5 / 8.0 + 7.5 * x3 + x),
              0.0};
      ex.e = {-3, -5, -7, -9};
      ex.count = 3;
      break;
    case OperatorKind::Hypersingular:
      ex.c = {1.0 / (2.0 * x), -x / 4.0, -x3 / 16.0 - x / 4.0,
              -x5 / 32.0 - 13.0 * x3 / 16.0 - x / 4.0};
      ex.e = {1, -1, -3, -5};
      ex.count = 4;
      break;
    case OperatorKind::Identity:
      ex.c = {1.0, 0.0, 0.0, 0.0};
      ex.e = {0, 0, 0, 0};
      ex.count = 1;
      break;
  }
  return ex;
}

cplx evaluate(const Expansion& ex, double n) {
  cplx sum = 0.0;
  for (int j = ex.count - 1; j >= 0; --j) sum += ex.c[j] * std::pow(n, ex.e[j]);
  return sum;
}

double sinc_pow(long m, int N, int power) {
  if (m == 0) return 1.0;
  if (m % N == 0) return 0.0;
  const double arg = kPi * static_cast<double>(m) / N;
  return std::pow(std::sin(arg) / arg, power);
}

}  // namespace

void BasisSpec::validate() const {
  if (p != 0 && p != 1) throw DomainError("BasisSpec: p must be 0 or 1");
  if (N < 4) throw DomainError("BasisSpec: N must be >= 4");
}

double fourier_coeff(const BasisSpec& b, long q) {
  b.validate();
  return sinc_pow(q, b.N, b.p + 1);
}

int wrap_index(long q, int N) {
  long r = q % N;
  if (r < 0) r += N;
  if (r >= N - N / 2) r -= N;
  return static_cast<int>(r);
}

double hurwitz_zeta(int s, double a) {
  if (s < 2) throw DomainError("hurwitz_zeta: s must be >= 2");
  if (!(a > 0.0)) throw DomainError("hurwitz_zeta: a must be > 0");
  double direct = 0.0;
  while (a < 40.0) {
    direct += std::pow(a, -s);
    a += 1.0;
  }
  // Euler-Maclaurin with B_2 .. B_16.
  static constexpr std::array<double, 8> kB = {1.0 / 6.0,     -1.0 / 30.0, 1.0 / 42.0,
                                               -1.0 / 30.0,    5.0 / 66.0,  -691.0 / 2730.0,
                                               7.0 / 6.0,      -3617.0 / 510.0};
  double sum = std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  double rising = s;       // s (s+1) ... (s+2j-2)
  double factorial = 2.0;  // (2j)!
  double power = std::pow(a, -s - 1.0);
  for (int j = 1; j <= 8; ++j) {
    const double term = kB[j - 1] / factorial * rising * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    power /= a * a;
  }
  return direct + sum;
}

const SpectrumRow& SpectrumTable::at(int q) const {
  for (const auto& r : rows) {
    if (r.q == q) return r;
  }
  throw DomainError("SpectrumTable: index not present");
}

DiscreteSpectrum::DiscreteSpectrum(const ProblemConfig& cfg, const BasisSpec& basis, int smax)
    : DiscreteSpectrum(cfg, basis, basis, smax) {}

DiscreteSpectrum::DiscreteSpectrum(const ProblemConfig& cfg, const BasisSpec& test,
                                   const BasisSpec& source, int smax)
    : cfg_(cfg), test_(test), source_(source), smax_(smax) {
  cfg_.validate();
  test_.validate();
  source_.validate();
  if (test_.N != cfg_.N || source_.N != cfg_.N) {
    throw DomainError("DiscreteSpectrum: basis N differs from configuration N");
  }
  if (cfg_.N % 2 != 0) throw DomainError("DiscreteSpectrum: N must be even");
  if (smax_ < 1) throw DomainError("DiscreteSpectrum: smax must be >= 1");
  const double x = std::abs(cfg_.kta());
  const long full = static_cast<long>(smax_ + 1) * cfg_.N;
  const long needed = std::max<long>(cfg_.N, static_cast<long>(50.0 * x) + 200);
  tabulated_ = static_cast<int>(std::min<long>({full, needed, specfun::kMaxOrder}));
  bank_ = std::make_shared<const spectra::EigenBank>(cfg_, tabulated_);
}

cplx DiscreteSpectrum::continuous(OperatorId op, long order) const {
  const long n = std::labs(order);
  if (n <= tabulated_) return bank_->elementary(op, n);
  return evaluate(expansion(op.kind, cfg_.argument(op.tag)), static_cast<double>(n));
}

cplx DiscreteSpectrum::continuous(FormulationId f, long order) const {
  const auto el = [&](OperatorKind kind, WaveTag tag) { return continuous({kind, tag}, order); };
  return spectra::compose(
      f, {el(OperatorKind::SingleLayer, WaveTag::K), el(OperatorKind::DoubleLayer, WaveTag::K),
          el(OperatorKind::Hypersingular, WaveTag::K),
          el(OperatorKind::SingleLayer, WaveTag::KTilde),
          el(OperatorKind::DoubleLayer, WaveTag::KTilde),
          el(OperatorKind::Hypersingular, WaveTag::KTilde), 1.0});
}

double DiscreteSpectrum::projection(long q) const {
  return sinc_pow(q, cfg_.N, test_.p + 1) * sinc_pow(q, cfg_.N, source_.p + 1);
}

AliasSum DiscreteSpectrum::elementary(OperatorId op, int q) const {
  const int N = cfg_.N;
  const int r = test_.p + source_.p + 2;
  if (op.kind == OperatorKind::Hypersingular && r <= 2) {
    throw DivergenceError("aliasing sum for the hypersingular operator diverges with pulse bases");
  }
  q = wrap_index(q, N);
  const cplx x = cfg_.argument(op.tag);
  const double ax = std::abs(x);
  const double asymptotic_from = 8.0 * ax + 16.0;

  AliasSum out;
  out.principal = continuous(op, q) * projection(q);
  cplx aliased = 0.0;
  int used = 0;
  for (int s = 1; s <= smax_; ++s) {
    const long up = q + static_cast<long>(s) * N;
    const long dn = q - static_cast<long>(s) * N;
    const cplx t_up = continuous(op, up) * projection(up);
    const cplx t_dn = continuous(op, dn) * projection(dn);
    aliased += t_up + t_dn;
    used = s;
    const double partial = std::abs(out.principal + aliased);
    if ((s + 0.5) * N > asymptotic_from &&
        std::max(std::abs(t_up), std::abs(t_dn)) < 1e-12 * partial) {
      break;
    }
  }

  // Tail beyond |s| = used from the large-order expansion and Hurwitz sums.
  const double sq = std::sin(kPi * q / N);
  const double nearest_tail = (used + 1.0) * N - N / 2.0;
  cplx tail = 0.0;
  double uncertainty = 0.0;
  if (q != 0 && sq != 0.0) {
    const Expansion ex = expansion(op.kind, x);
    const double scale = std::pow(sq * N / kPi, r);
    cplx leading = 0.0;
    for (int j = 0; j < ex.count; ++j) {
      const int order = r - ex.e[j];
      const double weight = std::pow(static_cast<double>(N), ex.e[j] - r) *
                            (hurwitz_zeta(order, used + 1.0 + static_cast<double>(q) / N) +
                             hurwitz_zeta(order, used + 1.0 - static_cast<double>(q) / N));
      const cplx piece = scale * ex.c[j] * weight;
      if (j == 0) leading = piece;
      tail += piece;
      if (j == ex.count - 1 && op.kind != OperatorKind::Identity) uncertainty = std::abs(piece);
    }
    if (r % 2 != 0) {
      // Alternating signs: the tail is bounded by the first omitted term.
      tail = 0.0;
      uncertainty = std::abs(leading) / (2.0 * (used + 1.0));
    } else if (nearest_tail <= asymptotic_from) {
      tail = 0.0;
      uncertainty = std::abs(leading);
    }
  }
  out.aliased = aliased + tail;
  out.value = out.principal + out.aliased;
  out.terms = used;
  const double mag = std::abs(out.value);
  out.tail_estimate = mag > 0.0 ? uncertainty / mag : uncertainty;
  if (out.tail_estimate > 1e-9) out.warnings |= kTruncationWarning;
  return out;
}

spectra::ElementarySet DiscreteSpectrum::discrete_set(int q) const {
  const auto el = [&](OperatorKind kind, WaveTag tag) { return elementary({kind, tag}, q).value; };
  spectra::ElementarySet e{el(OperatorKind::SingleLayer, WaveTag::K),
                           el(OperatorKind::DoubleLayer, WaveTag::K),
                           el(OperatorKind::Hypersingular, WaveTag::K),
                           el(OperatorKind::SingleLayer, WaveTag::KTilde),
                           el(OperatorKind::DoubleLayer, WaveTag::KTilde),
                           el(OperatorKind::Hypersingular, WaveTag::KTilde),
                           el(OperatorKind::Identity, WaveTag::K)};
  if (std::abs(e.identity) < 1e-14) throw SingularGramError("Gram eigenvalue vanishes");
  return e;
}

cplx DiscreteSpectrum::composite(FormulationId f, int q) const {
  const auto gram = [&] {
    const cplx g = elementary({OperatorKind::Identity, WaveTag::K}, q).value;
    if (std::abs(g) < 1e-14) throw SingularGramError("Gram eigenvalue vanishes");
    return g;
  };
  const bool tm = f.pol == spectra::Polarization::TM;
  switch (f.composite) {
    case Composite::EFIO:
      return elementary({tm ? OperatorKind::SingleLayer : OperatorKind::Hypersingular}, q).value;
    case Composite::MFIO: {
      const cplx d = elementary({OperatorKind::DoubleLayer}, q).value;
      return tm ? 0.5 * gram() + d : 0.5 * gram() - d;
    }
    default:
      return spectra::compose(f, discrete_set(q));
  }
}

namespace {

SpectrumRow make_row(int q, cplx lambda, cplx lambda_hat, double tf, cplx aliased_abs,
                     unsigned warnings) {
  SpectrumRow row;
  row.q = q;
  row.lambda_cont = lambda;
  row.lambda_disc = lambda_hat;
  row.flags = warnings;
  if (std::abs(lambda) < 1e-12 * std::abs(lambda_hat - lambda) || lambda == cplx{}) {
    row.flags |= kResonanceFlag;
    row.proj_err = lambda * (tf - 1.0);
    row.alias_err = aliased_abs;
    row.total_err = row.proj_err + row.alias_err;
    return row;
  }
  row.total_err = lambda_hat / lambda - 1.0;
  row.proj_err = tf - 1.0;
  row.alias_err = row.total_err - row.proj_err;
  return row;
}

}  // namespace

SpectrumRow DiscreteSpectrum::row(OperatorId op, int q) const {
  q = wrap_index(q, cfg_.N);
  const AliasSum sum = elementary(op, q);
  const cplx lambda = continuous(op, q);
  return make_row(q, lambda, sum.value, projection(q), sum.aliased, sum.warnings);
}

SpectrumRow DiscreteSpectrum::row(FormulationId f, int q) const {
  q = wrap_index(q, cfg_.N);
  const cplx lambda = continuous(f, q);
  const cplx lambda_hat = composite(f, q);
  const double tf = projection(q);
  return make_row(q, lambda, lambda_hat, tf, lambda_hat - lambda * tf, 0);
}

SpectrumTable DiscreteSpectrum::table(OperatorId op) const {
  SpectrumTable t;
  for (int q = -cfg_.N / 2; q < cfg_.N / 2; ++q) t.rows.push_back(row(op, q));
  return t;
}

SpectrumTable DiscreteSpectrum::table(FormulationId f) const {
  SpectrumTable t;
  for (int q = -cfg_.N / 2; q < cfg_.N / 2; ++q) t.rows.push_back(row(f, q));
  return t;
}

AliasSum discrete_eig_elementary(OperatorId op, int q, const ProblemConfig& cfg,
                                 const BasisSpec& b, int smax) {
  ProblemConfig c = cfg;
  c.N = b.N;
  c.p = b.p;
  return DiscreteSpectrum(c, b, smax).elementary(op, q);
}

cplx discrete_eig_composite(FormulationId f, int q, const ProblemConfig& cfg, const BasisSpec& b,
                            int smax) {
  ProblemConfig c = cfg;
  c.N = b.N;
  c.p = b.p;
  return DiscreteSpectrum(c, b, smax).composite(f, q);
}

SpectrumRow spectral_error(const std::variant<OperatorId, FormulationId>& what, int q,
                           const ProblemConfig& cfg, const BasisSpec& b, int smax) {
  ProblemConfig c = cfg;
  c.N = b.N;
  c.p = b.p;
  const DiscreteSpectrum ds(c, b, smax);
  return std::visit([&](const auto& id) { return ds.row(id, q); }, what);
}

}  // namespace cylbem::disc
