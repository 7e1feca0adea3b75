#include "cylbem/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cylbem/errors.hpp"

namespace cylbem::specfun {

namespace {

using std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr cplx kI{0.0, 1.0};
constexpr cplx kIPow[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

// Below this radius the power series converge without damaging cancellation.
constexpr double kSeriesRadius = 8.0;
// Above this radius the Hankel asymptotic series reaches full double accuracy.
constexpr double kAsymptoticRadius = 25.0;

constexpr int kRescaleExp = 300;
const double kRescaleUp = std::ldexp(1.0, kRescaleExp);

double max_abs(cplx v) { return std::max(std::abs(v.real()), std::abs(v.imag())); }

cplx scale2(cplx v, int e) { return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)}; }

void check_argument(cplx z) {
  if (z == cplx{}) throw DomainError("cylinder functions: argument z = 0");
  if (std::abs(z) < 1e-200) throw DomainError("cylinder functions: |z| below 1e-200");
  if (z.imag() > 0.0) {
    throw DomainError("cylinder functions: Im(z) > 0 is outside the outgoing H^(2) convention");
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("cylinder functions: non-finite argument");
  }
}

struct SeriesValues {
  cplx j0, j1, y0_reg, y1_reg;
};

SeriesValues small_argument_series(cplx z) {
  const cplx u = z * z / 4.0;
  const cplx mu = -u;
  // J0 and the harmonic-number weighted companion for Y0.
  cplx t0 = 1.0;
  cplx j0 = 1.0;
  cplx y0s = 0.0;
  // J1/(z/2) and the digamma weighted companion for Y1.
  cplx t1 = 1.0;
  cplx j1s = 1.0;
  double harmonic = 0.0;  // H_k
  cplx y1s = (-2.0 * kEulerGamma + 1.0) * t1;  // psi(1) + psi(2)
  for (int k = 1; k < 200; ++k) {
    const double dk = k;
    t0 *= mu / (dk * dk);
    t1 *= mu / (dk * (dk + 1.0));
    harmonic += 1.0 / dk;
    j0 += t0;
    y0s += harmonic * t0;
    j1s += t1;
    const double psi_sum = -2.0 * kEulerGamma + harmonic + harmonic + 1.0 / (dk + 1.0);
    y1s += psi_sum * t1;
    if (k > 3 && std::abs(t0) < 1e-18 && std::abs(t1) * (harmonic + 2.0) < 1e-18) break;
  }
  SeriesValues out;
  out.j0 = j0;
  out.j1 = (z / 2.0) * j1s;
  out.y0_reg = (2.0 / pi) * (kEulerGamma * j0 - y0s);
  out.y1_reg = -2.0 / pi - (z * z / (2.0 * pi)) * y1s;
  return out;
}

// Leading-order Hankel asymptotic series for H^(2)_nu, nu in {0, 1}.
cplx hankel2_asymptotic(int nu, cplx z) {
  const double mu = 4.0 * nu * nu;
  const cplx omega = z - (0.5 * nu + 0.25) * pi;
  const cplx prefactor = std::sqrt(2.0 / (pi * z)) * std::exp(-kI * omega);
  cplx term = 1.0;
  cplx sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -kI * (mu - odd * odd) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > last) break;
    sum += term;
    last = mag;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return prefactor * sum;
}

// Backward recurrence state shared by the sequence and the order-0/1 helpers.
struct MillerResult {
  std::vector<ScaledComplex> j;  // normalized J_0..J_keep
  cplx y_sum0;                   // sum_{k>=1} (-1)^k J_2k / k
  cplx y_sum1;                   // sum_{k>=1} (-1)^k (J_{2k-1} - J_{2k+1}) / k
};

MillerResult miller(int keep, cplx z, int start) {
  std::vector<cplx> stored(static_cast<std::size_t>(keep) + 1);
  std::vector<long> stored_exp(static_cast<std::size_t>(keep) + 1);
  cplx next = 0.0;
  cplx cur = 1.0;
  long scale = 0;
  cplx norm_sum = 0.0;
  cplx s0 = 0.0;
  cplx s1 = 0.0;
  const cplx inv_z = 1.0 / z;
  for (int n = start; n >= 1; --n) {
    if (n <= keep) {
      stored[n] = cur;
      stored_exp[n] = scale;
    }
    norm_sum += 2.0 * kIPow[n % 4] * cur;
    if (n % 2 == 0) {
      const int k = n / 2;
      s0 += ((k % 2 == 0) ? 1.0 : -1.0) / k * cur;
    } else {
      const int k_up = (n + 1) / 2;
      double c = ((k_up % 2 == 0) ? 1.0 : -1.0) / k_up;
      if (n >= 3) {
        const int k_dn = (n - 1) / 2;
        c -= ((k_dn % 2 == 0) ? 1.0 : -1.0) / k_dn;
      }
      s1 += c * cur;
    }
    const cplx ratio = (2.0 * n) * inv_z;
    const cplx prev = ratio * cur - next;
    next = cur;
    cur = prev;
    const double mag = max_abs(cur);
    if (mag > kRescaleUp || mag * std::abs(ratio) > std::ldexp(1.0, 900)) {
      int e = 0;
      std::frexp(mag, &e);
      cur = scale2(cur, -e);
      next = scale2(next, -e);
      norm_sum = scale2(norm_sum, -e);
      s0 = scale2(s0, -e);
      s1 = scale2(s1, -e);
      scale += e;
    }
  }
  stored[0] = cur;
  stored_exp[0] = scale;
  norm_sum += cur;
  if (norm_sum == cplx{}) throw AccuracyError("Miller recurrence: vanishing normalization sum");

  // exp(iz) = J_0 + 2 sum i^n J_n grows with |Im z| like J itself, so it
  // normalizes without the cancellation of the plain sum J_0 + 2 sum J_2m.
  const double growth = -z.imag() / std::numbers::ln2;
  const double whole = std::floor(growth);
  const ScaledComplex target(std::polar(std::exp2(growth - whole), z.real()),
                             static_cast<long>(whole));
  const ScaledComplex factor = target / ScaledComplex(norm_sum, scale);

  MillerResult out;
  out.j.reserve(stored.size());
  for (std::size_t n = 0; n < stored.size(); ++n) {
    out.j.push_back(ScaledComplex(stored[n], stored_exp[n]) * factor);
  }
  const cplx f = (factor * ScaledComplex(1.0, scale)).value();
  out.y_sum0 = s0 * f;
  out.y_sum1 = s1 * f;
  return out;
}

// Y_0, Y_1 from the Neumann expansions in even/odd J.
std::pair<cplx, cplx> neumann_y01(cplx z, cplx j0, cplx j1, cplx sum0, cplx sum1) {
  const cplx log_term = std::log(z / 2.0) + kEulerGamma;
  const cplx y0 = (2.0 / pi) * log_term * j0 - (4.0 / pi) * sum0;
  const cplx y1 = -(2.0 / (pi * z)) * j0 + (2.0 / pi) * log_term * j1 + (2.0 / pi) * sum1;
  return {y0, y1};
}

}  // namespace

int miller_start_order(int max_order, cplx z) {
  const double az = std::abs(z);
  const int base = std::max(max_order + 1, static_cast<int>(std::ceil(az)));
  const int margin = std::max(20, static_cast<int>(std::ceil(10.0 * std::cbrt(az))));
  return base + margin;
}

Bessel01 bessel01(cplx z) {
  check_argument(z);
  const double az = std::abs(z);
  if (az <= kSeriesRadius) {
    const SeriesValues s = small_argument_series(z);
    const cplx lg = std::log(z / 2.0);
    Bessel01 out;
    out.j0 = s.j0;
    out.j1 = s.j1;
    out.y0 = s.y0_reg + (2.0 / pi) * s.j0 * lg;
    out.y1 = (s.y1_reg + (2.0 / pi) * z * s.j1 * lg) / z;
    return out;
  }
  const MillerResult m = miller(1, z, miller_start_order(1, z));
  Bessel01 out;
  out.j0 = m.j[0].value();
  out.j1 = m.j[1].value();
  if (az <= kAsymptoticRadius) {
    std::tie(out.y0, out.y1) = neumann_y01(z, out.j0, out.j1, m.y_sum0, m.y_sum1);
  } else {
    // H2 = J - iY
    out.y0 = kI * (hankel2_asymptotic(0, z) - out.j0);
    out.y1 = kI * (hankel2_asymptotic(1, z) - out.j1);
  }
  return out;
}

Hankel01 hankel2_01(cplx z) {
  check_argument(z);
  if (std::abs(z) > kAsymptoticRadius) {
    return {hankel2_asymptotic(0, z), hankel2_asymptotic(1, z)};
  }
  const Bessel01 b = bessel01(z);
  return {b.j0 - kI * b.y0, b.j1 - kI * b.y1};
}

LogSplit01 bessel01_log_split(cplx z) {
  // Entire functions of z^2, so z = 0 is admissible here.
  if (std::abs(z) <= kSeriesRadius) {
    if (z.imag() > 0.0) throw DomainError("cylinder functions: Im(z) > 0");
    const SeriesValues s = small_argument_series(z);
    return {s.j0, s.j1, s.y0_reg, s.y1_reg};
  }
  check_argument(z);
  const Bessel01 b = bessel01(z);
  const cplx lg = std::log(z / 2.0);
  return {b.j0, b.j1, b.y0 - (2.0 / pi) * b.j0 * lg, z * b.y1 - (2.0 / pi) * z * b.j1 * lg};
}

std::vector<CylPair> cyl_sequence(int max_order, cplx z) {
  check_argument(z);
  if (max_order < 0 || max_order > kMaxOrder) {
    throw DomainError("cyl_sequence: max_order must lie in [0, 100000]");
  }
  const int keep = std::max(max_order, 1);
  const MillerResult m = miller(keep, z, miller_start_order(keep, z));
  const cplx j0 = m.j[0].value();
  const cplx j1 = m.j[1].value();

  cplx h0;
  cplx h1;
  if (std::abs(z) <= kAsymptoticRadius) {
    const auto [y0, y1] = neumann_y01(z, j0, j1, m.y_sum0, m.y_sum1);
    h0 = j0 - kI * y0;
    h1 = j1 - kI * y1;
  } else {
    h0 = hankel2_asymptotic(0, z);
    h1 = hankel2_asymptotic(1, z);
  }

  std::vector<ScaledComplex> h(static_cast<std::size_t>(keep) + 1);
  h[0] = ScaledComplex(h0);
  h[1] = ScaledComplex(h1);
  {
    cplx prev = h0;
    cplx cur = h1;
    long scale = 0;
    const cplx inv_z = 1.0 / z;
    for (int n = 1; n < keep; ++n) {
      const cplx next = (2.0 * n) * inv_z * cur - prev;
      prev = cur;
      cur = next;
      const double mag = max_abs(cur);
      if (mag > kRescaleUp) {
        int e = 0;
        std::frexp(mag, &e);
        cur = scale2(cur, -e);
        prev = scale2(prev, -e);
        scale += e;
      }
      h[n + 1] = ScaledComplex(cur, scale);
    }
  }

  std::vector<CylPair> out(static_cast<std::size_t>(max_order) + 1);
  for (int q = 0; q <= max_order; ++q) {
    CylPair& p = out[q];
    p.order = q;
    p.z = z;
    p.j = m.j[q];
    p.h2 = h[q];
    if (q == 0) {
      p.jp = -m.j[1];
      p.h2p = -h[1];
    } else {
      const ScaledComplex factor(-static_cast<double>(q) / z);
      p.jp = m.j[q - 1] + factor * m.j[q];
      p.h2p = h[q - 1] + factor * h[q];
    }
    const double res = wronskian_residual(p);
    if (!(res <= 1e-8)) {
      throw AccuracyError("cyl_sequence: Wronskian residual " + std::to_string(res) +
                          " at order " + std::to_string(q));
    }
  }
  return out;
}

double wronskian_residual(const CylPair& pair) {
  const cplx w = (pair.j * pair.h2p - pair.jp * pair.h2).value();
  const cplx expected = -2.0 * kI / (pi * pair.z);
  return std::abs(w - expected) * std::abs(pi * pair.z / 2.0);
}

}  // namespace cylbem::specfun
