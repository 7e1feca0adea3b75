#include "bessel_mp.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <random>

#include "cylbem/errors.hpp"
#include "cylbem/spectra.hpp"

namespace cylbem::oracle {

namespace {

using mp = boost::multiprecision::mpfr_float;

struct mpc {
  mp re, im;
};

mpc operator+(const mpc& a, const mpc& b) { return {a.re + b.re, a.im + b.im}; }
mpc operator-(const mpc& a, const mpc& b) { return {a.re - b.re, a.im - b.im}; }
mpc operator*(const mpc& a, const mpc& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
mpc operator*(const mpc& a, const mp& s) { return {a.re * s, a.im * s}; }
mpc operator/(const mpc& a, const mp& s) { return {a.re / s, a.im / s}; }
mpc inverse(const mpc& a) {
  const mp d = a.re * a.re + a.im * a.im;
  return {a.re / d, -a.im / d};
}
mp abs2(const mpc& a) { return a.re * a.re + a.im * a.im; }

ScaledComplex to_scaled(const mpc& v) {
  using boost::multiprecision::frexp;
  if (v.re == 0 && v.im == 0) return {};
  int er = 0, ei = 0;
  if (v.re != 0) frexp(v.re, &er);
  if (v.im != 0) frexp(v.im, &ei);
  const int e = v.re == 0 ? ei : (v.im == 0 ? er : std::max(er, ei));
  const mp scale = boost::multiprecision::ldexp(mp(1), -e);
  return ScaledComplex({static_cast<double>(mp(v.re * scale)), static_cast<double>(mp(v.im * scale))},
                       e);
}

}  // namespace

io::BesselReference bessel_reference(int q, std::complex<double> z, int digits) {
  if (q < 0) throw DomainError("oracle order must be >= 0");
  if (std::abs(z) == 0.0 || z.imag() > 0.0) throw DomainError("oracle needs z != 0, Im z <= 0");
  // Largest series term is about exp(|z|) times the result scale.
  const unsigned bits =
      static_cast<unsigned>(3.33 * digits + 1.45 * std::abs(z) + 3.0 * std::log2(q + 2.0) + 64);
  struct PrecisionGuard {
    unsigned saved = mp::default_precision();
    ~PrecisionGuard() { mp::default_precision(saved); }
  } guard;
  mp::default_precision(static_cast<unsigned>(bits / 3.32) + 1);

  const mpc zz{mp(z.real()), mp(z.imag())};
  const mpc half = zz / mp(2);
  const mpc w = half * half * mp(-1);  // -z^2/4
  const mp pi = boost::math::constants::pi<mp>();
  const mp gamma = boost::math::constants::euler<mp>();
  const mp eps = boost::multiprecision::ldexp(mp(1), -static_cast<int>(bits));

  // (z/2)^q / q!
  mpc lead{mp(1), mp(0)};
  for (int i = 1; i <= q; ++i) lead = lead * half / mp(i);

  // J: sum w^k/(k!(q+k)!) * (z/2)^q ; Y uses the same terms weighted by psi.
  mp hk = 0, hqk = 0;  // harmonic numbers H_k, H_{q+k}
  for (int i = 1; i <= q; ++i) hqk += mp(1) / i;
  mpc term = lead, jsum = lead;
  mpc psisum = lead * (mp(-2) * gamma + hk + hqk);
  const double zabs = std::abs(z);
  for (long k = 1;; ++k) {
    term = term * w / mp(k * (q + k));
    hk += mp(1) / k;
    hqk += mp(1) / (q + k);
    jsum = jsum + term;
    psisum = psisum + term * (mp(-2) * gamma + hk + hqk);
    if (k > zabs && abs2(term) <= eps * eps * abs2(jsum) && abs2(term) <= eps * eps * abs2(psisum))
      break;
    if (k > 100000) throw AccuracyError("oracle series did not converge");
  }

  // finite part: sum_{k<q} (q-k-1)!/k! (z/2)^{2k-q}
  mpc finite{mp(0), mp(0)};
  if (q > 0) {
    const mpc inv_half = inverse(half);
    mpc t{mp(1), mp(0)};
    for (int i = 0; i < q; ++i) t = t * inv_half;  // (z/2)^{-q}
    mp fact = 1;
    for (int i = 1; i <= q - 1; ++i) fact *= i;  // (q-1)!
    t = t * fact;
    const mpc half2 = half * half;
    for (int k = 0; k < q; ++k) {
      finite = finite + t;
      if (k + 1 < q) t = t * half2 / mp((k + 1) * static_cast<long>(q - k - 1));
    }
  }

  const mp r = sqrt(abs2(half));
  const mpc logh{log(r), atan2(half.im, half.re)};
  const mpc y = (jsum * logh * mp(2) - finite - psisum) / pi;
  const mpc h2 = jsum + mpc{y.im, -y.re};  // J - iY

  io::BesselReference out;
  out.q = q;
  out.z = z;
  out.j = to_scaled(jsum);
  out.h2 = to_scaled(h2);
  return out;
}

std::vector<io::BesselReference> reference_grid(int points, int qmax, double zmax,
                                                std::uint64_t seed, int digits) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<io::BesselReference> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const int q = static_cast<int>(unit() * (qmax + 1)) % (qmax + 1);
    // modulus in [0.1, zmax]: log-uniform for even i, uniform otherwise
    const double u = unit();
    const double x = (i / 4) % 2 == 0 ? 0.1 * std::pow(0.98 * zmax / 0.1, u)
                                       : 0.1 + (0.98 * zmax - 0.1) * u;
    std::complex<double> z;
    switch (i % 4) {
      case 0:
      case 1:
        z = x;
        break;
      case 2:
        z = spectra::complex_wavenumber(x, 1.0);
        break;
      default:
        z = {x, -std::min(5.0, 0.2 * x) * unit()};
        break;
    }
    out.push_back(bessel_reference(q, z, digits));
  }
  return out;
}

}  // namespace cylbem::oracle
