#include "cylbem/scaled_complex.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>

#include "cylbem/errors.hpp"

namespace cylbem {

namespace {

// Beyond this exponent gap the smaller addend is below half an ulp of the larger.
constexpr long kAddCutoff = 64;

int clamp_shift(long e) {
  return static_cast<int>(std::clamp<long>(e, INT_MIN / 2, INT_MAX / 2));
}

}  // namespace

ScaledComplex::ScaledComplex(std::complex<double> value) : mantissa_(value) { normalize(); }

ScaledComplex::ScaledComplex(std::complex<double> mantissa, long exp2)
    : mantissa_(mantissa), exp2_(exp2) {
  normalize();
}

void ScaledComplex::normalize() {
  const double re = mantissa_.real();
  const double im = mantissa_.imag();
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw DomainError("ScaledComplex: non-finite mantissa");
  }
  const double m = std::max(std::abs(re), std::abs(im));
  if (m == 0.0) {
    mantissa_ = {};
    exp2_ = 0;
    return;
  }
  int e = 0;
  std::frexp(m, &e);
  mantissa_ = {std::ldexp(re, -e), std::ldexp(im, -e)};
  exp2_ += e;
}

std::complex<double> ScaledComplex::value() const {
  const int e = clamp_shift(exp2_);
  return {std::ldexp(mantissa_.real(), e), std::ldexp(mantissa_.imag(), e)};
}

double ScaledComplex::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log2(std::abs(mantissa_)) + static_cast<double>(exp2_);
}

ScaledComplex& ScaledComplex::operator*=(const ScaledComplex& rhs) {
  mantissa_ *= rhs.mantissa_;
  exp2_ += rhs.exp2_;
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator/=(const ScaledComplex& rhs) {
  if (rhs.is_zero()) throw DomainError("ScaledComplex: division by zero");
  mantissa_ /= rhs.mantissa_;
  exp2_ -= rhs.exp2_;
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator+=(const ScaledComplex& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  const long gap = exp2_ - rhs.exp2_;
  if (gap > kAddCutoff) return *this;
  if (gap < -kAddCutoff) return *this = rhs;
  if (gap >= 0) {
    const int s = static_cast<int>(-gap);
    mantissa_ += std::complex<double>{std::ldexp(rhs.mantissa_.real(), s),
                                      std::ldexp(rhs.mantissa_.imag(), s)};
  } else {
    const int s = static_cast<int>(gap);
    mantissa_ = std::complex<double>{std::ldexp(mantissa_.real(), s),
                                     std::ldexp(mantissa_.imag(), s)} +
                rhs.mantissa_;
    exp2_ = rhs.exp2_;
  }
  normalize();
  return *this;
}

ScaledComplex& ScaledComplex::operator-=(const ScaledComplex& rhs) { return *this += -rhs; }

}  // namespace cylbem
