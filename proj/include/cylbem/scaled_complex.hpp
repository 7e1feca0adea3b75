#pragma once

#include <complex>

namespace cylbem {

/// Complex number carried as mantissa * 2^exp2.
///
/// Cylinder functions at order far above the argument run far outside the
/// double exponent range (J_q(1) for q = 2000 is ~1e-6000), while products such
/// as J_q * H_q stay O(1/q). Values are kept in this form until such a product
/// collapses them back to an ordinary complex.
///
/// Invariant: mantissa is zero (and exp2 == 0) or max(|re|, |im|) lies in
/// [0.5, 1), so |mantissa| is in [0.5, 2).
class ScaledComplex {
 public:
  ScaledComplex() = default;
  ScaledComplex(std::complex<double> value);  // NOLINT(google-explicit-constructor)
  ScaledComplex(std::complex<double> mantissa, long exp2);

  const std::complex<double>& mantissa() const { return mantissa_; }
  long exp2() const { return exp2_; }
  bool is_zero() const { return mantissa_ == std::complex<double>{}; }

  /// Collapses to an ordinary complex; overflows to inf / underflows to 0.
  std::complex<double> value() const;
  /// log2 |value|, -inf for zero.
  double log2_abs() const;

  ScaledComplex& operator*=(const ScaledComplex& rhs);
  ScaledComplex& operator/=(const ScaledComplex& rhs);
  ScaledComplex& operator+=(const ScaledComplex& rhs);
  ScaledComplex& operator-=(const ScaledComplex& rhs);

  friend ScaledComplex operator*(ScaledComplex lhs, const ScaledComplex& rhs) { return lhs *= rhs; }
  friend ScaledComplex operator/(ScaledComplex lhs, const ScaledComplex& rhs) { return lhs /= rhs; }
  friend ScaledComplex operator+(ScaledComplex lhs, const ScaledComplex& rhs) { return lhs += rhs; }
  friend ScaledComplex operator-(ScaledComplex lhs, const ScaledComplex& rhs) { return lhs -= rhs; }
  friend ScaledComplex operator-(const ScaledComplex& v) { return {-v.mantissa_, v.exp2_}; }

 private:
  void normalize();

  std::complex<double> mantissa_{};
  long exp2_ = 0;
};

}  // namespace cylbem
