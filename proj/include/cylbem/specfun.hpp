#pragma once

#include <complex>
#include <vector>

#include "cylbem/scaled_complex.hpp"

namespace cylbem::specfun {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 100000;

/// J_q, H^(2)_q and their argument derivatives at one (q, z).
struct CylPair {
  int order = 0;
  cplx z;
  ScaledComplex j;
  ScaledComplex h2;
  ScaledComplex jp;
  ScaledComplex h2p;
};

/// J_q(z), H^(2)_q(z) and derivatives for q = 0..max_order.
///
/// J comes from Miller's backward recurrence normalized with
/// J_0 + 2 sum i^n J_n = exp(iz); H^(2) from forward recurrence seeded at orders 0/1.
/// Requires z != 0 and Im z <= 0. Throws AccuracyError if any pair fails the
/// Wronskian check at 1e-8.
std::vector<CylPair> cyl_sequence(int max_order, cplx z);

/// |J H' - J' H + 2i/(pi z)| * |pi z / 2|; zero for exact values.
double wronskian_residual(const CylPair& pair);

/// Orders 0 and 1 of J and Y at a single argument.
struct Bessel01 {
  cplx j0, j1, y0, y1;
};
Bessel01 bessel01(cplx z);

/// H^(2)_0(z) and H^(2)_1(z).
struct Hankel01 {
  cplx h0, h1;
};
Hankel01 hankel2_01(cplx z);

/// Log-free parts of Y_0 and z*Y_1:
///   y0_reg = Y_0(z) - (2/pi) J_0(z) ln(z/2)
///   y1_reg = z Y_1(z) - (2/pi) z J_1(z) ln(z/2)
/// Both are entire in z^2 (z = 0 allowed); used to split the Green's function
/// singularity.
struct LogSplit01 {
  cplx j0, j1, y0_reg, y1_reg;
};
LogSplit01 bessel01_log_split(cplx z);

/// Start order used by the backward recurrence for a given request.
int miller_start_order(int max_order, cplx z);

}  // namespace cylbem::specfun
