#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cylbem/io.hpp"

namespace cylbem::oracle {

/// J_q(z) and H^(2)_q(z) = J_q - i Y_q by ascending series in MPFR arithmetic.
/// Working precision grows with |z| to absorb the series cancellation, so the
/// result carries at least `digits` correct decimal digits.
io::BesselReference bessel_reference(int q, std::complex<double> z, int digits = 50);

/// Seeded sample of (q, z) with q <= qmax, |z| <= zmax, Im z <= 0; half the
/// points are real, the rest lie on the complexified-wavenumber curve or a
/// modest lower-half-plane offset.
std::vector<io::BesselReference> reference_grid(int points, int qmax, double zmax,
                                                std::uint64_t seed, int digits = 50);

}  // namespace cylbem::oracle
