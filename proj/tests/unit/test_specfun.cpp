#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "cylbem/errors.hpp"
#include "cylbem/io.hpp"
#include "cylbem/specfun.hpp"
#include "cylbem/validation.hpp"

using namespace cylbem;
using namespace cylbem::specfun;
using cplx = std::complex<double>;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("scaled complex keeps its mantissa normalized") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    ScaledComplex a(cplx(u(rng), u(rng)), static_cast<long>(u(rng) * 3000));
    ScaledComplex b(cplx(u(rng), u(rng)), static_cast<long>(u(rng) * 3000));
    for (const ScaledComplex& v : {a * b, a / b, a + b, a - b}) {
      if (v.is_zero()) continue;
      const double m = std::max(std::abs(v.mantissa().real()), std::abs(v.mantissa().imag()));
      CHECK(m >= 0.5);
      CHECK(m < 1.0);
    }
  }
}

TEST_CASE("scaled complex arithmetic is exact to a few ulp") {
  const cplx x(0.3, -1.7), y(-2.5, 0.25);
  const double ulp = std::numeric_limits<double>::epsilon();
  CHECK(rel((ScaledComplex(x) * ScaledComplex(y)).value(), x * y) <= 4 * ulp);
  CHECK(rel((ScaledComplex(x) / ScaledComplex(y)).value(), x / y) <= 4 * ulp);
  CHECK(rel((ScaledComplex(x) + ScaledComplex(y)).value(), x + y) <= 4 * ulp);
  // far outside the double range and back
  ScaledComplex big(cplx(0.75, 0.0), 5000), small(cplx(0.5, 0.0), -5000);
  CHECK(std::isinf(big.value().real()));
  CHECK((big * small).value() == cplx(0.375, 0.0));
  CHECK(big.log2_abs() == doctest::Approx(5000 + std::log2(0.75)));
}

TEST_CASE("J0 and H2_0 at z = 1 match the high-precision series") {
  const auto seq = cyl_sequence(0, 1.0);
  CHECK(rel(seq[0].j.value(), 0.76519768655796655145) < 1e-15);
  CHECK(rel(seq[0].h2.value(), cplx(0.76519768655796655145, -0.088256964215676957983)) < 1e-15);
}

TEST_CASE("order one near the origin follows the leading series term") {
  const auto seq = cyl_sequence(1, 1e-8);
  CHECK(seq[1].j.value().real() == doctest::Approx(5e-9).epsilon(1e-12));
}

TEST_CASE("Wronskian residual on real and complex arguments") {
  for (const auto& p : cyl_sequence(100, 50.0)) CHECK(wronskian_residual(p) <= 1e-10);
  CHECK(wronskian_residual(cyl_sequence(40, cplx(30.0, -0.5))[40]) <= 1e-10);
}

TEST_CASE("Wronskian residual responds linearly to a perturbation") {
  auto p = cyl_sequence(5, 7.3)[5];
  p.j = p.j * ScaledComplex(cplx(1.0 + 1e-6, 0.0));
  const double r = wronskian_residual(p);
  // |J H'| |pi z/2| is O(1) here; the residual tracks the 1e-6 scale
  CHECK(r > 1e-7);
  CHECK(r < 1e-5);
}

TEST_CASE("derivative matches the three-term identity") {
  for (cplx z : {cplx(3.0), cplx(80.0), cplx(20.0, -2.0)}) {
    const auto seq = cyl_sequence(150, z);
    for (int q = 1; q <= 150; ++q) {
      const ScaledComplex expected =
          seq[q - 1].j - ScaledComplex(cplx(q) / z) * seq[q].j;
      CHECK(validation::relative_difference(seq[q].jp, expected) <= 1e-12);
    }
  }
}

TEST_CASE("raising max_order leaves shared entries unchanged") {
  for (cplx z : {cplx(12.5), cplx(200.0, -3.0)}) {
    const auto a = cyl_sequence(60, z);
    const auto b = cyl_sequence(400, z);
    for (int q = 0; q <= 60; ++q) {
      CHECK(validation::relative_difference(a[q].j, b[q].j) <= 1e-13);
      CHECK(validation::relative_difference(a[q].h2, b[q].h2) <= 1e-13);
    }
  }
}

TEST_CASE("high orders stay finite in scaled form") {
  const auto seq = cyl_sequence(2000, 1.0);
  // log2 |J_2000(1)| from the leading term (1/2)^q / q!
  const double lead = -2000.0 - std::lgamma(2001.0) / std::log(2.0);
  CHECK(seq[2000].j.log2_abs() == doctest::Approx(lead).epsilon(1e-6));
  CHECK(wronskian_residual(seq[2000]) <= 1e-10);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(cyl_sequence(3, 0.0), DomainError);
  CHECK_THROWS_AS(cyl_sequence(3, cplx(1.0, 0.5)), DomainError);
  CHECK_THROWS_AS(cyl_sequence(-1, 1.0), DomainError);
  CHECK_THROWS_AS(cyl_sequence(kMaxOrder + 1, 1.0), DomainError);
}

TEST_CASE("log split reproduces Y0 and Y1") {
  for (cplx z : {cplx(0.3), cplx(4.0, -0.5), cplx(7.9)}) {
    const auto b = bessel01(z);
    const auto s = bessel01_log_split(z);
    const cplx lg = std::log(z / 2.0) * (2.0 / M_PI);
    CHECK(rel(s.y0_reg + s.j0 * lg, b.y0) < 1e-13);
    CHECK(rel((s.y1_reg + z * s.j1 * lg) / z, b.y1) < 1e-13);
  }
  const auto zero = bessel01_log_split(0.0);
  CHECK(zero.j0 == cplx(1.0));
}

TEST_CASE("checked-in reference table") {
  std::ifstream in(CYLBEM_DATA_DIR "/bessel_reference.csv");
  REQUIRE(in.good());
  const auto table = io::read_bessel_reference(in);
  REQUIRE(table.size() == 100);
  const auto cmp = validation::compare_reference(table);
  CHECK(cmp.max_rel_j <= 1e-11);
  CHECK(cmp.max_rel_h2 <= 1e-10);
}
