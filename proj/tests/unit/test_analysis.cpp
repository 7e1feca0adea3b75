#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cylbem/analysis.hpp"
#include "cylbem/errors.hpp"

using namespace cylbem;
using namespace cylbem::analysis;
using cplx = std::complex<double>;

namespace {
const FormulationId tm_efie{Composite::EFIO, Polarization::TM};
const FormulationId tm_mfie{Composite::MFIO, Polarization::TM};
}  // namespace

TEST_CASE("norm weights") {
  CHECK(norm_weight(Measure::L2, Polarization::TE, 7.0, 3.0) == 1.0);
  CHECK(norm_weight(Measure::Hs, Polarization::TM, 7.0, 3.0) == doctest::Approx(1.0 / std::sqrt(10.0)));
  CHECK(norm_weight(Measure::Hks, Polarization::TE, 4.0, 3.0) == doctest::Approx(5.0));
  CHECK(sobolev_exponent(Polarization::TM) == -0.5);
  CHECK(mesh_size(10.0) == 40);
  CHECK(mesh_size(10.3) == 42);
  CHECK(parse_measure("Hks") == Measure::Hks);
  CHECK_THROWS_AS(parse_measure("H1"), UsageError);
}

TEST_CASE("constant relative error gives that modulus in every norm") {
  UpsilonTable t;
  t.formulation = tm_efie;
  const cplx c(0.03, -0.04);
  for (int q = -20; q <= 20; ++q) t.rows.push_back({q, cplx(1.0 / (1 + q * q), 0.1 * q), c, 0});
  for (const auto m : {Measure::L2, Measure::Hs, Measure::Hks})
    CHECK(predicted_error_norm(m, t, 6.0) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("predicted and measured errors agree") {
  const auto r = error_report(tm_efie, Measure::Hks, 5.0, 1, 20);
  CHECK(r.N == 20);
  CHECK(std::abs(r.r_predicted - r.r_measured) <= 0.05 * r.r_measured);
  const auto h = error_report(tm_mfie, Measure::Hks, 20.0);
  CHECK(std::abs(h.r_predicted - h.r_measured) <= 0.05 * h.r_measured);
  for (const auto pol : {Polarization::TM, Polarization::TE}) {
    const auto c = error_report({Composite::CCFIO, pol}, Measure::L2, 12.0);
    CHECK(std::abs(c.r_predicted - c.r_measured) <= 0.05 * c.r_measured);
  }
}

TEST_CASE("pointwise error prediction") {
  const int N = 40;
  const auto cfg = ProblemConfig::from_ka(10.0, N, 1);
  const BasisSpec b{1, N};
  const auto pred = pointwise_current_error(tm_efie, cfg, b);
  const bem::Mesh mesh(N, 1.0);
  const auto sol = bem::solve_current(tm_efie, mesh, b, cfg);
  const auto ex = bem::exact_current(Polarization::TM, cfg, bem::sample_angles(mesh, b));
  double diff = 0.0, ref = 0.0;
  for (int n = 0; n < N; ++n) {
    const cplx meas = (sol.samples[n] - ex[n]) / ex[n];
    diff += std::norm(pred[n] - meas);
    ref += std::norm(meas);
  }
  CHECK(std::sqrt(diff / ref) <= 0.05);
}

TEST_CASE("resonance locator") {
  const auto a = resonance_locator(Polarization::TM, Composite::EFIO, 2.0, 2.5);
  REQUIRE(a.size() == 1);
  CHECK(a[0].ka == doctest::Approx(2.404825557695773).epsilon(1e-12));
  CHECK(a[0].q == 0);
  const auto b = resonance_locator(Polarization::TM, Composite::MFIO, 1.5, 2.0);
  REQUIRE(b.size() == 1);
  CHECK(b[0].ka == doctest::Approx(1.8411837813406593).epsilon(1e-12));
  CHECK(b[0].q == 1);
  // the same families with polarization swapped
  CHECK(resonance_locator(Polarization::TE, Composite::MFIO, 2.0, 2.5).size() == 1);
  CHECK(resonance_locator(Polarization::TE, Composite::EFIO, 1.5, 2.0).size() == 1);
  CHECK(resonance_locator(Polarization::TM, Composite::EFIO, 0.1, 0.5).empty());
  CHECK(resonance_locator(Polarization::TM, Composite::CCFIO, 1.0, 50.0).empty());
  const auto c = resonance_locator(Polarization::TM, Composite::EFIO, 10.0, 11.5);
  CHECK(std::any_of(c.begin(), c.end(), [](const Resonance& r) {
    return r.q == 7 && std::abs(r.ka - 11.0863700192450838) < 1e-10;
  }));
  CHECK(distance_to_resonance(a, 2.5) == doctest::Approx(2.5 - 2.404825557695773));
}

TEST_CASE("power-law fit") {
  std::vector<double> x, y, flat;
  for (int i = 0; i < 12; ++i) {
    x.push_back(10.0 * std::pow(1.3, i));
    y.push_back(0.7 * std::cbrt(x.back()));
    flat.push_back(0.2);
  }
  const auto f = fit_power_law(x, y);
  CHECK(f.slope == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(f.half_width < 1e-10);
  CHECK(f.points == 12);
  CHECK(std::abs(fit_power_law(x, flat).slope) < 1e-12);
  x.resize(7);
  y.resize(7);
  CHECK_THROWS_AS(fit_power_law(x, y), InsufficientDataError);
}

TEST_CASE("masked reports are excluded from the fit") {
  std::vector<ErrorReport> reps;
  for (int i = 0; i < 10; ++i) {
    ErrorReport r;
    r.ka = 10.0 + i;
    r.r_measured = 0.01;
    r.resonance_flag = (i % 3 == 0);
    if (r.resonance_flag) r.r_measured = 1.0;
    reps.push_back(r);
  }
  CHECK_THROWS_AS(fit_scaling_exponent(reps), InsufficientDataError);
  CHECK(fit_scaling_exponent(reps, false).points == 10);
}

TEST_CASE("single-point sweep equals the error report") {
  SweepOptions opt;
  opt.flag_resonances = false;
  const auto s = sweep_at(tm_mfie, Measure::Hks, {9.3}, opt);
  const auto r = error_report(tm_mfie, Measure::Hks, 9.3);
  REQUIRE(s.size() == 1);
  CHECK(s[0].N == r.N);
  CHECK(s[0].r_predicted == r.r_predicted);
  CHECK(s[0].r_measured == r.r_measured);
}

TEST_CASE("sampling is seeded and stays in range") {
  for (const auto mode : {Sampling::Grid, Sampling::Jittered, Sampling::OffResonance}) {
    SweepOptions opt;
    opt.sampling = mode;
    opt.measure_bem = false;
    const auto a = sample_points(5.0, 60.0, 12, opt);
    const auto b = sample_points(5.0, 60.0, 12, opt);
    CHECK(a == b);
    REQUIRE(a.size() == 12);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(a.front() >= 5.0);
    CHECK(a.back() <= 60.0);
    if (mode != Sampling::Grid) {
      opt.seed = 2;
      CHECK(sample_points(5.0, 60.0, 12, opt) != a);
    }
  }
  CHECK_THROWS_AS(sample_points(5.0, 1.0, 4, SweepOptions{}), UsageError);
}

TEST_CASE("resonance flag marks only the spike") {
  SweepOptions opt;
  CHECK(resonance_flag(tm_efie, Measure::Hks, 2.404825557695773, opt));
  CHECK_FALSE(resonance_flag(tm_efie, Measure::Hks, 3.1, opt));
  CHECK_FALSE(resonance_flag({Composite::CCFIO, Polarization::TM}, Measure::Hks, 2.404825557695773, opt));
}

TEST_CASE("refinement lowers the measured error") {
  double prev = 1e300;
  for (int N : {40, 80, 160}) {
    const double r = error_report(tm_efie, Measure::L2, 10.0, 1, N).r_measured;
    CHECK(r < prev);
    prev = r;
  }
}
