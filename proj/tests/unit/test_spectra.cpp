#include <doctest.h>

#include <cmath>

#include "cylbem/errors.hpp"
#include "cylbem/spectra.hpp"
#include "cylbem/validation.hpp"

using namespace cylbem;
using namespace cylbem::spectra;
using cplx = std::complex<double>;

namespace {
const OperatorId S{OperatorKind::SingleLayer, WaveTag::K};
const OperatorId D{OperatorKind::DoubleLayer, WaveTag::K};
const OperatorId Ds{OperatorKind::AdjDoubleLayer, WaveTag::K};
const OperatorId Nk{OperatorKind::Hypersingular, WaveTag::K};
const OperatorId I{OperatorKind::Identity, WaveTag::K};
constexpr double kJ0Zero = 2.404825557695773;
constexpr double kJp1Zero = 1.8411837813406593;
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("complexified wavenumber") {
  const cplx kt = complex_wavenumber(5.0, 1.0);
  CHECK(kt.real() == 5.0);
  CHECK(kt.imag() == doctest::Approx(-0.68399037867067883).epsilon(1e-14));
  const auto cfg = ProblemConfig::from_ka(30.0, 120, 1, 2.0);
  CHECK(cfg.k_tilde().imag() < 0.0);
  CHECK(cfg.kta() == cfg.k_tilde() * 2.0);
}

TEST_CASE("config validation") {
  ProblemConfig cfg;
  cfg.N = 2;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK_THROWS_AS(ProblemConfig::from_ka(-1.0, 8, 1), DomainError);
  CHECK_THROWS_AS(ProblemConfig::from_ka(1.0, 8, 2), DomainError);
}

TEST_CASE("single-layer eigenvalues against high-precision values") {
  CHECK(rel(eig_elementary(S, 0, ProblemConfig::from_ka(1.0, 8, 1)),
            cplx(-0.10608219815307811, -0.91974444547346407)) < 1e-13);
  const auto cfg = ProblemConfig::from_ka(5.0, 20, 1);
  CHECK(rel(eig_elementary(S, 3, cfg), cplx(-0.41911067861803315, -1.0453793033797754)) < 1e-13);
  CHECK(rel(eig_elementary(D, 3, cfg), cplx(-0.30202664892053893, 0.49380093230175674)) < 1e-13);
  CHECK(rel(eig_elementary(Nk, 3, cfg), cplx(-0.37884957707445460, 0.23325443688595761)) < 1e-13);
  CHECK(rel(eig_elementary({OperatorKind::SingleLayer, WaveTag::KTilde}, 3, cfg),
            cplx(-0.087989701569409622, -0.74912971167853787)) < 1e-12);
}

TEST_CASE("identity and adjoint double layer") {
  const auto cfg = ProblemConfig::from_ka(17.0, 68, 1);
  for (int q : {0, 5, 40}) {
    CHECK(eig_elementary(I, q, cfg) == cplx(1.0));
    CHECK(eig_elementary(D, q, cfg) == eig_elementary(Ds, q, cfg));
  }
}

TEST_CASE("resonances of the elementary and composite operators") {
  const auto c0 = ProblemConfig::from_ka(kJ0Zero, 10, 1);
  CHECK(std::abs(eig_elementary(S, 0, c0)) < 1e-10);
  CHECK(std::abs(eig_composite({Composite::EFIO, Polarization::TM}, 0, c0)) < 1e-10);
  CHECK(std::abs(eig_composite({Composite::MFIO, Polarization::TE}, 0, c0)) < 1e-10);
  const auto c1 = ProblemConfig::from_ka(kJp1Zero, 8, 1);
  CHECK(std::abs(eig_composite({Composite::MFIO, Polarization::TM}, 1, c1)) < 1e-10);
  CHECK(std::abs(eig_composite({Composite::EFIO, Polarization::TE}, 1, c1)) < 1e-10);
}

TEST_CASE("composite algebra") {
  const auto cfg = ProblemConfig::from_ka(12.3, 50, 1);
  const OperatorId St{OperatorKind::SingleLayer, WaveTag::KTilde};
  const OperatorId Dt{OperatorKind::DoubleLayer, WaveTag::KTilde};
  const OperatorId Nt{OperatorKind::Hypersingular, WaveTag::KTilde};
  for (int q : {0, 7, 12, 30}) {
    const cplx s = eig_elementary(S, q, cfg), d = eig_elementary(D, q, cfg),
               n = eig_elementary(Nk, q, cfg), st = eig_elementary(St, q, cfg),
               dt = eig_elementary(Dt, q, cfg), nt = eig_elementary(Nt, q, cfg);
    const auto tm = [&](Composite c) { return eig_composite({c, Polarization::TM}, q, cfg); };
    const auto te = [&](Composite c) { return eig_composite({c, Polarization::TE}, q, cfg); };
    CHECK(tm(Composite::EFIO) == s);
    CHECK(te(Composite::EFIO) == n);
    CHECK(rel(tm(Composite::MFIO), 0.5 + d) < 1e-15);
    CHECK(rel(te(Composite::MFIO), 0.5 - d) < 1e-15);
    CHECK(rel(tm(Composite::CEFIO), nt * s) < 1e-15);
    CHECK(rel(te(Composite::CEFIO), st * n) < 1e-15);
    CHECK(rel(tm(Composite::CMFIO), (0.5 - dt) * (0.5 + d)) < 1e-15);
    CHECK(rel(te(Composite::CMFIO), (0.5 + dt) * (0.5 - d)) < 1e-15);
    CHECK(tm(Composite::CCFIO) == tm(Composite::CEFIO) + tm(Composite::CMFIO));
    CHECK(te(Composite::CCFIO) == te(Composite::CEFIO) + te(Composite::CMFIO));
  }
}

TEST_CASE("Calderon identity at real arguments") {
  for (double ka : {0.7, 10.0, 50.0, 100.0, 200.0})
    CHECK(validation::calderon_residual(ka, static_cast<int>(3 * ka) + 5) <= 1e-9);
}

TEST_CASE("eigenvalues are even in q") {
  const auto cfg = ProblemConfig::from_ka(9.0, 36, 1);
  for (int q : {1, 4, 9, 25}) {
    for (const OperatorId op : {S, D, Nk, OperatorId{OperatorKind::Hypersingular, WaveTag::KTilde}})
      CHECK(eig_elementary(op, q, cfg) == eig_elementary(op, -q, cfg));
  }
}

TEST_CASE("transition-region magnitudes scale like (ka)^(+-1/3)") {
  std::vector<double> x, s, n;
  for (int i = 0; i < 20; ++i) {
    const double ka = 20.0 * std::pow(10.0, i / 19.0);
    const auto cfg = ProblemConfig::from_ka(ka, 8, 1);
    const int q = static_cast<int>(std::lround(ka));
    x.push_back(ka);
    s.push_back(std::abs(eig_elementary(S, q, cfg)));
    n.push_back(std::abs(eig_elementary(Nk, q, cfg)));
  }
  CHECK(std::abs(analysis::fit_power_law(x, s).slope - 1.0 / 3.0) <= 0.08);
  CHECK(std::abs(analysis::fit_power_law(x, n).slope + 1.0 / 3.0) <= 0.08);
}

TEST_CASE("eigen bank agrees with direct evaluation") {
  const auto cfg = ProblemConfig::from_ka(25.0, 100, 1);
  const EigenBank bank(cfg, 300);
  for (int q : {-300, -17, 0, 25, 299}) {
    const cplx s = eig_elementary(S, q, cfg);
    const cplx c = eig_composite({Composite::CCFIO, Polarization::TE}, q, cfg);
    CHECK(std::abs(bank.elementary(S, q) - s) <= 1e-14 * std::abs(s));
    CHECK(std::abs(bank.composite({Composite::CCFIO, Polarization::TE}, q) - c) <= 1e-14 * std::abs(c));
  }
}

TEST_CASE("names round-trip") {
  for (const char* s : {"S", "D", "Dstar", "N", "I", "S~", "N~"})
    CHECK(to_string(parse_operator(s)) == s);
  CHECK(parse_composite("CCFIE") == Composite::CCFIO);
  CHECK(parse_polarization("te") == Polarization::TE);
  CHECK_THROWS_AS(parse_operator("Q"), UsageError);
}
