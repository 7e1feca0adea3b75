#include <doctest.h>

#include <cmath>

#include "cylbem/analysis.hpp"
#include "cylbem/bem.hpp"
#include "cylbem/errors.hpp"
#include "cylbem/validation.hpp"

using namespace cylbem;
using namespace cylbem::bem;
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
const cplx j(0.0, 1.0);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

/// c_q = (1/N) sum_n v_n e^{+i q phi_n}, q in [-N/2, N/2).
std::vector<cplx> modes(const Eigen::VectorXcd& v) {
  const int N = static_cast<int>(v.size());
  std::vector<cplx> out(N);
  for (int i = 0; i < N; ++i) {
    const int q = i - N / 2;
    cplx s = 0.0;
    for (int n = 0; n < N; ++n) s += v[n] * std::polar(1.0, 2 * M_PI * q * n / N);
    out[i] = s / static_cast<double>(N);
  }
  return out;
}
}  // namespace

TEST_CASE("Gram matrices") {
  const Mesh mesh(8, 1.0);
  const auto cfg = ProblemConfig::from_ka(1.0, 8, 0);
  const auto g0 = assemble(I, mesh, {0, 8}, cfg);
  CHECK((g0.m - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-14);
  const auto g1 = assemble(I, mesh, {1, 8}, cfg);
  for (int m = 0; m < 8; ++m) {
    CHECK(std::abs(g1.m(m, m) - 2.0 / 3.0) < 1e-14);
    CHECK(std::abs(g1.m(m, (m + 1) % 8) - 1.0 / 6.0) < 1e-14);
    CHECK(std::abs(g1.m(m, (m + 7) % 8) - 1.0 / 6.0) < 1e-14);
    CHECK(std::abs(g1.m(m, (m + 4) % 8)) < 1e-14);
  }
  const auto e = circulant_eigs(g1);
  for (int i = 0; i < 8; ++i)
    CHECK(std::abs(e[i] - (2.0 + std::cos(2 * M_PI * (i - 4) / 8)) / 3.0) < 1e-14);
}

TEST_CASE("assembled spectra match the aliasing-sum prediction") {
  for (int p : {0, 1}) {
    for (const OperatorId op : {S, D, Ds, Nk, I, OperatorId{OperatorKind::SingleLayer, WaveTag::KTilde},
                                OperatorId{OperatorKind::Hypersingular, WaveTag::KTilde}}) {
      if (p == 0 && op.kind == OperatorKind::Hypersingular) continue;
      CAPTURE(p);
      CAPTURE(to_string(op));
      CHECK(validation::max_deviation(validation::bem_spectrum(op, 7.5, 30, p)) <= 1e-6);
    }
  }
}

TEST_CASE("full assembly is circulant with Galerkin symmetry") {
  QuadratureOptions quad;
  quad.mode = AssemblyMode::Full;
  const int N = 24;
  const Mesh mesh(N, 1.3);
  const auto cfg = ProblemConfig::from_ka(6.0, N, 1, 1.3);
  const auto s = assemble(S, mesh, {1, N}, cfg, quad);
  const auto n = assemble(Nk, mesh, {1, N}, cfg, quad);
  const auto d = assemble(D, mesh, {1, N}, cfg, quad);
  const auto ds = assemble(Ds, mesh, {1, N}, cfg, quad);
  for (const auto* m : {&s, &n, &d, &ds}) CHECK(circulant_deviation(m->m) <= 1e-9);
  CHECK((s.m - s.m.transpose()).norm() <= 1e-9 * s.m.norm());
  CHECK((n.m - n.m.transpose()).norm() <= 1e-9 * n.m.norm());
  CHECK((d.m - ds.m.transpose()).norm() <= 1e-9 * d.m.norm());
  // rotational assembly reproduces the full one
  const auto s_rot = assemble(S, mesh, {1, N}, cfg);
  CHECK((s_rot.m - s.m).norm() <= 1e-9 * s.m.norm());
}

TEST_CASE("Calderon identity of the Gram-corrected discrete spectra improves with N") {
  const double ka = 5.0;
  double prev = 1e300;
  for (int N : {20, 40, 80}) {
    const auto cfg = ProblemConfig::from_ka(ka, N, 1);
    const Mesh mesh(N, 1.0);
    const auto es = circulant_eigs(assemble(S, mesh, {1, N}, cfg));
    const auto ed = circulant_eigs(assemble(D, mesh, {1, N}, cfg));
    const auto en = circulant_eigs(assemble(Nk, mesh, {1, N}, cfg));
    const auto ei = circulant_eigs(assemble(I, mesh, {1, N}, cfg));
    double worst = 0.0;
    for (int q = -3; q <= 3; ++q) {
      const int i = q + N / 2;
      const cplx c = es[i] * en[i] / (ei[i] * ei[i]) + std::pow(ed[i] / ei[i], 2);
      worst = std::max(worst, std::abs(c - 0.25) / 0.25);
    }
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("preconditions and circulant detection") {
  const Mesh mesh(8, 1.0);
  const auto cfg = ProblemConfig::from_ka(2.0, 8, 0);
  CHECK_THROWS_AS(assemble(Nk, mesh, {0, 8}, cfg), PreconditionError);
  DenseOperatorMatrix bad;
  bad.m = Eigen::MatrixXcd::Identity(8, 8);
  bad.m(2, 5) = 0.3;
  CHECK_THROWS_AS(circulant_eigs(bad), NotCirculantError);
  DenseOperatorMatrix id;
  id.m = Eigen::MatrixXcd::Identity(6, 6);
  for (const cplx e : circulant_eigs(id)) CHECK(std::abs(e - 1.0) < 1e-15);
}

TEST_CASE("TM-EFIE right-hand side carries j^-q J_q(ka) F_q") {
  const int N = 64;
  const double ka = 3.0;
  const auto cfg = ProblemConfig::from_ka(ka, N, 1);
  const disc::BasisSpec b{1, N};
  const auto rhs = assemble_rhs({Composite::EFIO, Polarization::TM}, Mesh(N, 1.0), b, cfg);
  const auto c = modes(rhs);
  const auto seq = specfun::cyl_sequence(10, ka);
  cplx ratio0 = 0.0;
  for (int q = -8; q <= 8; ++q) {
    const double jq = seq[std::abs(q)].j.value().real() * ((q < 0 && (q % 2)) ? -1.0 : 1.0);
    const cplx expect = std::pow(j, -q) * jq * disc::fourier_coeff(b, q);
    const cplx ratio = c[q + N / 2] / expect;
    if (q == -8) ratio0 = ratio;
    CHECK(rel(ratio, ratio0) < 1e-9);
  }
}

TEST_CASE("right-hand side is uniform at vanishing frequency") {
  const int N = 16;
  const auto cfg = ProblemConfig::from_ka(1e-11, N, 1);
  const auto rhs = assemble_rhs({Composite::MFIO, Polarization::TE}, Mesh(N, 1.0), {1, N}, cfg);
  for (int n = 1; n < N; ++n) CHECK(rel(rhs[n], rhs[0]) <= 1e-10);
}

TEST_CASE("mode traces vanish at the matching Bessel zeros") {
  const int N = 32;
  // H_z content is j^-q J_q: zero in mode 0 at the first J_0 zero
  const auto c0 = ProblemConfig::from_ka(kJ0Zero, N, 1);
  const auto m0 = modes(assemble_rhs({Composite::MFIO, Polarization::TE}, Mesh(N, 1.0), {1, N}, c0));
  double mx = 0.0;
  for (const cplx v : m0) mx = std::max(mx, std::abs(v));
  CHECK(std::abs(m0[N / 2]) <= 1e-10 * mx);
  // tangential E content is j^-q J'_q: zero in modes +-1 at the first J'_1 zero
  const auto c1 = ProblemConfig::from_ka(kJp1Zero, N, 1);
  const auto m1 = modes(assemble_rhs({Composite::EFIO, Polarization::TE}, Mesh(N, 1.0), {1, N}, c1));
  mx = 0.0;
  for (const cplx v : m1) mx = std::max(mx, std::abs(v));
  CHECK(std::abs(m1[N / 2 + 1]) <= 1e-10 * mx);
  CHECK(std::abs(m1[N / 2 - 1]) <= 1e-10 * mx);
}

TEST_CASE("solutions: residual, symmetry and rotation") {
  const int N = 40;
  const auto cfg = ProblemConfig::from_ka(10.0, N, 1);
  const Mesh mesh(N, 1.0);
  for (const auto pol : {Polarization::TM, Polarization::TE}) {
    for (const auto c : {Composite::EFIO, Composite::MFIO, Composite::CCFIO}) {
      const FormulationId f{c, pol};
      const auto sol = solve_current(f, mesh, {1, N}, cfg);
      CHECK(sol.residual <= 1e-10);
      for (int n = 1; n < N; ++n)
        CHECK(std::abs(std::abs(sol.samples[n]) - std::abs(sol.samples[N - n])) <=
              1e-9 * sol.samples.norm());
      const auto rot = solve_current(f, mesh, {1, N}, cfg, Incidence{2 * M_PI / N});
      for (int n = 0; n < N; ++n)
        CHECK(std::abs(rot.samples[(n + 1) % N] - sol.samples[n]) <= 1e-9 * sol.samples.norm());
    }
  }
}

TEST_CASE("combined formulation stays well conditioned at an EFIE resonance") {
  const int N = 10;
  const auto cfg = ProblemConfig::from_ka(kJ0Zero, N, 1);
  const Mesh mesh(N, 1.0);
  const auto cc = solve_current({Composite::CCFIO, Polarization::TM}, mesh, {1, N}, cfg);
  CHECK(cc.condition_estimate < 1e3);
  const auto ef = solve_current({Composite::EFIO, Polarization::TM}, mesh, {1, N}, cfg);
  CHECK(ef.condition_estimate > 1e6 * cc.condition_estimate);
}

TEST_CASE("exact current against an independent series evaluation") {
  const auto cfg = ProblemConfig::from_ka(2.0, 8, 1);
  const std::vector<double> ang = {0.0, M_PI / 3, M_PI};
  const auto tm = exact_current(Polarization::TM, cfg, ang);
  CHECK(rel(tm[0], cplx(0.085469811051572930, 0.079962283357108074)) < 1e-12);
  CHECK(rel(tm[1], cplx(-0.23692114519028856, -0.33408484121336794)) < 1e-12);
  CHECK(rel(tm[2], cplx(-0.50931651811076848, 2.0868394677844228)) < 1e-12);
  const auto te = exact_current(Polarization::TE, cfg, ang);
  CHECK(rel(te[0], cplx(-0.42771757209992337, -0.59384972881177906)) < 1e-12);
  CHECK(rel(te[1], cplx(0.84599072166323090, 0.52252315708475668)) < 1e-12);
  CHECK(rel(te[2], cplx(-1.5531449864500376, -1.0207285081683622)) < 1e-12);
}

TEST_CASE("exact current: mirror symmetry and element quadrature") {
  const auto cfg = ProblemConfig::from_ka(10.0, 40, 1);
  const std::vector<double> ang = {0.4, -0.4, 2.2, -2.2};
  const auto c = exact_current(Polarization::TM, cfg, ang);
  CHECK(std::abs(c[0]) == doctest::Approx(std::abs(c[1])).epsilon(1e-14));
  CHECK(std::abs(c[2]) == doctest::Approx(std::abs(c[3])).epsilon(1e-14));

  const int N = 40, Q = series_order(10.0);
  const Mesh mesh(N, 1.0);
  const auto s = exact_current(Polarization::TM, cfg, sample_angles(mesh, {1, N}));
  const auto U = current_coefficients(Polarization::TM, cfg, Q);
  cplx alias = 0.0;
  for (int q = -Q; q <= Q; ++q)
    if (q % N == 0) alias += U[q + Q];
  CHECK(rel(s.sum() * mesh.h(), 2 * M_PI * cfg.a * alias) < 1e-12);
}

TEST_CASE("TE coefficient peaks at a J' zero") {
  const auto cfg = ProblemConfig::from_ka(kJp1Zero, 8, 1);
  const int Q = series_order(kJp1Zero);
  const auto U = current_coefficients(Polarization::TE, cfg, Q);
  int arg = 0;
  for (int i = 0; i < static_cast<int>(U.size()); ++i)
    if (std::abs(U[i]) > std::abs(U[arg])) arg = i;
  CHECK(std::abs(arg - Q) == 1);
}
