#include "cylbem/bem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cylbem/errors.hpp"
#include "cylbem/quadrature.hpp"
#include "cylbem/specfun.hpp"

namespace cylbem::bem {

namespace {

using spectra::Composite;
using spectra::OperatorKind;
using spectra::WaveTag;

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// Local block for one (test element, source element) pair; at most 2x2.
struct Block {
  std::array<cplx, 4> v{};
  Block& operator+=(const Block& o) {
    for (int i = 0; i < 4; ++i) v[i] += o.v[i];
    return *this;
  }
  Block operator*(cplx s) const {
    Block b = *this;
    for (auto& x : b.v) x *= s;
    return b;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

double lsinc(double delta) {
  const double half = 0.5 * std::abs(delta);
  if (half < 1e-4) return -half * half / 6.0;
  return std::log(std::sin(half) / half);
}

// Kernel K(delta) = b + a ln|delta| near the diagonal.
struct Split {
  cplx a;
  cplx b;
};

class Kernel {
 public:
  Kernel(OperatorKind kind, cplx k, double radius, int p, double h)
      : kind_(kind), k_(k), radius_(radius), p_(p), h_(h), log_ka2_(std::log(k * radius / 2.0)) {}

  int nb() const { return p_ + 1; }

  double phi(int i, double u) const {
    if (p_ == 0) return 1.0;
    return i == 0 ? 1.0 - u : u;
  }
  double dphi(int i) const { return i == 0 ? -1.0 : 1.0; }

  // Log-split Green's function or double-layer kernel at angular separation delta.
  Split split(double delta) const {
    const double r = 2.0 * radius_ * std::abs(std::sin(0.5 * delta));
    const cplx z = k_ * r;
    const auto v = specfun::bessel01_log_split(z);
    const cplx lg = log_ka2_ + lsinc(delta);
    if (kind_ == OperatorKind::DoubleLayer || kind_ == OperatorKind::AdjDoubleLayer) {
      const cplx zj1 = z * v.j1;
      const cplx a = zj1 / (4.0 * kPi * radius_);
      const cplx b = (kI / (8.0 * radius_)) * (zj1 - kI * v.y1_reg - (2.0 * kI / kPi) * zj1 * lg);
      return {a, b};
    }
    const cplx a = -v.j0 / (2.0 * kPi);
    const cplx b = -(kI / 4.0) * (v.j0 - kI * v.y0_reg - (2.0 * kI / kPi) * v.j0 * lg);
    return {a, b};
  }

  // Basis-weighted integrand c_ij(u, v) multiplying the kernel.
  void weights(double u, double v, double delta, std::array<cplx, 4>& w) const {
    const int n = nb();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double pp = phi(i, u) * phi(j, v);
        if (kind_ == OperatorKind::Hypersingular) {
          w[i * n + j] = dphi(i) * dphi(j) / (h_ * h_) - k_ * k_ * std::cos(delta) * pp;
        } else {
          w[i * n + j] = pp;
        }
      }
    }
  }

  // Overall factor turning the integral over (u, v) in [0,1]^2 into a matrix entry.
  cplx prefactor() const {
    switch (kind_) {
      case OperatorKind::SingleLayer:
        return h_ * k_;
      case OperatorKind::Hypersingular:
        return h_ / k_;
      default:
        return h_;
    }
  }

  // Full kernel away from the diagonal from the Hankel functions. The normal
  // derivative factors are passed in so the adjoint pair can differ.
  cplx far_green(double r) const {
    return -(kI / 4.0) * specfun::hankel2_01(k_ * r).h0;
  }
  // dG/dr
  cplx far_green_dr(double r) const {
    return (kI * k_ / 4.0) * specfun::hankel2_01(k_ * r).h1;
  }

  OperatorKind kind() const { return kind_; }
  cplx k() const { return k_; }
  double radius() const { return radius_; }

 private:
  OperatorKind kind_;
  cplx k_;
  double radius_;
  int p_;
  double h_;
  cplx log_ka2_;
};

// Pair with element offset d in {-1, 0, 1}: delta = dtheta * (d + u - v).
Block near_block(const Kernel& K, int d, double dtheta, int n) {
  const auto& gl = quad::gauss_legendre(n);
  const auto& lg = quad::gauss_log(n);
  const int nb = K.nb();
  Block out;
  std::array<cplx, 4> w{};
  const double log_dt = std::log(dtheta);

  // Smooth part b + a ln(dtheta) on the tensor rule.
  for (int iu = 0; iu < n; ++iu) {
    for (int iv = 0; iv < n; ++iv) {
      const double u = gl.x[iu];
      const double v = gl.x[iv];
      const double delta = dtheta * (d + u - v);
      const Split s = K.split(delta);
      K.weights(u, v, delta, w);
      const double wt = gl.w[iu] * gl.w[iv];
      for (int m = 0; m < nb * nb; ++m) out.v[m] += wt * (s.b + s.a * log_dt) * w[m];
    }
  }

  // Remaining a(delta) * ln|d + u - v| term.
  const auto add_log = [&](double u, double v, double weight) {
    const double delta = dtheta * (d + u - v);
    const Split s = K.split(delta);
    K.weights(u, v, delta, w);
    for (int m = 0; m < nb * nb; ++m) out.v[m] += weight * s.a * w[m];
  };

  if (d == 0) {
    // t = |u - v| with the log rule in t, Gauss-Legendre along the strip.
    for (int it = 0; it < n; ++it) {
      const double t = lg.x[it];
      const double len = 1.0 - t;
      for (int j = 0; j < n; ++j) {
        const double s = len * gl.x[j];
        const double weight = -lg.w[it] * len * gl.w[j];
        add_log(s + t, s, weight);
        add_log(s, s + t, weight);
      }
    }
    return out;
  }

  // Adjacent: |d + u - v| = alpha + beta with the corner at alpha = beta = 0.
  const auto corner = [&](double alpha, double beta, double weight) {
    double u;
    double v;
    if (d == 1) {
      u = alpha;
      v = 1.0 - beta;
    } else {
      u = 1.0 - alpha;
      v = beta;
    }
    add_log(u, v, weight);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xi = gl.x[j];
      // ln(rho) part, rho on the log rule (jacobian rho kept in the weight).
      {
        const double rho = lg.x[i];
        const double weight = -lg.w[i] * rho * gl.w[j];
        corner(rho, rho * xi, weight);
        corner(rho * xi, rho, weight);
      }
      // ln(1 + xi) part on the tensor rule.
      {
        const double rho = gl.x[i];
        const double weight = gl.w[i] * rho * gl.w[j] * std::log1p(xi);
        corner(rho, rho * xi, weight);
        corner(rho * xi, rho, weight);
      }
    }
  }
  return out;
}

// Offset |d| >= 2 on the circle; kernel depends on delta only.
Block far_block_circle(const Kernel& K, int d, double dtheta, int n) {
  const auto& gl = quad::gauss_legendre(n);
  const int nb = K.nb();
  const double a = K.radius();
  Block out;
  std::array<cplx, 4> w{};
  for (int iu = 0; iu < n; ++iu) {
    for (int iv = 0; iv < n; ++iv) {
      const double u = gl.x[iu];
      const double v = gl.x[iv];
      const double delta = dtheta * (d + u - v);
      const double r = 2.0 * a * std::abs(std::sin(0.5 * delta));
      cplx kern;
      if (K.kind() == OperatorKind::DoubleLayer || K.kind() == OperatorKind::AdjDoubleLayer) {
        kern = K.far_green_dr(r) * (r / (2.0 * a));
      } else {
        kern = K.far_green(r);
      }
      K.weights(u, v, delta, w);
      const double wt = gl.w[iu] * gl.w[iv];
      for (int m = 0; m < nb * nb; ++m) out.v[m] += wt * kern * w[m];
    }
  }
  return out;
}

// Same integral from absolute coordinates; double-layer normals taken at the
// source point (D) or at the test point (D*).
Block far_block_geometric(const Kernel& K, double theta_test, double theta_src, double dtheta,
                          int n) {
  const auto& gl = quad::gauss_legendre(n);
  const int nb = K.nb();
  const double a = K.radius();
  Block out;
  std::array<cplx, 4> w{};
  for (int iu = 0; iu < n; ++iu) {
    const double tx = theta_test + dtheta * gl.x[iu];
    const double xx = a * std::cos(tx);
    const double xy = a * std::sin(tx);
    for (int iv = 0; iv < n; ++iv) {
      const double ty = theta_src + dtheta * gl.x[iv];
      const double yx = a * std::cos(ty);
      const double yy = a * std::sin(ty);
      const double dx = xx - yx;
      const double dy = xy - yy;
      const double r = std::hypot(dx, dy);
      cplx kern;
      if (K.kind() == OperatorKind::DoubleLayer) {
        const double drdn = -(dx * std::cos(ty) + dy * std::sin(ty)) / r;
        kern = K.far_green_dr(r) * drdn;
      } else if (K.kind() == OperatorKind::AdjDoubleLayer) {
        const double drdn = (dx * std::cos(tx) + dy * std::sin(tx)) / r;
        kern = K.far_green_dr(r) * drdn;
      } else {
        kern = K.far_green(r);
      }
      K.weights(gl.x[iu], gl.x[iv], tx - ty, w);
      const double wt = gl.w[iu] * gl.w[iv];
      for (int m = 0; m < nb * nb; ++m) out.v[m] += wt * kern * w[m];
    }
  }
  return out;
}

struct NearResult {
  Block block;
  int points = 0;
  double change = 0.0;
};

NearResult adaptive_near(const Kernel& K, int d, double dtheta, const QuadratureOptions& q) {
  int n = q.base_points;
  Block prev = near_block(K, d, dtheta, n);
  double change = 0.0;
  while (2 * n <= q.max_points) {
    Block next = near_block(K, d, dtheta, 2 * n);
    double diff = 0.0;
    for (int m = 0; m < 4; ++m) diff = std::max(diff, std::abs(next.v[m] - prev.v[m]));
    const double scale = std::max(next.max_abs(), 1e-300);
    change = diff / scale;
    prev = next;
    n *= 2;
    if (change < q.self_tol) break;
  }
  if (change > 1e-9) {
    throw QuadratureError("self-term quadrature did not settle (relative change " +
                          std::to_string(change) + ")");
  }
  return {prev, n, change};
}

int far_points(const Kernel& K, double h, int base, int d) {
  const int n = std::max(base, static_cast<int>(std::ceil(2.0 * std::abs(K.k()) * h + 8.0)));
  return std::abs(d) == 2 ? 2 * n : n;
}

int offset(int e1, int e2, int N) {
  int d = (e1 - e2) % N;
  if (d < 0) d += N;
  if (d > N / 2) d -= N;
  return d;
}

void scatter(Eigen::MatrixXcd& m, const Block& blk, int e1, int e2, int p, int N) {
  if (p == 0) {
    m(e1, e2) += blk.v[0];
    return;
  }
  const int r[2] = {e1, (e1 + 1) % N};
  const int c[2] = {e2, (e2 + 1) % N};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m(r[i], c[j]) += blk.v[i * 2 + j];
  }
}

Eigen::MatrixXcd gram(const Mesh& mesh, const BasisSpec& b) {
  const int N = mesh.N;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(N, N);
  if (b.p == 0) {
    g.setIdentity();
    return g;
  }
  for (int n = 0; n < N; ++n) {
    g(n, n) = 2.0 / 3.0;
    g(n, (n + 1) % N) += 1.0 / 6.0;
    g(n, (n + N - 1) % N) += 1.0 / 6.0;
  }
  return g;
}

double basis_value(int p, int i, double u) {
  if (p == 0) return 1.0;
  return i == 0 ? 1.0 - u : u;
}

// Trace coefficients c_q (q = 0..Q) for c_0 + 2 sum c_q cos(q (phi - inc)).
struct Trace {
  std::vector<cplx> c;
};

Trace trace_coefficients(FormulationId f, const ProblemConfig& cfg, int Q, unsigned* warnings) {
  const auto seq = specfun::cyl_sequence(Q, cfg.ka());
  const double eta = cfg.eta;
  const bool efie = f.composite == Composite::EFIO;
  Trace t;
  t.c.resize(Q + 1);
  cplx jpow = 1.0;  // j^{-q}
  for (int q = 0; q <= Q; ++q) {
    const cplx J = seq[q].j.value();
    const cplx Jp = seq[q].jp.value();
    cplx c;
    if (f.pol == Polarization::TM) {
      c = efie ? jpow * J / (kI * eta) : jpow * Jp / (kI * eta);
    } else {
      c = efie ? -jpow * Jp / (kI * eta) : (kI / eta) * jpow * J;
    }
    t.c[q] = c;
    jpow *= -kI;
  }
  double peak = 0.0;
  for (const auto& c : t.c) peak = std::max(peak, std::abs(c));
  if (warnings && std::abs(t.c[Q]) > 1e-12 * peak) *warnings |= kTruncationWarning;
  return t;
}

cplx eval_trace(const Trace& t, double angle) {
  cplx sum = t.c[0];
  for (std::size_t q = 1; q < t.c.size(); ++q) sum += 2.0 * t.c[q] * std::cos(q * angle);
  return sum;
}

Eigen::VectorXcd project(const Trace& t, const Mesh& mesh, const BasisSpec& b, double kh,
                         double inc) {
  const int N = mesh.N;
  const int n = std::max(16, static_cast<int>(std::ceil(2.0 * kh + 8.0)));
  const auto& gl = quad::gauss_legendre(n);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(N);
  const double dt = mesh.dtheta();
  for (int e = 0; e < N; ++e) {
    for (int i = 0; i < n; ++i) {
      const double u = gl.x[i];
      const cplx g = eval_trace(t, dt * (e + u) - inc) * gl.w[i];
      if (b.p == 0) {
        out(e) += g;
      } else {
        out(e) += basis_value(1, 0, u) * g;
        out((e + 1) % N) += basis_value(1, 1, u) * g;
      }
    }
  }
  return out;
}

FormulationId with(FormulationId f, Composite c) {
  f.composite = c;
  return f;
}

}  // namespace

Mesh::Mesh(int n, double radius) : N(n), a(radius) {
  if (N < 4) throw DomainError("Mesh: N must be >= 4");
  if (!(a > 0.0)) throw DomainError("Mesh: radius must be > 0");
}

double Mesh::dtheta() const { return 2.0 * kPi / N; }

DenseOperatorMatrix assemble(OperatorId op, const Mesh& mesh, const BasisSpec& b, cplx k,
                             const QuadratureOptions& quad) {
  b.validate();
  if (b.N != mesh.N) throw DomainError("assemble: basis and mesh disagree on N");
  const int N = mesh.N;
  DenseOperatorMatrix out;
  out.op = op;
  if (op.kind == OperatorKind::Identity) {
    out.m = gram(mesh, b);
    return out;
  }
  if (op.kind == OperatorKind::Hypersingular && b.p == 0) {
    throw PreconditionError("hypersingular operator needs continuous (p >= 1) bases");
  }
  const double dt = mesh.dtheta();
  const double h = mesh.h();
  const Kernel K(op.kind, k, mesh.a, b.p, h);
  const cplx pref = K.prefactor();
  out.m = Eigen::MatrixXcd::Zero(N, N);
  out.singular_split = true;

  std::array<NearResult, 3> near;
  for (int d = -1; d <= 1; ++d) {
    near[d + 1] = adaptive_near(K, d, dt, quad);
    out.inner_points = std::max(out.inner_points, near[d + 1].points);
    out.self_change = std::max(out.self_change, near[d + 1].change);
  }
  out.outer_points = far_points(K, h, quad.base_points, 3);

  if (quad.mode == AssemblyMode::Rotational) {
    std::vector<Block> blocks(N);
    for (int d = -(N / 2) + 1; d <= N / 2; ++d) {
      const int slot = (d + N) % N;
      if (std::abs(d) <= 1) {
        blocks[slot] = near[d + 1].block * pref;
      } else {
        blocks[slot] = far_block_circle(K, d, dt, far_points(K, h, quad.base_points, d)) * pref;
      }
    }
    for (int e1 = 0; e1 < N; ++e1) {
      for (int e2 = 0; e2 < N; ++e2) {
        scatter(out.m, blocks[((e1 - e2) % N + N) % N], e1, e2, b.p, N);
      }
    }
    return out;
  }

  for (int e1 = 0; e1 < N; ++e1) {
    for (int e2 = 0; e2 < N; ++e2) {
      const int d = offset(e1, e2, N);
      Block blk;
      if (std::abs(d) <= 1) {
        blk = near[d + 1].block;
      } else {
        blk = far_block_geometric(K, dt * e1, dt * e2, dt, far_points(K, h, quad.base_points, d));
      }
      scatter(out.m, blk * pref, e1, e2, b.p, N);
    }
  }
  return out;
}

DenseOperatorMatrix assemble(OperatorId op, const Mesh& mesh, const BasisSpec& b,
                             const ProblemConfig& cfg, const QuadratureOptions& quad) {
  cfg.validate();
  const cplx k = op.tag == WaveTag::K ? cplx(cfg.k) : cfg.k_tilde();
  return assemble(op, mesh, b, k, quad);
}

double circulant_deviation(const Eigen::MatrixXcd& m) {
  const int N = static_cast<int>(m.rows());
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double dev = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) dev = std::max(dev, std::abs(m(i, j) - m(0, ((j - i) % N + N) % N)));
  }
  return dev / scale;
}

std::vector<cplx> circulant_eigs(const DenseOperatorMatrix& mat) {
  const int N = static_cast<int>(mat.m.rows());
  if (mat.m.cols() != N || N == 0) throw NotCirculantError("circulant_eigs: matrix not square");
  const double dev = circulant_deviation(mat.m);
  if (dev > 1e-7) {
    throw NotCirculantError("circulant_eigs: deviation " + std::to_string(dev));
  }
  std::vector<cplx> out(N);
  for (int i = 0; i < N; ++i) {
    const int q = i - N / 2;
    cplx sum = 0.0;
    for (int m = 0; m < N; ++m) {
      const long phase = (static_cast<long>(q) * m) % N;
      sum += mat.m(0, m) * std::polar(1.0, -2.0 * kPi * static_cast<double>(phase) / N);
    }
    out[i] = sum;
  }
  return out;
}

int series_order(double ka) {
  return static_cast<int>(std::lround(ka + 12.0 * std::cbrt(ka) + 40.0));
}

Eigen::VectorXcd assemble_rhs(FormulationId f, const Mesh& mesh, const BasisSpec& b,
                              const ProblemConfig& cfg, Incidence inc, unsigned* warnings) {
  cfg.validate();
  b.validate();
  const int Q = series_order(cfg.ka());
  const double kh = cfg.k * mesh.h();
  const auto plain = [&](Composite c) {
    return project(trace_coefficients(with(f, c), cfg, Q, warnings), mesh, b, kh, inc.angle);
  };
  if (f.composite == Composite::EFIO || f.composite == Composite::MFIO) {
    return plain(f.composite);
  }
  if (f.composite != Composite::CCFIO) {
    throw PreconditionError("assemble_rhs: only EFIE, MFIE and CCFIE have right-hand sides");
  }
  const bool tm = f.pol == Polarization::TM;
  const Eigen::MatrixXcd G = gram(mesh, b);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> glu(G);
  const auto efie_op = assemble(
      {tm ? OperatorKind::Hypersingular : OperatorKind::SingleLayer, WaveTag::KTilde}, mesh, b,
      cfg);
  const auto dl = assemble(
      {tm ? OperatorKind::AdjDoubleLayer : OperatorKind::DoubleLayer, WaveTag::KTilde}, mesh, b,
      cfg);
  const Eigen::MatrixXcd mfie_op = tm ? Eigen::MatrixXcd(0.5 * G - dl.m)
                                      : Eigen::MatrixXcd(0.5 * G + dl.m);
  return efie_op.m * glu.solve(plain(Composite::EFIO)) +
         mfie_op * glu.solve(plain(Composite::MFIO));
}

std::vector<double> sample_angles(const Mesh& mesh, const BasisSpec& b) {
  std::vector<double> out(mesh.N);
  const double shift = b.p == 0 ? 0.5 : 0.0;
  for (int n = 0; n < mesh.N; ++n) out[n] = mesh.dtheta() * (n + shift);
  return out;
}

CurrentSolution solve_current(FormulationId f, const Mesh& mesh, const BasisSpec& b,
                              const ProblemConfig& cfg, Incidence inc,
                              const QuadratureOptions& quad) {
  cfg.validate();
  const bool tm = f.pol == Polarization::TM;
  const auto mat = [&](OperatorKind kind, WaveTag tag) {
    return assemble({kind, tag}, mesh, b, cfg, quad).m;
  };
  Eigen::MatrixXcd A;
  switch (f.composite) {
    case Composite::EFIO:
      A = mat(tm ? OperatorKind::SingleLayer : OperatorKind::Hypersingular, WaveTag::K);
      break;
    case Composite::MFIO: {
      const Eigen::MatrixXcd G = gram(mesh, b);
      A = tm ? Eigen::MatrixXcd(0.5 * G + mat(OperatorKind::AdjDoubleLayer, WaveTag::K))
             : Eigen::MatrixXcd(0.5 * G - mat(OperatorKind::DoubleLayer, WaveTag::K));
      break;
    }
    case Composite::CCFIO: {
      const Eigen::MatrixXcd G = gram(mesh, b);
      const Eigen::PartialPivLU<Eigen::MatrixXcd> glu(G);
      if (tm) {
        const Eigen::MatrixXcd dk = mat(OperatorKind::AdjDoubleLayer, WaveTag::K);
        const Eigen::MatrixXcd dt = mat(OperatorKind::AdjDoubleLayer, WaveTag::KTilde);
        A = mat(OperatorKind::Hypersingular, WaveTag::KTilde) *
                glu.solve(mat(OperatorKind::SingleLayer, WaveTag::K)) +
            (0.5 * G - dt) * glu.solve(Eigen::MatrixXcd(0.5 * G + dk));
      } else {
        const Eigen::MatrixXcd dk = mat(OperatorKind::DoubleLayer, WaveTag::K);
        const Eigen::MatrixXcd dt = mat(OperatorKind::DoubleLayer, WaveTag::KTilde);
        A = mat(OperatorKind::SingleLayer, WaveTag::KTilde) *
                glu.solve(mat(OperatorKind::Hypersingular, WaveTag::K)) +
            (0.5 * G + dt) * glu.solve(Eigen::MatrixXcd(0.5 * G - dk));
      }
      break;
    }
    default:
      throw PreconditionError("solve_current: formulation must be EFIE, MFIE or CCFIE");
  }

  CurrentSolution sol;
  sol.formulation = f;
  const Eigen::VectorXcd rhs = assemble_rhs(f, mesh, b, cfg, inc, &sol.warnings);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  sol.coeffs = lu.solve(rhs);
  const double rc = lu.rcond();
  sol.condition_estimate = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (sol.condition_estimate > 1e12) sol.warnings |= kNearSingularWarning;
  sol.residual = (A * sol.coeffs - rhs).norm() / std::max(rhs.norm(), 1e-300);
  sol.samples = sol.coeffs;
  sol.sample_angles = sample_angles(mesh, b);
  return sol;
}

std::vector<cplx> current_coefficients(Polarization pol, const ProblemConfig& cfg, int Q) {
  cfg.validate();
  const double x = cfg.ka();
  const auto seq = specfun::cyl_sequence(Q, x);
  std::vector<cplx> U(2 * Q + 1);
  cplx jpow = 1.0;
  for (int q = 0; q <= Q; ++q) {
    const ScaledComplex& h = pol == Polarization::TM ? seq[q].h2 : seq[q].h2p;
    const ScaledComplex num(2.0 * jpow / (kPi * cfg.eta * x));
    const cplx u = (num / h).value();
    U[Q + q] = u;
    U[Q - q] = u;
    jpow *= -kI;
  }
  return U;
}

Eigen::VectorXcd exact_current(Polarization pol, const ProblemConfig& cfg,
                               const std::vector<double>& angles, Incidence inc,
                               unsigned* warnings) {
  const int Q = series_order(cfg.ka());
  const auto U = current_coefficients(pol, cfg, Q);
  double peak = 0.0;
  for (const auto& u : U) peak = std::max(peak, std::abs(u));
  if (warnings && std::abs(U.back()) > 1e-12 * peak) *warnings |= kTruncationWarning;
  Eigen::VectorXcd out(angles.size());
  for (std::size_t n = 0; n < angles.size(); ++n) {
    const double phi = angles[n] - inc.angle;
    cplx sum = U[Q];
    for (int q = 1; q <= Q; ++q) sum += 2.0 * U[Q + q] * std::cos(q * phi);
    out(static_cast<Eigen::Index>(n)) = sum;
  }
  return out;
}

}  // namespace cylbem::bem
