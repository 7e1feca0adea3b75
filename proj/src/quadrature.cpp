#include "cylbem/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "cylbem/errors.hpp"

namespace cylbem::quad {

namespace {

Rule build_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[n - 1 - i] = 0.5 * (1.0 + x);
    r.w[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

// Modified Chebyshev algorithm on monic shifted Legendre moments, then
// Golub-Welsch on the resulting Jacobi matrix.
Rule build_log(int n) {
  const int m = 2 * n;
  std::vector<long double> mom(m);
  mom[0] = 1.0L;
  long double ratio = 1.0L;  // (k!)^2 / (2k)!
  for (int k = 1; k < m; ++k) {
    ratio *= static_cast<long double>(k) * k / ((2.0L * k - 1.0L) * (2.0L * k));
    const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
    mom[k] = sign / (static_cast<long double>(k) * (k + 1)) * ratio;
  }
  auto a_aux = [](int) { return 0.5L; };
  auto b_aux = [](int k) {
    if (k == 0) return 1.0L;
    const long double kk = static_cast<long double>(k) * k;
    return kk / (4.0L * (4.0L * kk - 1.0L));
  };

  std::vector<long double> alpha(n), beta(n);
  std::vector<long double> sig_prev(m, 0.0L), sig(mom), sig_next(m, 0.0L);
  alpha[0] = a_aux(0) + mom[1] / mom[0];
  beta[0] = mom[0];
  for (int k = 1; k < n; ++k) {
    for (int l = k; l < m - k; ++l) {
      sig_next[l] = sig[l + 1] - (alpha[k - 1] - a_aux(l)) * sig[l] - beta[k - 1] * sig_prev[l] +
                    b_aux(l) * sig[l - 1];
    }
    alpha[k] = a_aux(k) + sig_next[k + 1] / sig_next[k] - sig[k] / sig[k - 1];
    beta[k] = sig_next[k] / sig[k - 1];
    sig_prev.swap(sig);
    sig.swap(sig_next);
  }

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jac(k, k) = static_cast<double>(alpha[k]);
    if (k + 1 < n) {
      if (!(beta[k + 1] > 0.0L)) throw QuadratureError("gauss_log: lost positivity");
      jac(k, k + 1) = jac(k + 1, k) = static_cast<double>(std::sqrt(beta[k + 1]));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.w[i] = static_cast<double>(beta[0]) * v0 * v0;
  }
  return r;
}

const Rule& cached(int n, bool log_weight) {
  static std::mutex mu;
  static std::map<std::pair<int, bool>, std::unique_ptr<Rule>> cache;
  if (n < 1) throw QuadratureError("quadrature rule needs at least one point");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, log_weight}];
  if (!slot) slot = std::make_unique<Rule>(log_weight ? build_log(n) : build_legendre(n));
  return *slot;
}

}  // namespace

const Rule& gauss_legendre(int n) { return cached(n, false); }

const Rule& gauss_log(int n) { return cached(n, true); }

}  // namespace cylbem::quad
