#pragma once

#include <vector>

namespace cylbem::quad {

/// Nodes and weights on [0, 1].
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre on [0, 1]. Rules are cached; references stay valid.
const Rule& gauss_legendre(int n);

/// n-point Gauss rule for the weight -ln(x) on [0, 1].
const Rule& gauss_log(int n);

}  // namespace cylbem::quad
