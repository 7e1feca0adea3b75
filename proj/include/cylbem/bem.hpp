#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cylbem/discretization.hpp"
#include "cylbem/spectra.hpp"

namespace cylbem::bem {

using cplx = std::complex<double>;
using disc::BasisSpec;
using spectra::FormulationId;
using spectra::OperatorId;
using spectra::Polarization;
using spectra::ProblemConfig;

struct Mesh {
  int N = 4;
  double a = 1.0;

  Mesh() = default;
  Mesh(int n, double radius);
  double dtheta() const;
  double h() const { return a * dtheta(); }
  double vertex_angle(int n) const { return dtheta() * n; }
};

enum class AssemblyMode {
  Rotational,  // one row of distinct element offsets, scattered (exact on the circle)
  Full,        // every element pair from absolute geometry
};

struct QuadratureOptions {
  int base_points = 16;   // Gauss points for smooth parts; doubled for self terms
  int max_points = 64;
  double self_tol = 1e-10;
  AssemblyMode mode = AssemblyMode::Rotational;
};

struct DenseOperatorMatrix {
  Eigen::MatrixXcd m;
  OperatorId op;
  int outer_points = 0;
  int inner_points = 0;
  bool singular_split = false;
  double self_change = 0.0;  // last change observed in the adaptive self-term refinement
};

DenseOperatorMatrix assemble(OperatorId op, const Mesh& mesh, const BasisSpec& b, cplx k,
                             const QuadratureOptions& quad = {});
/// Uses k or k_tilde from cfg according to op.tag.
DenseOperatorMatrix assemble(OperatorId op, const Mesh& mesh, const BasisSpec& b,
                             const ProblemConfig& cfg, const QuadratureOptions& quad = {});

/// Eigenvalues of a circulant matrix, index i holding q = i - N/2.
std::vector<cplx> circulant_eigs(const DenseOperatorMatrix& mat);
double circulant_deviation(const Eigen::MatrixXcd& m);

/// Truncation order for plane-wave and current series.
int series_order(double ka);

/// Incident plane wave along +x rotated by `incidence` radians.
struct Incidence {
  double angle = 0.0;
};

Eigen::VectorXcd assemble_rhs(FormulationId f, const Mesh& mesh, const BasisSpec& b,
                              const ProblemConfig& cfg, Incidence inc = {},
                              unsigned* warnings = nullptr);

struct CurrentSolution {
  Eigen::VectorXcd coeffs;
  Eigen::VectorXcd samples;
  std::vector<double> sample_angles;
  FormulationId formulation;
  double condition_estimate = 0.0;
  double residual = 0.0;
  unsigned warnings = 0;
};

/// Angles at which coefficients are read as samples: vertices for hats,
/// element centres for pulses.
std::vector<double> sample_angles(const Mesh& mesh, const BasisSpec& b);

CurrentSolution solve_current(FormulationId f, const Mesh& mesh, const BasisSpec& b,
                              const ProblemConfig& cfg, Incidence inc = {},
                              const QuadratureOptions& quad = {});

/// U_q coefficients for q = -Q..Q (index q + Q).
std::vector<cplx> current_coefficients(Polarization pol, const ProblemConfig& cfg, int Q);

Eigen::VectorXcd exact_current(Polarization pol, const ProblemConfig& cfg,
                               const std::vector<double>& angles, Incidence inc = {},
                               unsigned* warnings = nullptr);

}  // namespace cylbem::bem
