#pragma once

#include <array>
#include <stdexcept>

namespace reconn {

struct NoRootInUnitInterval : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct KernelRankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponent and per-sector sine/cosine coefficients of the exact singular
// function phi(theta) = a_i sin(lambda theta) + b_i cos(lambda theta) on the
// four quadrant sectors.
struct SturmLiouvilleSolution {
  double lambda = 0.0;
  std::array<double, 4> a{};
  std::array<double, 4> b{};
  int roots_found = 0;       // sign changes seen by the scan over (0.01, 0.99)
  double det_at_root = 0.0;  // row-normalized determinant at lambda

  double phi(double theta) const;       // theta in [0, 2pi)
  double dphi(double theta) const;      // derivative w.r.t. theta
  double phi_sector(double theta, int sector) const;
  double dphi_sector(double theta, int sector) const;
};

// The 8x8 matrix of sector continuity and flux-continuity conditions; rows
// alternate value and sigma*phi' matching at theta = pi/2, pi, 3pi/2 and the
// periodic wrap at 2pi; columns are a1..a4, b1..b4.
void assemble_m_lambda(double lambda, const std::array<double, 4>& sigma,
                       double m[8][8]);

// Determinant of the row-normalized M_lambda (full-pivot elimination).
double det_m_lambda(double lambda, const std::array<double, 4>& sigma);

// Scans 200 uniform lambdas in (0.01, 0.99) for a sign change, bisects it to
// 1e-12 and extracts the one-dimensional kernel. Normalization: a1 = 3.584
// for the benchmark sigma = (1,2,3,4), unit Euclidean norm with a1 >= 0
// otherwise.
SturmLiouvilleSolution sturm_liouville_solve(const std::array<double, 4>& sigma);

// Independent oracle: smallest nonzero eigenvalue lambda^2 of the periodic
// piecewise-linear FEM discretisation of the weak angular eigenproblem, on
// n_elements (a multiple of 4 so element edges align with the sector
// boundaries). Returns lambda.
double sturm_liouville_fem_oracle(const std::array<double, 4>& sigma,
                                  int n_elements);

}  // namespace reconn
