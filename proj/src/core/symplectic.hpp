#pragma once

#include <random>

#include "core/linalg.hpp"
#include "core/types.hpp"

namespace maslov {

// Convention used throughout: phase vectors are z = (y, w) with the momentum
// block y on top, J = [[0, -I], [I, 0]] and omega(z1, z2) = <J z1, z2>.

Mat symplectic_J(int n);
Mat apply_J(const Mat& z);  // J z for stacked columns, no matrix product
double omega(const Vec& z1, const Vec& z2);

// Orthonormal frame of a Lagrangian plane. Construction validates shape,
// rank and isotropy, then replaces the columns by a thin QR factor (signs
// fixed, so the frame is a deterministic function of the input).
class LagrangianFrame {
public:
  static constexpr double kRankTol = 1e-10;
  static constexpr double kIsotropyTol = 1e-8;

  static LagrangianFrame from_columns(const Mat& z, double rank_tol = kRankTol,
                                      double isotropy_tol = kIsotropyTol);
  // trusted path for frames that are orthonormal by construction
  static LagrangianFrame from_orthonormal(const Mat& q);

  const Mat& columns() const { return q_; }
  int n() const { return static_cast<int>(q_.cols()); }
  int ambient() const { return static_cast<int>(q_.rows()); }
  Mat top() const { return q_.topRows(n()); }
  Mat bottom() const { return q_.bottomRows(n()); }
  double isotropy_residual() const;

private:
  explicit LagrangianFrame(Mat q) : q_(std::move(q)) {}
  Mat q_;
};

double isotropy_residual(const Mat& z);
LagrangianFrame dirichlet_plane(int n);  // span of (y, 0): momentum axis

// The following take orthonormal frames (columns orthonormal, equal row count).
int intersection_dim(const Mat& qa, const Mat& qb, double tol = 1e-7);
Mat intersection_basis(const Mat& qa, const Mat& qb, double tol = 1e-7);
double gap_distance(const Mat& qa, const Mat& qb);  // ||P_A - P_B||_2

int intersection_dim(const LagrangianFrame& a, const LagrangianFrame& b, double tol = 1e-7);
Mat intersection_basis(const LagrangianFrame& a, const LagrangianFrame& b, double tol = 1e-7);
double gap_distance(const LagrangianFrame& a, const LagrangianFrame& b);

// Symmetric form restricted to the span of `basis`; gram(i,j) is the form
// evaluated on basis columns i and j.
struct QuadraticForm {
  Mat gram;
  Mat basis;
  Inertia inertia(double tol = 1e-9) const { return eig_inertia(gram, tol); }
  int dim() const { return static_cast<int>(gram.rows()); }
};

LagrangianFrame random_lagrangian(int n, std::mt19937_64& rng);
Mat random_symplectic_cayley(int n, std::mt19937_64& rng, double scale = 1.0);

}  // namespace maslov
