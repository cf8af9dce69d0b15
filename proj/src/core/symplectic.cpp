#include "core/symplectic.hpp"

#include <cmath>

namespace maslov {

Mat symplectic_J(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return j;
}

Mat apply_J(const Mat& z) {
  require(z.rows() % 2 == 0, ErrorCode::DimensionMismatch, "apply_J: odd row count");
  const int n = static_cast<int>(z.rows()) / 2;
  Mat out(z.rows(), z.cols());
  out.topRows(n) = -z.bottomRows(n);
  out.bottomRows(n) = z.topRows(n);
  return out;
}

double omega(const Vec& z1, const Vec& z2) {
  require(z1.size() == z2.size() && z1.size() % 2 == 0, ErrorCode::DimensionMismatch,
          "omega: bad vector sizes");
  const int n = static_cast<int>(z1.size()) / 2;
  return z1.head(n).dot(z2.tail(n)) - z1.tail(n).dot(z2.head(n));
}

double isotropy_residual(const Mat& z) {
  double smax = spectral_norm(z);
  if (smax == 0.0) return 0.0;
  return spectral_norm(z.transpose() * apply_J(z)) / (smax * smax);
}

LagrangianFrame LagrangianFrame::from_columns(const Mat& z, double rank_tol,
                                              double isotropy_tol) {
  require(z.rows() > 0 && z.rows() % 2 == 0, ErrorCode::DimensionMismatch,
          "frame: row count must be even");
  require(z.cols() == z.rows() / 2, ErrorCode::DimensionMismatch,
          "frame: need n columns in a 2n-dimensional phase space");
  Eigen::JacobiSVD<Mat> svd(z);
  const Vec& s = svd.singularValues();
  require(s(s.size() - 1) > rank_tol * s(0), ErrorCode::RankDeficient,
          "frame: columns are numerically dependent");
  require(maslov::isotropy_residual(z) <= isotropy_tol, ErrorCode::NotIsotropic,
          "frame: span is not isotropic");
  return LagrangianFrame(thin_qr(z));
}

LagrangianFrame LagrangianFrame::from_orthonormal(const Mat& q) {
  return LagrangianFrame(q);
}

double LagrangianFrame::isotropy_residual() const { return maslov::isotropy_residual(q_); }

LagrangianFrame dirichlet_plane(int n) {
  Mat q = Mat::Zero(2 * n, n);
  q.topRows(n) = Mat::Identity(n, n);
  return LagrangianFrame::from_orthonormal(q);
}

namespace {

Vec principal_cosines(const Mat& qa, const Mat& qb) {
  require(qa.rows() == qb.rows(), ErrorCode::DimensionMismatch, "frames in different spaces");
  if (qa.cols() == 0 || qb.cols() == 0) return Vec(0);
  Eigen::JacobiSVD<Mat> svd(qa.transpose() * qb);
  return svd.singularValues();
}

}  // namespace

int intersection_dim(const Mat& qa, const Mat& qb, double tol) {
  Vec s = principal_cosines(qa, qb);
  int d = 0;
  for (int i = 0; i < s.size(); ++i)
    if (1.0 - s(i) <= tol) ++d;
  return d;
}

Mat intersection_basis(const Mat& qa, const Mat& qb, double tol) {
  require(qa.rows() == qb.rows(), ErrorCode::DimensionMismatch, "frames in different spaces");
  if (qa.cols() == 0 || qb.cols() == 0) return Mat(qa.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(qa.transpose() * qb, Eigen::ComputeFullU);
  const Vec& s = svd.singularValues();
  int d = 0;
  for (int i = 0; i < s.size(); ++i)
    if (1.0 - s(i) <= tol) ++d;
  // singular vectors for cosines ~ 1 give the directions shared by the spans
  return qa * svd.matrixU().leftCols(d);
}

double gap_distance(const Mat& qa, const Mat& qb) {
  require(qa.rows() == qb.rows(), ErrorCode::DimensionMismatch, "frames in different spaces");
  // spectral norm of the projector difference; for equal dimensions this is
  // sin of the largest principal angle, and it stays accurate near zero
  return spectral_norm(qa * qa.transpose() - qb * qb.transpose());
}

int intersection_dim(const LagrangianFrame& a, const LagrangianFrame& b, double tol) {
  return intersection_dim(a.columns(), b.columns(), tol);
}

Mat intersection_basis(const LagrangianFrame& a, const LagrangianFrame& b, double tol) {
  return intersection_basis(a.columns(), b.columns(), tol);
}

double gap_distance(const LagrangianFrame& a, const LagrangianFrame& b) {
  return gap_distance(a.columns(), b.columns());
}

LagrangianFrame random_lagrangian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = std::complex<double>(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  Mat frame(2 * n, n);
  frame.topRows(n) = u.real();
  frame.bottomRows(n) = u.imag();
  return LagrangianFrame::from_columns(frame);
}

Mat random_symplectic_cayley(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Mat s(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = i; j < 2 * n; ++j) {
      s(i, j) = g(rng);
      s(j, i) = s(i, j);
    }
  Mat h = apply_J(s);  // Hamiltonian matrix J S
  Mat id = Mat::Identity(2 * n, 2 * n);
  return (id - 0.5 * h).partialPivLu().solve(id + 0.5 * h);
}

}  // namespace maslov
