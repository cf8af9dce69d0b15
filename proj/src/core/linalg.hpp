#pragma once

#include <functional>
#include <vector>

#include "core/types.hpp"

namespace maslov {

double spectral_norm(const Mat& m);

// Thin QR factor with orthonormal columns. With fix_signs the diagonal of R is
// forced nonnegative, which makes the factor depend continuously on the input
// as long as the input has full column rank.
Mat thin_qr(const Mat& m, bool fix_signs = true);

// Orthonormal basis of the column span, rank decided by singular values
// relative to the largest one.
Mat orth_basis(const Mat& m, double rel_tol = 1e-10);

// Inertia of a symmetric matrix; eigenvalues within tol*max(1,|lambda|_max)
// of zero count as zero.
Inertia eig_inertia(const Mat& sym, double tol = 1e-9);

struct SchurSplit {
  Mat positive;  // basis of the invariant subspace for Re(lambda) > 0
  Mat negative;  // basis of the invariant subspace for Re(lambda) < 0
  double gap = 0.0;  // min |Re(lambda)| over the whole spectrum
};

// Invariant subspaces of a hyperbolic matrix via sorted real Schur forms.
// Throws NotHyperbolic if some eigenvalue has |Re| <= tol*max(1,|M|) or the
// two subspaces do not split the space evenly as requested.
SchurSplit hyperbolic_invariant_split(const Mat& m, double rel_tol = 1e-8);

// Symmetric band matrix, lower triangle stored column-wise.
class SymBand {
public:
  SymBand() = default;
  SymBand(int n, int half_bandwidth);

  int size() const { return n_; }
  int half_bandwidth() const { return hb_; }

  double at(int i, int j) const;
  void add(int i, int j, double v);
  void set(int i, int j, double v);

  Mat to_dense() const;
  double max_abs() const;

  // this - t*other, bandwidth widened as needed
  SymBand shifted(const SymBand& other, double t) const;

  const std::vector<double>& raw() const { return band_; }

private:
  int n_ = 0;
  int hb_ = 0;
  std::vector<double> band_;
};

// Inertia by symmetric banded LDL^T without pivoting. Pivots smaller than a
// tiny substitution threshold are replaced by a negative sentinel (standard
// bisection practice), so the zero count is always reported as 0.
Inertia band_inertia(const SymBand& a);

// #{ eigenvalues of (A,M) pencil below t }, M positive definite.
int band_count_below(const SymBand& a, const SymBand& m, double t);

// k smallest eigenvalues of the pencil (A,M) by Sturm bisection.
Vec band_smallest_eigenvalues(const SymBand& a, const SymBand& m, int k,
                              double abs_tol = 1e-10);

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(const Vec& x, const Vec& y);

  double eval(double t) const;       // clamped to the end values outside [x0, xN]
  double derivative(double t) const;
  double x_front() const { return x_(0); }
  double x_back() const { return x_(x_.size() - 1); }

private:
  Vec x_, y_, m_;  // m_ holds second derivatives at the knots
};

// Scalar golden-section minimizer on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double width);

// Bisection for a sign change of f on [a, b]; f(a) and f(b) are supplied to
// avoid re-evaluation. Returns the midpoint of the final bracket.
double bisect_sign_change(const std::function<double(double)>& f, double a,
                          double b, double fa, double fb, double width);

// All zeros of a nonnegative statistic inside [a, b]. A bracket around one
// sampled dip can hide several zeros, so the bracket is rescanned on a fine
// grid; sign changes of the accompanying signed determinant are bisected and
// leftover dips of the statistic below stat_threshold are polished by golden
// section (covers even-order zeros, where the determinant does not flip).
// Results within 4*width of each other collapse to one; zeros closer than the
// fine spacing cannot be told apart, which callers detect by comparing the
// determinant signs at the ends against the parity of what was found.
std::vector<double> bracket_zeros(const std::function<double(double)>& stat,
                                  const std::function<double(double)>& sdet,
                                  double a, double b, double stat_threshold,
                                  double width, int fine_count);

}  // namespace maslov
