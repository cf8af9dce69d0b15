#include "core/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace {

lapack_logical select_re_positive(const double* re, const double* im) {
  (void)im;
  return *re > 0.0;
}

lapack_logical select_re_negative(const double* re, const double* im) {
  (void)im;
  return *re < 0.0;
}

}  // namespace

namespace maslov {

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat thin_qr(const Mat& m, bool fix_signs) {
  require(m.rows() >= m.cols(), ErrorCode::DimensionMismatch, "thin_qr: more columns than rows");
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), m.cols());
  Mat r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  double dmax = 0.0;
  for (int j = 0; j < r.cols(); ++j) dmax = std::max(dmax, std::abs(r(j, j)));
  for (int j = 0; j < r.cols(); ++j) {
    require(std::abs(r(j, j)) > 1e-13 * std::max(1.0, dmax), ErrorCode::RankDeficient,
            "thin_qr: input has (numerically) dependent columns");
    if (fix_signs && r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

Mat orth_basis(const Mat& m, double rel_tol) {
  if (m.size() == 0 || m.norm() == 0.0) return Mat(m.rows(), 0);
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > rel_tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Inertia eig_inertia(const Mat& sym, double tol) {
  require(sym.rows() == sym.cols(), ErrorCode::DimensionMismatch, "eig_inertia: not square");
  if (sym.rows() == 0) return {};
  Mat s = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  const Vec& ev = es.eigenvalues();
  double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  double cut = tol * std::max(1.0, scale);
  Inertia out;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cut)
      ++out.positive;
    else if (ev(i) < -cut)
      ++out.negative;
    else
      ++out.zero;
  }
  return out;
}

SchurSplit hyperbolic_invariant_split(const Mat& m, double rel_tol) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorCode::DimensionMismatch,
          "invariant split: not square");
  const int n = static_cast<int>(m.rows());
  const double scale = spectral_norm(m);

  auto run = [&](LAPACK_D_SELECT2 sel, lapack_int* sdim_out, double* gap_out) -> Mat {
    Mat a = m;
    Mat vs(n, n);
    std::vector<double> wr(n), wi(n);
    lapack_int sdim = 0;
    lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', sel, n, a.data(), n, &sdim,
                                    wr.data(), wi.data(), vs.data(), n);
    if (info == n + 1 || info == n + 2)
      fail(ErrorCode::NotHyperbolic, "invariant split: spectrum too clustered to reorder");
    require(info == 0, ErrorCode::Internal, "dgees failed");
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) gap = std::min(gap, std::abs(wr[i]));
    *gap_out = gap;
    *sdim_out = sdim;
    return vs;
  };

  lapack_int sdim_pos = 0, sdim_neg = 0;
  double gap_pos = 0.0, gap_neg = 0.0;
  Mat vs_pos = run(&select_re_positive, &sdim_pos, &gap_pos);
  Mat vs_neg = run(&select_re_negative, &sdim_neg, &gap_neg);

  SchurSplit out;
  out.gap = std::min(gap_pos, gap_neg);
  require(out.gap > rel_tol * std::max(1.0, scale), ErrorCode::NotHyperbolic,
          "invariant split: eigenvalue too close to the imaginary axis");
  require(sdim_pos + sdim_neg == n, ErrorCode::NotHyperbolic,
          "invariant split: spectra do not partition");
  out.positive = vs_pos.leftCols(sdim_pos);
  out.negative = vs_neg.leftCols(sdim_neg);
  return out;
}

SymBand::SymBand(int n, int half_bandwidth) : n_(n), hb_(half_bandwidth) {
  require(n >= 1 && half_bandwidth >= 0, ErrorCode::InvalidArgument, "SymBand: bad shape");
  band_.assign(static_cast<size_t>(n) * (hb_ + 1), 0.0);
}

double SymBand::at(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (i - j > hb_) return 0.0;
  return band_[static_cast<size_t>(j) * (hb_ + 1) + (i - j)];
}

void SymBand::add(int i, int j, double v) {
  if (i < j) std::swap(i, j);
  require(i - j <= hb_ && i < n_, ErrorCode::InvalidArgument, "SymBand: outside band");
  band_[static_cast<size_t>(j) * (hb_ + 1) + (i - j)] += v;
}

void SymBand::set(int i, int j, double v) {
  if (i < j) std::swap(i, j);
  require(i - j <= hb_ && i < n_, ErrorCode::InvalidArgument, "SymBand: outside band");
  band_[static_cast<size_t>(j) * (hb_ + 1) + (i - j)] = v;
}

Mat SymBand::to_dense() const {
  Mat d = Mat::Zero(n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int i = j; i <= std::min(n_ - 1, j + hb_); ++i) {
      d(i, j) = at(i, j);
      d(j, i) = d(i, j);
    }
  return d;
}

double SymBand::max_abs() const {
  double m = 0.0;
  for (double v : band_) m = std::max(m, std::abs(v));
  return m;
}

SymBand SymBand::shifted(const SymBand& other, double t) const {
  require(n_ == other.n_, ErrorCode::DimensionMismatch, "SymBand: size mismatch");
  SymBand out(n_, std::max(hb_, other.hb_));
  for (int j = 0; j < n_; ++j)
    for (int i = j; i <= std::min(n_ - 1, j + out.hb_); ++i)
      out.set(i, j, at(i, j) - t * other.at(i, j));
  return out;
}

Inertia band_inertia(const SymBand& a) {
  const int n = a.size();
  const int hb = a.half_bandwidth();
  const double pivmin = std::max(1.0, a.max_abs()) * 1e-290;

  // working copy of the lower band; entries below the diagonal get overwritten
  // by the multipliers of the LDL^T factorization
  std::vector<double> w(a.raw());
  std::vector<double> d(n);
  auto idx = [hb](int i, int j) { return static_cast<size_t>(j) * (hb + 1) + (i - j); };

  Inertia out;
  for (int j = 0; j < n; ++j) {
    double s = w[idx(j, j)];
    for (int k = std::max(0, j - hb); k < j; ++k) {
      double l = w[idx(j, k)];
      s -= l * l * d[k];
    }
    if (std::abs(s) <= pivmin) s = -pivmin;
    d[j] = s;
    if (s > 0)
      ++out.positive;
    else
      ++out.negative;
    for (int i = j + 1; i <= std::min(n - 1, j + hb); ++i) {
      double t = w[idx(i, j)];
      for (int k = std::max(0, i - hb); k < j; ++k) t -= w[idx(i, k)] * w[idx(j, k)] * d[k];
      w[idx(i, j)] = t / s;
    }
  }
  return out;
}

int band_count_below(const SymBand& a, const SymBand& m, double t) {
  return band_inertia(a.shifted(m, t)).negative;
}

Vec band_smallest_eigenvalues(const SymBand& a, const SymBand& m, int k, double abs_tol) {
  require(k >= 1, ErrorCode::InvalidArgument, "need k >= 1");
  auto count = [&](double t) { return band_count_below(a, m, t); };

  double lo = -1.0, hi = 1.0;
  for (int it = 0; count(lo) > 0; ++it) {
    require(it < 2000, ErrorCode::Internal, "no lower spectral bound found");
    lo *= 2.0;
  }
  for (int it = 0; count(hi) < k; ++it) {
    require(it < 2000, ErrorCode::Internal, "no upper spectral bound found");
    hi *= 2.0;
  }

  Vec out(k);
  for (int j = 1; j <= k; ++j) {
    double a0 = lo, b0 = hi;  // count(a0) < j <= count(b0)
    while (b0 - a0 > abs_tol + 1e-14 * std::max(std::abs(a0), std::abs(b0))) {
      double mid = 0.5 * (a0 + b0);
      if (count(mid) >= j)
        b0 = mid;
      else
        a0 = mid;
    }
    out(j - 1) = 0.5 * (a0 + b0);
  }
  return out;
}

CubicSpline::CubicSpline(const Vec& x, const Vec& y) : x_(x), y_(y) {
  const int n = static_cast<int>(x.size());
  require(n >= 1 && y.size() == n, ErrorCode::InvalidArgument, "spline: bad knot data");
  for (int i = 0; i + 1 < n; ++i)
    require(x(i + 1) > x(i), ErrorCode::InvalidArgument, "spline: knots must increase");
  m_ = Vec::Zero(n);
  if (n < 3) return;

  // tridiagonal system for interior second derivatives (natural ends)
  Vec diag(n - 2), rhs(n - 2), sub(n - 2);
  for (int i = 1; i <= n - 2; ++i) {
    double h0 = x(i) - x(i - 1), h1 = x(i + 1) - x(i);
    diag(i - 1) = 2.0 * (h0 + h1);
    sub(i - 1) = h0;
    rhs(i - 1) = 6.0 * ((y(i + 1) - y(i)) / h1 - (y(i) - y(i - 1)) / h0);
  }
  for (int i = 1; i < n - 2; ++i) {
    double h1 = x(i + 1) - x(i);  // coupling between unknown i and i+1
    double w = sub(i) / diag(i - 1);
    diag(i) -= w * h1;
    rhs(i) -= w * rhs(i - 1);
  }
  for (int i = n - 3; i >= 0; --i) {
    double upper = (x(i + 2) - x(i + 1)) * m_(i + 2);  // m_ ends at zero (natural)
    m_(i + 1) = (rhs(i) - upper) / diag(i);
  }
}

double CubicSpline::eval(double t) const {
  const int n = static_cast<int>(x_.size());
  if (n == 1) return y_(0);
  if (t <= x_(0)) return y_(0);
  if (t >= x_(n - 1)) return y_(n - 1);
  int i = static_cast<int>(std::upper_bound(x_.data(), x_.data() + n, t) - x_.data()) - 1;
  i = std::clamp(i, 0, n - 2);
  double h = x_(i + 1) - x_(i), u = x_(i + 1) - t, v = t - x_(i);
  return m_(i) * u * u * u / (6.0 * h) + m_(i + 1) * v * v * v / (6.0 * h) +
         (y_(i) / h - m_(i) * h / 6.0) * u + (y_(i + 1) / h - m_(i + 1) * h / 6.0) * v;
}

double CubicSpline::derivative(double t) const {
  const int n = static_cast<int>(x_.size());
  if (n == 1 || t <= x_(0) || t >= x_(n - 1)) return 0.0;
  int i = static_cast<int>(std::upper_bound(x_.data(), x_.data() + n, t) - x_.data()) - 1;
  i = std::clamp(i, 0, n - 2);
  double h = x_(i + 1) - x_(i), u = x_(i + 1) - t, v = t - x_(i);
  return -m_(i) * u * u / (2.0 * h) + m_(i + 1) * v * v / (2.0 * h) -
         (y_(i) / h - m_(i) * h / 6.0) + (y_(i + 1) / h - m_(i + 1) * h / 6.0);
}

double golden_min(const std::function<double(double)>& f, double a, double b, double width) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double bisect_sign_change(const std::function<double(double)>& f, double a, double b, double fa,
                          double fb, double width) {
  require(fa == 0.0 || fb == 0.0 || (fa < 0) != (fb < 0), ErrorCode::InvalidArgument,
          "bisection: no sign change on bracket");
  while (b - a > width) {
    double mid = 0.5 * (a + b);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> bracket_zeros(const std::function<double(double)>& stat,
                                  const std::function<double(double)>& sdet, double a, double b,
                                  double stat_threshold, double width, int fine_count) {
  const int nf = std::max(8, fine_count);
  std::vector<double> t(nf + 1), d(nf + 1), s(nf + 1);
  for (int i = 0; i <= nf; ++i) {
    t[i] = a + (b - a) * i / nf;
    d[i] = sdet(t[i]);
    s[i] = stat(t[i]);
  }
  const double h = (b - a) / nf;

  std::vector<double> zeros;
  for (int i = 0; i <= nf; ++i)
    if (d[i] == 0.0) zeros.push_back(t[i]);
  for (int i = 1; i <= nf; ++i) {
    if (d[i - 1] == 0.0 || d[i] == 0.0) continue;
    if (std::signbit(d[i - 1]) == std::signbit(d[i])) continue;
    zeros.push_back(bisect_sign_change(sdet, t[i - 1], t[i], d[i - 1], d[i], width));
  }

  for (int i = 1; i < nf; ++i) {
    if (s[i] > stat_threshold) continue;
    if (s[i] > s[i - 1] || s[i] >= s[i + 1]) continue;
    bool near = false;
    for (double z : zeros) near = near || (z >= t[i - 1] - h && z <= t[i + 1] + h);
    if (near) continue;
    zeros.push_back(golden_min(stat, t[i - 1], t[i + 1], width));
  }

  std::sort(zeros.begin(), zeros.end());
  std::vector<double> out;
  for (double z : zeros)
    if (out.empty() || z - out.back() > 4.0 * width) out.push_back(z);
  return out;
}

}  // namespace maslov
