#include "core/sturm.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace maslov {

namespace {

std::string format_params(const std::vector<double>& params) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < params.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", params[i]);
    out << (i ? "," : "") << buf;
  }
  out << "]";
  return out.str();
}

double sech2(double x) {
  double c = std::cosh(std::min(std::abs(x), 350.0));
  return 1.0 / (c * c);
}

}  // namespace

CoefficientPath CoefficientPath::constant(const Mat& value) {
  require(value.rows() == value.cols() && value.rows() > 0, ErrorCode::DimensionMismatch,
          "constant coefficient must be square");
  CoefficientPath path;
  path.dim_ = static_cast<int>(value.rows());
  Mat v = value;
  path.eval_ = [v](double) { return v; };
  path.limit_minus_ = v;
  path.limit_plus_ = v;
  path.label_ = "constant(" + std::to_string(path.dim_) + "x" + std::to_string(path.dim_) + ")";
  return path;
}

CoefficientPath CoefficientPath::scalar_preset(const std::string& name,
                                               const std::vector<double>& params) {
  auto expect = [&](size_t k) {
    require(params.size() == k, ErrorCode::InvalidArgument,
            "preset '" + name + "' expects " + std::to_string(k) + " parameters");
  };
  CoefficientPath path;
  path.dim_ = 1;
  path.label_ = name + format_params(params);
  auto scalar = [](double v) { return Mat::Constant(1, 1, v); };
  if (name == "constant") {
    expect(1);
    double v = params[0];
    path.eval_ = [v, scalar](double) { return scalar(v); };
    path.limit_minus_ = scalar(v);
    path.limit_plus_ = scalar(v);
  } else if (name == "sech2_well") {
    expect(3);
    double kappa = params[0], a = params[1], b = params[2];
    path.eval_ = [kappa, a, b, scalar](double t) { return scalar(kappa - a * sech2(b * t)); };
    path.limit_minus_ = scalar(kappa);
    path.limit_plus_ = scalar(kappa);
  } else if (name == "tanh_step") {
    expect(3);
    double l = params[0], r = params[1], s = params[2];
    path.eval_ = [l, r, s, scalar](double t) {
      return scalar(l + (r - l) * 0.5 * (1.0 + std::tanh(s * t)));
    };
    path.limit_minus_ = scalar(l);
    path.limit_plus_ = scalar(r);
  } else if (name == "gauss_bump") {
    expect(3);
    double base = params[0], amp = params[1], width = params[2];
    require(width != 0.0, ErrorCode::InvalidArgument, "gauss_bump width must be nonzero");
    path.eval_ = [base, amp, width, scalar](double t) {
      double u = t / width;
      return scalar(base + amp * std::exp(-u * u));
    };
    path.limit_minus_ = scalar(base);
    path.limit_plus_ = scalar(base);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown scalar preset '" + name + "'");
  }
  return path;
}

CoefficientPath CoefficientPath::tabulated(const std::vector<double>& grid,
                                           const std::vector<Mat>& values,
                                           const Mat& limit_minus, const Mat& limit_plus) {
  require(grid.size() >= 2, ErrorCode::InvalidArgument, "tabulated path needs at least 2 samples");
  require(grid.size() == values.size(), ErrorCode::DimensionMismatch,
          "tabulated grid and value counts differ");
  for (size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], ErrorCode::InvalidArgument,
            "tabulated grid must be strictly increasing");
  const int d = static_cast<int>(values.front().rows());
  require(values.front().cols() == d, ErrorCode::DimensionMismatch,
          "tabulated values must be square");
  for (const Mat& v : values)
    require(v.rows() == d && v.cols() == d, ErrorCode::DimensionMismatch,
            "tabulated values have mixed dimensions");
  require(limit_minus.rows() == d && limit_minus.cols() == d && limit_plus.rows() == d &&
              limit_plus.cols() == d,
          ErrorCode::DimensionMismatch, "tabulated limits have wrong dimension");

  const int m = static_cast<int>(grid.size());
  Vec x = Eigen::Map<const Vec>(grid.data(), m);
  auto splines = std::make_shared<std::vector<CubicSpline>>();
  splines->reserve(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec y(m);
      for (int k = 0; k < m; ++k) y(k) = values[static_cast<size_t>(k)](i, j);
      splines->emplace_back(x, y);
    }

  CoefficientPath path;
  path.dim_ = d;
  path.limit_minus_ = limit_minus;
  path.limit_plus_ = limit_plus;
  double lo = grid.front(), hi = grid.back();
  Mat lm = limit_minus, lp = limit_plus;
  path.eval_ = [splines, d, lo, hi, lm, lp](double t) {
    if (t < lo) return lm;
    if (t > hi) return lp;
    Mat out(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out(i, j) = (*splines)[static_cast<size_t>(i) * d + j].eval(t);
    return out;
  };
  path.label_ = "tabulated(" + std::to_string(m) + " pts)";
  path.edge_minus_ = lo;
  path.edge_plus_ = hi;

  double mis_minus = (values.front() - limit_minus).cwiseAbs().maxCoeff();
  double mis_plus = (values.back() - limit_plus).cwiseAbs().maxCoeff();
  char buf[160];
  if (mis_minus > 1e-6) {
    std::snprintf(buf, sizeof(buf), "table edge at t=%g differs from the declared limit by %.3g",
                  lo, mis_minus);
    path.warnings_.push_back(buf);
  }
  if (mis_plus > 1e-6) {
    std::snprintf(buf, sizeof(buf), "table edge at t=%g differs from the declared limit by %.3g",
                  hi, mis_plus);
    path.warnings_.push_back(buf);
  }
  return path;
}

CoefficientPath CoefficientPath::from_function(int dim, std::function<Mat(double)> fn,
                                               const Mat& limit_minus, const Mat& limit_plus,
                                               std::string label) {
  require(dim > 0, ErrorCode::InvalidArgument, "dimension must be positive");
  require(limit_minus.rows() == dim && limit_minus.cols() == dim && limit_plus.rows() == dim &&
              limit_plus.cols() == dim,
          ErrorCode::DimensionMismatch, "limits have wrong dimension");
  Mat probe = fn(0.0);
  require(probe.rows() == dim && probe.cols() == dim, ErrorCode::DimensionMismatch,
          "function value has wrong dimension");
  CoefficientPath path;
  path.dim_ = dim;
  path.eval_ = std::move(fn);
  path.limit_minus_ = limit_minus;
  path.limit_plus_ = limit_plus;
  path.label_ = "fn:" + label;
  return path;
}

CoefficientPath CoefficientPath::direct_sum(const std::vector<CoefficientPath>& parts) {
  require(!parts.empty(), ErrorCode::InvalidArgument, "direct sum of zero paths");
  int total = 0;
  for (const auto& p : parts) total += p.dim();
  CoefficientPath path;
  path.dim_ = total;
  path.limit_minus_ = Mat::Zero(total, total);
  path.limit_plus_ = Mat::Zero(total, total);
  std::ostringstream label;
  label << "dsum(";
  int off = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    int d = parts[i].dim();
    path.limit_minus_.block(off, off, d, d) = parts[i].limit_minus();
    path.limit_plus_.block(off, off, d, d) = parts[i].limit_plus();
    for (const auto& w : parts[i].warnings_) path.warnings_.push_back(w);
    if (parts[i].edge_minus_)
      path.edge_minus_ = path.edge_minus_ ? std::min(*path.edge_minus_, *parts[i].edge_minus_)
                                          : *parts[i].edge_minus_;
    if (parts[i].edge_plus_)
      path.edge_plus_ = path.edge_plus_ ? std::max(*path.edge_plus_, *parts[i].edge_plus_)
                                        : *parts[i].edge_plus_;
    label << (i ? "|" : "") << parts[i].label_;
    off += d;
  }
  label << ")";
  path.label_ = label.str();
  auto copies = std::make_shared<std::vector<CoefficientPath>>(parts);
  path.eval_ = [copies, total](double t) {
    Mat out = Mat::Zero(total, total);
    int pos = 0;
    for (const auto& p : *copies) {
      out.block(pos, pos, p.dim(), p.dim()) = p(t);
      pos += p.dim();
    }
    return out;
  };
  return path;
}

Mat CoefficientPath::operator()(double t) const {
  Mat v = eval_(t);
  require(v.rows() == dim_ && v.cols() == dim_, ErrorCode::DimensionMismatch,
          "coefficient evaluation changed dimension");
  return v;
}

HyperbolicSplit hyperbolic_lagrangian_split(const Mat& b_sym) {
  const int two_n = static_cast<int>(b_sym.rows());
  require(two_n % 2 == 0 && b_sym.cols() == two_n, ErrorCode::DimensionMismatch,
          "Hamiltonian coefficient must be 2n x 2n");
  const int n = two_n / 2;
  SchurSplit split = hyperbolic_invariant_split(apply_J(b_sym));
  if (split.positive.cols() != n || split.negative.cols() != n)
    fail(ErrorCode::NotHyperbolic, "stable/unstable splitting is not n/n");
  HyperbolicSplit out{LagrangianFrame::from_columns(split.positive),
                      LagrangianFrame::from_columns(split.negative), split.gap};
  return out;
}

SturmLiouvilleProblem::SturmLiouvilleProblem(CoefficientPath p, CoefficientPath q,
                                             CoefficientPath r)
    : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)) {
  n_ = p_.dim();
  require(q_.dim() == n_ && r_.dim() == n_, ErrorCode::DimensionMismatch,
          "coefficient paths have mixed dimensions");
}

Mat SturmLiouvilleProblem::assemble_b(const Mat& pm, const Mat& qm, const Mat& rm) const {
  Eigen::JacobiSVD<Mat> svd(pm);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n_ - 1);
  if (smax <= 0.0 || smin < 1e-12 * smax)
    fail(ErrorCode::SingularP, "leading coefficient numerically singular");

  Eigen::PartialPivLU<Mat> lu(pm);
  Mat pinv = lu.solve(Mat::Identity(n_, n_));
  Mat pinv_q = lu.solve(qm);

  Mat b(2 * n_, 2 * n_);
  b.topLeftCorner(n_, n_) = pinv;
  b.topRightCorner(n_, n_) = -pinv_q;
  b.bottomLeftCorner(n_, n_) = -(qm.transpose() * pinv);
  b.bottomRightCorner(n_, n_) = qm.transpose() * pinv_q - rm;

  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  double residual = (b - b.transpose()).cwiseAbs().maxCoeff() / scale;
  require(residual < 1e-12, ErrorCode::InvalidArgument,
          "Hamiltonian coefficient not symmetric; P and R must be symmetric");
  return 0.5 * (b + b.transpose());
}

Mat SturmLiouvilleProblem::hamiltonian_at(double t) const {
  return assemble_b(p_(t), q_(t), r_(t));
}

Mat SturmLiouvilleProblem::hamiltonian_limit(int sign) const {
  require(sign == -1 || sign == 1, ErrorCode::InvalidArgument, "limit sign must be -1 or +1");
  if (sign < 0) return assemble_b(p_.limit_minus(), q_.limit_minus(), r_.limit_minus());
  return assemble_b(p_.limit_plus(), q_.limit_plus(), r_.limit_plus());
}

const AsymptoticData& SturmLiouvilleProblem::asymptotics() const {
  if (!asym_) {
    Mat b_minus = hamiltonian_limit(-1);
    Mat b_plus = hamiltonian_limit(+1);
    HyperbolicSplit minus = hyperbolic_lagrangian_split(b_minus);
    HyperbolicSplit plus = hyperbolic_lagrangian_split(b_plus);
    asym_ = std::make_shared<const AsymptoticData>(
        AsymptoticData{b_minus, b_plus, minus.unstable, minus.stable, plus.unstable, plus.stable,
                       minus.gap, plus.gap, std::min(minus.gap, plus.gap)});
  }
  return *asym_;
}

std::vector<std::string> SturmLiouvilleProblem::warnings() const {
  std::vector<std::string> out;
  for (const auto& w : p_.warnings()) out.push_back("P: " + w);
  for (const auto& w : q_.warnings()) out.push_back("Q: " + w);
  for (const auto& w : r_.warnings()) out.push_back("R: " + w);
  return out;
}

SturmLiouvilleProblem problem_direct_sum(const SturmLiouvilleProblem& a,
                                         const SturmLiouvilleProblem& b) {
  return SturmLiouvilleProblem(CoefficientPath::direct_sum({a.p_path(), b.p_path()}),
                               CoefficientPath::direct_sum({a.q_path(), b.q_path()}),
                               CoefficientPath::direct_sum({a.r_path(), b.r_path()}));
}

Mat direct_sum_embedding(int na, int nb) {
  require(na > 0 && nb > 0, ErrorCode::InvalidArgument, "block dimensions must be positive");
  const int n = na + nb;
  Mat e = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < na; ++i) {
    e(i, i) = 1.0;           // y_a
    e(n + i, na + i) = 1.0;  // w_a
  }
  for (int i = 0; i < nb; ++i) {
    e(na + i, 2 * na + i) = 1.0;           // y_b
    e(n + na + i, 2 * na + nb + i) = 1.0;  // w_b
  }
  return e;
}

namespace {

bool positive_definite(const Mat& sym) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.transpose()));
  double top = es.eigenvalues().cwiseAbs().maxCoeff();
  return es.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, top);
}

GraphDiagnostic graph_diagnostic(const LagrangianFrame& frame) {
  GraphDiagnostic diag;
  Mat bottom = frame.bottom();
  Eigen::JacobiSVD<Mat> svd(bottom);
  if (svd.singularValues().minCoeff() <= 1e-8) return diag;
  diag.has_graph_form = true;
  Mat s = frame.top() * bottom.inverse();
  double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  diag.symmetry_residual = (s - s.transpose()).cwiseAbs().maxCoeff() / scale;
  diag.inertia = eig_inertia(0.5 * (s + s.transpose()));
  return diag;
}

}  // namespace

ValidationReport validate(const SturmLiouvilleProblem& problem, int probe_points,
                          double probe_radius) {
  ValidationReport report;
  report.warnings = problem.warnings();
  const int n = problem.n();

  require(probe_points >= 2, ErrorCode::InvalidArgument, "need at least two probe points");
  double c1 = std::numeric_limits<double>::infinity();
  double c2 = 0.0, c3 = 0.0;
  auto absorb = [&](const Mat& pm, const Mat& qm, const Mat& rm) {
    Eigen::JacobiSVD<Mat> svd(pm);
    c1 = std::min(c1, svd.singularValues().minCoeff());
    c2 = std::max(c2, spectral_norm(qm));
    c3 = std::max(c3, spectral_norm(rm));
  };
  for (int i = 0; i < probe_points; ++i) {
    double t = -probe_radius + 2.0 * probe_radius * i / (probe_points - 1);
    absorb(problem.p(t), problem.q(t), problem.r(t));
  }
  absorb(problem.p_path().limit_minus(), problem.q_path().limit_minus(),
         problem.r_path().limit_minus());
  absorb(problem.p_path().limit_plus(), problem.q_path().limit_plus(),
         problem.r_path().limit_plus());
  report.c1 = c1;
  report.c2 = c2;
  report.c3 = c3;

  auto l2_block = [n](const Mat& pm, const Mat& qm, const Mat& rm) {
    Mat m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = pm;
    m.topRightCorner(n, n) = qm;
    m.bottomLeftCorner(n, n) = qm.transpose();
    m.bottomRightCorner(n, n) = rm;
    return m;
  };
  report.l2_minus_ok = positive_definite(l2_block(
      problem.p_path().limit_minus(), problem.q_path().limit_minus(),
      problem.r_path().limit_minus()));
  report.l2_plus_ok = positive_definite(l2_block(
      problem.p_path().limit_plus(), problem.q_path().limit_plus(),
      problem.r_path().limit_plus()));

  const LagrangianFrame dirichlet = dirichlet_plane(n);
  try {
    Mat b_minus = problem.hamiltonian_limit(-1);
    HyperbolicSplit split = hyperbolic_lagrangian_split(b_minus);
    report.hyperbolic_minus = true;
    report.spectral_gap = split.gap;
    report.transversal_dirichlet_minus = intersection_dim(split.unstable, dirichlet) == 0 &&
                                         intersection_dim(split.stable, dirichlet) == 0;
    report.graph_unstable_minus = graph_diagnostic(split.unstable);
    report.graph_stable_minus = graph_diagnostic(split.stable);
  } catch (const Error& err) {
    report.warnings.push_back(std::string("limit at -inf: ") + err.what());
  }
  try {
    Mat b_plus = problem.hamiltonian_limit(+1);
    HyperbolicSplit split = hyperbolic_lagrangian_split(b_plus);
    report.hyperbolic_plus = true;
    report.spectral_gap =
        report.hyperbolic_minus ? std::min(report.spectral_gap, split.gap) : split.gap;
    report.transversal_dirichlet_plus = intersection_dim(split.unstable, dirichlet) == 0 &&
                                        intersection_dim(split.stable, dirichlet) == 0;
    report.graph_unstable_plus = graph_diagnostic(split.unstable);
    report.graph_stable_plus = graph_diagnostic(split.stable);
  } catch (const Error& err) {
    report.warnings.push_back(std::string("limit at +inf: ") + err.what());
  }
  if (!report.hyperbolic_minus && !report.hyperbolic_plus) report.spectral_gap = 0.0;
  return report;
}

}  // namespace maslov
