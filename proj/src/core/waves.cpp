#include "core/waves.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "core/linalg.hpp"

namespace maslov {

namespace {

void check_system(const ReactionSystem& sys) {
  require(sys.n >= 1, ErrorCode::InvalidArgument, "reaction system needs n >= 1");
  require(static_cast<bool>(sys.grad) && static_cast<bool>(sys.hess), ErrorCode::InvalidArgument,
          "reaction system needs grad and hess evaluators");
}

Vec eval_grad(const ReactionSystem& sys, const Vec& u) {
  Vec g = sys.grad(u);
  require(g.size() == sys.n, ErrorCode::DimensionMismatch, "grad F evaluator returned a wrong size");
  return g;
}

Mat eval_hess(const ReactionSystem& sys, const Vec& u) {
  Mat h = sys.hess(u);
  require(h.rows() == sys.n && h.cols() == sys.n, ErrorCode::DimensionMismatch,
          "hess F evaluator returned a wrong size");
  require((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + h.cwiseAbs().maxCoeff()),
          ErrorCode::InvalidArgument, "hess F must be symmetric");
  return 0.5 * (h + h.transpose());
}

void check_profile(const ReactionSystem& sys, const WaveProfile& prof) {
  const int m = static_cast<int>(prof.grid.size());
  require(m >= 5, ErrorCode::InvalidArgument, "profile needs at least 5 grid points");
  require(prof.w.rows() == sys.n && prof.w_prime.rows() == sys.n && prof.w.cols() == m &&
              prof.w_prime.cols() == m,
          ErrorCode::DimensionMismatch, "profile sample arrays do not match the grid");
  require(prof.u_minus.size() == sys.n && prof.u_plus.size() == sys.n,
          ErrorCode::DimensionMismatch, "profile limits do not match the system dimension");
  for (int j = 1; j < m; ++j)
    require(prof.grid(j) > prof.grid(j - 1), ErrorCode::InvalidArgument,
            "profile grid must increase");
}

}  // namespace

ReactionSystem ReactionSystem::nagumo(double a) {
  ReactionSystem s;
  s.n = 1;
  s.name = "nagumo";
  s.grad = [a](const Vec& u) {
    Vec g(1);
    g(0) = u(0) * (1.0 - u(0)) * (u(0) - a);
    return g;
  };
  s.hess = [a](const Vec& u) {
    Mat h(1, 1);
    h(0, 0) = -3.0 * u(0) * u(0) + 2.0 * (1.0 + a) * u(0) - a;
    return h;
  };
  return s;
}

ReactionSystem ReactionSystem::kdv_pulse() {
  ReactionSystem s;
  s.n = 1;
  s.name = "kdv_pulse";
  s.grad = [](const Vec& u) {
    Vec g(1);
    g(0) = u(0) * u(0) - u(0);
    return g;
  };
  s.hess = [](const Vec& u) {
    Mat h(1, 1);
    h(0, 0) = 2.0 * u(0) - 1.0;
    return h;
  };
  return s;
}

ReactionSystem ReactionSystem::scalar_tabulated(const Vec& u_grid, const Vec& grad_values) {
  require(u_grid.size() >= 4 && u_grid.size() == grad_values.size(), ErrorCode::InvalidArgument,
          "tabulated nonlinearity needs at least 4 samples");
  CubicSpline spl(u_grid, grad_values);
  ReactionSystem s;
  s.n = 1;
  s.name = "tabulated";
  s.grad = [spl](const Vec& u) {
    Vec g(1);
    g(0) = spl.eval(u(0));
    return g;
  };
  s.hess = [spl](const Vec& u) {
    Mat h(1, 1);
    h(0, 0) = spl.derivative(u(0));
    return h;
  };
  return s;
}

bool check_H(const ReactionSystem& sys, const Vec& u_minus, const Vec& u_plus) {
  check_system(sys);
  require(u_minus.size() == sys.n && u_plus.size() == sys.n, ErrorCode::DimensionMismatch,
          "rest states must have the system dimension");
  bool ok = true;
  for (const Vec* u : {&u_minus, &u_plus}) {
    const double gn = eval_grad(sys, *u).norm();
    if (gn >= 1e-10) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "declared rest state is not an equilibrium (|grad F| = %.2e)",
                    gn);
      fail(ErrorCode::NotEquilibrium, buf);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(eval_hess(sys, *u));
    if (es.eigenvalues().maxCoeff() >= -1e-10) ok = false;
  }
  return ok;
}

namespace {

enum class PhaseKind { midpoint, derivative_at_zero, integral };

struct MeshSolve {
  Vec w;               // stacked interior values, node-major
  double speed = 0.0;  // converged speed-like border unknown
  double residual_sup = 0.0;
};

// One bordered Newton solve of the three-point scheme on a fixed mesh. The
// border column is the discrete translation direction; for a free wave speed
// it equals the speed derivative of the residual, for a held speed it deflates
// the near-singular translation mode and its converged value must vanish.
MeshSolve solve_mesh(const ReactionSystem& sys, const Vec& um, const Vec& up, double speed0,
                     PhaseKind phase, double phase_target, const Mat& ref, const Mat& ref_d,
                     double h, int m_total, Vec x0, int max_newton, double tol) {
  const int n = sys.n;
  const int ni = m_total - 2;
  const int nun = ni * n;
  const int mid = (m_total - 1) / 2 - 1;  // interior index of xi = 0

  Vec x = std::move(x0);
  double s = speed0;

  auto node_val = [&](int i) -> Vec {
    if (i < 0) return um;
    if (i >= ni) return up;
    return x.segment(i * n, n);
  };

  auto residual = [&](Vec& r) {
    for (int i = 0; i < ni; ++i) {
      const Vec wm = node_val(i - 1), wc = node_val(i), wp = node_val(i + 1);
      r.segment(i * n, n) =
          (wp - 2.0 * wc + wm) / (h * h) + s * (wp - wm) / (2.0 * h) + eval_grad(sys, wc);
    }
    switch (phase) {
      case PhaseKind::midpoint:
        r(nun) = x(mid * n) - phase_target;
        break;
      case PhaseKind::derivative_at_zero:
        r(nun) = (node_val(mid + 1)(0) - node_val(mid - 1)(0)) / (2.0 * h);
        break;
      case PhaseKind::integral: {
        double acc = 0.0;
        for (int i = 0; i < ni; ++i)
          acc += h * (x.segment(i * n, n) - ref.col(i)).dot(ref_d.col(i));
        r(nun) = acc;
        break;
      }
    }
  };

  Vec r(nun + 1);
  bool converged = false;
  for (int it = 0;; ++it) {
    residual(r);
    const double rsup = r.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(rsup) || rsup > 1e10)
      fail(ErrorCode::NewtonDivergence, "residual blew up during the profile solve");
    if (rsup < tol || converged) return {x, s, rsup};
    if (it == max_newton) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "no convergence after %d Newton steps (residual %.2e)",
                    max_newton, rsup);
      fail(ErrorCode::NewtonDivergence, buf);
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(nun) * (n + 3) + 4);
    const double subc = 1.0 / (h * h) - s / (2.0 * h);
    const double supc = 1.0 / (h * h) + s / (2.0 * h);
    for (int i = 0; i < ni; ++i) {
      const Mat hs = eval_hess(sys, node_val(i));
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const double v = hs(a, b) + (a == b ? -2.0 / (h * h) : 0.0);
          trips.emplace_back(i * n + a, i * n + b, v);
        }
        if (i > 0) trips.emplace_back(i * n + a, (i - 1) * n + a, subc);
        if (i < ni - 1) trips.emplace_back(i * n + a, (i + 1) * n + a, supc);
      }
      const Vec k = (node_val(i + 1) - node_val(i - 1)) / (2.0 * h);
      for (int a = 0; a < n; ++a) trips.emplace_back(i * n + a, nun, k(a));
    }
    switch (phase) {
      case PhaseKind::midpoint:
        trips.emplace_back(nun, mid * n, 1.0);
        break;
      case PhaseKind::derivative_at_zero:
        trips.emplace_back(nun, (mid + 1) * n, 1.0 / (2.0 * h));
        trips.emplace_back(nun, (mid - 1) * n, -1.0 / (2.0 * h));
        break;
      case PhaseKind::integral:
        for (int i = 0; i < ni; ++i)
          for (int a = 0; a < n; ++a) trips.emplace_back(nun, i * n + a, h * ref_d(a, i));
        break;
    }

    Eigen::SparseMatrix<double> jac(nun + 1, nun + 1);
    jac.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(jac);
    require(lu.info() == Eigen::Success, ErrorCode::PhaseConditionSingular,
            "bordered Newton matrix is singular; phase condition cannot pin the translation");
    const Vec d = lu.solve(-r);
    require(lu.info() == Eigen::Success, ErrorCode::PhaseConditionSingular,
            "bordered Newton solve failed");
    x += d.head(nun);
    s += d(nun);
    // rounding floors the residual near 1e-16/h^2, so a dead step also counts
    // as converged; the final residual is still reported honestly
    if (d.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>()))
      converged = true;
  }
}

// fourth-order first derivative on a uniform grid, one-sided at the ends
Mat derivative_samples(const Mat& w, double h) {
  const int n = static_cast<int>(w.rows());
  const int m = static_cast<int>(w.cols());
  Mat d(n, m);
  const double f = 1.0 / (12.0 * h);
  d.col(0) = f * (-25.0 * w.col(0) + 48.0 * w.col(1) - 36.0 * w.col(2) + 16.0 * w.col(3) -
                  3.0 * w.col(4));
  d.col(1) =
      f * (-3.0 * w.col(0) - 10.0 * w.col(1) + 18.0 * w.col(2) - 6.0 * w.col(3) + w.col(4));
  for (int k = 2; k < m - 2; ++k)
    d.col(k) = f * (w.col(k - 2) - 8.0 * w.col(k - 1) + 8.0 * w.col(k + 1) - w.col(k + 2));
  d.col(m - 2) = f * (3.0 * w.col(m - 1) + 10.0 * w.col(m - 2) - 18.0 * w.col(m - 3) +
                      6.0 * w.col(m - 4) - w.col(m - 5));
  d.col(m - 1) = f * (25.0 * w.col(m - 1) - 48.0 * w.col(m - 2) + 36.0 * w.col(m - 3) -
                      16.0 * w.col(m - 4) + 3.0 * w.col(m - 5));
  return d;
}

}  // namespace

WaveProfile solve_front(const ReactionSystem& sys, double c_guess, const Vec& u_minus,
                        const Vec& u_plus, const BvpConfig& cfg) {
  check_system(sys);
  require(cfg.half_width > 0 && cfg.h > 0 && cfg.h < cfg.half_width / 4.0,
          ErrorCode::InvalidArgument, "bad mesh parameters");
  require(cfg.max_newton >= 1 && cfg.newton_tol > 0, ErrorCode::InvalidArgument,
          "bad Newton parameters");
  require(check_H(sys, u_minus, u_plus), ErrorCode::HypothesisViolation,
          "rest-state Hessians must be negative definite");

  const int n = sys.n;
  const double L = cfg.half_width;
  const int M = std::max<int>(8, static_cast<int>(std::llround(L / cfg.h)));
  const double h = L / M;

  const bool front = (u_minus - u_plus).norm() > 1e-8;
  const PhaseKind phase = n == 1 ? (front ? PhaseKind::midpoint : PhaseKind::derivative_at_zero)
                                 : PhaseKind::integral;
  const double phase_target = (n == 1 && front) ? 0.5 * (u_minus(0) + u_plus(0)) : 0.0;

  std::function<Vec(double)> guess = cfg.guess;
  if (!guess) {
    const double width = cfg.template_width;
    const double amp = cfg.template_amp;
    const Vec um = u_minus, up = u_plus;
    if (front) {
      guess = [um, up, width](double xi) {
        return Vec(um + (up - um) * 0.5 * (1.0 + std::tanh(xi / (2.0 * width))));
      };
    } else {
      const int dim = n;
      guess = [um, amp, width, dim](double xi) {
        const double sech = 1.0 / std::cosh(xi / (2.0 * width));
        return Vec(um + amp * sech * sech * Vec::Ones(dim));
      };
    }
  }

  auto sample_guess = [&](double step, int interior, Mat& ref, Mat& ref_d, Vec& x0) {
    ref.resize(n, interior);
    ref_d.resize(n, interior);
    x0.resize(interior * n);
    for (int i = 0; i < interior; ++i) {
      const double xi = -L + (i + 1) * step;
      const Vec g = guess(xi);
      require(g.size() == n, ErrorCode::DimensionMismatch, "initial guess has a wrong size");
      ref.col(i) = g;
      ref_d.col(i) = (guess(xi + step) - guess(xi - step)) / (2.0 * step);
      x0.segment(i * n, n) = g;
    }
  };

  // coarse mesh
  const int mt_c = 2 * M + 1;
  Mat ref_c, refd_c;
  Vec x0_c;
  sample_guess(h, mt_c - 2, ref_c, refd_c, x0_c);
  const MeshSolve cs = solve_mesh(sys, u_minus, u_plus, c_guess, phase, phase_target, ref_c,
                                  refd_c, h, mt_c, std::move(x0_c), cfg.max_newton,
                                  cfg.newton_tol);

  // fine mesh, warm started by injection
  const int mt_f = 4 * M + 1;
  const int ni_f = mt_f - 2;
  Mat ref_f, refd_f;
  Vec x0_f;
  sample_guess(h / 2.0, ni_f, ref_f, refd_f, x0_f);
  auto coarse_val = [&](int node) -> Vec {
    if (node <= 0) return u_minus;
    if (node >= mt_c - 1) return u_plus;
    return cs.w.segment((node - 1) * n, n);
  };
  for (int j = 0; j < ni_f; ++j) {
    const int node = j + 1;  // fine node index, 0 at -L
    if (node % 2 == 0)
      x0_f.segment(j * n, n) = coarse_val(node / 2);
    else
      x0_f.segment(j * n, n) = 0.5 * (coarse_val((node - 1) / 2) + coarse_val((node + 1) / 2));
  }
  const MeshSolve fs = solve_mesh(sys, u_minus, u_plus, cs.speed, phase, phase_target, ref_f,
                                  refd_f, h / 2.0, mt_f, std::move(x0_f), cfg.max_newton,
                                  cfg.newton_tol);

  if (cfg.fix_c) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "no solution at the held speed; deflation parameter settled at %.2e",
                  fs.speed - c_guess);
    require(std::abs(fs.speed - c_guess) <= 1e-6, ErrorCode::NewtonDivergence, buf);
  }

  WaveProfile out;
  out.c = cfg.fix_c ? c_guess : (4.0 * fs.speed - cs.speed) / 3.0;
  out.grid = Vec::LinSpaced(mt_c, -L, L);
  out.w.resize(n, mt_c);
  out.w.col(0) = u_minus;
  out.w.col(mt_c - 1) = u_plus;
  for (int k = 1; k < mt_c - 1; ++k) {
    const Vec coarse = cs.w.segment((k - 1) * n, n);
    const Vec fine = fs.w.segment((2 * k - 1) * n, n);
    out.w.col(k) = (4.0 * fine - coarse) / 3.0;
  }
  out.w_prime = derivative_samples(out.w, h);
  out.u_minus = u_minus;
  out.u_plus = u_plus;
  out.kind = front ? "front" : "pulse";
  out.residual_sup = fs.residual_sup;
  require(out.residual_sup <= 1e-8, ErrorCode::NewtonDivergence,
          "solve converged but the discrete residual exceeds the profile contract");
  return out;
}

SturmLiouvilleProblem weighted_problem(const ReactionSystem& sys, const WaveProfile& prof) {
  check_system(sys);
  check_profile(sys, prof);
  const int n = sys.n;
  const int m = static_cast<int>(prof.grid.size());
  const double q = prof.c * prof.c / 4.0;
  const Mat shift = q * Mat::Identity(n, n);
  std::vector<double> grid(prof.grid.data(), prof.grid.data() + m);
  std::vector<Mat> vals;
  vals.reserve(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) vals.push_back(shift - eval_hess(sys, prof.w.col(j)));
  const Mat rm = shift - eval_hess(sys, prof.u_minus);
  const Mat rp = shift - eval_hess(sys, prof.u_plus);
  return SturmLiouvilleProblem(CoefficientPath::constant(Mat::Identity(n, n)),
                               CoefficientPath::constant(Mat::Zero(n, n)),
                               CoefficientPath::tabulated(grid, vals, rm, rp));
}

std::vector<double> critical_points(const WaveProfile& prof, double tol,
                                    std::vector<std::string>* warnings) {
  require(tol > 0 && tol < 1, ErrorCode::InvalidArgument, "tolerance must sit in (0, 1)");
  const int n = static_cast<int>(prof.w.rows());
  const int m = static_cast<int>(prof.grid.size());
  require(m >= 5 && prof.w_prime.rows() == n && prof.w_prime.cols() == m,
          ErrorCode::DimensionMismatch, "profile sample arrays do not match the grid");

  Vec s(m);
  for (int j = 0; j < m; ++j) s(j) = prof.w_prime.col(j).norm();
  const double smax = s.maxCoeff();
  const double wscale = prof.w.cwiseAbs().maxCoeff();
  if (smax <= 1e-12 * (1.0 + wscale))
    fail(ErrorCode::TangentialZero, "profile derivative vanishes identically; zeros are not isolated");
  const double span = prof.grid(m - 1) - prof.grid(0);

  std::vector<double> pts;
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  char buf[160];

  if (n == 1) {
    Vec dvals = prof.w_prime.row(0).transpose();
    CubicSpline dsp(prof.grid, dvals);
    auto dfun = [&](double t) { return dsp.eval(t); };
    const double ztol = 1e-9 * smax;
    int last_sign = 0, last_idx = -1;
    int run_start = -1;
    for (int k = 0; k < m; ++k) {
      const double v = dvals(k);
      const int sg = std::abs(v) <= ztol ? 0 : (v > 0.0 ? 1 : -1);
      if (sg == 0) {
        if (run_start < 0) run_start = k;
        continue;
      }
      if (run_start >= 0 && last_sign != 0 && sg == last_sign) {
        std::snprintf(buf, sizeof(buf),
                      "derivative touches zero near xi = %.6f without changing sign",
                      0.5 * (prof.grid(run_start) + prof.grid(k - 1)));
        fail(ErrorCode::TangentialZero, buf);
      }
      if (last_sign != 0 && sg != last_sign)
        pts.push_back(bisect_sign_change(dfun, prof.grid(last_idx), prof.grid(k),
                                         dvals(last_idx), v, 1e-12 * span));
      run_start = -1;
      last_sign = sg;
      last_idx = k;
    }
    // interior dips that never reach zero are reported, not counted
    const double gate = std::sqrt(tol) * smax;
    for (int k = 1; k + 1 < m; ++k) {
      if (s(k) > ztol && s(k) <= gate && s(k) < s(k - 1) && s(k) <= s(k + 1)) {
        bool near_pt = false;
        for (double p : pts) near_pt = near_pt || std::abs(p - prof.grid(k)) <= 5.0 * span / m;
        if (near_pt) continue;
        std::snprintf(buf, sizeof(buf),
                      "near-tangential dip of |w'| at xi = %.4f (%.1e of the max), not counted",
                      prof.grid(k), s(k) / smax);
        warn(buf);
      }
    }
  } else {
    std::vector<CubicSpline> dsp;
    dsp.reserve(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) dsp.emplace_back(prof.grid, Vec(prof.w_prime.row(c).transpose()));
    auto sq = [&](double t) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c) {
        const double d = dsp[static_cast<size_t>(c)].eval(t);
        acc += d * d;
      }
      return acc;
    };
    const double gate = std::sqrt(tol) * smax;
    for (int k = 1; k + 1 < m; ++k) {
      if (s(k) > gate || s(k) >= s(k - 1) || s(k) > s(k + 1)) continue;
      const double t0 = golden_min(sq, prof.grid(k - 1), prof.grid(k + 1), 1e-11 * span);
      const double v = std::sqrt(sq(t0));
      if (v <= tol * smax) {
        pts.push_back(t0);
      } else {
        std::snprintf(buf, sizeof(buf),
                      "near-tangential dip of |w'| at xi = %.4f (%.1e of the max), not counted",
                      t0, v / smax);
        warn(buf);
      }
    }
  }

  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double a, double b) { return std::abs(a - b) <= 1e-8 * span; }),
            pts.end());
  return pts;
}

WaveAnalysis instability_verdict(const ReactionSystem& sys, const WaveProfile& prof,
                                 const AnalysisConfig& cfg) {
  check_system(sys);
  check_profile(sys, prof);
  WaveAnalysis out;
  out.h_check = check_H(sys, prof.u_minus, prof.u_plus);
  require(out.h_check, ErrorCode::HypothesisViolation,
          "rest-state Hessians are not negative definite; the weighted operator has no "
          "positive limits");

  out.critical_points = critical_points(prof, cfg.crit_tol, &out.warnings);
  out.morse_lower_bound = static_cast<int>(out.critical_points.size());
  out.verdict = out.critical_points.empty() ? "stable-candidate" : "spectrally-unstable";

  if (cfg.compute_morse) {
    const SturmLiouvilleProblem p = weighted_problem(sys, prof);
    out.morse = morse_index(p, cfg.prop, cfg.morse_opts);
    if (out.morse_lower_bound > out.morse->index) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "%d critical points exceed the weighted operator index %d",
                    out.morse_lower_bound, out.morse->index);
      fail(ErrorCode::InconsistentIndex, buf);
    }
  }
  return out;
}

std::vector<Vec> translation_mode_trajectory(const ReactionSystem& sys, const WaveProfile& prof,
                                             const std::vector<double>& taus) {
  check_system(sys);
  check_profile(sys, prof);
  const int n = sys.n;
  const double c = prof.c;
  std::vector<CubicSpline> wsp, dsp;
  wsp.reserve(static_cast<size_t>(n));
  dsp.reserve(static_cast<size_t>(n));
  for (int comp = 0; comp < n; ++comp) {
    wsp.emplace_back(prof.grid, Vec(prof.w.row(comp).transpose()));
    dsp.emplace_back(prof.grid, Vec(prof.w_prime.row(comp).transpose()));
  }
  std::vector<Vec> out;
  out.reserve(taus.size());
  const int m = static_cast<int>(prof.grid.size());
  for (double tau : taus) {
    require(tau >= prof.grid(0) && tau <= prof.grid(m - 1), ErrorCode::InvalidArgument,
            "sample time outside the profile grid");
    Vec w(n), wp(n);
    for (int comp = 0; comp < n; ++comp) {
      w(comp) = wsp[static_cast<size_t>(comp)].eval(tau);
      wp(comp) = dsp[static_cast<size_t>(comp)].eval(tau);
    }
    const Vec wpp = -c * wp - eval_grad(sys, w);
    const double g = std::exp(0.5 * c * tau);
    Vec z(2 * n);
    z.head(n) = g * (wpp + 0.5 * c * wp);
    z.tail(n) = g * wp;
    out.push_back(std::move(z));
  }
  return out;
}

double weighted_identity_residual(const ReactionSystem& sys, const WaveProfile& prof, double t_o,
                                  int n_interior) {
  check_system(sys);
  check_profile(sys, prof);
  require(t_o > 0 && n_interior >= 3, ErrorCode::InvalidArgument, "bad window parameters");
  const int m = static_cast<int>(prof.grid.size());
  require(t_o <= -prof.grid(0) + 1e-12 && t_o <= prof.grid(m - 1) + 1e-12,
          ErrorCode::InvalidArgument, "window exceeds the profile grid");

  const int n = sys.n;
  const double c = prof.c;
  const double h = 2.0 * t_o / (n_interior + 1);
  std::vector<CubicSpline> wsp;
  wsp.reserve(static_cast<size_t>(n));
  for (int comp = 0; comp < n; ++comp)
    wsp.emplace_back(prof.grid, Vec(prof.w.row(comp).transpose()));

  const Mat id = Mat::Identity(n, n);
  const double co = std::cosh(0.5 * c * h);
  const double ep = std::exp(0.5 * c * h);
  const double em = std::exp(-0.5 * c * h);
  double worst = 0.0;
  for (int i = 2; i < n_interior; ++i) {  // rows whose neighbors are both interior
    const double xi = -t_o + i * h;
    Vec wv(n);
    for (int comp = 0; comp < n; ++comp) wv(comp) = wsp[static_cast<size_t>(comp)].eval(xi);
    const Mat hs = eval_hess(sys, wv);

    const Mat wl = -(1.0 / (h * h)) * id;
    const Mat wc = (2.0 / (h * h) + c * c / 4.0) * id - hs;
    const Mat wr = wl;

    const double di = std::exp(0.5 * c * xi);
    const double dm_inv = std::exp(-0.5 * c * (xi - h));
    const double dp_inv = std::exp(-0.5 * c * (xi + h));
    const Mat fl = -(em / (h * h)) * di * dm_inv * id;
    const Mat fc = (2.0 * co / (h * h)) * id - hs;
    const Mat fr = -(ep / (h * h)) * di * dp_inv * id;

    const double scale = std::max({wl.cwiseAbs().maxCoeff(), wc.cwiseAbs().maxCoeff(),
                                   wr.cwiseAbs().maxCoeff()});
    const double dev = std::max({(fl - wl).cwiseAbs().maxCoeff(), (fc - wc).cwiseAbs().maxCoeff(),
                                 (fr - wr).cwiseAbs().maxCoeff()});
    worst = std::max(worst, dev / scale);
  }
  return worst;
}

}  // namespace maslov
