#include "core/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace maslov {

namespace {

void check_config(const PropagationConfig& cfg) {
  require(cfg.rel_tol > 0 && cfg.abs_tol > 0 && cfg.trunc_eps > 0 && cfg.sample_dt > 0,
          ErrorCode::InvalidArgument, "tolerances must be positive");
  require(cfg.reortho_every >= 1, ErrorCode::InvalidArgument, "reortho_every must be >= 1");
  require(cfg.t_min > 0 && cfg.t_min < cfg.t_max, ErrorCode::InvalidArgument,
          "need 0 < T_min < T_max");
}

// one-sided settle scan; sign = +1 probes [0, t_max], sign = -1 probes [-t_max, 0]
double settle_point(const SturmLiouvilleProblem& p, const PropagationConfig& cfg, int sign,
                    double dt_probe) {
  const Mat b_limit = p.hamiltonian_limit(sign);
  auto deviation = [&](double t) { return spectral_norm(p.hamiltonian_at(t) - b_limit); };

  const int k_max = static_cast<int>(std::ceil(cfg.t_max / dt_probe));
  int last_violation = -1;
  for (int k = k_max; k >= 0; --k) {
    if (deviation(sign * k * dt_probe) > cfg.trunc_eps) {
      last_violation = k;
      break;
    }
  }
  if (last_violation >= k_max - 1)
    fail(ErrorCode::NoDecay, "coefficients have not settled by T_max");

  // a tabulated path snaps to its limits beyond the table, which would mask a
  // non-settled coefficient; check the table edge itself
  auto edge_of = [&](const CoefficientPath& path) {
    return sign > 0 ? path.table_edge_plus() : path.table_edge_minus();
  };
  for (const CoefficientPath* path : {&p.p_path(), &p.q_path(), &p.r_path()}) {
    auto edge = edge_of(*path);
    if (edge && sign * *edge > 0 && sign * *edge <= cfg.t_max && deviation(*edge) > cfg.trunc_eps)
      fail(ErrorCode::NoDecay, "tabulated coefficients still varying at the table edge");
  }
  return last_violation < 0 ? 0.0 : (last_violation + 1) * dt_probe;
}

}  // namespace

Truncation select_truncation(const SturmLiouvilleProblem& p, const PropagationConfig& cfg) {
  check_config(cfg);
  const double dt_probe = 0.05;
  Truncation out;
  out.settle_pos = settle_point(p, cfg, +1, dt_probe);
  out.settle_neg = -settle_point(p, cfg, -1, dt_probe);
  out.t_pos = std::max(out.settle_pos, cfg.t_min);
  out.t_neg = std::min(out.settle_neg, -cfg.t_min);
  out.clamped_pos = out.t_pos != out.settle_pos;
  out.clamped_neg = out.t_neg != out.settle_neg;
  char buf[128];
  if (out.clamped_pos) {
    std::snprintf(buf, sizeof(buf), "settle point %.2f clamped to T_min %.2f", out.settle_pos,
                  cfg.t_min);
    out.warnings.push_back(buf);
  }
  if (out.clamped_neg) {
    std::snprintf(buf, sizeof(buf), "settle point %.2f clamped to -T_min %.2f", out.settle_neg,
                  -cfg.t_min);
    out.warnings.push_back(buf);
  }
  return out;
}

namespace {

// Dormand-Prince 5(4) on the frame matrix Z' = J B(t) Z. Integrates from t0
// to t1 (signed step), capturing a re-orthonormalized frame at every sample.
class FrameIntegrator {
 public:
  FrameIntegrator(const SturmLiouvilleProblem& p, const PropagationConfig& cfg)
      : p_(p), cfg_(cfg) {}

  Mat rhs(double t, const Mat& z) const { return apply_J(p_.hamiltonian_at(t) * z); }

  // advance z from t to t_target (either direction), adapting the step
  void advance(Mat& z, double t, double t_target) {
    const double span = t_target - t;
    if (span == 0.0) return;
    const double dir = span > 0 ? 1.0 : -1.0;
    double h = dir * std::min(std::abs(span), last_h_);
    double cur = t;
    int accepted_since_reortho = 0;
    while (dir * (t_target - cur) > 1e-14 * std::max(1.0, std::abs(t_target))) {
      if (dir * (cur + h) > dir * t_target) h = t_target - cur;
      if (++stage_evals_ > kMaxSteps)
        fail(ErrorCode::IntegratorFailure, "step budget exhausted");

      Mat k1 = rhs(cur, z);
      Mat k2 = rhs(cur + h / 5, z + h * (k1 / 5));
      Mat k3 = rhs(cur + 3 * h / 10, z + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
      Mat k4 = rhs(cur + 4 * h / 5, z + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
      Mat k5 = rhs(cur + 8 * h / 9,
                   z + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 + 64448.0 / 6561 * k3 -
                            212.0 / 729 * k4));
      Mat k6 = rhs(cur + h, z + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                                     49.0 / 176 * k4 - 5103.0 / 18656 * k5));
      Mat z5 = z + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                        2187.0 / 6784 * k5 + 11.0 / 84 * k6);
      Mat k7 = rhs(cur + h, z5);
      Mat err_mat = h * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 -
                         17253.0 / 339200 * k5 + 22.0 / 525 * k6 - 1.0 / 40 * k7);

      double err = 0.0;
      for (int i = 0; i < z.rows(); ++i)
        for (int j = 0; j < z.cols(); ++j) {
          double scale =
              cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(z(i, j)), std::abs(z5(i, j)));
          double e = err_mat(i, j) / scale;
          err += e * e;
        }
      err = std::sqrt(err / (z.rows() * z.cols()));

      double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      factor = std::clamp(factor, 0.2, 5.0);
      if (err <= 1.0) {
        cur += h;
        z = std::move(z5);
        if (++accepted_since_reortho >= cfg_.reortho_every) {
          z = thin_qr(z);
          accepted_since_reortho = 0;
        }
        last_h_ = std::abs(h) * factor;
        h = dir * last_h_;
      } else {
        h *= factor;
        // a step clamped to the remaining span may be tiny and is fine; only
        // a step beaten down by the error control signals a genuine stall
        if (std::abs(h) < 1e-13 * std::max(1.0, std::abs(cur)))
          fail(ErrorCode::IntegratorFailure, "step size underflow");
      }
    }
  }

 private:
  static constexpr long kMaxSteps = 20'000'000;
  const SturmLiouvilleProblem& p_;
  const PropagationConfig& cfg_;
  double last_h_ = 1e-3;
  long stage_evals_ = 0;
};

Mat capture_frame(const Mat& z, double tau) {
  Mat q = thin_qr(z);
  double res = isotropy_residual(q);
  if (res > 1e-6) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "isotropy residual %.3g at tau=%.6f", res, tau);
    fail(ErrorCode::IsotropyLoss, buf);
  }
  return q;
}

}  // namespace

FramePath propagate_frame(const SturmLiouvilleProblem& p, const LagrangianFrame& f0, double t0,
                          double t1, const PropagationConfig& cfg) {
  check_config(cfg);
  require(t0 != t1, ErrorCode::InvalidArgument, "empty propagation interval");
  require(f0.ambient() == 2 * p.n(), ErrorCode::DimensionMismatch,
          "frame dimension does not match the problem");

  const int samples = std::max(1, static_cast<int>(std::ceil(std::abs(t1 - t0) / cfg.sample_dt)));
  FramePath path;
  path.n = p.n();
  path.grid.reserve(samples + 1);
  path.frames.reserve(samples + 1);

  FrameIntegrator integ(p, cfg);
  Mat z = f0.columns();
  path.grid.push_back(t0);
  path.frames.push_back(capture_frame(z, t0));
  for (int k = 1; k <= samples; ++k) {
    double target = t0 + (t1 - t0) * (static_cast<double>(k) / samples);
    integ.advance(z, path.grid.back(), target);
    z = capture_frame(z, target);
    path.grid.push_back(target);
    path.frames.push_back(z);
  }

  if (t1 < t0) {
    std::reverse(path.grid.begin(), path.grid.end());
    std::reverse(path.frames.begin(), path.frames.end());
  }
  std::ostringstream prov;
  prov << "propagated frame, t0=" << t0 << ", t1=" << t1;
  path.provenance = prov.str();
  return path;
}

LagrangianFrame propagate_to(const SturmLiouvilleProblem& p, const LagrangianFrame& f0, double t0,
                             double t1, const PropagationConfig& cfg) {
  check_config(cfg);
  require(f0.ambient() == 2 * p.n(), ErrorCode::DimensionMismatch,
          "frame dimension does not match the problem");
  if (t0 == t1) return LagrangianFrame::from_orthonormal(thin_qr(f0.columns()));
  FrameIntegrator integ(p, cfg);
  Mat z = f0.columns();
  integ.advance(z, t0, t1);
  return LagrangianFrame::from_orthonormal(capture_frame(z, t1));
}

namespace {

LagrangianFrame apply_gauge(const LagrangianFrame& f, std::optional<uint64_t> seed) {
  if (!seed) return f;
  std::mt19937_64 rng(*seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = f.n();
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  return LagrangianFrame::from_columns(f.columns() * thin_qr(g));
}

std::pair<Truncation, std::string> resolve_window(const SturmLiouvilleProblem& p,
                                                  const PropagationConfig& cfg,
                                                  std::optional<std::pair<double, double>> window) {
  if (window) {
    require(window->first < window->second, ErrorCode::InvalidArgument,
            "window must satisfy T_neg < T_pos");
    Truncation t;
    t.t_neg = window->first;
    t.t_pos = window->second;
    t.settle_neg = window->first;
    t.settle_pos = window->second;
    return {t, "forced window"};
  }
  return {select_truncation(p, cfg), "auto truncation"};
}

}  // namespace

FramePath unstable_path(const SturmLiouvilleProblem& p, const PropagationConfig& cfg,
                        std::optional<uint64_t> gauge_seed,
                        std::optional<std::pair<double, double>> window) {
  auto [trunc, how] = resolve_window(p, cfg, window);
  const AsymptoticData& asym = p.asymptotics();
  LagrangianFrame f0 = apply_gauge(asym.unstable_minus, gauge_seed);
  FramePath path = propagate_frame(p, f0, trunc.t_neg, trunc.t_pos, cfg);
  path.init_error = cfg.trunc_eps / std::max(asym.gap_minus, 1e-300);
  std::ostringstream prov;
  prov << "unstable bundle on [" << trunc.t_neg << ", " << trunc.t_pos << "] (" << how
       << "), init V+(JB(-inf))";
  if (gauge_seed) prov << ", gauge seed " << *gauge_seed;
  path.provenance = prov.str();
  return path;
}

FramePath stable_path(const SturmLiouvilleProblem& p, const PropagationConfig& cfg,
                      std::optional<uint64_t> gauge_seed,
                      std::optional<std::pair<double, double>> window) {
  auto [trunc, how] = resolve_window(p, cfg, window);
  const AsymptoticData& asym = p.asymptotics();
  LagrangianFrame f0 = apply_gauge(asym.stable_plus, gauge_seed);
  FramePath path = propagate_frame(p, f0, trunc.t_pos, trunc.t_neg, cfg);
  path.init_error = cfg.trunc_eps / std::max(asym.gap_plus, 1e-300);
  std::ostringstream prov;
  prov << "stable bundle on [" << trunc.t_neg << ", " << trunc.t_pos << "] (" << how
       << "), init V-(JB(+inf))";
  if (gauge_seed) prov << ", gauge seed " << *gauge_seed;
  path.provenance = prov.str();
  return path;
}

}  // namespace maslov
