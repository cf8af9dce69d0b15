#include "core/morse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>

#include "core/indices.hpp"

namespace maslov {

namespace {

// Evaluates the bundle frame at arbitrary tau by re-integrating a short span
// from the nearest stored sample at or below tau. Interpolating frames would
// lose isotropy; re-integration keeps the plane exact up to integrator tolerance.
class LocalEvaluator {
public:
  LocalEvaluator(const FramePath& path, const SturmLiouvilleProblem& p,
                 const PropagationConfig& cfg)
      : path_(path), p_(p), cfg_(cfg) {}

  Mat frame_at(double tau) const {
    const auto& g = path_.grid;
    auto it = std::upper_bound(g.begin(), g.end(), tau);
    std::size_t k = (it == g.begin()) ? 0 : static_cast<std::size_t>(it - g.begin()) - 1;
    if (g[k] == tau) return path_.frames[k];
    LagrangianFrame f0 = LagrangianFrame::from_orthonormal(path_.frames[k]);
    return propagate_to(p_, f0, g[k], tau, cfg_).columns();
  }

  double sigma_min_at(double tau) const {
    Mat w = frame_at(tau).bottomRows(path_.n);
    return Eigen::JacobiSVD<Mat>(w).singularValues().minCoeff();
  }

  double det_at(double tau) const {
    Mat w = frame_at(tau).bottomRows(path_.n);
    return w.determinant();
  }

private:
  const FramePath& path_;
  const SturmLiouvilleProblem& p_;
  const PropagationConfig& cfg_;
};

struct Candidate {
  std::size_t lo = 0;  // bracket sample indices
  std::size_t hi = 0;
};

std::vector<Candidate> scan_candidates(const std::vector<double>& grid,
                                       const std::vector<double>& sig,
                                       const DetectOptions& opts) {
  const std::size_t m = sig.size();
  std::vector<bool> hit(m, false);
  for (std::size_t i = 0; i < m; ++i) hit[i] = sig[i] <= opts.sigma_threshold;

  std::vector<Candidate> cand;
  auto push = [&](std::size_t center) {
    Candidate c;
    c.lo = center == 0 ? 0 : center - 1;
    c.hi = std::min(center + 1, m - 1);
    cand.push_back(c);
  };

  // samples already at the crossing threshold; a run of two or more means the
  // path lingers on the vertical plane and the crossings cannot be separated
  std::size_t i = 0;
  while (i < m) {
    if (!hit[i]) { ++i; continue; }
    std::size_t j = i;
    while (j + 1 < m && hit[j + 1]) ++j;
    if (j > i) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "consecutive samples on the vertical plane near tau=%.6f",
                    grid[i]);
      fail(ErrorCode::UnresolvedCluster, buf);
    }
    push(i);
    i = j + 1;
  }

  // interior dips; strict tie-break on the right so a flat pair yields one candidate
  for (std::size_t k = 1; k + 1 < m; ++k) {
    if (hit[k] || hit[k - 1] || hit[k + 1]) continue;
    if (sig[k] > opts.dip_threshold) continue;
    if (sig[k] > sig[k - 1] || sig[k] >= sig[k + 1]) continue;
    push(k);
  }

  // endpoint dips get a one-sided bracket; boundary crossings are handled upstream
  if (m >= 2 && !hit[0] && sig[0] <= opts.dip_threshold && sig[0] < sig[1]) push(0);
  if (m >= 2 && !hit[m - 1] && sig[m - 1] <= opts.dip_threshold && sig[m - 1] < sig[m - 2])
    push(m - 1);

  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    return a.lo < b.lo;
  });
  return cand;
}

}  // namespace

std::vector<CrossingRecord> detect_conjugate_points(const FramePath& path,
                                                    const SturmLiouvilleProblem& p,
                                                    const PropagationConfig& cfg,
                                                    const DetectOptions& opts,
                                                    DetectDiagnostics* diag) {
  require(path.size() >= 2, ErrorCode::InvalidArgument, "frame path needs at least two samples");
  require(path.n == p.n(), ErrorCode::DimensionMismatch, "path and problem dimensions differ");
  const int n = path.n;
  const std::size_t m = path.size();

  std::vector<double> sig(m), det(m);
  for (std::size_t k = 0; k < m; ++k) {
    Mat w = path.frames[k].bottomRows(n);
    sig[k] = Eigen::JacobiSVD<Mat>(w).singularValues().minCoeff();
    det[k] = w.determinant();
  }

  const double span = path.grid.back() - path.grid.front();
  const double target_width = opts.width_rel * span;
  LocalEvaluator ev(path, p, cfg);

  // overlapping brackets merge into regions; one bracket can hide several
  // crossings (two blocks of a direct sum crossing almost together), so each
  // region is handed to the fine resolver instead of a single minimizer
  std::vector<Candidate> regions;
  for (const Candidate& c : scan_candidates(path.grid, sig, opts)) {
    if (!regions.empty() && c.lo <= regions.back().hi)
      regions.back().hi = std::max(regions.back().hi, c.hi);
    else
      regions.push_back(c);
  }

  std::vector<CrossingRecord> records;
  for (const Candidate& region : regions) {
    const double a = path.grid[region.lo];
    const double b = path.grid[region.hi];
    const int fine = static_cast<int>(std::min<std::size_t>(384, 48 * (region.hi - region.lo)));
    int region_mult = 0;
    for (double tau : bracket_zeros([&](double t) { return ev.sigma_min_at(t); },
                                    [&](double t) { return ev.det_at(t); }, a, b,
                                    opts.dip_threshold, target_width, fine)) {
      Mat f = ev.frame_at(tau);
      Mat w = f.bottomRows(n);
      Eigen::JacobiSVD<Mat> svd(w, Eigen::ComputeFullV);
      const Vec sv = svd.singularValues();
      int mult = 0;
      for (int j = 0; j < sv.size(); ++j)
        if (sv(j) < opts.sigma_threshold) ++mult;
      if (mult == 0) continue;  // near miss, plane never actually touches

      Mat kernel = f * svd.matrixV().rightCols(mult);
      Mat bmat = p.hamiltonian_at(tau);
      Mat gram = kernel.transpose() * bmat * kernel;
      gram = 0.5 * (gram + gram.transpose()).eval();
      Inertia inertia = eig_inertia(gram);
      if (inertia.zero > 0) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "degenerate crossing form at tau=%.9f", tau);
        fail(ErrorCode::NonRegularCrossing, buf);
      }

      CrossingRecord rec;
      rec.tau = tau;
      rec.multiplicity = mult;
      rec.form_inertia = inertia;
      rec.width = target_width;
      rec.kernel_basis = kernel;
      records.push_back(std::move(rec));
      region_mult += mult;
    }

    // the determinant flips across the region iff the total multiplicity
    // inside is odd; a mismatch means a crossing pair too close to separate
    if (det[region.lo] != 0.0 && det[region.hi] != 0.0) {
      const bool flip = std::signbit(det[region.lo]) != std::signbit(det[region.hi]);
      if (flip != (region_mult % 2 != 0)) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "crossing count near tau=%.6f has the wrong parity; "
                      "crossings too close to separate",
                      0.5 * (a + b));
        fail(ErrorCode::UnresolvedCluster, buf);
      }
    }
  }

  std::sort(records.begin(), records.end(),
            [](const CrossingRecord& x, const CrossingRecord& y) { return x.tau < y.tau; });
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    double gap = records[k + 1].tau - records[k].tau;
    double floor = 10.0 * std::max(records[k].width, records[k + 1].width);
    if (gap < floor) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "crossings at tau=%.9f and tau=%.9f cannot be separated at the refinement floor",
                    records[k].tau, records[k + 1].tau);
      fail(ErrorCode::UnresolvedCluster, buf);
    }
  }

  if (diag) {
    diag->taus = path.grid;
    diag->sigma_min = sig;
    diag->det_w = det;
    diag->crossing_flag.assign(m, 0);
    for (const auto& rec : records) {
      auto it = std::upper_bound(path.grid.begin(), path.grid.end(), rec.tau);
      std::size_t k = (it == path.grid.begin()) ? 0
                                                : static_cast<std::size_t>(it - path.grid.begin()) - 1;
      diag->crossing_flag[std::min(k, m - 1)] = 1;
    }
  }
  return records;
}

MorseResult morse_index(const SturmLiouvilleProblem& p, const PropagationConfig& cfg,
                        const MorseOptions& opts) {
  ValidationReport rep = validate(p);
  if (!rep.hypotheses_ok()) {
    std::ostringstream msg;
    msg << "asymptotic positivity fails:";
    if (!rep.l2_minus_ok) msg << " left limit block not positive definite;";
    if (!rep.l2_plus_ok) msg << " right limit block not positive definite;";
    fail(ErrorCode::HypothesisViolation, msg.str());
  }

  MorseResult res;
  res.warnings = rep.warnings;

  std::pair<double, double> window;
  if (opts.window) {
    window = *opts.window;
    require(window.first < window.second, ErrorCode::InvalidArgument,
            "forced window must be ordered");
  } else {
    Truncation trunc = select_truncation(p, cfg);
    window = {trunc.t_neg, trunc.t_pos};
    res.warnings.insert(res.warnings.end(), trunc.warnings.begin(), trunc.warnings.end());
  }

  // once the bundle is in deep contact with the decaying space of the settled
  // right limit it stays there, and the integrated frame only accumulates
  // growing-mode contamination that can sweep through the reference plane and
  // fake a crossing; cut the analysis window at the first such contact
  const Mat decaying = p.asymptotics().stable_plus.columns();
  const Mat b_plus = p.hamiltonian_limit(+1);
  auto cut_degenerate_tail = [&](FramePath& fp) -> bool {
    for (std::size_t k = 0; k + 1 < fp.size(); ++k) {
      if (crossing_statistic(fp.frames[k], decaying) >= opts.tail_contact_tol) continue;
      if (spectral_norm(p.hamiltonian_at(fp.grid[k]) - b_plus) > 1e-3) continue;
      fp.grid.resize(k + 1);
      fp.frames.resize(k + 1);
      return true;
    }
    return false;
  };

  FramePath path;
  std::vector<CrossingRecord> records;
  DetectDiagnostics diag;
  int retries = 0;
  for (;;) {
    path = unstable_path(p, cfg, opts.gauge_seed, window);
    if (cut_degenerate_tail(path)) {
      if (!res.degenerate_tail) {
        res.degenerate_tail = true;
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "bundle reaches the decaying space of the right limit at tau=%.3f; "
                      "analysis cut there to avoid contamination crossings",
                      path.grid.back());
        res.warnings.push_back(buf);
      }
    }
    diag = DetectDiagnostics{};
    records = detect_conjugate_points(path, p, cfg, opts.detect, &diag);

    bool at_edge = false;
    for (const auto& rec : records) {
      double margin = 10.0 * rec.width;
      if (rec.tau - path.grid.front() < margin || path.grid.back() - rec.tau < margin)
        at_edge = true;
    }
    if (at_edge && retries < opts.max_boundary_retries) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "crossing near the truncation edge, enlarging window to [%.3f, %.3f]",
                    opts.boundary_factor * window.first, opts.boundary_factor * window.second);
      res.warnings.push_back(buf);
      window = {opts.boundary_factor * window.first, opts.boundary_factor * window.second};
      ++retries;
      continue;
    }
    if (at_edge)
      res.warnings.push_back("crossing remains near the truncation edge after enlargement retries");
    break;
  }

  int total = 0;
  for (const auto& rec : records) {
    if (rec.form_inertia.negative > 0)
      fail(ErrorCode::HypothesisViolation,
           "crossing form has a negative direction; monotone crossing hypothesis fails");
    total += rec.multiplicity;
  }
  res.index = total;
  res.crossings = records;
  res.truncation = {path.grid.front(), path.grid.back()};
  res.diagnostics = std::move(diag);

  if (opts.run_crosscheck) {
    std::vector<LagrangianFrame> planes;
    planes.reserve(path.size());
    for (const auto& f : path.frames) planes.push_back(LagrangianFrame::from_orthonormal(f));
    LocalEvaluator ev(path, p, cfg);
    MaslovOptions mopts;
    mopts.crossing_tol = 0.5 * opts.detect.sigma_threshold * opts.detect.sigma_threshold;
    mopts.dip_threshold = 1e-2;
    mopts.refine_width = opts.detect.width_rel * (window.second - window.first);
    mopts.refiner = [&ev](double t) { return LagrangianFrame::from_orthonormal(ev.frame_at(t)); };
    FormProvider form =
        hamiltonian_form_provider([&p](double t) { return p.hamiltonian_at(t); });
    MaslovResult mres = maslov_index(path.grid, planes, dirichlet_plane(p.n()), form, mopts);
    res.maslov_crosscheck = mres.index;
    if (mres.index != res.index) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "conjugate point count %d but intersection index %d",
                    res.index, mres.index);
      fail(ErrorCode::InconsistentIndex, buf);
    }
  }

  if (opts.run_plateau) {
    res.plateau_attempted = true;
    PropagationConfig cfg2 = cfg;
    cfg2.trunc_eps /= 100.0;
    MorseOptions opts2 = opts;
    opts2.run_plateau = false;
    opts2.run_crosscheck = false;
    opts2.window = {2.0 * window.first, 2.0 * window.second};
    MorseResult wide = morse_index(p, cfg2, opts2);
    res.plateau_verified = (wide.index == res.index);
    if (!res.plateau_verified) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "plateau check failed: index %d changed to %d on the doubled window",
                    res.index, wide.index);
      res.warnings.push_back(buf);
    }
  }

  return res;
}

int kernel_hit_count(const FramePath& path, const std::vector<Vec>& z_samples,
                     double membership_tol) {
  require(path.size() >= 2, ErrorCode::InvalidArgument, "frame path needs at least two samples");
  require(z_samples.size() == path.size(), ErrorCode::DimensionMismatch,
          "trajectory sample count does not match the path grid");
  const int n = path.n;
  const std::size_t m = path.size();

  double zmax = 0.0;
  for (const auto& z : z_samples) {
    require(z.size() == 2 * n, ErrorCode::DimensionMismatch, "trajectory sample has wrong size");
    zmax = std::max(zmax, z.norm());
  }
  require(zmax > 0.0, ErrorCode::InvalidArgument, "trajectory is identically zero");

  for (std::size_t k = 0; k < m; ++k) {
    const Vec& z = z_samples[k];
    double zn = z.norm();
    // deeply decayed samples carry no direction information, and the frame
    // itself accumulates growing-mode contamination there (interpolated
    // coefficients seed it well above machine rounding); check directions
    // only while the trajectory retains three digits of its peak size
    if (zn <= 1e-3 * zmax) continue;
    const Mat& q = path.frames[k];
    double resid = (z - q * (q.transpose() * z)).norm();
    if (resid > membership_tol * zn) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "trajectory leaves the bundle at tau=%.6f (residual %.3g)",
                    path.grid[k], resid / zn);
      fail(ErrorCode::NotInBundle, buf);
    }
  }

  double wmax = 0.0;
  for (const auto& z : z_samples) wmax = std::max(wmax, z.tail(n).norm());
  if (wmax <= 1e-12 * zmax)
    fail(ErrorCode::NotInBundle,
         "bottom block vanishes along the whole trajectory; zeros are not isolated");

  // walk the bottom block, collapsing zero runs; leading and trailing runs are
  // asymptotic decay, not zeros, so only runs bounded by nonzero values count
  int count = 0;
  if (n == 1) {
    const double zero_tol = 1e-9 * wmax;
    int last_sign = 0;
    bool pending_zero = false;
    for (std::size_t k = 0; k < m; ++k) {
      double v = z_samples[k](1);
      int s = std::abs(v) <= zero_tol ? 0 : (v > 0 ? 1 : -1);
      if (s == 0) {
        if (last_sign != 0) pending_zero = true;
        continue;
      }
      if (pending_zero) {
        ++count;
        pending_zero = false;
      } else if (last_sign != 0 && s != last_sign) {
        ++count;
      }
      last_sign = s;
    }
  } else {
    // vector case: a zero shows as a deep dip of |w| against its neighborhood
    const double zero_tol = 1e-2 * wmax;
    bool below = false;
    bool seen_above = false;
    for (std::size_t k = 0; k < m; ++k) {
      double v = z_samples[k].tail(n).norm();
      if (v <= zero_tol) {
        if (seen_above) below = true;
      } else {
        if (below) ++count;
        below = false;
        seen_above = true;
      }
    }
  }
  return count;
}

}  // namespace maslov
