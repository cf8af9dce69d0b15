#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/sturm.hpp"

namespace maslov {

struct PropagationConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int reortho_every = 1;    // accepted steps between re-orthonormalizations
  double trunc_eps = 1e-8;  // asymptotic closeness threshold for truncation
  double t_min = 20.0;      // truncation search bounds
  double t_max = 400.0;
  double sample_dt = 0.01;  // output grid spacing
};

struct Truncation {
  double t_neg = 0.0, t_pos = 0.0;          // selected window after clamping
  double settle_neg = 0.0, settle_pos = 0.0;  // raw settle points from probing
  bool clamped_neg = false, clamped_pos = false;
  std::vector<std::string> warnings;
};

// Probes ||B(t) - B(limit)|| on a grid out to t_max and returns the smallest
// window outside of which the coefficient stays within trunc_eps of its
// limits, clamped into [t_min, t_max]. Throws NoDecay when the coefficient is
// still varying at t_max or at the edge of its tabulated data.
Truncation select_truncation(const SturmLiouvilleProblem& p, const PropagationConfig& cfg = {});

// Sampled path of Lagrangian frames along z' = J B(t) z; grid ascending.
struct FramePath {
  std::vector<double> grid;
  std::vector<Mat> frames;  // orthonormal 2n x n, aligned with grid
  std::string provenance;
  double init_error = 0.0;  // estimated initialization error for bundle paths
  int n = 0;

  size_t size() const { return grid.size(); }
};

// Propagates the span of f0 from t0 to t1 (either direction) with an adaptive
// embedded Runge-Kutta 5(4) pair on the frame matrix, re-orthonormalizing via
// thin QR. Output is sampled on a grid with spacing <= sample_dt, endpoints
// landed exactly; the returned path is ascending in tau regardless of the
// integration direction.
FramePath propagate_frame(const SturmLiouvilleProblem& p, const LagrangianFrame& f0, double t0,
                          double t1, const PropagationConfig& cfg = {});

// Single-shot variant: the frame at t1 only, without output sampling. Used by
// refinement code that re-integrates short spans from stored samples.
LagrangianFrame propagate_to(const SturmLiouvilleProblem& p, const LagrangianFrame& f0, double t0,
                             double t1, const PropagationConfig& cfg = {});

// Unstable bundle E^u on [T_neg, T_pos]: initialized at T_neg from
// V^+(JB(-inf)) and propagated forward. A gauge seed right-multiplies the
// initial frame by a random orthogonal matrix (the sampled subspace path is
// invariant under this). A forced window overrides select_truncation.
FramePath unstable_path(const SturmLiouvilleProblem& p, const PropagationConfig& cfg = {},
                        std::optional<uint64_t> gauge_seed = {},
                        std::optional<std::pair<double, double>> window = {});

// Stable bundle E^s: initialized at T_pos from V^-(JB(+inf)) and propagated
// backward; arrays are returned ascending.
FramePath stable_path(const SturmLiouvilleProblem& p, const PropagationConfig& cfg = {},
                      std::optional<uint64_t> gauge_seed = {},
                      std::optional<std::pair<double, double>> window = {});

}  // namespace maslov
