#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/flows.hpp"
#include "core/linalg.hpp"
#include "core/sturm.hpp"
#include "core/symplectic.hpp"
#include "core/types.hpp"

namespace maslov {

// Conjugate point detection and Morse index computation for asymptotically
// hyperbolic Sturm-Liouville problems. A conjugate point is a time where the
// unstable bundle meets the vertical (Dirichlet) plane; under the standing
// hypotheses every crossing form is positive definite and the Morse index is
// the total intersection count.

struct CrossingRecord {
  double tau = 0.0;          // refined crossing location
  int multiplicity = 1;      // dim of the intersection with the vertical plane
  Inertia form_inertia;      // inertia of the crossing form on that kernel
  double width = 0.0;        // final bracket width of the refinement
  Mat kernel_basis;          // 2n x multiplicity, columns span the intersection
};

struct DetectDiagnostics {
  std::vector<double> taus;        // sample grid
  std::vector<double> sigma_min;   // smallest singular value of the w-block
  std::vector<double> det_w;       // determinant of the w-block
  std::vector<int> crossing_flag;  // 1 if a refined crossing lies in [tau_k, tau_{k+1})
};

struct DetectOptions {
  double sigma_threshold = 1e-7;  // absolute acceptance threshold on singular values
  double dip_threshold = 0.05;    // candidate gate for interior local minima
  double width_rel = 1e-10;       // refinement width relative to the window span
};

// Scan a propagated frame path for crossings with the vertical plane.
// Candidates come from local minima of sigma_min of the w-block; each is
// refined by re-integrating short spans from the nearest stored sample
// (bisection on the sign of det W when it flips, golden section otherwise).
// Throws NonRegularCrossing if a crossing form is degenerate and
// UnresolvedCluster if two candidates cannot be separated at the width floor.
std::vector<CrossingRecord> detect_conjugate_points(const FramePath& path,
                                                    const SturmLiouvilleProblem& p,
                                                    const PropagationConfig& cfg = {},
                                                    const DetectOptions& opts = {},
                                                    DetectDiagnostics* diag = nullptr);

struct MorseOptions {
  DetectOptions detect;
  bool run_plateau = true;          // recompute on a doubled window, tighter settle tolerance
  bool run_crosscheck = true;       // independent arc count via the intersection index
  std::optional<uint64_t> gauge_seed;  // optional random gauge on the initial frame
  std::optional<std::pair<double, double>> window;  // force the truncation window
  int max_boundary_retries = 2;     // window enlargements when a crossing sits at an edge
  double boundary_factor = 2.0;
  double tail_contact_tol = 1e-4;   // degenerate-tail flag threshold
};

struct MorseResult {
  int index = 0;
  std::vector<CrossingRecord> crossings;
  std::optional<int> maslov_crosscheck;   // arc-count route, equals index when run
  std::optional<int> oracle_crosscheck;   // filled by callers that also run the FEM count
  std::pair<double, double> truncation{0.0, 0.0};
  bool plateau_attempted = false;
  bool plateau_verified = false;  // true only when the recomputation reproduced the index
  bool degenerate_tail = false;   // bundle hugs the decaying space at the right end
  std::vector<std::string> warnings;
  DetectDiagnostics diagnostics;
};

// Full pipeline: validate hypotheses, propagate the unstable bundle, count
// conjugate points, cross-check against the intersection index, and verify a
// truncation plateau. Throws HypothesisViolation when the standing hypotheses
// fail (including an indefinite crossing form, which they forbid) and
// InconsistentIndex if the two counting routes disagree.
MorseResult morse_index(const SturmLiouvilleProblem& p, const PropagationConfig& cfg = {},
                        const MorseOptions& opts = {});

// Count isolated zeros of the w-part of a trajectory that lies in the bundle
// spanned by the path. Membership is checked sample-wise; a trajectory whose
// w-part vanishes identically is rejected (NotInBundle in both cases).
int kernel_hit_count(const FramePath& path, const std::vector<Vec>& z_samples,
                     double membership_tol = 1e-3);

}  // namespace maslov
