#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/morse.hpp"
#include "core/sturm.hpp"
#include "core/types.hpp"

namespace maslov {

// Traveling waves of gradient reaction-diffusion systems: profile solving,
// the exponential-weight transform to a selfadjoint operator, and the
// critical-point instability test.

struct ReactionSystem {
  int n = 1;
  std::function<Vec(const Vec&)> grad;   // u -> grad F(u)
  std::function<Mat(const Vec&)> hess;   // u -> hess F(u), symmetric
  std::string name;

  // cubic nonlinearity u(1-u)(u-a) with stable equilibria 0 and 1
  static ReactionSystem nagumo(double a);
  // quadratic nonlinearity u^2 - u; carries the standing pulse (3/2)sech^2(xi/2)
  static ReactionSystem kdv_pulse();
  // scalar system from tabulated grad F values on a u-grid (cubic spline)
  static ReactionSystem scalar_tabulated(const Vec& u_grid, const Vec& grad_values);
};

struct WaveProfile {
  double c = 0.0;
  Vec grid;         // uniform xi grid including the endpoints
  Mat w;            // n x m profile samples
  Mat w_prime;      // n x m derivative samples
  Vec u_minus, u_plus;
  std::string kind;
  double residual_sup = 0.0;  // discrete stationary residual of the solve
};

// True iff hess F(u_minus) and hess F(u_plus) are both negative definite
// (every eigenvalue below -1e-10). NotEquilibrium if either gradient exceeds
// 1e-10 in norm.
bool check_H(const ReactionSystem& sys, const Vec& u_minus, const Vec& u_plus);

struct BvpConfig {
  double half_width = 30.0;
  double h = 0.005;           // coarse step; the solve also runs at h/2 and extrapolates
  int max_newton = 25;
  double newton_tol = 1e-10;  // sup-norm residual target
  bool fix_c = false;         // pulses: hold c at the supplied value
  double template_width = 1.0;
  double template_amp = 1.0;
  std::function<Vec(double)> guess;  // optional initial profile; overrides the template
};

// Solve the stationary equation w'' + c w' + grad F(w) = 0 with Dirichlet
// data u_minus, u_plus by damped-free Newton on a second-order scheme, two
// meshes, and Richardson extrapolation. c is a free unknown unless fix_c.
// The translation family is removed by a phase condition: midpoint value for
// scalar fronts, zero derivative at 0 for scalar pulses, integral condition
// against the template for systems.
WaveProfile solve_front(const ReactionSystem& sys, double c_guess, const Vec& u_minus,
                        const Vec& u_plus, const BvpConfig& cfg = {});

// The weighted second-variation problem: P = I, Q = 0,
// R(xi) = (c^2/4) I - hess F(w*(xi)), tabulated on the profile grid with the
// equilibrium limits. Negative definite Hessians at both ends make the limit
// blocks positive definite.
SturmLiouvilleProblem weighted_problem(const ReactionSystem& sys, const WaveProfile& profile);

// Interior points where w*' vanishes. Scalar zeros are certified by a sign
// change (near-tangential dips become warnings, an uncertifiable touch is
// TangentialZero); system zeros by a refined simultaneous root. Asymptotic
// decay at the ends never counts.
std::vector<double> critical_points(const WaveProfile& profile, double tol = 1e-6,
                                    std::vector<std::string>* warnings = nullptr);

struct WaveAnalysis {
  std::vector<double> critical_points;
  int morse_lower_bound = 0;
  std::optional<MorseResult> morse;  // for the weighted operator, when requested
  std::string verdict;               // "spectrally-unstable" or "stable-candidate"
  bool h_check = false;
  std::vector<std::string> warnings;
};

struct AnalysisConfig {
  double crit_tol = 1e-6;
  bool compute_morse = true;
  PropagationConfig prop;
  MorseOptions morse_opts;
};

// The instability test: a nonempty interior critical set certifies spectral
// instability and bounds the Morse index of the weighted operator from below;
// an empty set yields only "stable-candidate". Requires check_H.
WaveAnalysis instability_verdict(const ReactionSystem& sys, const WaveProfile& profile,
                                 const AnalysisConfig& cfg = {});

// Trajectory of the translation mode in the weighted variables,
// z(xi) = e^{c xi/2} (w*'' + (c/2) w*', w*'), sampled at the given times.
// Lies in the unstable bundle of the weighted problem; its bottom block
// vanishes exactly at the critical points of the profile.
std::vector<Vec> translation_mode_trajectory(const ReactionSystem& sys,
                                             const WaveProfile& profile,
                                             const std::vector<double>& taus);

// Interior-row deviation of the discrete conjugation identity between the
// weighted operator and the drift operator: assembles the drift side with an
// exponentially fitted three-point scheme, conjugates by the grid weight
// diag(e^{c xi_i/2}), and returns the largest relative row deviation from the
// directly assembled weighted matrix.
double weighted_identity_residual(const ReactionSystem& sys, const WaveProfile& profile,
                                  double t_o, int n_interior);

}  // namespace maslov
