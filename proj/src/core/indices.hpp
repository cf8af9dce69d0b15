#pragma once

#include <functional>
#include <vector>

#include "core/symplectic.hpp"

namespace maslov {

// Largest principal cosine between two spans given by orthonormal frames.
double max_principal_cosine(const Mat& qa, const Mat& qb);

// Detection statistic: zero exactly when the spans intersect nontrivially.
double crossing_statistic(const Mat& qa, const Mat& qb);

// Quadratic form of the pair (beta, delta) restricted to alpha: defined on
// alpha cap (beta + delta) by Q(x1, x2) = omega(y1, z2) where x = y + z with
// y in beta and z in delta. For Lagrangian beta, delta the value does not
// depend on the chosen split, and the form is symmetric; the returned gram is
// symmetrized to clean up roundoff. Its kernel contains alpha cap beta and
// alpha cap delta.
QuadraticForm pair_quadratic_form(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                                  const LagrangianFrame& delta, double tol = 1e-7);

// Triple index of three Lagrangian planes:
//   i(alpha, beta, kappa) = m+(Q(alpha, beta; kappa)) + dim(alpha cap kappa)
//                           - dim(alpha cap beta cap kappa)
int triple_index(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                 const LagrangianFrame& kappa, double tol = 1e-7);

// Same value computed along a second route through an auxiliary plane delta
// transversal to all three arguments:
//   i = m-(Q(alpha,delta;beta)) + m-(Q(beta,delta;kappa)) - m-(Q(alpha,delta;kappa))
// Both routes are evaluated and must agree (InconsistentIndex otherwise).
int triple_index_checked(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                         const LagrangianFrame& kappa, std::mt19937_64& rng,
                         double tol = 1e-7);

// Relative index of two Lagrangian pairs,
//   s(l1, l2; k1, k2) = i(l1, l2, k2) - i(l1, l2, k1),
// cross-checked against the dual route i(l1,k1,k2) - i(l2,k1,k2).
int hormander_index(const LagrangianFrame& l1, const LagrangianFrame& l2,
                    const LagrangianFrame& k1, const LagrangianFrame& k2, double tol = 1e-7);

// Crossing data of a path of Lagrangian planes against a fixed reference.
struct CrossingForm {
  double tau = 0.0;
  Mat kernel_basis;    // columns span the intersection with the reference
  QuadraticForm form;  // derivative form restricted to the kernel
};

// Crossing form of a Hamiltonian path Z' = J B(tau) Z at time tau: the form
// xi -> <B(tau) xi, xi> on the intersection of the plane with the reference.
CrossingForm crossing_form_hamiltonian(const Mat& b, const LagrangianFrame& plane,
                                       const LagrangianFrame& reference, double tau,
                                       double tol = 1e-7);

// Callback producing the crossing form at time t on a given kernel basis.
using FormProvider = std::function<QuadraticForm(double, const Mat&)>;
// Callback producing the exact path plane at an arbitrary time.
using FrameRefiner = std::function<LagrangianFrame(double)>;

// Form provider for paths generated by Z' = J B(t) Z.
FormProvider hamiltonian_form_provider(std::function<Mat(double)> b_of_t);

// Generic finite-difference form provider: represents the path near t as a
// graph over the crossing plane along its rotated complement and
// differentiates the graph form numerically.
FormProvider fd_form_provider(FrameRefiner frame_at, double step = 1e-5);

struct MaslovOptions {
  double crossing_tol = 1e-8;   // zero threshold on the detection statistic
  double dip_threshold = 1e-4;  // local minima below this get investigated
  double refine_width = 0.0;    // golden-section width, 0 = 1e-10 * span
  FrameRefiner refiner;         // required to resolve off-grid dips
};

struct MaslovCrossing {
  double tau = 0.0;
  int multiplicity = 0;
  Inertia inertia;
  bool at_left_end = false;
  bool at_right_end = false;
  double statistic = 0.0;
};

struct MaslovResult {
  int index = 0;
  std::vector<MaslovCrossing> crossings;
};

// Index of a sampled path of Lagrangian planes relative to a fixed reference:
// interior crossings contribute their signature, a crossing at the left end
// contributes m+ and one at the right end contributes -m-.
MaslovResult maslov_index(const std::vector<double>& taus,
                          const std::vector<LagrangianFrame>& frames,
                          const LagrangianFrame& reference, const FormProvider& form,
                          const MaslovOptions& opts = {});

// Net count of eigenvalues moving from negative to positive along a path of
// symmetric matrices with invertible endpoints: m-(first) - m-(last).
int discrete_spectral_flow(const std::vector<Mat>& path, double tol = 1e-9);

}  // namespace maslov
