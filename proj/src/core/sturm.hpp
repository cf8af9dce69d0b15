#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/symplectic.hpp"
#include "core/types.hpp"

namespace maslov {

// Matrix-valued coefficient t -> M(t) with declared limits at t -> -inf / +inf.
// Evaluation outside a tabulated range snaps to the declared limits.
class CoefficientPath {
 public:
  // constant matrix, limits equal the value
  static CoefficientPath constant(const Mat& value);

  // named scalar presets (1x1), flat parameter list:
  //   "constant"   [v]                 v
  //   "sech2_well" [kappa, a, b]       kappa - a*sech^2(b*t)
  //   "tanh_step"  [l, r, s]           l + (r-l)*(1+tanh(s*t))/2
  //   "gauss_bump" [base, amp, width]  base + amp*exp(-(t/width)^2)
  static CoefficientPath scalar_preset(const std::string& name,
                                       const std::vector<double>& params);

  // cubic interpolation of the samples inside [grid.front(), grid.back()],
  // declared limits outside; a table edge further than 1e-6 from the declared
  // limit produces a construction warning
  static CoefficientPath tabulated(const std::vector<double>& grid,
                                   const std::vector<Mat>& values,
                                   const Mat& limit_minus, const Mat& limit_plus);

  // arbitrary callable with declared limits
  static CoefficientPath from_function(int dim, std::function<Mat(double)> fn,
                                       const Mat& limit_minus, const Mat& limit_plus,
                                       std::string label = "function");

  // block-diagonal stacking of paths
  static CoefficientPath direct_sum(const std::vector<CoefficientPath>& parts);

  Mat operator()(double t) const;
  int dim() const { return dim_; }
  const Mat& limit_minus() const { return limit_minus_; }
  const Mat& limit_plus() const { return limit_plus_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::string& describe() const { return label_; }

  // extreme abscissas of any tabulated data; evaluation snaps to the limits
  // beyond these, so settling cannot be observed past them
  std::optional<double> table_edge_minus() const { return edge_minus_; }
  std::optional<double> table_edge_plus() const { return edge_plus_; }

 private:
  CoefficientPath() = default;

  int dim_ = 0;
  std::function<Mat(double)> eval_;
  Mat limit_minus_, limit_plus_;
  std::optional<double> edge_minus_, edge_plus_;
  std::vector<std::string> warnings_;
  std::string label_;
};

struct HyperbolicSplit {
  LagrangianFrame unstable;  // invariant space for eigenvalues with Re > 0
  LagrangianFrame stable;    // invariant space for eigenvalues with Re < 0
  double gap = 0.0;          // min |Re lambda|
};

// Splits R^{2n} into the stable/unstable invariant subspaces of J*B; throws
// NotHyperbolic when eigenvalues touch the imaginary axis.
HyperbolicSplit hyperbolic_lagrangian_split(const Mat& b_sym);

struct AsymptoticData {
  Mat b_minus, b_plus;
  LagrangianFrame unstable_minus;  // limit of the unstable bundle at -inf
  LagrangianFrame stable_minus;
  LagrangianFrame unstable_plus;
  LagrangianFrame stable_plus;  // limit of the stable bundle at +inf
  double gap_minus = 0.0;
  double gap_plus = 0.0;
  double spectral_gap = 0.0;  // min of the two
};

// -(d/dt)(P w' + Q w) + Q^T w' + R w on the line, coefficients n x n.
class SturmLiouvilleProblem {
 public:
  SturmLiouvilleProblem(CoefficientPath p, CoefficientPath q, CoefficientPath r);

  int n() const { return n_; }
  Mat p(double t) const { return p_(t); }
  Mat q(double t) const { return q_(t); }
  Mat r(double t) const { return r_(t); }
  const CoefficientPath& p_path() const { return p_; }
  const CoefficientPath& q_path() const { return q_; }
  const CoefficientPath& r_path() const { return r_; }

  // symmetric Hamiltonian coefficient B(t) of the first-order system
  // z' = J B z, state z = (P w' + Q w, w); throws SingularP when P(t) is
  // numerically singular
  Mat hamiltonian_at(double t) const;

  // B at the declared limit, sign = -1 or +1
  Mat hamiltonian_limit(int sign) const;

  // lazily computed invariant-space data at both limits
  const AsymptoticData& asymptotics() const;

  std::vector<std::string> warnings() const;

 private:
  Mat assemble_b(const Mat& pm, const Mat& qm, const Mat& rm) const;

  CoefficientPath p_, q_, r_;
  int n_ = 0;
  mutable std::shared_ptr<const AsymptoticData> asym_;
};

// block-diagonal direct sum of two problems
SturmLiouvilleProblem problem_direct_sum(const SturmLiouvilleProblem& a,
                                         const SturmLiouvilleProblem& b);

// Permutation E with E * (y_a, w_a, y_b, w_b) = (y_a, y_b, w_a, w_b); maps the
// concatenated phase spaces of two problems into the phase space of their sum.
Mat direct_sum_embedding(int na, int nb);

struct GraphDiagnostic {
  bool has_graph_form = false;  // bottom block of the frame invertible
  Inertia inertia;              // of the symmetric graph matrix
  double symmetry_residual = 0.0;
};

struct ValidationReport {
  // coefficient bound estimates over the probe grid and the declared limits
  double c1 = 0.0;  // inf sigma_min(P)
  double c2 = 0.0;  // sup ||Q||
  double c3 = 0.0;  // sup ||R||

  bool l2_minus_ok = false;  // [[P,Q],[Q^T,R]] positive definite at -inf
  bool l2_plus_ok = false;

  bool hyperbolic_minus = false;
  bool hyperbolic_plus = false;
  double spectral_gap = 0.0;

  // V^{+/-}(JB(limit)) transversal to the Dirichlet plane (both spaces)
  bool transversal_dirichlet_minus = false;
  bool transversal_dirichlet_plus = false;

  // Graph matrices of the invariant spaces over the w-component; expected
  // positive definite for the unstable spaces and negative definite for the
  // stable ones. Reported as a diagnostic only.
  GraphDiagnostic graph_unstable_minus, graph_stable_minus;
  GraphDiagnostic graph_unstable_plus, graph_stable_plus;

  std::vector<std::string> warnings;

  bool hypotheses_ok() const { return l2_minus_ok && l2_plus_ok; }
};

// report-only hypothesis check; never throws
ValidationReport validate(const SturmLiouvilleProblem& problem, int probe_points = 2001,
                          double probe_radius = 50.0);

}  // namespace maslov
