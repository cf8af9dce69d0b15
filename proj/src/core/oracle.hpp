#pragma once

#include <vector>

#include "core/linalg.hpp"
#include "core/sturm.hpp"
#include "core/types.hpp"

namespace maslov {

// Independent verification route: discretize the quadratic form of the
// operator with piecewise-linear elements on a Dirichlet box and count
// negative eigenvalues by banded matrix inertia.

struct DiscretizationConfig {
  double t_o = 30.0;         // half-width of the truncation interval
  int n_interior = 3000;     // interior grid points at the coarsest level
  int richardson_levels = 3; // refinements (doubling points) that must agree
  double zero_sentinel = 1e-3;  // strict mode rejects eigenvalues this close to 0
};

struct OracleAssembly {
  SymBand stiffness;  // the discretized quadratic form (nN x nN)
  SymBand mass;       // block-identity mass matrix
  double h = 0.0;
  int nodes = 0;      // interior nodes
};

// Assemble stiffness and mass with two-point Gauss quadrature per element.
// Symmetry is exact by construction for any coefficient paths.
OracleAssembly assemble_discrete(const SturmLiouvilleProblem& p, const DiscretizationConfig& cfg);

struct OracleCount {
  int count = 0;
  std::vector<int> level_counts;  // one per refinement level
  std::vector<int> level_points;  // interior points per level
};

// Negative-eigenvalue count via banded inertia. The count must be identical
// across all refinement levels, and in this strict mode no eigenvalue may sit
// within zero_sentinel of 0 (a near-kernel makes the count unstable);
// UnstableCount otherwise.
OracleCount negative_count(const SturmLiouvilleProblem& p, const DiscretizationConfig& cfg);

// Deflated variant for problems with a known kernel: counts eigenvalues
// strictly below `floor` instead of 0 and skips the zero sentinel. Level
// agreement is still required.
OracleCount negative_count_deflated(const SturmLiouvilleProblem& p,
                                    const DiscretizationConfig& cfg, double floor = -1e-6);

// k smallest generalized eigenvalues (stiffness vs mass), ascending, at the
// finest refinement level. Convergence in h is second order; these are rough
// values for tests, not certified spectra. k <= 20.
Vec rough_spectrum(const SturmLiouvilleProblem& p, const DiscretizationConfig& cfg, int k);

}  // namespace maslov
