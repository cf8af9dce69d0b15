#include "core/oracle.hpp"

#include <cmath>
#include <cstdio>

namespace maslov {

namespace {

void check_mesh(const DiscretizationConfig& cfg) {
  require(cfg.t_o > 0.0, ErrorCode::InvalidArgument, "truncation half-width must be positive");
  require(cfg.n_interior >= 1, ErrorCode::InvalidArgument, "need interior points");
}

void check_config(const DiscretizationConfig& cfg) {
  check_mesh(cfg);
  require(cfg.n_interior >= 100, ErrorCode::InvalidArgument, "need at least 100 interior points");
  require(cfg.richardson_levels >= 1, ErrorCode::InvalidArgument, "need at least one level");
}

DiscretizationConfig level_config(const DiscretizationConfig& cfg, int level) {
  DiscretizationConfig c = cfg;
  c.n_interior = cfg.n_interior << level;
  return c;
}

}  // namespace

OracleAssembly assemble_discrete(const SturmLiouvilleProblem& p,
                                 const DiscretizationConfig& cfg) {
  check_mesh(cfg);
  const int n = p.n();
  const int nodes = cfg.n_interior;
  const double h = 2.0 * cfg.t_o / (nodes + 1);
  const int dim = n * nodes;
  const int hb = 2 * n - 1;

  OracleAssembly out;
  out.stiffness = SymBand(dim, hb);
  out.mass = SymBand(dim, hb);
  out.h = h;
  out.nodes = nodes;

  // two-point Gauss per element; hat value/derivative per element endpoint
  const double gauss = 0.5 / std::sqrt(3.0);
  const double pts[2] = {0.5 - gauss, 0.5 + gauss};  // barycentric along the element

  for (int e = 0; e <= nodes; ++e) {
    const double x_left = -cfg.t_o + e * h;
    // local dof -> (global node, shape sign); node 0 and nodes+1 are Dirichlet
    const int node[2] = {e, e + 1};
    for (double s : pts) {
      const double x = x_left + s * h;
      const double wq = 0.5 * h;
      const Mat pm = p.p(x);
      const Mat qm = p.q(x);
      const Mat rm = p.r(x);
      const double val[2] = {1.0 - s, s};
      const double der[2] = {-1.0 / h, 1.0 / h};
      for (int li = 0; li < 2; ++li) {
        if (node[li] == 0 || node[li] == nodes + 1) continue;
        for (int lj = 0; lj < 2; ++lj) {
          if (node[lj] == 0 || node[lj] == nodes + 1) continue;
          for (int a = 0; a < n; ++a) {
            const int r = (node[li] - 1) * n + a;
            for (int b = 0; b < n; ++b) {
              const int c = (node[lj] - 1) * n + b;
              if (r < c) continue;  // symmetric storage, one triangle
              double v = pm(a, b) * der[li] * der[lj] + qm(a, b) * der[li] * val[lj] +
                         qm(b, a) * val[li] * der[lj] + rm(a, b) * val[li] * val[lj];
              out.stiffness.add(r, c, wq * v);
              if (a == b) out.mass.add(r, c, wq * val[li] * val[lj]);
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

OracleCount count_levels(const SturmLiouvilleProblem& p, const DiscretizationConfig& cfg,
                         bool deflated, double floor) {
  check_config(cfg);
  OracleCount out;
  for (int level = 0; level < cfg.richardson_levels; ++level) {
    DiscretizationConfig lc = level_config(cfg, level);
    OracleAssembly asm_lvl = assemble_discrete(p, lc);
    int cnt = deflated ? band_count_below(asm_lvl.stiffness, asm_lvl.mass, floor)
                       : band_inertia(asm_lvl.stiffness).negative;
    out.level_counts.push_back(cnt);
    out.level_points.push_back(lc.n_interior);
  }
  for (int c : out.level_counts) {
    if (c != out.level_counts.front()) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "negative count changes across refinement levels (%d vs %d)",
                    out.level_counts.front(), c);
      fail(ErrorCode::UnstableCount, buf);
    }
  }
  out.count = out.level_counts.front();

  if (!deflated) {
    // one-sided convergence of conforming elements keeps an exact kernel on
    // the positive side at every level, so level agreement alone cannot see
    // it; probe an explicit neighborhood of zero instead
    DiscretizationConfig fc = level_config(cfg, cfg.richardson_levels - 1);
    OracleAssembly fine = assemble_discrete(p, fc);
    int below_plus = band_count_below(fine.stiffness, fine.mass, cfg.zero_sentinel);
    int below_minus = band_count_below(fine.stiffness, fine.mass, -cfg.zero_sentinel);
    if (below_plus != below_minus) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "eigenvalue within %.1e of zero; count not trustworthy",
                    cfg.zero_sentinel);
      fail(ErrorCode::UnstableCount, buf);
    }
  }
  return out;
}

}  // namespace

OracleCount negative_count(const SturmLiouvilleProblem& p, const DiscretizationConfig& cfg) {
  return count_levels(p, cfg, false, 0.0);
}

OracleCount negative_count_deflated(const SturmLiouvilleProblem& p,
                                    const DiscretizationConfig& cfg, double floor) {
  require(floor < 0.0, ErrorCode::InvalidArgument, "deflation floor must be negative");
  return count_levels(p, cfg, true, floor);
}

Vec rough_spectrum(const SturmLiouvilleProblem& p, const DiscretizationConfig& cfg, int k) {
  check_config(cfg);
  require(k >= 1 && k <= 20, ErrorCode::InvalidArgument, "rough spectrum supports 1..20 values");
  DiscretizationConfig fc = level_config(cfg, cfg.richardson_levels - 1);
  OracleAssembly fine = assemble_discrete(p, fc);
  return band_smallest_eigenvalues(fine.stiffness, fine.mass, k);
}

}  // namespace maslov
