#include "core/indices.hpp"

#include <algorithm>
#include <cmath>

namespace maslov {

double max_principal_cosine(const Mat& qa, const Mat& qb) {
  require(qa.rows() == qb.rows(), ErrorCode::DimensionMismatch, "frames in different spaces");
  if (qa.cols() == 0 || qb.cols() == 0) return 0.0;
  return spectral_norm(qa.transpose() * qb);
}

double crossing_statistic(const Mat& qa, const Mat& qb) {
  return std::max(0.0, 1.0 - max_principal_cosine(qa, qb));
}

QuadraticForm pair_quadratic_form(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                                  const LagrangianFrame& delta, double tol) {
  const int nb = beta.n(), nd = delta.n();
  Mat bd(beta.ambient(), nb + nd);
  bd.leftCols(nb) = beta.columns();
  bd.rightCols(nd) = delta.columns();

  Mat sum_span = orth_basis(bd);
  Mat dom = intersection_basis(alpha.columns(), sum_span, tol);
  if (dom.cols() == 0) return {Mat(0, 0), dom};

  // min-norm split of each domain vector into a beta part and a delta part;
  // for Lagrangian beta and delta the form does not depend on the split
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(bd);
  Mat coeff = cod.solve(dom);
  require((bd * coeff - dom).norm() <= 1e-3 * std::max(1.0, dom.norm()),
          ErrorCode::InvalidArgument, "pair form: domain does not sit inside beta + delta");
  Mat y = beta.columns() * coeff.topRows(nb);
  Mat z = delta.columns() * coeff.bottomRows(nd);

  const int k = static_cast<int>(dom.cols());
  Mat gram(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) gram(i, j) = omega(y.col(i), z.col(j));
  gram = 0.5 * (gram + gram.transpose()).eval();
  return {gram, dom};
}

namespace {

// Intersection decisions inside the triple index use the sines of the
// principal angles with a cutoff matching the inertia tolerance of the pair
// form. The loose cosine test elsewhere flags pairs within ~1e-4 of
// intersecting, which the form still resolves as definitely signed, and the
// two readings of such a pair must not mix.
int strict_intersection_dim(const Mat& qa, const Mat& qb, double tol = 1e-9) {
  Mat resid = qa - qb * (qb.transpose() * qa).eval();
  Vec sv = Eigen::JacobiSVD<Mat>(resid).singularValues();
  int d = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) ++d;
  return d;
}

int triple_intersection_dim(const LagrangianFrame& a, const LagrangianFrame& b,
                            const LagrangianFrame& c, double tol) {
  if (strict_intersection_dim(a.columns(), b.columns()) == 0) return 0;
  Mat ab = intersection_basis(a.columns(), b.columns(), tol);
  if (ab.cols() == 0) return 0;
  return strict_intersection_dim(thin_qr(ab), c.columns());
}

}  // namespace

int triple_index(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                 const LagrangianFrame& kappa, double tol) {
  QuadraticForm q = pair_quadratic_form(alpha, beta, kappa, tol);
  int mplus = q.dim() > 0 ? q.inertia().positive : 0;
  return mplus + strict_intersection_dim(alpha.columns(), kappa.columns()) -
         triple_intersection_dim(alpha, beta, kappa, tol);
}

int triple_index_checked(const LagrangianFrame& alpha, const LagrangianFrame& beta,
                         const LagrangianFrame& kappa, std::mt19937_64& rng, double tol) {
  int direct = triple_index(alpha, beta, kappa, tol);

  const int n = alpha.n();
  for (int attempt = 0; attempt < 64; ++attempt) {
    LagrangianFrame delta = random_lagrangian(n, rng);
    if (intersection_dim(delta, alpha, tol) > 0 || intersection_dim(delta, beta, tol) > 0 ||
        intersection_dim(delta, kappa, tol) > 0)
      continue;
    // keep a safety margin so the three pair forms are far from degenerate
    double margin = std::max({max_principal_cosine(delta.columns(), alpha.columns()),
                              max_principal_cosine(delta.columns(), beta.columns()),
                              max_principal_cosine(delta.columns(), kappa.columns())});
    if (margin > 1.0 - 1e-3) continue;

    int via_delta = pair_quadratic_form(alpha, delta, beta, tol).inertia().negative +
                    pair_quadratic_form(beta, delta, kappa, tol).inertia().negative -
                    pair_quadratic_form(alpha, delta, kappa, tol).inertia().negative;
    require(via_delta == direct, ErrorCode::InconsistentIndex,
            "triple index: transversal route disagrees with the direct formula");
    return direct;
  }
  fail(ErrorCode::Internal, "triple index: no transversal auxiliary plane found");
}

int hormander_index(const LagrangianFrame& l1, const LagrangianFrame& l2,
                    const LagrangianFrame& k1, const LagrangianFrame& k2, double tol) {
  int via_pair = triple_index(l1, l2, k2, tol) - triple_index(l1, l2, k1, tol);
  int via_refs = triple_index(l1, k1, k2, tol) - triple_index(l2, k1, k2, tol);
  require(via_pair == via_refs, ErrorCode::InconsistentIndex,
          "relative pair index: the two defining routes disagree");
  return via_pair;
}

CrossingForm crossing_form_hamiltonian(const Mat& b, const LagrangianFrame& plane,
                                       const LagrangianFrame& reference, double tau,
                                       double tol) {
  require(b.rows() == plane.ambient() && b.cols() == b.rows(), ErrorCode::DimensionMismatch,
          "crossing form: coefficient size mismatch");
  Mat kernel = intersection_basis(plane.columns(), reference.columns(), tol);
  require(kernel.cols() > 0, ErrorCode::EmptyKernel, "crossing form: planes do not intersect");
  Mat gram = kernel.transpose() * b * kernel;
  gram = 0.5 * (gram + gram.transpose()).eval();
  return {tau, kernel, {gram, kernel}};
}

FormProvider hamiltonian_form_provider(std::function<Mat(double)> b_of_t) {
  return [b = std::move(b_of_t)](double t, const Mat& kernel) -> QuadraticForm {
    Mat gram = kernel.transpose() * b(t) * kernel;
    gram = 0.5 * (gram + gram.transpose()).eval();
    return {gram, kernel};
  };
}

FormProvider fd_form_provider(FrameRefiner frame_at, double step) {
  return [frame_at = std::move(frame_at), step](double t, const Mat& kernel) -> QuadraticForm {
    LagrangianFrame center = frame_at(t);
    const int dim = center.ambient();
    Mat jq = apply_J(center.columns());

    // graph coordinates over the crossing plane along its rotated complement:
    // solve Q(t') c - J Q(t) d = xi, the graph image of xi is w = J Q(t) d
    auto graph_image = [&](double tp) -> Mat {
      Mat m(dim, dim);
      m.leftCols(dim / 2) = frame_at(tp).columns();
      m.rightCols(dim / 2) = -jq;
      Mat cd = m.partialPivLu().solve(kernel);
      return jq * cd.bottomRows(dim / 2);
    };

    Mat wp = graph_image(t + step), wm = graph_image(t - step);
    const int k = static_cast<int>(kernel.cols());
    Mat gram(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        gram(i, j) = (omega(kernel.col(i), wp.col(j)) - omega(kernel.col(i), wm.col(j))) /
                     (2.0 * step);
    gram = 0.5 * (gram + gram.transpose()).eval();
    return {gram, kernel};
  };
}

namespace {

struct Candidate {
  int sample = 0;
  bool touches_left = false;
  bool touches_right = false;
};

}  // namespace

MaslovResult maslov_index(const std::vector<double>& taus,
                          const std::vector<LagrangianFrame>& frames,
                          const LagrangianFrame& reference, const FormProvider& form,
                          const MaslovOptions& opts) {
  const int nsamp = static_cast<int>(taus.size());
  require(nsamp >= 2 && frames.size() == taus.size(), ErrorCode::InvalidArgument,
          "index of a path needs at least two samples");
  for (int i = 0; i + 1 < nsamp; ++i)
    require(taus[i + 1] > taus[i], ErrorCode::InvalidArgument, "sample times must increase");

  const Mat& qv = reference.columns();
  std::vector<double> c(nsamp);
  for (int i = 0; i < nsamp; ++i) c[i] = crossing_statistic(frames[i].columns(), qv);

  // runs of samples already at crossing level
  std::vector<Candidate> candidates;
  std::vector<bool> in_run(nsamp, false);
  for (int i = 0; i < nsamp;) {
    if (c[i] > opts.crossing_tol) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < nsamp && c[j + 1] <= opts.crossing_tol) ++j;
    require(j - i + 1 <= 2, ErrorCode::UnresolvedCluster,
            "path stays on the crossing locus over several samples");
    int best = i;
    for (int k = i; k <= j; ++k) {
      in_run[k] = true;
      if (c[k] < c[best]) best = k;
    }
    candidates.push_back({best, i == 0, j == nsamp - 1});
    i = j + 1;
  }

  // dips that might hide an off-grid crossing
  for (int i = 1; i + 1 < nsamp; ++i) {
    if (in_run[i] || in_run[i - 1] || in_run[i + 1]) continue;
    if (c[i] > opts.dip_threshold) continue;
    // strict on the right so a tie across two samples yields one candidate
    if (c[i] > c[i - 1] || c[i] >= c[i + 1]) continue;
    require(static_cast<bool>(opts.refiner), ErrorCode::UnresolvedCluster,
            "near-crossing dip needs a refiner to resolve");
    candidates.push_back({i, false, false});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.sample < b.sample; });

  const double span = taus.back() - taus.front();
  const double width = opts.refine_width > 0 ? opts.refine_width : 1e-10 * span;

  MaslovResult out;
  auto emit = [&](double tstar, const LagrangianFrame& fstar, double cstar, bool at_left,
                  bool at_right) -> int {
    Mat kernel = intersection_basis(fstar.columns(), qv);
    if (kernel.cols() == 0) return 0;
    QuadraticForm q = form(tstar, kernel);
    Inertia in = q.inertia();
    require(in.zero == 0, ErrorCode::NonRegularCrossing,
            "crossing form is degenerate at a crossing");

    MaslovCrossing rec;
    rec.tau = tstar;
    rec.multiplicity = static_cast<int>(kernel.cols());
    rec.inertia = in;
    rec.at_left_end = at_left;
    rec.at_right_end = at_right;
    rec.statistic = cstar;
    out.crossings.push_back(rec);

    if (at_left)
      out.index += in.positive;
    else if (at_right)
      out.index -= in.negative;
    else
      out.index += in.positive - in.negative;
    return rec.multiplicity;
  };

  // without a refiner every candidate resolves to its best sample; with one,
  // interior brackets are rescanned since one dip can hide several crossings
  std::vector<std::pair<int, int>> brackets;
  for (const Candidate& cand : candidates) {
    if (!opts.refiner || cand.touches_left || cand.touches_right) {
      emit(taus[cand.sample], frames[cand.sample], c[cand.sample], cand.touches_left,
           cand.touches_right);
      continue;
    }
    const int lo = std::max(0, cand.sample - 1);
    const int hi = std::min(nsamp - 1, cand.sample + 1);
    if (!brackets.empty() && lo <= brackets.back().second)
      brackets.back().second = std::max(brackets.back().second, hi);
    else
      brackets.emplace_back(lo, hi);
  }

  for (const auto& [lo, hi] : brackets) {
    auto stat = [&](double t) { return crossing_statistic(opts.refiner(t).columns(), qv); };
    auto sdet = [&](double t) {
      return (opts.refiner(t).columns().transpose() * apply_J(qv)).determinant();
    };
    const double d_lo = sdet(taus[lo]);
    const double d_hi = sdet(taus[hi]);
    int found_mult = 0;
    for (double tstar :
         bracket_zeros(stat, sdet, taus[lo], taus[hi], opts.dip_threshold, width, 48 * (hi - lo))) {
      LagrangianFrame fstar = opts.refiner(tstar);
      double cstar = crossing_statistic(fstar.columns(), qv);
      if (cstar > opts.crossing_tol) continue;  // resolved as a near miss
      found_mult += emit(tstar, fstar, cstar, false, false);
    }
    if (d_lo != 0.0 && d_hi != 0.0) {
      const bool flip = std::signbit(d_lo) != std::signbit(d_hi);
      require(flip == (found_mult % 2 != 0), ErrorCode::UnresolvedCluster,
              "crossing count in a dip bracket has the wrong parity; "
              "crossings too close to separate");
    }
  }

  std::sort(out.crossings.begin(), out.crossings.end(),
            [](const MaslovCrossing& x, const MaslovCrossing& y) { return x.tau < y.tau; });
  return out;
}

int discrete_spectral_flow(const std::vector<Mat>& path, double tol) {
  require(!path.empty(), ErrorCode::InvalidArgument, "empty path");
  Inertia first = eig_inertia(path.front(), tol);
  Inertia last = eig_inertia(path.back(), tol);
  require(first.zero == 0, ErrorCode::DegenerateEndpoint, "singular matrix at the start");
  require(last.zero == 0, ErrorCode::DegenerateEndpoint, "singular matrix at the end");
  return first.negative - last.negative;
}

}  // namespace maslov
