#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/indices.hpp"

using namespace maslov;

namespace {

LagrangianFrame line(double x, double y) {
  Mat q(2, 1);
  double r = std::hypot(x, y);
  q << x / r, y / r;
  return LagrangianFrame::from_columns(q);
}

LagrangianFrame rotation(double t) { return line(std::cos(t), std::sin(t)); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("pair form on rotated lines") {
  auto beta = line(1, 0), delta = line(0, 1);
  // alpha = span(cos t, sin t) splits as (cos t, 0) + (0, sin t), and the form
  // takes the value omega((cos t, 0), (0, sin t)) = sin t cos t on the span
  QuadraticForm qp = pair_quadratic_form(rotation(M_PI / 4), beta, delta);
  REQUIRE(qp.dim() == 1);
  CHECK(qp.gram(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  QuadraticForm qm = pair_quadratic_form(rotation(3 * M_PI / 4), beta, delta);
  CHECK(qm.gram(0, 0) == doctest::Approx(-0.5).epsilon(1e-12));

  // alpha inside beta lands in the kernel of the form
  QuadraticForm qz = pair_quadratic_form(beta, beta, delta);
  REQUIRE(qz.dim() == 1);
  CHECK(qz.inertia().zero == 1);
}

TEST_CASE("triple index on the four-line fixture") {
  auto l1 = line(1, 0), l2 = line(0, 1), k1 = line(1, 1), k2 = line(1, -1);
  CHECK(triple_index(l1, l2, k2) == 0);
  CHECK(triple_index(l1, l2, k1) == 1);
  CHECK(triple_index(l1, k1, k2) == 0);
  CHECK(triple_index(l2, k1, k2) == 1);
  CHECK(triple_index(k1, k2, l2) == 1);
  CHECK(triple_index(k1, k2, l1) == 0);

  std::mt19937_64 rng(17);
  CHECK(triple_index_checked(l1, l2, k1, rng) == 1);
  CHECK(triple_index_checked(l1, l2, k2, rng) == 0);
}

TEST_CASE("triple index degenerate arguments") {
  std::mt19937_64 rng(23);
  for (int n : {1, 2, 3}) {
    for (int rep = 0; rep < 10; ++rep) {
      auto a = random_lagrangian(n, rng), b = random_lagrangian(n, rng),
           k = random_lagrangian(n, rng);
      CHECK(triple_index(a, b, b) == 0);
      CHECK(triple_index(a, a, k) == 0);
      CHECK(triple_index(a, b, a) == n - intersection_dim(a, b));
    }
  }
}

TEST_CASE("relative pair index fixture and identities") {
  auto l1 = line(1, 0), l2 = line(0, 1), k1 = line(1, 1), k2 = line(1, -1);
  CHECK(hormander_index(l1, l2, k1, k2) == -1);
  CHECK(hormander_index(l1, l2, k2, k1) == 1);   // swap of the reference pair
  CHECK(hormander_index(k1, k2, l1, l2) == 1);   // swap of the two pairs
  CHECK(hormander_index(l1, l1, k1, k2) == 0);
  CHECK(hormander_index(l1, l2, k1, k1) == 0);

  std::mt19937_64 rng(31);
  for (int n : {1, 2, 3}) {
    for (int rep = 0; rep < 15; ++rep) {
      auto a1 = random_lagrangian(n, rng), a2 = random_lagrangian(n, rng),
           a3 = random_lagrangian(n, rng), r1 = random_lagrangian(n, rng),
           r2 = random_lagrangian(n, rng);
      // concatenation in the moving pair
      int s12 = hormander_index(a1, a2, r1, r2);
      int s23 = hormander_index(a2, a3, r1, r2);
      int s13 = hormander_index(a1, a3, r1, r2);
      CHECK(s12 + s23 == s13);
      CHECK(hormander_index(a1, a2, r2, r1) == -s12);
    }
  }
}

TEST_CASE("hamiltonian crossing form picks out the kernel block") {
  auto plane = dirichlet_plane(2);
  Mat refq = Mat::Zero(4, 2);
  refq(0, 0) = 1.0;  // shares only the first momentum direction with the plane
  refq(3, 1) = 1.0;
  auto ref = LagrangianFrame::from_columns(refq);
  Vec d(4);
  d << 2.0, 3.0, 5.0, 7.0;
  auto cf = crossing_form_hamiltonian(d.asDiagonal(), plane, ref, 1.5);
  CHECK(cf.tau == 1.5);
  REQUIRE(cf.kernel_basis.cols() == 1);
  CHECK(std::abs(cf.kernel_basis(0, 0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cf.form.gram(0, 0) == doctest::Approx(2.0).epsilon(1e-10));

  auto away = LagrangianFrame::from_columns([] {
    Mat q = Mat::Zero(4, 2);
    q(2, 0) = 1.0;
    q(3, 1) = 1.0;
    return q;
  }());
  CHECK(code_of([&] { crossing_form_hamiltonian(d.asDiagonal(), plane, away, 0.0); }) ==
        ErrorCode::EmptyKernel);
}

TEST_CASE("fd form provider reproduces the analytic crossing form") {
  FrameRefiner path = [](double t) { return rotation(t); };
  auto provider = fd_form_provider(path);
  Mat kernel(2, 1);
  kernel << 0.0, 1.0;  // the crossing direction at t = pi/2 against span(0,1)
  QuadraticForm q = provider(M_PI / 2, kernel);
  CHECK(q.gram(0, 0) == doctest::Approx(1.0).epsilon(1e-6));  // csc^2(pi/2)
  // in-plane vector of length s at any base point: the graph form gives s^2
  Mat k2(2, 1);
  k2 << std::cos(M_PI / 3), std::sin(M_PI / 3);
  QuadraticForm q2 = provider(M_PI / 3, Mat(k2 * std::sqrt(2.0)));
  CHECK(q2.gram(0, 0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("index of the rotating line") {
  auto ref = line(0, 1);
  FrameRefiner refiner = [](double t) { return rotation(t); };
  auto form = fd_form_provider(refiner);

  auto run = [&](double a, double b, int npts, bool with_refiner) {
    auto taus = linspace(a, b, npts);
    std::vector<LagrangianFrame> frames;
    for (double t : taus) frames.push_back(rotation(t));
    MaslovOptions opts;
    if (with_refiner) opts.refiner = refiner;
    return maslov_index(taus, frames, ref, form, opts);
  };

  // interior crossing at pi/2, on the grid (odd count) and off it (even count)
  auto on_grid = run(M_PI / 4, 3 * M_PI / 4, 101, false);
  CHECK(on_grid.index == 1);
  REQUIRE(on_grid.crossings.size() == 1);
  CHECK(on_grid.crossings[0].multiplicity == 1);
  CHECK(on_grid.crossings[0].inertia.positive == 1);

  auto off_grid = run(M_PI / 4, 3 * M_PI / 4, 100, true);
  CHECK(off_grid.index == 1);
  REQUIRE(off_grid.crossings.size() == 1);
  CHECK(off_grid.crossings[0].tau == doctest::Approx(M_PI / 2).epsilon(1e-7));

  // endpoint conventions: left end counts m+, right end counts m-
  CHECK(run(M_PI / 2, 3 * M_PI / 4, 64, true).index == 1);
  CHECK(run(M_PI / 4, M_PI / 2, 64, true).index == 0);
  CHECK(run(0.1, 1.2, 50, true).index == 0);
}

TEST_CASE("reversed path flips the interior contribution") {
  auto ref = line(0, 1);
  FrameRefiner refiner = [](double t) { return rotation(M_PI - t); };
  auto taus = linspace(M_PI / 4, 3 * M_PI / 4, 100);
  std::vector<LagrangianFrame> frames;
  for (double t : taus) frames.push_back(rotation(M_PI - t));
  MaslovOptions opts;
  opts.refiner = refiner;
  auto res = maslov_index(taus, frames, ref, fd_form_provider(refiner), opts);
  CHECK(res.index == -1);
}

TEST_CASE("double crossing counts with multiplicity") {
  FrameRefiner refiner = [](double t) {
    Mat q = Mat::Zero(4, 2);
    q(0, 0) = std::cos(t);
    q(2, 0) = std::sin(t);
    q(1, 1) = std::cos(t);
    q(3, 1) = std::sin(t);
    return LagrangianFrame::from_columns(q);
  };
  auto taus = linspace(-M_PI / 4, M_PI / 4, 101);
  std::vector<LagrangianFrame> frames;
  for (double t : taus) frames.push_back(refiner(t));
  MaslovOptions opts;
  opts.refiner = refiner;
  auto res = maslov_index(taus, frames, dirichlet_plane(2), fd_form_provider(refiner), opts);
  CHECK(res.index == 2);
  REQUIRE(res.crossings.size() == 1);
  CHECK(res.crossings[0].multiplicity == 2);
  CHECK(res.crossings[0].inertia == Inertia{2, 0, 0});
}

TEST_CASE("degenerate and unresolved configurations are reported") {
  auto ref = line(1, 0);

  // cubically tangent approach: the crossing form derivative vanishes
  FrameRefiner cubic = [](double t) { return rotation(t * t * t); };
  auto taus = linspace(-0.5, 0.5, 5);
  std::vector<LagrangianFrame> frames;
  for (double t : taus) frames.push_back(cubic(t));
  CHECK(code_of([&] {
          maslov_index(taus, frames, ref, fd_form_provider(cubic), {});
        }) == ErrorCode::NonRegularCrossing);

  // a path glued to the reference cannot be resolved
  std::vector<LagrangianFrame> flat(8, ref);
  CHECK(code_of([&] {
          maslov_index(linspace(0, 1, 8), flat, ref, fd_form_provider(cubic), {});
        }) == ErrorCode::UnresolvedCluster);

  // near miss: without a refiner the dip is ambiguous, with one it resolves
  auto miss = [](double t) { return rotation(M_PI / 2 - 3e-3 - 0.5 * t * t); };
  auto mtaus = linspace(-1.0, 1.0, 41);
  std::vector<LagrangianFrame> mframes;
  for (double t : mtaus) mframes.push_back(miss(t));
  auto mref = line(0, 1);
  CHECK(code_of([&] {
          maslov_index(mtaus, mframes, mref, fd_form_provider(miss), {});
        }) == ErrorCode::UnresolvedCluster);
  MaslovOptions with;
  with.refiner = miss;
  auto resolved = maslov_index(mtaus, mframes, mref, fd_form_provider(miss), with);
  CHECK(resolved.index == 0);
  CHECK(resolved.crossings.empty());
}

TEST_CASE("discrete spectral flow") {
  std::vector<Mat> ramp;
  for (double t : linspace(-1.0, 1.0, 21)) ramp.push_back(t * Mat::Identity(1, 1));
  CHECK(discrete_spectral_flow(ramp) == 1);

  std::vector<Mat> mixed;
  for (double t : linspace(-1.0, 1.0, 21)) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = t;
    m(1, 1) = t - 3.0;
    mixed.push_back(m);
  }
  CHECK(discrete_spectral_flow(mixed) == 1);  // the second eigenvalue stays negative

  std::vector<Mat> bad{Mat::Zero(2, 2), Mat::Identity(2, 2)};
  CHECK(code_of([&] { discrete_spectral_flow(bad); }) == ErrorCode::DegenerateEndpoint);

  std::vector<Mat> constant(5, -2.0 * Mat::Identity(3, 3));
  CHECK(discrete_spectral_flow(constant) == 0);
}
