#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/linalg.hpp"
#include "core/symplectic.hpp"

using namespace maslov;

namespace {
Mat line_frame(double theta) {
  Mat q(2, 1);
  q << std::cos(theta), std::sin(theta);
  return q;
}
}  // namespace

TEST_CASE("J squares to minus the identity") {
  for (int n : {1, 2, 3, 4}) {
    Mat j = symplectic_J(n);
    CHECK((j * j + Mat::Identity(2 * n, 2 * n)).norm() == 0.0);
    Mat z = Mat::Random(2 * n, 3);
    CHECK((apply_J(z) - j * z).norm() == 0.0);
  }
}

TEST_CASE("omega is the standard symplectic form") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int n : {1, 2, 5}) {
    Vec a(2 * n), b(2 * n), c(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
      a(i) = g(rng);
      b(i) = g(rng);
      c(i) = g(rng);
    }
    CHECK(omega(a, b) == doctest::Approx(-omega(b, a)).epsilon(1e-14));
    CHECK(omega(a, b) + omega(a, c) == doctest::Approx(omega(a, Vec(b + c))).epsilon(1e-12));
    // against the explicit block formula
    double expect = a.head(n).dot(b.tail(n)) - a.tail(n).dot(b.head(n));
    CHECK(omega(a, b) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("frame construction rejects non-isotropic and rank-deficient input") {
  // span{e1, e3} in R^4 carries omega(e1, e3) = 1
  Mat z = Mat::Zero(4, 2);
  z(0, 0) = 1.0;
  z(2, 1) = 1.0;
  CHECK_THROWS_AS(LagrangianFrame::from_columns(z), Error);
  try {
    LagrangianFrame::from_columns(z);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotIsotropic);
  }

  Mat dep(4, 2);
  dep.col(0) = Vec::Ones(4);
  dep.col(1) = 2.0 * Vec::Ones(4);
  try {
    LagrangianFrame::from_columns(dep);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("dirichlet plane") {
  auto d = dirichlet_plane(3);
  CHECK(d.n() == 3);
  CHECK(d.bottom().norm() == 0.0);
  CHECK((d.columns().transpose() * d.columns() - Mat::Identity(3, 3)).norm() == 0.0);
  CHECK(d.isotropy_residual() == 0.0);
}

TEST_CASE("random lagrangian frames are orthonormal and isotropic") {
  std::mt19937_64 rng(42);
  for (int n : {1, 2, 3, 4}) {
    for (int rep = 0; rep < 5; ++rep) {
      auto f = random_lagrangian(n, rng);
      CHECK((f.columns().transpose() * f.columns() - Mat::Identity(n, n)).norm() <= 1e-12);
      CHECK(f.isotropy_residual() <= 1e-12);
    }
  }
}

TEST_CASE("cayley transform produces symplectic matrices") {
  std::mt19937_64 rng(11);
  for (int n : {1, 2, 3}) {
    Mat j = symplectic_J(n);
    for (int rep = 0; rep < 5; ++rep) {
      Mat m = random_symplectic_cayley(n, rng);
      CHECK((m.transpose() * j * m - j).norm() <= 1e-10 * std::max(1.0, m.squaredNorm()));
    }
  }
}

TEST_CASE("gap distance between lines is |sin theta|") {
  CHECK(gap_distance(line_frame(0.0), line_frame(M_PI / 6)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gap_distance(line_frame(0.3), line_frame(0.3)) == doctest::Approx(0.0));
  CHECK(gap_distance(line_frame(0.0), line_frame(M_PI / 2)) == doctest::Approx(1.0));
  // invariant under the antipode
  CHECK(gap_distance(line_frame(0.2), line_frame(0.2 + M_PI)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("intersections via principal angles") {
  Mat a = Mat::Zero(4, 2), b = Mat::Zero(4, 2);
  a.col(0) = Vec::Unit(4, 0);
  a.col(1) = Vec::Unit(4, 1);
  b.col(0) = Vec::Unit(4, 1);
  b.col(1) = Vec::Unit(4, 3);
  CHECK(intersection_dim(a, b) == 1);
  Mat basis = intersection_basis(a, b);
  REQUIRE(basis.cols() == 1);
  CHECK(std::abs(basis.col(0).dot(Vec::Unit(4, 1))) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(intersection_dim(line_frame(0.0), line_frame(M_PI / 2)) == 0);
  CHECK(intersection_dim(line_frame(0.4), line_frame(0.4)) == 1);
  CHECK(intersection_dim(a, a) == 2);
}

TEST_CASE("inertia of small symmetric matrices") {
  Mat s(2, 2);
  s << 0, 1, 1, 0;
  CHECK(eig_inertia(s) == Inertia{1, 0, 1});
  CHECK(eig_inertia(Mat::Zero(3, 3)) == Inertia{0, 3, 0});
  Mat d = Vec::LinSpaced(4, -2.0, 1.0).asDiagonal();  // -2, -1, 0, 1
  CHECK(eig_inertia(d) == Inertia{1, 1, 2});

  QuadraticForm q{s, Mat::Identity(2, 2)};
  CHECK(q.inertia().negative == 1);
  CHECK(q.dim() == 2);
}

TEST_CASE("thin qr with fixed signs is the identity on orthonormal input") {
  std::mt19937_64 rng(3);
  auto f = random_lagrangian(3, rng);
  Mat q = thin_qr(f.columns());
  CHECK((q - f.columns()).norm() <= 1e-13);
  // near an orthonormal frame the factor moves continuously
  Mat q2 = thin_qr(f.columns() + 1e-9 * Mat::Ones(6, 3));
  CHECK((q2 - f.columns()).norm() <= 1e-7);
}

TEST_CASE("orth basis rank detection") {
  Mat m(3, 3);
  m.col(0) = Vec::Unit(3, 0);
  m.col(1) = 2.0 * Vec::Unit(3, 0);
  m.col(2) = Vec::Unit(3, 2);
  Mat b = orth_basis(m);
  CHECK(b.cols() == 2);
  CHECK((b.transpose() * b - Mat::Identity(2, 2)).norm() <= 1e-13);
  CHECK(orth_basis(Mat::Zero(4, 2)).cols() == 0);
}

TEST_CASE("hyperbolic invariant splitting") {
  Mat m(2, 2);
  m << 0, 1, 1, 0;  // eigenvectors (1,1) and (1,-1)
  auto split = hyperbolic_invariant_split(m);
  CHECK(split.gap == doctest::Approx(1.0).epsilon(1e-12));
  Mat vp(2, 1), vn(2, 1);
  vp << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  vn << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  CHECK(gap_distance(split.positive, vp) <= 1e-12);
  CHECK(gap_distance(split.negative, vn) <= 1e-12);

  Mat rot(2, 2);
  rot << 0, -1, 1, 0;  // spectrum on the imaginary axis
  CHECK_THROWS_AS(hyperbolic_invariant_split(rot), Error);

  // conjugated diagonal with known subspaces
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Mat s(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s(i, j) = g(rng);
  s += 4.0 * Mat::Identity(4, 4);  // comfortably invertible
  Vec diag(4);
  diag << 2.0, 1.0, -1.0, -3.0;
  Mat m4 = s * diag.asDiagonal() * s.inverse();
  auto split4 = hyperbolic_invariant_split(m4);
  CHECK(split4.positive.cols() == 2);
  CHECK(split4.negative.cols() == 2);
  CHECK(split4.gap == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(gap_distance(orth_basis(s.leftCols(2)), orth_basis(split4.positive)) <= 1e-9);
  CHECK(gap_distance(orth_basis(s.rightCols(2)), orth_basis(split4.negative)) <= 1e-9);
}

TEST_CASE("banded ldl inertia and sturm counts") {
  SymBand a(2, 1);
  a.set(0, 0, 2.0);
  a.set(1, 1, 2.0);
  a.set(1, 0, -1.0);  // eigenvalues 1 and 3
  SymBand id(2, 0);
  id.set(0, 0, 1.0);
  id.set(1, 1, 1.0);

  CHECK(band_inertia(a) == Inertia{2, 0, 0});
  CHECK(band_count_below(a, id, 0.9) == 0);
  CHECK(band_count_below(a, id, 2.0) == 1);
  CHECK(band_count_below(a, id, 3.5) == 2);

  Vec ev = band_smallest_eigenvalues(a, id, 2);
  CHECK(ev(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ev(1) == doctest::Approx(3.0).epsilon(1e-9));

  SymBand m2(2, 0);
  m2.set(0, 0, 2.0);
  m2.set(1, 1, 2.0);
  Vec gev = band_smallest_eigenvalues(a, m2, 2);
  CHECK(gev(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(gev(1) == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("banded solvers agree with dense eigensolves") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const int n = 40, hb = 3;
  SymBand a(n, hb), id(n, 0);
  for (int j = 0; j < n; ++j) {
    id.set(j, j, 1.0);
    for (int i = j; i <= std::min(n - 1, j + hb); ++i) a.set(i, j, g(rng));
  }
  Mat dense = a.to_dense();
  Eigen::SelfAdjointEigenSolver<Mat> es(dense);

  Inertia bi = band_inertia(a);
  CHECK(bi == eig_inertia(dense, 1e-12));

  Vec lo = band_smallest_eigenvalues(a, id, 5, 1e-11);
  for (int i = 0; i < 5; ++i) CHECK(lo(i) == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-8));

  for (double t : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    int expect = 0;
    for (int i = 0; i < n; ++i)
      if (es.eigenvalues()(i) < t) ++expect;
    CHECK(band_count_below(a, id, t) == expect);
  }
}

TEST_CASE("cubic spline interpolates and differentiates") {
  Vec x(4), y(4);
  x << 0.0, 0.5, 1.3, 2.0;
  for (int i = 0; i < 4; ++i) y(i) = 2.0 * x(i) + 1.0;
  CubicSpline lin(x, y);
  CHECK(lin.eval(0.7) == doctest::Approx(2.4).epsilon(1e-13));
  CHECK(lin.derivative(0.7) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lin.eval(-3.0) == doctest::Approx(1.0));  // clamped
  CHECK(lin.eval(9.0) == doctest::Approx(5.0));

  const int nk = 41;
  Vec xs(nk), ys(nk);
  for (int i = 0; i < nk; ++i) {
    xs(i) = M_PI * i / (nk - 1);
    ys(i) = std::sin(xs(i));
  }
  CubicSpline s(xs, ys);
  for (double t : {0.8, 1.2, 1.9, 2.3}) {
    CHECK(std::abs(s.eval(t) - std::sin(t)) <= 1e-6);
    CHECK(std::abs(s.derivative(t) - std::cos(t)) <= 1e-4);
  }
}

TEST_CASE("scalar searches") {
  auto f = [](double t) { return (t - 1.3) * (t - 1.3) + 0.5; };
  double tmin = golden_min(f, 0.0, 3.0, 1e-10);
  CHECK(tmin == doctest::Approx(1.3).epsilon(1e-7));

  auto gfun = [](double t) { return t * t - 2.0; };
  double root = bisect_sign_change(gfun, 0.0, 2.0, gfun(0.0), gfun(2.0), 1e-12);
  CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}
