#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "core/flows.hpp"

using namespace maslov;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

CoefficientPath scalar_const(double v) {
  return CoefficientPath::scalar_preset("constant", {v});
}

SturmLiouvilleProblem well_problem(double kappa, double depth) {
  return SturmLiouvilleProblem(scalar_const(1.0), scalar_const(0.0),
                               CoefficientPath::scalar_preset("sech2_well", {kappa, depth, 1.0}));
}

}  // namespace

TEST_CASE("truncation for constant coefficients clamps to T_min") {
  auto prob = SturmLiouvilleProblem(scalar_const(1.0), scalar_const(0.0), scalar_const(1.0));
  auto trunc = select_truncation(prob);
  CHECK(trunc.t_neg == -20.0);
  CHECK(trunc.t_pos == 20.0);
  CHECK(trunc.settle_neg == 0.0);
  CHECK(trunc.settle_pos == 0.0);
  CHECK(trunc.clamped_neg);
  CHECK(trunc.clamped_pos);
  CHECK(trunc.warnings.size() == 2);
}

TEST_CASE("truncation settle point matches the analytic decay of the well") {
  auto prob = well_problem(2.0, 6.0);
  auto trunc = select_truncation(prob);
  // 6 sech^2(t) <= 1e-8 from t = acosh(sqrt(6e8)) on
  double analytic = std::acosh(std::sqrt(6e8));
  CHECK(trunc.settle_pos == doctest::Approx(analytic).epsilon(0.01));
  CHECK(trunc.settle_neg == doctest::Approx(-analytic).epsilon(0.01));
  CHECK(trunc.t_pos == 20.0);  // still clamped up to T_min
  CHECK(trunc.t_neg == -20.0);
  CHECK(trunc.clamped_pos);
}

TEST_CASE("truncation failures") {
  // interpolant so slow it has not settled by T_max
  auto slow = SturmLiouvilleProblem(scalar_const(1.0), scalar_const(0.0),
                                    CoefficientPath::scalar_preset("tanh_step", {1.0, 2.0, 0.001}));
  CHECK(code_of([&] { select_truncation(slow); }) == ErrorCode::NoDecay);

  // tabulated data still varying at the table edge; beyond it the path snaps
  // to the limit, which must not be mistaken for decay
  std::vector<double> grid;
  std::vector<Mat> values;
  for (int i = 0; i <= 100; ++i) {
    double t = -5.0 + 10.0 * i / 100;
    grid.push_back(t);
    values.push_back(Mat::Constant(1, 1, 2.0 + std::sin(t)));
  }
  auto table = CoefficientPath::tabulated(grid, values, Mat::Constant(1, 1, 2.0),
                                          Mat::Constant(1, 1, 2.0));
  auto varying = SturmLiouvilleProblem(scalar_const(1.0), scalar_const(0.0), table);
  CHECK(code_of([&] { select_truncation(varying); }) == ErrorCode::NoDecay);
}

TEST_CASE("constant invariant subspace stays put under propagation") {
  auto prob = SturmLiouvilleProblem(scalar_const(1.0), scalar_const(0.0), scalar_const(1.0));
  const auto& asym = prob.asymptotics();
  FramePath path = propagate_frame(prob, asym.unstable_minus, 0.0, 7.0);
  CHECK(path.size() == 701);
  CHECK(path.grid.front() == 0.0);
  CHECK(path.grid.back() == 7.0);
  Mat f0 = asym.unstable_minus.columns();
  double worst = 0.0, worst_iso = 0.0;
  for (size_t i = 0; i < path.size(); ++i) {
    worst = std::max(worst, gap_distance(path.frames[i], f0));
    worst_iso = std::max(worst_iso, isotropy_residual(path.frames[i]));
  }
  CHECK(worst < 1e-8);
  CHECK(worst_iso < 1e-8);

  CHECK(code_of([&] { propagate_frame(prob, asym.unstable_minus, 1.0, 1.0); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("round trip returns to the initial span") {
  auto prob = well_problem(2.0, 6.0);
  std::mt19937_64 rng(71);
  LagrangianFrame f0 = random_lagrangian(1, rng);
  FramePath fwd = propagate_frame(prob, f0, -2.0, 2.0);
  LagrangianFrame at2 = LagrangianFrame::from_orthonormal(fwd.frames.back());
  FramePath back = propagate_frame(prob, at2, 2.0, -2.0);
  // back path is ascending, so the frame at -2 is the first entry
  CHECK(back.grid.front() == doctest::Approx(-2.0));
  CHECK(gap_distance(back.frames.front(), f0.columns()) < 1e-6);
}

TEST_CASE("unstable path ends near the limiting unstable spaces") {
  auto prob = well_problem(2.0, 6.0);
  FramePath path = unstable_path(prob);
  CHECK(path.grid.front() == doctest::Approx(-20.0));
  CHECK(path.grid.back() == doctest::Approx(20.0));
  CHECK(path.init_error == doctest::Approx(1e-8 / std::sqrt(2.0)));
  CHECK(path.provenance.find("unstable") != std::string::npos);

  const auto& asym = prob.asymptotics();
  CHECK(gap_distance(path.frames.front(), asym.unstable_minus.columns()) < 1e-12);
  // nondegenerate problem: E^u is attracted to V^+(JB(+inf)) going forward
  CHECK(gap_distance(path.frames.back(), asym.unstable_plus.columns()) < 1e-7);
}

TEST_CASE("gauge randomization leaves the subspace path unchanged") {
  auto prob = well_problem(2.0, 6.0);
  PropagationConfig cfg;
  cfg.sample_dt = 0.05;
  FramePath plain = unstable_path(prob, cfg);
  FramePath gauged = unstable_path(prob, cfg, 12345u);
  REQUIRE(plain.size() == gauged.size());
  double worst = 0.0;
  for (size_t i = 0; i < plain.size(); ++i)
    worst = std::max(worst, gap_distance(plain.frames[i], gauged.frames[i]));
  CHECK(worst < 1e-8);
}

TEST_CASE("stable path mirrors the unstable one for even coefficients") {
  auto prob = well_problem(2.0, 6.0);
  PropagationConfig cfg;
  cfg.sample_dt = 0.05;
  FramePath up = unstable_path(prob, cfg);
  FramePath sp = stable_path(prob, cfg);
  REQUIRE(up.size() == sp.size());
  CHECK(sp.grid.front() == doctest::Approx(-20.0));
  CHECK(sp.grid.back() == doctest::Approx(20.0));

  // E^s(tau) = S E^u(-tau) with S the momentum flip diag(-1, 1)
  Mat flip(2, 2);
  flip << -1.0, 0.0, 0.0, 1.0;
  const size_t last = up.size() - 1;
  double worst = 0.0;
  for (size_t k = 0; k < sp.size(); ++k) {
    CHECK(sp.grid[k] == doctest::Approx(-up.grid[last - k]));
    worst = std::max(worst, gap_distance(sp.frames[k], Mat(flip * up.frames[last - k])));
  }
  CHECK(worst < 1e-6);

  // kernel-free problem: stable and unstable bundles are transversal at 0
  size_t mid = up.size() / 2;
  CHECK(up.grid[mid] == doctest::Approx(0.0));
  CHECK(intersection_dim(up.frames[mid], sp.frames[mid]) == 0);
}

TEST_CASE("direct sum propagates as the interleaved product") {
  auto a = well_problem(2.0, 6.0);
  auto b = SturmLiouvilleProblem(scalar_const(2.0), scalar_const(1.0), scalar_const(1.0));
  auto sum = problem_direct_sum(a, b);

  PropagationConfig cfg;
  cfg.sample_dt = 0.05;
  auto window = std::make_pair(-20.0, 20.0);
  FramePath pa = unstable_path(a, cfg, {}, window);
  FramePath pb = unstable_path(b, cfg, {}, window);
  FramePath ps = unstable_path(sum, cfg, {}, window);
  REQUIRE(pa.size() == ps.size());

  Mat e = direct_sum_embedding(1, 1);
  double worst = 0.0;
  for (size_t i = 0; i < ps.size(); i += 25) {
    Mat cat = Mat::Zero(4, 2);
    cat.block(0, 0, 2, 1) = pa.frames[i];
    cat.block(2, 1, 2, 1) = pb.frames[i];
    worst = std::max(worst, gap_distance(ps.frames[i], thin_qr(e * cat)));
  }
  CHECK(worst < 1e-6);
}
