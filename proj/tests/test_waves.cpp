#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "core/flows.hpp"
#include "core/oracle.hpp"
#include "core/waves.hpp"

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

const double kNagumoSpeed = std::sqrt(2.0) * 0.25;

double nagumo_front(double xi) { return 1.0 / (1.0 + std::exp(xi / std::sqrt(2.0))); }

double nagumo_front_slope(double xi) {
  const double e = std::exp(xi / std::sqrt(2.0));
  return -e / (std::sqrt(2.0) * (1.0 + e) * (1.0 + e));
}

double soliton(double xi) {
  const double s = 1.0 / std::cosh(0.5 * xi);
  return 1.5 * s * s;
}

WaveProfile solved_nagumo() {
  const ReactionSystem sys = ReactionSystem::nagumo(0.25);
  Vec um(1), up(1);
  um << 1.0;
  up << 0.0;
  return solve_front(sys, 0.3, um, up);
}

WaveProfile solved_pulse() {
  const ReactionSystem sys = ReactionSystem::kdv_pulse();
  Vec zero(1);
  zero << 0.0;
  BvpConfig cfg;
  cfg.fix_c = true;
  cfg.template_amp = 1.5;
  return solve_front(sys, 0.0, zero, zero, cfg);
}

}  // namespace

TEST_CASE("equilibrium Hessian test accepts the cubic and quadratic nonlinearities") {
  Vec zero(1), one(1), half(1);
  zero << 0.0;
  one << 1.0;
  half << 0.5;

  const ReactionSystem nag = ReactionSystem::nagumo(0.25);
  CHECK(nag.hess(zero)(0, 0) == doctest::Approx(-0.25));
  CHECK(nag.hess(one)(0, 0) == doctest::Approx(-0.75));
  CHECK(check_H(nag, one, zero));

  const ReactionSystem kdv = ReactionSystem::kdv_pulse();
  CHECK(kdv.hess(zero)(0, 0) == doctest::Approx(-1.0));
  CHECK(check_H(kdv, zero, zero));

  // grad F(u) = u has a positive Hessian, so the weighted limits degenerate
  ReactionSystem bad;
  bad.n = 1;
  bad.grad = [](const Vec& u) { return Vec(u); };
  bad.hess = [](const Vec&) { return Mat(Mat::Identity(1, 1)); };
  CHECK_FALSE(check_H(bad, zero, zero));

  CHECK(code_of([&] { (void)check_H(nag, half, zero); }) == ErrorCode::NotEquilibrium);
}

TEST_CASE("cubic front matches the closed form and travels at the exact speed") {
  const WaveProfile prof = solved_nagumo();
  CHECK(prof.kind == "front");
  CHECK(std::abs(prof.c - kNagumoSpeed) <= 1e-6);
  CHECK(prof.residual_sup <= 1e-8);

  const int m = static_cast<int>(prof.grid.size());
  double werr = 0.0, derr = 0.0;
  for (int j = 0; j < m; ++j) {
    werr = std::max(werr, std::abs(prof.w(0, j) - nagumo_front(prof.grid(j))));
    derr = std::max(derr, std::abs(prof.w_prime(0, j) - nagumo_front_slope(prof.grid(j))));
  }
  CHECK(werr <= 1e-6);
  CHECK(derr <= 1e-6);
  CHECK(std::abs(prof.w(0, 0) - 1.0) <= 1e-6);
  CHECK(std::abs(prof.w(0, m - 1)) <= 1e-6);

  CHECK(critical_points(prof).empty());
}

TEST_CASE("monotone front analysis yields a stable candidate with empty index") {
  const ReactionSystem sys = ReactionSystem::nagumo(0.25);
  const WaveProfile prof = solved_nagumo();

  const SturmLiouvilleProblem p = weighted_problem(sys, prof);
  CHECK(p.r(-100.0)(0, 0) == doctest::Approx(prof.c * prof.c / 4.0 + 0.75));
  CHECK(p.r(100.0)(0, 0) == doctest::Approx(prof.c * prof.c / 4.0 + 0.25));
  CHECK(p.r(0.0)(0, 0) == doctest::Approx(prof.c * prof.c / 4.0 - 0.25).epsilon(1e-4));

  WaveAnalysis an = instability_verdict(sys, prof);
  CHECK(an.h_check);
  CHECK(an.verdict == "stable-candidate");
  CHECK(an.critical_points.empty());
  CHECK(an.morse_lower_bound == 0);
  REQUIRE(an.morse.has_value());
  CHECK(an.morse->index == 0);
  CHECK(an.morse->crossings.empty());
  // the translation mode lies in the bundle, so the tail guard must engage
  CHECK(an.morse->degenerate_tail);
}

TEST_CASE("standing pulse matches the closed form at held speed") {
  const WaveProfile prof = solved_pulse();
  CHECK(prof.kind == "pulse");
  CHECK(prof.c == 0.0);
  CHECK(prof.residual_sup <= 1e-8);

  const int m = static_cast<int>(prof.grid.size());
  double werr = 0.0;
  for (int j = 0; j < m; ++j)
    werr = std::max(werr, std::abs(prof.w(0, j) - soliton(prof.grid(j))));
  CHECK(werr <= 1e-6);

  const std::vector<double> pts = critical_points(prof);
  REQUIRE(pts.size() == 1);
  CHECK(std::abs(pts[0]) <= 1e-8);
}

TEST_CASE("standing pulse analysis certifies instability with matching index") {
  const ReactionSystem sys = ReactionSystem::kdv_pulse();
  const WaveProfile prof = solved_pulse();

  WaveAnalysis an = instability_verdict(sys, prof);
  CHECK(an.verdict == "spectrally-unstable");
  CHECK(an.morse_lower_bound == 1);
  REQUIRE(an.morse.has_value());
  CHECK(an.morse->index == 1);
  CHECK(an.morse->degenerate_tail);
  REQUIRE(an.morse->crossings.size() == 1);
  CHECK(std::abs(an.morse->crossings[0].tau) <= 1e-6);

  // weighted potential equals the reflectionless well with a zero-energy level
  const SturmLiouvilleProblem p = weighted_problem(sys, prof);
  CHECK(p.r(0.0)(0, 0) == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(p.r(200.0)(0, 0) == doctest::Approx(1.0));

  DiscretizationConfig dc;
  const Vec ev = rough_spectrum(p, dc, 2);
  CHECK(std::abs(ev(0) + 1.25) <= 1e-3);
  CHECK(std::abs(ev(1)) <= 2e-3);
}

TEST_CASE("translation mode rides the unstable bundle and marks the critical point") {
  const ReactionSystem sys = ReactionSystem::kdv_pulse();
  const WaveProfile prof = solved_pulse();
  const SturmLiouvilleProblem p = weighted_problem(sys, prof);

  const FramePath path = unstable_path(p);
  const std::vector<Vec> zs = translation_mode_trajectory(sys, prof, path.grid);
  CHECK(kernel_hit_count(path, zs) == 1);

  // at the crest the bottom block vanishes and the top is w'' = -grad F
  const std::vector<Vec> crest = translation_mode_trajectory(sys, prof, {0.0});
  CHECK(std::abs(crest[0](1)) <= 1e-9);
  CHECK(crest[0](0) == doctest::Approx(-0.75).epsilon(1e-6));

  CHECK(code_of([&] { (void)translation_mode_trajectory(sys, prof, {1e9}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("discrete conjugation identity holds for the fitted scheme") {
  const ReactionSystem nag = ReactionSystem::nagumo(0.25);
  const WaveProfile front = solved_nagumo();
  const double dev = weighted_identity_residual(nag, front, 30.0, 3000);
  CHECK(dev <= 1e-8);

  // at zero speed both assemblies coincide up to rounding
  const ReactionSystem kdv = ReactionSystem::kdv_pulse();
  const WaveProfile pulse = solved_pulse();
  CHECK(weighted_identity_residual(kdv, pulse, 20.0, 500) <= 1e-14);
}

TEST_CASE("tabulated scalar nonlinearity reproduces the pulse") {
  const Vec ugrid = Vec::LinSpaced(701, -1.0, 2.5);
  Vec gvals(701);
  for (int i = 0; i < 701; ++i) gvals(i) = ugrid(i) * ugrid(i) - ugrid(i);
  const ReactionSystem sys = ReactionSystem::scalar_tabulated(ugrid, gvals);

  Vec zero(1);
  zero << 0.0;
  CHECK(check_H(sys, zero, zero));

  BvpConfig cfg;
  cfg.fix_c = true;
  cfg.template_amp = 1.5;
  cfg.half_width = 20.0;
  cfg.h = 0.01;
  const WaveProfile prof = solve_front(sys, 0.0, zero, zero, cfg);
  double werr = 0.0;
  for (int j = 0; j < prof.grid.size(); ++j)
    werr = std::max(werr, std::abs(prof.w(0, j) - soliton(prof.grid(j))));
  CHECK(werr <= 1e-5);

  const std::vector<double> pts = critical_points(prof);
  REQUIRE(pts.size() == 1);
  CHECK(std::abs(pts[0]) <= 1e-6);
}

TEST_CASE("solver rejects bad inputs with typed errors") {
  const ReactionSystem nag = ReactionSystem::nagumo(0.25);
  Vec zero(1), one(1), half(1);
  zero << 0.0;
  one << 1.0;
  half << 0.5;

  CHECK(code_of([&] { (void)solve_front(nag, 0.3, half, zero); }) == ErrorCode::NotEquilibrium);

  ReactionSystem bad;
  bad.n = 1;
  bad.grad = [](const Vec& u) { return Vec(u); };
  bad.hess = [](const Vec&) { return Mat(Mat::Identity(1, 1)); };
  CHECK(code_of([&] { (void)solve_front(bad, 0.3, zero, zero); }) ==
        ErrorCode::HypothesisViolation);

  // holding a speed that carries no pulse leaves a nonzero deflation parameter
  const ReactionSystem kdv = ReactionSystem::kdv_pulse();
  BvpConfig cfg;
  cfg.fix_c = true;
  cfg.template_amp = 1.5;
  cfg.half_width = 15.0;
  cfg.h = 0.01;
  CHECK(code_of([&] { (void)solve_front(kdv, 0.4, zero, zero, cfg); }) ==
        ErrorCode::NewtonDivergence);

  // a constant profile has no isolated critical points
  WaveProfile flat;
  flat.c = 0.0;
  flat.grid = Vec::LinSpaced(11, -5.0, 5.0);
  flat.w = Mat::Constant(1, 11, 0.3);
  flat.w_prime = Mat::Zero(1, 11);
  flat.u_minus = flat.u_plus = Vec::Constant(1, 0.3);
  CHECK(code_of([&] { (void)critical_points(flat); }) == ErrorCode::TangentialZero);
}

TEST_CASE("analysis without the index request still renders a verdict") {
  const ReactionSystem sys = ReactionSystem::kdv_pulse();
  const WaveProfile prof = solved_pulse();
  AnalysisConfig cfg;
  cfg.compute_morse = false;
  const WaveAnalysis an = instability_verdict(sys, prof, cfg);
  CHECK(an.verdict == "spectrally-unstable");
  CHECK(an.morse_lower_bound == 1);
  CHECK_FALSE(an.morse.has_value());
}
