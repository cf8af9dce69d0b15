#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "core/oracle.hpp"

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

SturmLiouvilleProblem scalar_problem(CoefficientPath r) {
  return SturmLiouvilleProblem(scalar_const(1.0), scalar_const(0.0), std::move(r));
}

SturmLiouvilleProblem well_problem(double kappa, double depth) {
  return scalar_problem(CoefficientPath::scalar_preset("sech2_well", {kappa, depth, 1.0}));
}

}  // namespace

TEST_CASE("hand-checked two-point assembly") {
  auto p = scalar_problem(scalar_const(0.0));
  DiscretizationConfig cfg;
  cfg.t_o = 1.5;
  cfg.n_interior = 2;
  OracleAssembly out = assemble_discrete(p, cfg);
  CHECK(out.h == doctest::Approx(1.0));

  Mat a = out.stiffness.to_dense();
  CHECK(a(0, 0) == doctest::Approx(2.0));
  CHECK(a(1, 1) == doctest::Approx(2.0));
  CHECK(a(0, 1) == doctest::Approx(-1.0));
  CHECK(a(1, 0) == doctest::Approx(-1.0));

  Mat m = out.mass.to_dense();
  CHECK(m(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(m(0, 1) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("constant shift of the potential adds the mass matrix") {
  DiscretizationConfig cfg;
  cfg.t_o = 8.0;
  cfg.n_interior = 40;
  auto base = well_problem(0.5, 6.0);
  auto shifted = well_problem(0.5 + 2.25, 6.0);
  OracleAssembly ab = assemble_discrete(base, cfg);
  OracleAssembly as = assemble_discrete(shifted, cfg);
  Mat expect = ab.stiffness.to_dense() + 2.25 * ab.mass.to_dense();
  CHECK((as.stiffness.to_dense() - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("direct sums assemble block-interleaved") {
  auto a = well_problem(2.0, 6.0);
  auto b = scalar_problem(scalar_const(1.0));
  auto sum = problem_direct_sum(a, b);
  DiscretizationConfig cfg;
  cfg.t_o = 5.0;
  cfg.n_interior = 7;
  Mat da = assemble_discrete(a, cfg).stiffness.to_dense();
  Mat db = assemble_discrete(b, cfg).stiffness.to_dense();
  Mat ds = assemble_discrete(sum, cfg).stiffness.to_dense();
  for (int i = 0; i < cfg.n_interior; ++i)
    for (int j = 0; j < cfg.n_interior; ++j) {
      CHECK(ds(2 * i, 2 * j) == doctest::Approx(da(i, j)).epsilon(1e-14));
      CHECK(ds(2 * i + 1, 2 * j + 1) == doctest::Approx(db(i, j)).epsilon(1e-14));
      CHECK(ds(2 * i, 2 * j + 1) == 0.0);
    }
}

TEST_CASE("negative counts for the reflectionless battery") {
  DiscretizationConfig cfg;
  cfg.n_interior = 1000;

  SUBCASE("positive constant potential has none") {
    OracleCount c = negative_count(scalar_problem(scalar_const(1.0)), cfg);
    CHECK(c.count == 0);
    CHECK(c.level_counts.size() == 3);
    CHECK(c.level_points.back() == 4000);
  }

  SUBCASE("well with cutoff between the two bound states") {
    OracleCount c = negative_count(well_problem(2.0, 6.0), cfg);
    CHECK(c.count == 1);
  }

  SUBCASE("well with cutoff below both bound states") {
    OracleCount c = negative_count(well_problem(0.5, 6.0), cfg);
    CHECK(c.count == 2);
  }

  SUBCASE("direct sum adds the counts") {
    auto sum = problem_direct_sum(well_problem(0.5, 6.0), well_problem(2.0, 6.0));
    OracleCount c = negative_count(sum, cfg);
    CHECK(c.count == 3);
  }
}

TEST_CASE("zero-energy bound state trips the sentinel") {
  DiscretizationConfig cfg;
  cfg.n_interior = 1000;
  auto p = well_problem(1.0, 6.0);
  CHECK(code_of([&] { negative_count(p, cfg); }) == ErrorCode::UnstableCount);

  SUBCASE("deflated count skips the kernel") {
    OracleCount c = negative_count_deflated(p, cfg);
    CHECK(c.count == 1);
  }

  SUBCASE("deflation floor must be negative") {
    CHECK(code_of([&] { negative_count_deflated(p, cfg, 0.5); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("rough spectrum matches closed forms") {
  DiscretizationConfig cfg;
  cfg.n_interior = 1000;

  SUBCASE("box correction on the constant problem") {
    Vec v = rough_spectrum(scalar_problem(scalar_const(1.0)), cfg, 3);
    double box = 1.0 + std::pow(M_PI / (2.0 * cfg.t_o), 2);
    CHECK(v(0) == doctest::Approx(box).epsilon(1e-4));
    CHECK(v(0) < v(1));
    CHECK(v(1) < v(2));
  }

  SUBCASE("deepest bound state of the two-state well") {
    Vec v = rough_spectrum(well_problem(2.0, 6.0), cfg, 2);
    CHECK(std::abs(v(0) - (-2.0)) < 1e-3);
    CHECK(std::abs(v(1) - 1.0) < 2e-2);  // edge of the continuum, box-limited
  }

  SUBCASE("count limits") {
    auto p = scalar_problem(scalar_const(1.0));
    CHECK(code_of([&] { rough_spectrum(p, cfg, 21); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { rough_spectrum(p, cfg, 0); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("config validation") {
  auto p = scalar_problem(scalar_const(1.0));
  DiscretizationConfig cfg;
  cfg.n_interior = 50;
  CHECK(code_of([&] { negative_count(p, cfg); }) == ErrorCode::InvalidArgument);
  cfg.n_interior = 100;
  cfg.t_o = -1.0;
  CHECK(code_of([&] { negative_count(p, cfg); }) == ErrorCode::InvalidArgument);
}
