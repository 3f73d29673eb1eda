#include <gtest/gtest.h>

#include <random>

#include "cgabor/error.hpp"
#include "cgabor/manifold.hpp"
#include "oracles.hpp"

using namespace cgabor;
using oracle::pi;

TEST(Metric, FlatTorusIsDiagonalOfSquaredRadii) {
  const auto chart = RiemannianChart::flat_torus(Eigen::Vector2d(1, 2));
  const Mat g = metric_at(chart, {Eigen::Vector2d(0.3, 5.0)});
  EXPECT_EQ(g, Eigen::Vector2d(1, 4).asDiagonal().toDenseMatrix());
}

TEST(Metric, SphereEquatorIsIdentity) {
  const auto chart = RiemannianChart::round_sphere(1.0);
  const Mat g = metric_at(chart, {Eigen::Vector2d(pi / 2, 1.0)});
  EXPECT_NEAR((g - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(Metric, NegativeEigenvalueIsDegenerate) {
  const auto chart = RiemannianChart::generic(
      Vec::Zero(2), Vec::Ones(2), {false, false},
      [](const Vec&) { return Eigen::Vector2d(1, -1).asDiagonal().toDenseMatrix(); }, 0.5);
  try {
    metric_at(chart, {Eigen::Vector2d(0.5, 0.5)});
    FAIL() << "expected metric-degenerate";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::metric_degenerate);
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos) << e.what();
  }
}

TEST(Indices, RaiseThenLowerIsIdentity) {
  std::mt19937_64 rng(1);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const Mat G = oracle::random_spd(3, rng);
    const auto chart = RiemannianChart::generic(Vec::Zero(3), Vec::Ones(3), {true, true, true},
                                                [G](const Vec&) { return G; }, 0.1);
    const ManifoldPoint b{Vec::Constant(3, 0.5)};
    const Vec c = oracle::random_unit(3, rng);
    const Vec back = lower_index(chart, raise_index(chart, {b, c})).components;
    worst = std::max(worst, (back - c).cwiseAbs().maxCoeff());
    EXPECT_GE(c.dot(G.inverse() * c), 0.0);
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(ExpMap, FlatTorusTranslatesModuloPeriod) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(2));
  const auto x = exp_map(chart, {Eigen::Vector2d(pi, pi)}, Eigen::Vector2d(pi / 2, 0));
  EXPECT_NEAR(x.coords(0), 3 * pi / 2, 1e-15);
  EXPECT_NEAR(x.coords(1), pi, 1e-15);
  const auto wrapped = exp_map(chart, {Eigen::Vector2d(pi, pi)}, Eigen::Vector2d(3 * pi / 2, 0));
  EXPECT_NEAR(wrapped.coords(0), pi / 2, 1e-14);
}

TEST(ExpMap, ZeroVectorIsIdentityOnEveryChart) {
  const Vec b = Eigen::Vector2d(0.7, 1.3);
  for (const auto& chart : {RiemannianChart::flat_torus(Vec::Ones(2)),
                            RiemannianChart::round_sphere(1.0), oracle::stereo_chart(6.0)}) {
    EXPECT_EQ(exp_map(chart, {b}, Vec::Zero(2)).coords, b);
  }
}

TEST(ExpMap, SphereNorthPoleToEquator) {
  // Closed form in the built-in chart.
  const auto sphere = RiemannianChart::round_sphere(1.0);
  const auto x = exp_map(sphere, {Eigen::Vector2d(0, 0)}, Eigen::Vector2d(pi / 2, 0));
  EXPECT_NEAR(x.coords(0), pi / 2, 1e-12);
  EXPECT_NEAR(x.coords(1), 0, 1e-12);
  // RK4 in the stereographic chart, where the north pole is a regular point: |V|_g = pi/2.
  const auto stereo = oracle::stereo_chart(6.0);
  const auto y = exp_map(stereo, {Vec::Zero(2)}, Eigen::Vector2d(pi / 4, 0));
  const Eigen::Vector3d P = oracle::stereo_embed(y.coords);
  EXPECT_LT((P - Eigen::Vector3d(1, 0, 0)).norm(), 1e-6);
}

TEST(ExpMap, GenericIntegratorLeavingBoxRaisesChartExit) {
  const auto stereo = oracle::stereo_chart(1.0);
  try {
    exp_map(stereo, {Vec::Zero(2)}, Eigen::Vector2d(1.4, 0));
    FAIL() << "expected chart-exit";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::chart_exit);
  }
}

TEST(ExpMap, FlatAdditivity) {
  const auto chart = RiemannianChart::flat_torus(Eigen::Vector2d(1, 2));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-7, 7), pos(0, 2 * pi);
  for (int k = 0; k < 200; ++k) {
    const ManifoldPoint b{Eigen::Vector2d(pos(rng), pos(rng))};
    const Vec V = Eigen::Vector2d(u(rng), u(rng)), W = Eigen::Vector2d(u(rng), u(rng));
    const Vec lhs = exp_map(chart, exp_map(chart, b, V), W).coords;
    const Vec rhs = exp_map(chart, b, V + W).coords;
    for (int i = 0; i < 2; ++i) {
      double d = std::abs(lhs(i) - rhs(i));
      d = std::min(d, 2 * pi - d);  // representatives on either side of the seam
      EXPECT_LT(d, 1e-12);
    }
  }
  // Dyadic inputs leave no rounding, so the two sides agree bit for bit.
  const ManifoldPoint b{Eigen::Vector2d(0.5, 1.25)};
  const Vec V = Eigen::Vector2d(0.75, -0.125), W = Eigen::Vector2d(1.5, 0.25);
  EXPECT_EQ(exp_map(chart, exp_map(chart, b, V), W).coords, exp_map(chart, b, V + W).coords);
}

TEST(ExpMap, GeodesicSpeedIsConstant) {
  const auto stereo = oracle::stereo_chart(6.0);
  const Vec x0 = Eigen::Vector2d(0.3, -0.2);
  const Vec V = Eigen::Vector2d(0.5, 0.4);
  const auto path = geodesic_path(stereo, {x0}, V);
  ASSERT_GT(path.size(), 10u);
  const double v0 = std::sqrt(V.dot(oracle::stereo_metric(x0) * V));
  for (const auto& s : path) {
    const double speed = std::sqrt(s.v.dot(oracle::stereo_metric(s.x) * s.v));
    EXPECT_NEAR(speed, v0, 1e-6) << "t=" << s.t;
  }
}

TEST(ExpMap, Rk4MatchesGreatCircleOnStereographicSphere) {
  const auto stereo = oracle::stereo_chart(6.0);
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const auto s = oracle::stereo_arc_sample(rng, 0.9 * pi);
    const double len = std::sqrt(s.V.dot(oracle::stereo_metric(s.x0) * s.V));
    ASSERT_LE(len, 0.9 * pi * (1 + 1e-12));
    const Vec x1 = exp_map(stereo, {s.x0}, s.V).coords;
    worst = std::max(worst, (oracle::stereo_embed(x1) - oracle::stereo_exp_closed_form(s.x0, s.V)).norm());
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(InjectivityRadius, BuiltInsAndGeneric) {
  EXPECT_DOUBLE_EQ(injectivity_radius(RiemannianChart::flat_torus(Vec::Ones(2)), {Vec::Zero(2)}),
                   pi);
  EXPECT_DOUBLE_EQ(injectivity_radius(RiemannianChart::round_sphere(2.0), {Vec::Ones(2)}), 2 * pi);
  const auto g = RiemannianChart::generic(Vec::Zero(1), Vec::Ones(1), {true},
                                          [](const Vec&) { return Mat::Identity(1, 1); }, 0.5);
  EXPECT_DOUBLE_EQ(injectivity_radius(g, {Vec::Zero(1)}), 0.5);
}

TEST(InjectivityRadius, FlatTorusMatchesShortestClosedGeodesic) {
  // Half the length of the shortest nonzero lattice translate, brute force.
  const Vec r = Eigen::Vector2d(1.5, 0.8);
  double shortest = 1e300;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      if (a || b) shortest = std::min(shortest, std::hypot(2 * pi * r(0) * a, 2 * pi * r(1) * b));
  EXPECT_NEAR(injectivity_radius(RiemannianChart::flat_torus(r), {Vec::Zero(2)}), shortest / 2,
              1e-12);
}

TEST(InjectivityRadius, GenericWithoutConstantIsMissingParameter) {
  const auto g = RiemannianChart::generic(Vec::Zero(1), Vec::Ones(1), {true},
                                          [](const Vec&) { return Mat::Identity(1, 1); });
  try {
    injectivity_radius(g, {Vec::Zero(1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_parameter);
  }
}

TEST(VolumeDensity, ClosedFormsAndCofactorOracle) {
  EXPECT_DOUBLE_EQ(
      volume_density(RiemannianChart::flat_torus(Eigen::Vector2d(1, 2)), {Vec::Zero(2)}), 2.0);
  EXPECT_NEAR(volume_density(RiemannianChart::round_sphere(1.0), {Eigen::Vector2d(pi / 2, 0)}), 1.0,
              1e-15);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const Mat G = oracle::random_spd(4, rng);
    const auto chart = RiemannianChart::generic(Vec::Zero(4), Vec::Ones(4), {true, true, true, true},
                                                [G](const Vec&) { return G; }, 0.1);
    const double expected = std::sqrt(oracle::cofactor_det(G));
    EXPECT_NEAR(volume_density(chart, {Vec::Constant(4, 0.5)}), expected, 1e-12 * expected);
  }
}

TEST(Reduce, PeriodicAxesLandInBox) {
  const auto chart = RiemannianChart::flat_torus(Vec::Ones(2));
  const Vec x = reduce(chart, Eigen::Vector2d(-0.5, 13.0)).coords;
  EXPECT_GE(x(0), 0.0);
  EXPECT_LT(x(0), 2 * pi);
  EXPECT_NEAR(x(0), 2 * pi - 0.5, 1e-14);
  EXPECT_NEAR(x(1), 13.0 - 4 * pi, 1e-14);
}
