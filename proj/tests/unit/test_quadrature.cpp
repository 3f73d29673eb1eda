#include <gtest/gtest.h>

#include <cmath>

#include "cgabor/quadrature.hpp"
#include "oracles.hpp"

using namespace cgabor;
using oracle::pi;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto r = gauss_legendre(7, -1.0, 2.0);
  EXPECT_NEAR(r.weights.sum(), 3.0, 1e-14);
  // Degree 13 is the highest exact degree for 7 nodes.
  double q = 0;
  for (int k = 0; k < 7; ++k) q += r.weights(k) * std::pow(r.nodes(k), 13);
  EXPECT_NEAR(q, (std::pow(2.0, 14) - 1.0) / 14.0, 1e-9);
  for (int k = 1; k < 7; ++k) EXPECT_LT(r.nodes(k - 1), r.nodes(k));
}

TEST(GaussLegendre, OddAndEvenCountsSymmetric) {
  for (int N : {1, 2, 31, 61}) {
    const auto r = gauss_legendre(N, -3.0, 3.0);
    for (int k = 0; k < N; ++k) {
      EXPECT_NEAR(r.nodes(k), -r.nodes(N - 1 - k), 1e-13);
      EXPECT_GT(r.weights(k), 0);
    }
  }
}

TEST(PeriodicTrapezoid, SpectralOnTrigPolynomials) {
  const auto r = periodic_trapezoid(16, 0, 2 * pi);
  double q = 0;
  for (int k = 0; k < 16; ++k) q += r.weights(k) * std::pow(std::cos(r.nodes(k)), 6);
  EXPECT_NEAR(q, oracle::integrate([](double t) { return std::pow(std::cos(t), 6); }, 0, 2 * pi),
              1e-13);
}

TEST(TensorGrid, LastAxisFastestAndWeightsMultiply) {
  TensorGrid g({gauss_legendre(3, 0, 1), gauss_legendre(4, -1, 1)});
  EXPECT_EQ(g.size(), 12);
  EXPECT_EQ(g.unflatten(5), (std::vector<int>{1, 1}));
  EXPECT_DOUBLE_EQ(g.node(5)(1), g.axis(1).nodes(1));
  EXPECT_DOUBLE_EQ(g.weight(5), g.axis(0).weights(1) * g.axis(1).weights(1));
  double sum = 0;
  for (std::int64_t k = 0; k < g.size(); ++k) sum += g.weight(k);
  EXPECT_NEAR(sum, 2.0, 1e-14);
}

TEST(TensorGrid, BudgetExceeded) {
  try {
    TensorGrid g(std::vector<Rule1D>(4, gauss_legendre(61, -1, 1)), 1e6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
  }
}

TEST(SphereRule, WeightsSumToAreaAndPointsAreUnit) {
  for (int n : {2, 3, 4}) {
    const auto s = sphere_rule(n, 50);
    double sum = 0;
    for (size_t k = 0; k < s.points.size(); ++k) {
      sum += s.weights[k];
      EXPECT_NEAR(s.points[k].norm(), 1.0, 1e-14);
    }
    EXPECT_NEAR(sum, unit_sphere_area(n), 1e-12);
  }
  EXPECT_NEAR(unit_sphere_area(2), 2 * pi, 1e-15);
  EXPECT_NEAR(unit_sphere_area(3), 4 * pi, 1e-14);
  const auto s2 = sphere_rule(2, 8);
  EXPECT_NEAR(s2.angles[2], pi / 2, 1e-15);
}

TEST(SphereRule, FibonacciIntegratesQuadraticMoment) {
  const auto s = sphere_rule(3, 2000);
  double q = 0;
  for (size_t k = 0; k < s.points.size(); ++k) q += s.weights[k] * s.points[k](2) * s.points[k](2);
  EXPECT_NEAR(q, 4 * pi / 3, 1e-3);
}
