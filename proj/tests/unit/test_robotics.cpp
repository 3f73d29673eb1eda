#include <gtest/gtest.h>

#include "cgabor/robotics.hpp"
#include "oracles.hpp"

using namespace cgabor;
using oracle::pi;

TEST(ConfigSpace, FlatTorusOfJointCount) {
  for (int n : {1, 2, 3}) {
    const auto c = arm_config_space({Vec::Ones(n)});
    EXPECT_EQ(c.n, n);
    EXPECT_TRUE(c.is_flat());
    for (int i = 0; i < n; ++i) {
      EXPECT_TRUE(c.periodic[i]);
      EXPECT_NEAR(c.width(i), 2 * pi, 1e-15);
    }
    EXPECT_EQ(metric_at(c, {Vec::Zero(n)}), Mat::Identity(n, n));
  }
  EXPECT_THROW(arm_config_space({Eigen::Vector2d(1, -1)}), Error);
}

TEST(Workspace, ForwardKinematicsAndLiteralFormula) {
  const ArmSpec arm{Eigen::Vector2d(1, 1)};
  const auto stretched = workspace_map(arm, Eigen::Vector2d(0, 0));
  EXPECT_NEAR((stretched - Eigen::Vector2d(2, 0)).norm(), 0, 1e-15);
  const auto folded = workspace_map(arm, Eigen::Vector2d(0, pi));
  EXPECT_NEAR(folded.norm(), 0, 1e-15);
  EXPECT_EQ(workspace_map(arm, Eigen::Vector2d(0, 0), WorkspaceMode::linear_sum), Eigen::Vector2d(0, 0));
  EXPECT_EQ(workspace_map(arm, Eigen::Vector2d(0.5, 0.25), WorkspaceMode::linear_sum),
            Eigen::Vector2d(0.75, 0));
}

TEST(Constraint, IndicatorNormalizesToInverseVolume) {
  const auto chart = arm_config_space({Eigen::Vector2d(1, 1)});
  const auto U = ball_signal(chart, Eigen::Vector2d(pi, pi), 1.0);
  const auto c = make_constraint(chart, U, ConstraintKind::indicator);
  EXPECT_NEAR(c.normalization * pi, 1.0, 1e-6);
  const auto mu = constraint_to_signal(c);
  EXPECT_NEAR(mu({Eigen::Vector2d(pi, pi)}) * pi, 1.0, 1e-6);
  EXPECT_EQ(mu({Eigen::Vector2d(0, 0)}), 0.0);
}

TEST(Constraint, BandIsPositiveInsideAndIntegratesToOne) {
  const auto chart = arm_config_space({Eigen::Vector2d(1, 1)});
  for (double w : {0.3, 0.6}) {
    const auto mu = constraint_to_signal(anti_diagonal_band(w));
    EXPECT_GT(mu({Eigen::Vector2d(1.0, 2 * pi - 1.0)}), 0.0);
    EXPECT_EQ(mu({Eigen::Vector2d(pi / 2, pi / 2)}), 0.0);
    // Independent adaptive quadrature of the normalized density.
    const double total = oracle::integrate2_panels(
        [&](double a, double b) { return mu({Eigen::Vector2d(a, b)}); }, 0, 2 * pi, 50);
    EXPECT_NEAR(total, 1.0, 1e-3);
    const auto measured = make_constraint(chart, anti_diagonal_band(w).signal, ConstraintKind::band);
    EXPECT_NEAR(measured.normalization / anti_diagonal_band(w).normalization, 1.0, 1e-3);
  }
}

TEST(Constraint, ZeroMassIsDegenerate) {
  const auto chart = arm_config_space({Eigen::Vector2d(1, 1)});
  try {
    make_constraint(chart, constant_signal(0.0), ConstraintKind::grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_constraint);
  }
  try {
    constraint_to_signal({constant_signal(1.0), 0.0, ConstraintKind::indicator});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_constraint);
  }
}

TEST(Pipeline, BandEdgeNormalsAtTwoWidths) {
  const auto chart = arm_config_space({Eigen::Vector2d(1, 1)});
  const Vec target = Eigen::Vector2d(1, 1).normalized();
  for (double w : {0.3, 0.6}) {
    const auto probes = band_edge_probes(w);
    ASSERT_EQ(probes.size(), 16u);
    const auto rows = boundary_map_pipeline(chart, anti_diagonal_band(w), probes, WindowSpec::scalar(2, 1.0));
    ASSERT_EQ(rows.size(), probes.size());
    int good = 0;
    for (const auto& r : rows)
      if (!r.no_boundary && oracle::unoriented_angle_deg(r.normal, target) < 5.0) ++good;
    EXPECT_GE(good, 14) << "width " << w;
  }
}

TEST(Pipeline, FarProbeFlaggedAndPeriodicRelabeling) {
  const auto chart = arm_config_space({Eigen::Vector2d(1, 1)});
  const auto band = anti_diagonal_band(0.3);
  const auto spec = WindowSpec::scalar(2, 1.0);
  const auto far = boundary_map_pipeline(chart, band, {Eigen::Vector2d(pi / 2, pi / 2)}, spec);
  EXPECT_TRUE(far[0].no_boundary);
  const Vec p = band_edge_probes(0.3)[3];
  const auto a = boundary_map_pipeline(chart, band, {p}, spec);
  const auto b = boundary_map_pipeline(chart, band, {Vec(p + Eigen::Vector2d(2 * pi, -4 * pi))}, spec);
  // Adding 2 pi k rounds the input, so equality holds to rounding.
  EXPECT_LT((a[0].probe - b[0].probe).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((a[0].normal - b[0].normal).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_TRUE(boundary_map_pipeline(chart, band, {}, spec).empty());
}
