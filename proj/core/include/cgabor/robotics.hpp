#pragma once

#include <vector>

#include "cgabor/gabor.hpp"
#include "cgabor/signal.hpp"

namespace cgabor {

struct ArmSpec {
  Vec lengths;  // link lengths, all positive
  int joints() const { return static_cast<int>(lengths.size()); }
};

// Flat torus T^n with unit radii.
RiemannianChart arm_config_space(const ArmSpec& arm);

enum class WorkspaceMode { linear_sum, forward_kinematics };

// linear_sum: (sum_k l_k theta_k, 0). forward_kinematics: planar arm tip position.
Eigen::Vector2d workspace_map(const ArmSpec& arm, const Vec& theta,
                              WorkspaceMode mode = WorkspaceMode::forward_kinematics);

enum class ConstraintKind { indicator, band, grid };

struct ConstraintDensity {
  SignalOnB signal;          // unnormalized, non-negative
  double normalization = 0;  // 1 / mass
  ConstraintKind kind = ConstraintKind::indicator;
};

// Integral of f against the chart volume. n <= 2 uses nested adaptive Gauss-Kronrod on
// 64 panels per axis, larger n a periodic tensor rule with `nodes` points per axis.
double integrate_on_chart(const RiemannianChart& chart, const SignalOnB& f, int nodes = 48,
                          double budget = kDefaultBudget);

// Measures the mass by quadrature; zero mass raises degenerate_constraint.
ConstraintDensity make_constraint(const RiemannianChart& chart, SignalOnB f, ConstraintKind kind);

// Indicator of the band |theta_1 + theta_2| < width / sqrt(2) (mod 2 pi) on T^2,
// i.e. width `width` around the anti-diagonal theta_1 = -theta_2. Mass 2 sqrt(2) pi width.
ConstraintDensity anti_diagonal_band(double width);

SignalOnB constraint_to_signal(const ConstraintDensity& c);

// `count` probes alternating between the two edges of the anti-diagonal band.
std::vector<Vec> band_edge_probes(double width, int count = 16);

struct ProbeResult {
  Vec probe;
  Vec normal;
  double contrast = 0;
  double magnitude_ratio = 0;
  bool no_boundary = false;
};

// One detection per probe, run in parallel; results keep probe order.
std::vector<ProbeResult> boundary_map_pipeline(const RiemannianChart& chart,
                                               const ConstraintDensity& c,
                                               const std::vector<Vec>& probes,
                                               const WindowSpec& spec,
                                               const DetectionParams& params = {});

}  // namespace cgabor
