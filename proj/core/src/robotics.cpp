#include "cgabor/robotics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "cgabor/parallel.hpp"

namespace cgabor {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kMassFloor = 1e-14;
}  // namespace

RiemannianChart arm_config_space(const ArmSpec& arm) {
  if (arm.joints() < 1) throw Error(ErrorCode::invalid_argument, "arm needs at least one link");
  if ((arm.lengths.array() <= 0).any())
    throw Error(ErrorCode::invalid_argument, "link lengths must be positive");
  return RiemannianChart::flat_torus(Vec::Ones(arm.joints()));
}

Eigen::Vector2d workspace_map(const ArmSpec& arm, const Vec& theta, WorkspaceMode mode) {
  if (theta.size() != arm.lengths.size())
    throw Error(ErrorCode::shape_mismatch, "joint angle count differs from link count");
  if (mode == WorkspaceMode::linear_sum) return {arm.lengths.dot(theta), 0.0};
  Eigen::Vector2d tip = Eigen::Vector2d::Zero();
  double angle = 0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    angle += theta(k);
    tip += arm.lengths(k) * Eigen::Vector2d(std::cos(angle), std::sin(angle));
  }
  return tip;
}

namespace {

// Adaptive Gauss-Kronrod on equal panels; the panels keep narrow features from
// slipping between the nodes of a single coarse rule.
template <class F>
double panel_integral(F f, double lo, double hi, int panels, unsigned depth, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double h = (hi - lo) / panels;
  double acc = 0;
  for (int k = 0; k < panels; ++k)
    acc += gauss_kronrod<double, 15>::integrate(f, lo + k * h, lo + (k + 1) * h, depth, tol);
  return acc;
}

}  // namespace

double integrate_on_chart(const RiemannianChart& chart, const SignalOnB& f, int nodes,
                          double budget) {
  const int n = chart.n;
  // Flat charts have a constant volume density.
  const double flat_density = chart.is_flat() ? volume_density(chart, {chart.lower}) : 0.0;
  auto density = [&](const Vec& x) {
    const ManifoldPoint b{x};
    const double v = f(b);
    if (v == 0.0) return 0.0;
    return v * (chart.is_flat() ? flat_density : volume_density(chart, b));
  };
  constexpr int panels = 64;
  if (n == 1)
    return panel_integral([&](double t) { return density(Vec::Constant(1, t)); }, chart.lower(0),
                          chart.upper(0), panels, 10, 1e-8);
  if (n == 2) {
    auto inner = [&](double t1) {
      return panel_integral([&](double t2) { return density(Eigen::Vector2d(t1, t2)); },
                            chart.lower(1), chart.upper(1), panels, 14, 1e-9);
    };
    // The inner values carry quadrature noise; the outer tolerance sits just above it.
    return panel_integral(inner, chart.lower(0), chart.upper(0), panels, 4, 1e-5);
  }
  check_tensor_budget(nodes, n, budget);
  std::vector<Rule1D> axes;
  for (int k = 0; k < n; ++k)
    axes.push_back(chart.periodic[k] ? periodic_trapezoid(nodes, chart.lower(k), chart.width(k))
                                     : gauss_legendre(nodes, chart.lower(k), chart.upper(k)));
  const TensorGrid grid(std::move(axes), budget);
  double acc = 0;
  for (std::int64_t k = 0; k < grid.size(); ++k) acc += grid.weight(k) * density(grid.node(k));
  return acc;
}

ConstraintDensity make_constraint(const RiemannianChart& chart, SignalOnB f, ConstraintKind kind) {
  const double mass = integrate_on_chart(chart, f);
  if (!(mass > kMassFloor))
    throw Error(ErrorCode::degenerate_constraint, "constraint has zero mass");
  return {std::move(f), 1.0 / mass, kind};
}

ConstraintDensity anti_diagonal_band(double width) {
  if (!(width > 0)) throw Error(ErrorCode::invalid_argument, "band width must be positive");
  const Vec normal = Eigen::Vector2d(1, 1) / std::sqrt(2.0);
  return {band_signal(normal, 0.0, width, std::sqrt(2.0) * kPi),
          1.0 / (2.0 * std::sqrt(2.0) * kPi * width), ConstraintKind::band};
}

SignalOnB constraint_to_signal(const ConstraintDensity& c) {
  if (!(c.normalization > 0) || !std::isfinite(c.normalization))
    throw Error(ErrorCode::degenerate_constraint, "constraint is not normalizable");
  SignalOnB s = scaled_signal(c.signal, c.normalization);
  s.kind = c.signal.kind;
  return s;
}

std::vector<Vec> band_edge_probes(double width, int count) {
  std::vector<Vec> out;
  const Eigen::Vector2d normal = Eigen::Vector2d(1, 1) / std::sqrt(2.0);
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * kPi * k / count;
    const double side = k % 2 == 0 ? 1.0 : -1.0;
    Eigen::Vector2d x = t * Eigen::Vector2d(1, -1) + side * 0.5 * width * normal;
    for (int i = 0; i < 2; ++i) x(i) -= 2.0 * kPi * std::floor(x(i) / (2.0 * kPi));
    out.push_back(x);
  }
  return out;
}

std::vector<ProbeResult> boundary_map_pipeline(const RiemannianChart& chart,
                                               const ConstraintDensity& c,
                                               const std::vector<Vec>& probes,
                                               const WindowSpec& spec,
                                               const DetectionParams& params) {
  const SignalOnB mu = constraint_to_signal(c);
  std::vector<ProbeResult> out(probes.size());
  parallel_for(static_cast<std::ptrdiff_t>(probes.size()), [&](std::ptrdiff_t i) {
    const ManifoldPoint b = reduce(chart, probes[i]);
    const DetectionResult d = detect_boundary_normal(chart, mu, b, spec, params);
    out[i] = {b.coords, d.normal, d.contrast, d.magnitude_ratio, d.no_boundary};
  });
  return out;
}

}  // namespace cgabor
