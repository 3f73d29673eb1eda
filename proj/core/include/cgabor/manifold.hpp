#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cgabor/types.hpp"

namespace cgabor {

enum class ChartKind { flat_torus, round_sphere, generic };

using MetricFn = std::function<Mat(const Vec&)>;

// Single-chart Riemannian manifold. Built-ins:
//   flat torus: angle coordinates in [0, 2pi)^n, metric diag(r_i^2);
//   round sphere (n = 2): (colatitude in [0, pi], longitude in [0, 2pi)), metric r^2 diag(1, sin^2);
//   generic: user metric on a coordinate box, user-declared injectivity radius.
struct RiemannianChart {
  int n = 0;
  Vec lower;
  Vec upper;
  std::vector<bool> periodic;
  ChartKind kind = ChartKind::generic;
  Vec radii;                 // flat torus
  double sphere_radius = 1;  // round sphere
  MetricFn metric_fn;        // generic
  std::optional<double> injectivity;
  int rk4_steps_per_unit = 64;

  static RiemannianChart flat_torus(const Vec& radii);
  static RiemannianChart round_sphere(double radius);
  static RiemannianChart generic(const Vec& lower, const Vec& upper, std::vector<bool> periodic,
                                 MetricFn metric, std::optional<double> injectivity = std::nullopt);

  bool is_flat() const { return kind == ChartKind::flat_torus; }
  double width(int axis) const { return upper(axis) - lower(axis); }
};

struct ManifoldPoint {
  Vec coords;
};

enum class Variance { tangent, cotangent };

struct TangentVector {
  ManifoldPoint base;
  Vec components;
  static constexpr Variance variance = Variance::tangent;
};

struct Covector {
  ManifoldPoint base;
  Vec components;
  static constexpr Variance variance = Variance::cotangent;
};

// Reduces periodic axes into [lower, upper).
ManifoldPoint reduce(const RiemannianChart& chart, const Vec& coords);

Mat metric_at(const RiemannianChart& chart, const ManifoldPoint& b);
Mat inverse_metric_at(const RiemannianChart& chart, const ManifoldPoint& b);

Covector lower_index(const RiemannianChart& chart, const TangentVector& v);
TangentVector raise_index(const RiemannianChart& chart, const Covector& c);

double metric_norm(const RiemannianChart& chart, const TangentVector& v);
double dual_norm(const RiemannianChart& chart, const Covector& c);

ManifoldPoint exp_map(const RiemannianChart& chart, const ManifoldPoint& b, const Vec& V);

// Integrates the geodesic equation with fixed-step RK4 regardless of chart kind.
ManifoldPoint exp_map_rk4(const RiemannianChart& chart, const ManifoldPoint& b, const Vec& V);

// RK4 path samples (position, velocity) at every step, t from 0 to 1.
struct GeodesicSample {
  double t;
  Vec x;
  Vec v;
};
std::vector<GeodesicSample> geodesic_path(const RiemannianChart& chart, const ManifoldPoint& b,
                                          const Vec& V);

// Gamma[k](i, j) = Christoffel symbol of the second kind, by central differences.
std::vector<Mat> christoffel(const RiemannianChart& chart, const Vec& x);

double injectivity_radius(const RiemannianChart& chart, const ManifoldPoint& b);
double volume_density(const RiemannianChart& chart, const ManifoldPoint& b);

// Round sphere helpers: chart point to R^3 and back.
Eigen::Vector3d sphere_embed(double radius, const Vec& chart_point);
Vec sphere_chart(double radius, const Eigen::Vector3d& x);

}  // namespace cgabor
