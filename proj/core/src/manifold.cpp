#include "cgabor/manifold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cgabor/error.hpp"

namespace cgabor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string describe(const Vec& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ")";
  return os.str();
}

Mat raw_metric(const RiemannianChart& chart, const Vec& x) {
  switch (chart.kind) {
    case ChartKind::flat_torus:
      return chart.radii.array().square().matrix().asDiagonal();
    case ChartKind::round_sphere: {
      const double r2 = chart.sphere_radius * chart.sphere_radius;
      const double s = std::sin(x(0));
      Mat g = Mat::Zero(2, 2);
      g(0, 0) = r2;
      g(1, 1) = r2 * s * s;
      return g;
    }
    case ChartKind::generic:
      return chart.metric_fn(x);
  }
  return {};
}

Vec geodesic_accel(const RiemannianChart& chart, const Vec& x, const Vec& v) {
  const auto gamma = christoffel(chart, x);
  Vec a(chart.n);
  for (int k = 0; k < chart.n; ++k) a(k) = -v.dot(gamma[k] * v);
  return a;
}

void check_inside(const RiemannianChart& chart, const Vec& x) {
  for (int i = 0; i < chart.n; ++i) {
    if (chart.periodic[i]) continue;
    if (!(x(i) >= chart.lower(i) && x(i) <= chart.upper(i)))
      throw Error(ErrorCode::chart_exit, "geodesic left the chart box at " + describe(x));
  }
}

}  // namespace

RiemannianChart RiemannianChart::flat_torus(const Vec& radii) {
  if (radii.size() < 1 || (radii.array() <= 0).any())
    throw Error(ErrorCode::invalid_argument, "flat torus radii must be positive");
  RiemannianChart c;
  c.n = static_cast<int>(radii.size());
  c.lower = Vec::Zero(c.n);
  c.upper = Vec::Constant(c.n, kTwoPi);
  c.periodic.assign(c.n, true);
  c.kind = ChartKind::flat_torus;
  c.radii = radii;
  return c;
}

RiemannianChart RiemannianChart::round_sphere(double radius) {
  if (!(radius > 0)) throw Error(ErrorCode::invalid_argument, "sphere radius must be positive");
  RiemannianChart c;
  c.n = 2;
  c.lower = Vec::Zero(2);
  c.upper = Vec(2);
  c.upper << std::numbers::pi, kTwoPi;
  c.periodic = {false, true};
  c.kind = ChartKind::round_sphere;
  c.sphere_radius = radius;
  return c;
}

RiemannianChart RiemannianChart::generic(const Vec& lower, const Vec& upper,
                                         std::vector<bool> periodic, MetricFn metric,
                                         std::optional<double> injectivity) {
  if (lower.size() != upper.size() || static_cast<size_t>(lower.size()) != periodic.size() ||
      lower.size() < 1)
    throw Error(ErrorCode::invalid_argument, "generic chart: inconsistent box dimensions");
  if (!metric) throw Error(ErrorCode::missing_parameter, "generic chart needs a metric");
  RiemannianChart c;
  c.n = static_cast<int>(lower.size());
  c.lower = lower;
  c.upper = upper;
  c.periodic = std::move(periodic);
  c.kind = ChartKind::generic;
  c.metric_fn = std::move(metric);
  c.injectivity = injectivity;
  return c;
}

ManifoldPoint reduce(const RiemannianChart& chart, const Vec& coords) {
  Vec x = coords;
  for (int i = 0; i < chart.n; ++i) {
    if (!chart.periodic[i]) continue;
    const double w = chart.width(i);
    double t = std::fmod(x(i) - chart.lower(i), w);
    if (t < 0) t += w;
    if (t >= w) t = 0;  // fmod of a tiny negative can round up to w
    x(i) = chart.lower(i) + t;
  }
  return {x};
}

Mat metric_at(const RiemannianChart& chart, const ManifoldPoint& b) {
  Mat g = raw_metric(chart, b.coords);
  if (g.rows() != chart.n || g.cols() != chart.n)
    throw Error(ErrorCode::metric_degenerate, "metric has wrong shape at " + describe(b.coords));
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::metric_degenerate, "metric not symmetric at " + describe(b.coords));
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().array() <= 0).any())
    throw Error(ErrorCode::metric_degenerate,
                "metric not positive definite at " + describe(b.coords));
  return g;
}

Mat inverse_metric_at(const RiemannianChart& chart, const ManifoldPoint& b) {
  const Mat g = metric_at(chart, b);
  return g.llt().solve(Mat::Identity(chart.n, chart.n));
}

Covector lower_index(const RiemannianChart& chart, const TangentVector& v) {
  return {v.base, metric_at(chart, v.base) * v.components};
}

TangentVector raise_index(const RiemannianChart& chart, const Covector& c) {
  return {c.base, metric_at(chart, c.base).llt().solve(c.components)};
}

double metric_norm(const RiemannianChart& chart, const TangentVector& v) {
  return std::sqrt(std::max(0.0, v.components.dot(metric_at(chart, v.base) * v.components)));
}

double dual_norm(const RiemannianChart& chart, const Covector& c) {
  const Vec up = metric_at(chart, c.base).llt().solve(c.components);
  return std::sqrt(std::max(0.0, c.components.dot(up)));
}

Eigen::Vector3d sphere_embed(double radius, const Vec& p) {
  const double th = p(0), ph = p(1);
  return radius * Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                  std::cos(th));
}

Vec sphere_chart(double radius, const Eigen::Vector3d& x) {
  Vec p(2);
  p(0) = std::acos(std::clamp(x.z() / radius, -1.0, 1.0));
  double ph = std::atan2(x.y(), x.x());
  if (ph < 0) ph += kTwoPi;
  if (ph >= kTwoPi) ph = 0;
  p(1) = ph;
  return p;
}

ManifoldPoint exp_map(const RiemannianChart& chart, const ManifoldPoint& b, const Vec& V) {
  if (V.size() != chart.n) throw Error(ErrorCode::shape_mismatch, "tangent vector dimension");
  switch (chart.kind) {
    case ChartKind::flat_torus:
      return reduce(chart, b.coords + V);
    case ChartKind::round_sphere: {
      const double r = chart.sphere_radius;
      const double th = b.coords(0), ph = b.coords(1);
      const Eigen::Vector3d x = sphere_embed(r, b.coords);
      const Eigen::Vector3d dth =
          r * Eigen::Vector3d(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
      const Eigen::Vector3d dph =
          r * Eigen::Vector3d(-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0);
      const Eigen::Vector3d v = V(0) * dth + V(1) * dph;
      const double speed = v.norm();
      if (speed == 0.0) return b;
      const double ang = speed / r;
      const Eigen::Vector3d y = x * std::cos(ang) + v * (r * std::sin(ang) / speed);
      return reduce(chart, sphere_chart(r, y));
    }
    case ChartKind::generic:
      return exp_map_rk4(chart, b, V);
  }
  return b;
}

std::vector<Mat> christoffel(const RiemannianChart& chart, const Vec& x) {
  const int n = chart.n;
  std::vector<Mat> dg(n);  // dg[l] = d g / d x_l
  for (int l = 0; l < n; ++l) {
    const double h = 1e-5 * chart.width(l);
    Vec xp = x, xm = x;
    xp(l) += h;
    xm(l) -= h;
    dg[l] = (raw_metric(chart, xp) - raw_metric(chart, xm)) / (2.0 * h);
  }
  const Mat ginv = raw_metric(chart, x).llt().solve(Mat::Identity(n, n));
  std::vector<Mat> gamma(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec lowered(n);  // Gamma_{l,ij}
      for (int l = 0; l < n; ++l) lowered(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Vec up = ginv * lowered;
      for (int k = 0; k < n; ++k) gamma[k](i, j) = up(k);
    }
  return gamma;
}

std::vector<GeodesicSample> geodesic_path(const RiemannianChart& chart, const ManifoldPoint& b,
                                          const Vec& V) {
  if (V.size() != chart.n) throw Error(ErrorCode::shape_mismatch, "tangent vector dimension");
  const double speed = metric_norm(chart, {b, V});
  const int steps = std::max(1, static_cast<int>(std::ceil(chart.rk4_steps_per_unit * speed)));
  const double dt = 1.0 / steps;
  Vec x = b.coords, v = V;
  std::vector<GeodesicSample> path;
  path.reserve(steps + 1);
  path.push_back({0.0, x, v});
  for (int s = 0; s < steps; ++s) {
    const Vec k1x = v, k1v = geodesic_accel(chart, x, v);
    const Vec k2x = v + 0.5 * dt * k1v, k2v = geodesic_accel(chart, x + 0.5 * dt * k1x, k2x);
    const Vec k3x = v + 0.5 * dt * k2v, k3v = geodesic_accel(chart, x + 0.5 * dt * k2x, k3x);
    const Vec k4x = v + dt * k3v, k4v = geodesic_accel(chart, x + dt * k3x, k4x);
    x += dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    check_inside(chart, x);
    x = reduce(chart, x).coords;
    path.push_back({(s + 1) * dt, x, v});
  }
  return path;
}

ManifoldPoint exp_map_rk4(const RiemannianChart& chart, const ManifoldPoint& b, const Vec& V) {
  return {geodesic_path(chart, b, V).back().x};
}

double injectivity_radius(const RiemannianChart& chart, const ManifoldPoint&) {
  switch (chart.kind) {
    case ChartKind::flat_torus:
      return std::numbers::pi * chart.radii.minCoeff();
    case ChartKind::round_sphere:
      return std::numbers::pi * chart.sphere_radius;
    case ChartKind::generic:
      if (!chart.injectivity)
        throw Error(ErrorCode::missing_parameter, "generic chart has no declared injectivity radius");
      return *chart.injectivity;
  }
  return 0;
}

double volume_density(const RiemannianChart& chart, const ManifoldPoint& b) {
  const Mat g = metric_at(chart, b);
  Eigen::LLT<Mat> llt(g);
  const Vec d = llt.matrixL().toDenseMatrix().diagonal();
  return d.prod();
}

}  // namespace cgabor
