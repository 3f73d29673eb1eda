#include "cgabor/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cgabor/parallel.hpp"

namespace cgabor {

namespace {

double wrap_centered(double v, double period) {
  double t = std::fmod(v + 0.5 * period, period);
  if (t < 0) t += period;
  return t - 0.5 * period;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "grid CSV: cannot parse '" + cell + "'");
    }
  }
  return out;
}

}  // namespace

SignalOnB half_space_signal(const Vec& normal, double offset) {
  return {SignalKind::half_space,
          [normal, offset](const ManifoldPoint& b) { return normal.dot(b.coords) < offset ? 1.0 : 0.0; }};
}

SignalOnB ball_signal(const RiemannianChart& chart, const Vec& center, double radius) {
  std::vector<bool> periodic = chart.periodic;
  Vec widths(chart.n);
  for (int i = 0; i < chart.n; ++i) widths(i) = chart.width(i);
  return {SignalKind::ball, [=](const ManifoldPoint& b) {
            double d2 = 0;
            for (Eigen::Index i = 0; i < center.size(); ++i) {
              double d = b.coords(i) - center(i);
              if (periodic[i]) d = wrap_centered(d, widths(i));
              d2 += d * d;
            }
            return d2 < radius * radius ? 1.0 : 0.0;
          }};
}

SignalOnB band_signal(const Vec& unit_normal, double offset, double width, double period) {
  return {SignalKind::band, [=](const ManifoldPoint& b) {
            double s = unit_normal.dot(b.coords) - offset;
            if (period > 0) s = wrap_centered(s, period);
            return std::abs(s) < 0.5 * width ? 1.0 : 0.0;
          }};
}

SignalOnB constant_signal(double value) {
  return {SignalKind::constant, [value](const ManifoldPoint&) { return value; }};
}

SignalOnB scaled_signal(SignalOnB f, double factor) {
  auto inner = std::move(f.eval);
  return {f.kind, [inner, factor](const ManifoldPoint& b) { return factor * inner(b); }};
}

Vec grid_node(const RiemannianChart& chart, const GridData& data, const std::vector<int>& index) {
  Vec x(chart.n);
  for (int i = 0; i < chart.n; ++i) {
    const int m = data.sizes[i];
    const double step = chart.periodic[i] ? chart.width(i) / m : chart.width(i) / std::max(1, m - 1);
    x(i) = chart.lower(i) + step * index[i];
  }
  return x;
}

SignalOnB grid_signal(const RiemannianChart& chart, GridData data) {
  if (static_cast<int>(data.sizes.size()) != chart.n)
    throw Error(ErrorCode::shape_mismatch, "grid signal dimension differs from chart");
  size_t total = 1;
  for (int m : data.sizes) {
    if (m < 1) throw Error(ErrorCode::invalid_argument, "grid sizes must be positive");
    total *= static_cast<size_t>(m);
  }
  if (total != data.values.size())
    throw Error(ErrorCode::shape_mismatch, "grid signal value count differs from sizes");
  return {SignalKind::grid, [chart, data](const ManifoldPoint& b) {
            const int n = chart.n;
            std::vector<int> lo(n), hi(n);
            std::vector<double> t(n);
            for (int i = 0; i < n; ++i) {
              const int m = data.sizes[i];
              const double rel = (b.coords(i) - chart.lower(i)) / chart.width(i);
              if (chart.periodic[i]) {
                double u = rel * m;
                u -= m * std::floor(u / m);
                lo[i] = std::min(m - 1, static_cast<int>(std::floor(u)));
                t[i] = u - lo[i];
                hi[i] = (lo[i] + 1) % m;
              } else if (m == 1) {
                lo[i] = hi[i] = 0;
                t[i] = 0;
              } else {
                const double u = std::clamp(rel * (m - 1), 0.0, static_cast<double>(m - 1));
                lo[i] = std::min(m - 2, static_cast<int>(std::floor(u)));
                hi[i] = lo[i] + 1;
                t[i] = u - lo[i];
              }
            }
            double acc = 0;
            for (int corner = 0; corner < (1 << n); ++corner) {
              double w = 1;
              size_t flat = 0;
              for (int i = 0; i < n; ++i) {
                const bool up = (corner >> i) & 1;
                w *= up ? t[i] : 1.0 - t[i];
                flat = flat * data.sizes[i] + (up ? hi[i] : lo[i]);
              }
              if (w != 0) acc += w * data.values[flat];
            }
            return acc;
          }};
}

GridData load_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open grid CSV " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::invalid_argument, "grid CSV is empty");
  GridData d;
  for (double s : split_numbers(line)) d.sizes.push_back(static_cast<int>(s));
  while (std::getline(in, line))
    for (double v : split_numbers(line)) d.values.push_back(v);
  return d;
}

void save_grid_csv(const std::string& path, const GridData& data) {
  std::ofstream out(path);
  out << std::setprecision(17);
  for (size_t i = 0; i < data.sizes.size(); ++i) out << (i ? "," : "") << data.sizes[i];
  out << "\n";
  const size_t row = data.sizes.empty() ? 1 : static_cast<size_t>(data.sizes.back());
  for (size_t k = 0; k < data.values.size(); ++k)
    out << data.values[k] << ((k + 1) % row == 0 ? "\n" : ",");
}

double cutoff_chi(const CutoffSpec& spec, double r) {
  if (r <= spec.R) return 1.0;
  if (r >= spec.outer()) return 0.0;
  // Written in t = 1 - s so the value cannot round below zero near the outer knot.
  const double t = 1.0 - (r - spec.R) / (spec.delta * spec.R);
  return std::min(1.0, t * t * t * (10.0 - 15.0 * t + 6.0 * t * t));
}

FiberGrid make_fiber_grid(const RiemannianChart& chart, const ManifoldPoint& b,
                          const CutoffSpec& cutoff, int nodes_per_axis, double budget) {
  FiberGrid fg;
  fg.metric = metric_at(chart, b);
  fg.volume_element = volume_density(chart, b);
  fg.nodes_per_axis = nodes_per_axis;
  check_tensor_budget(nodes_per_axis, chart.n, budget);
  const Mat ginv = fg.metric.llt().solve(Mat::Identity(chart.n, chart.n));
  std::vector<Rule1D> axes;
  for (int k = 0; k < chart.n; ++k) {
    const double L = cutoff.outer() * std::sqrt(ginv(k, k));
    axes.push_back(gauss_legendre(nodes_per_axis, -L, L));
  }
  fg.grid = TensorGrid(std::move(axes), budget);
  return fg;
}

LiftedFiberSignal lift_signal(const RiemannianChart& chart, const SignalOnB& f,
                              const CospherePoint& m, const FiberGrid& grid,
                              const CutoffSpec& cutoff) {
  LiftedFiberSignal s{m, grid, cutoff, CVec::Zero(grid.grid.size())};
  parallel_for(grid.grid.size(), [&](std::ptrdiff_t k) {
    const Vec V = grid.grid.node(k);
    const double r = std::sqrt(std::max(0.0, V.dot(grid.metric * V)));
    const double chi = cutoff_chi(cutoff, r);
    if (chi == 0.0) return;
    s.samples(k) = chi * f(exp_map(chart, m.b, V));
  });
  return s;
}

double fiber_l2_norm(const LiftedFiberSignal& s) {
  double acc = 0;
  for (std::int64_t k = 0; k < s.grid.grid.size(); ++k)
    acc += s.grid.grid.weight(k) * std::norm(s.samples(k));
  return std::sqrt(acc * s.grid.volume_element);
}

double global_l2_norm(const RiemannianChart& chart, const SignalOnB& f,
                      const GlobalNormParams& params) {
  if (params.base_resolution < 2 || params.sphere_resolution < 2)
    throw Error(ErrorCode::invalid_argument, "resolutions must be >= 2");
  check_tensor_budget(params.base_resolution, chart.n, params.budget);
  check_tensor_budget(params.fiber_nodes, chart.n, params.budget);
  std::vector<Rule1D> axes;
  for (int i = 0; i < chart.n; ++i)
    axes.push_back(chart.periodic[i]
                       ? periodic_trapezoid(params.base_resolution, chart.lower(i), chart.width(i))
                       : gauss_legendre(params.base_resolution, chart.lower(i), chart.upper(i)));
  const TensorGrid base(std::move(axes), params.budget);
  const SphereRule sphere = sphere_rule(chart.n, params.sphere_resolution);
  const double total = static_cast<double>(base.size()) * static_cast<double>(sphere.points.size()) *
                       std::pow(static_cast<double>(params.fiber_nodes), chart.n);
  if (total > params.budget)
    throw Error(ErrorCode::budget_exceeded,
                "global norm needs " + std::to_string(total) + " quadrature nodes");

  std::vector<double> per_base(base.size(), 0.0);
  for (std::int64_t k = 0; k < base.size(); ++k) {
    const ManifoldPoint b = reduce(chart, base.node(k));
    const CutoffSpec cutoff{injectivity_radius(chart, b), params.delta};
    const FiberGrid fg = make_fiber_grid(chart, b, cutoff, params.fiber_nodes, params.budget);
    const Mat L = fg.metric.llt().matrixL().toDenseMatrix();
    // Fiber samples do not depend on p (pullback bundle), so one lift serves every direction.
    const CospherePoint m{b, L * sphere.points.front()};
    const double nrm = fiber_l2_norm(lift_signal(chart, f, m, fg, cutoff));
    double sphere_sum = 0;
    for (double w : sphere.weights) sphere_sum += w * nrm * nrm;
    per_base[k] = base.weight(k) * volume_density(chart, b) * sphere_sum;
  }
  double acc = 0;
  for (double v : per_base) acc += v;
  return std::sqrt(acc);
}

}  // namespace cgabor
