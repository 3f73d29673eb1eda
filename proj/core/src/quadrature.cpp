#include "cgabor/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/special_functions/legendre.hpp>

namespace cgabor {

Rule1D gauss_legendre(int N, double a, double b) {
  if (N < 1) throw Error(ErrorCode::invalid_argument, "Gauss-Legendre needs N >= 1");
  // Boost returns the nonnegative zeros in increasing order.
  const auto zeros = boost::math::legendre_p_zeros<double>(N);
  Vec x(N), w(N);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (size_t k = 0; k < zeros.size(); ++k) {
    const double z = zeros[k];
    const double dp = boost::math::legendre_p_prime<double>(N, z);
    const double wk = 2.0 / ((1.0 - z * z) * dp * dp);
    const int pos = N / 2 + static_cast<int>(k);
    const int neg = N - 1 - pos;
    x(pos) = mid + half * z;
    w(pos) = half * wk;
    x(neg) = mid - half * z;
    w(neg) = half * wk;
  }
  return {x, w};
}

void check_tensor_budget(double nodes_per_axis, int dims, double budget) {
  const double total = std::pow(nodes_per_axis, dims);
  if (total > budget) {
    std::ostringstream os;
    os << "quadrature grid needs " << total << " nodes, budget " << budget;
    throw Error(ErrorCode::budget_exceeded, os.str());
  }
}

Rule1D periodic_trapezoid(int N, double a, double period) {
  if (N < 1) throw Error(ErrorCode::invalid_argument, "trapezoid rule needs N >= 1");
  Vec x(N), w = Vec::Constant(N, period / N);
  for (int i = 0; i < N; ++i) x(i) = a + period * i / N;
  return {x, w};
}

TensorGrid::TensorGrid(std::vector<Rule1D> axes, double budget) : axes_(std::move(axes)) {
  double total = 1;
  for (const auto& r : axes_) total *= static_cast<double>(r.nodes.size());
  if (total > budget) check_tensor_budget(total, 1, budget);
  size_ = axes_.empty() ? 0 : static_cast<std::int64_t>(total);
}

std::vector<int> TensorGrid::unflatten(std::int64_t flat) const {
  std::vector<int> idx(axes_.size());
  for (int i = dim() - 1; i >= 0; --i) {
    const auto m = axes_[i].nodes.size();
    idx[i] = static_cast<int>(flat % m);
    flat /= m;
  }
  return idx;
}

Vec TensorGrid::node(std::int64_t flat) const {
  const auto idx = unflatten(flat);
  Vec x(dim());
  for (int i = 0; i < dim(); ++i) x(i) = axes_[i].nodes(idx[i]);
  return x;
}

double TensorGrid::weight(std::int64_t flat) const {
  const auto idx = unflatten(flat);
  double w = 1;
  for (int i = 0; i < dim(); ++i) w *= axes_[i].weights(idx[i]);
  return w;
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

SphereRule sphere_rule(int n, int resolution, std::uint64_t seed) {
  if (n < 1 || resolution < 1) throw Error(ErrorCode::invalid_argument, "sphere rule parameters");
  SphereRule s;
  if (n == 1) {
    Vec a(1), b(1);
    a << 1;
    b << -1;
    s.points = {a, b};
    s.weights = {1.0, 1.0};
    return s;
  }
  const double w = unit_sphere_area(n) / resolution;
  if (n == 2) {
    for (int k = 0; k < resolution; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / resolution;
      Vec p(2);
      p << std::cos(phi), std::sin(phi);
      s.points.push_back(p);
      s.angles.push_back(phi);
    }
  } else if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < resolution; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / resolution;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec p(3);
      p << r * std::cos(golden * k), r * std::sin(golden * k), z;
      s.points.push_back(p);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int k = 0; k < resolution; ++k) {
      Vec p(n);
      for (int i = 0; i < n; ++i) p(i) = normal(rng);
      s.points.push_back(p.normalized());
    }
  }
  s.weights.assign(s.points.size(), w);
  return s;
}

}  // namespace cgabor
