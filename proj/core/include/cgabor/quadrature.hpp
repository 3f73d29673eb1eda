#pragma once

#include <cstdint>
#include <vector>

#include "cgabor/error.hpp"
#include "cgabor/types.hpp"

namespace cgabor {

struct Rule1D {
  Vec nodes;
  Vec weights;
};

// N-point Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int N, double a, double b);

// Throws budget-exceeded when nodes_per_axis^dims > budget. Call before building the
// 1D rules: a single large Gauss-Legendre rule is itself expensive.
void check_tensor_budget(double nodes_per_axis, int dims, double budget);

// N equispaced nodes with equal weights on a periodic interval [a, a + period).
Rule1D periodic_trapezoid(int N, double a, double period);

// Tensor product of 1D rules; flat index with the last axis varying fastest.
class TensorGrid {
 public:
  TensorGrid() = default;
  explicit TensorGrid(std::vector<Rule1D> axes, double budget = kDefaultBudget);

  int dim() const { return static_cast<int>(axes_.size()); }
  std::int64_t size() const { return size_; }
  const Rule1D& axis(int i) const { return axes_[i]; }

  Vec node(std::int64_t flat) const;
  double weight(std::int64_t flat) const;
  // Multi-index of a flat index.
  std::vector<int> unflatten(std::int64_t flat) const;

 private:
  std::vector<Rule1D> axes_;
  std::int64_t size_ = 0;
};

// Quadrature on the unit sphere S^{n-1}: uniform angles (n = 2), Fibonacci points (n = 3),
// seeded Gaussian-normalized points (n >= 4). Weights are equal and sum to the sphere area.
struct SphereRule {
  std::vector<Vec> points;
  std::vector<double> weights;
  std::vector<double> angles;  // n = 2 only
};
SphereRule sphere_rule(int n, int resolution, std::uint64_t seed = 0x5eed);

double unit_sphere_area(int n);

}  // namespace cgabor
