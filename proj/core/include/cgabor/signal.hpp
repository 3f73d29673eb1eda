#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cgabor/contact.hpp"
#include "cgabor/quadrature.hpp"

namespace cgabor {

enum class SignalKind { half_space, ball, band, grid, constant, custom };

struct SignalOnB {
  SignalKind kind = SignalKind::custom;
  std::function<double(const ManifoldPoint&)> eval;
  double operator()(const ManifoldPoint& b) const { return eval(b); }
};

// 1 where <normal, x> < offset (chart coordinates), else 0.
SignalOnB half_space_signal(const Vec& normal, double offset);
// 1 inside the coordinate ball, distances taken with minimal image on periodic axes.
SignalOnB ball_signal(const RiemannianChart& chart, const Vec& center, double radius);
// 1 where |wrap(<unit_normal, x> - offset)| < width / 2; period <= 0 disables wrapping.
SignalOnB band_signal(const Vec& unit_normal, double offset, double width, double period);
SignalOnB constant_signal(double value);
SignalOnB scaled_signal(SignalOnB f, double factor);

// Samples on a regular chart grid; periodic axes place m nodes per period,
// other axes m nodes including both ends. Values are row-major, last axis fastest.
struct GridData {
  std::vector<int> sizes;
  std::vector<double> values;
};
SignalOnB grid_signal(const RiemannianChart& chart, GridData data);
Vec grid_node(const RiemannianChart& chart, const GridData& data, const std::vector<int>& index);

// CSV: first line holds the axis sizes, then one line per slab of the last axis.
GridData load_grid_csv(const std::string& path);
void save_grid_csv(const std::string& path, const GridData& data);

struct CutoffSpec {
  double R = 1.0;
  double delta = 0.25;
  double outer() const { return (1.0 + delta) * R; }
};

double cutoff_chi(const CutoffSpec& spec, double r);

struct FiberGrid {
  TensorGrid grid;
  Mat metric;                  // g(b), used for |V|_g
  double volume_element = 1;   // sqrt(det g(b))
  int nodes_per_axis = 0;
};

// Gauss-Legendre tensor grid covering the metric ball of radius (1 + delta) R:
// half-width along axis k is (1 + delta) R sqrt(g^{-1}_kk), equal to (1 + delta) R for g = Id.
FiberGrid make_fiber_grid(const RiemannianChart& chart, const ManifoldPoint& b,
                          const CutoffSpec& cutoff, int nodes_per_axis = 61,
                          double budget = kDefaultBudget);

struct LiftedFiberSignal {
  CospherePoint m;
  FiberGrid grid;
  CutoffSpec cutoff;
  CVec samples;
};

LiftedFiberSignal lift_signal(const RiemannianChart& chart, const SignalOnB& f,
                              const CospherePoint& m, const FiberGrid& grid,
                              const CutoffSpec& cutoff);

double fiber_l2_norm(const LiftedFiberSignal& s);

struct GlobalNormParams {
  int base_resolution = 16;
  int sphere_resolution = 8;
  int fiber_nodes = 61;
  double delta = 0.25;
  double budget = kDefaultBudget;
};

double global_l2_norm(const RiemannianChart& chart, const SignalOnB& f,
                      const GlobalNormParams& params = {});

}  // namespace cgabor
