#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "cgabor/lattice.hpp"
#include "cgabor/signal.hpp"

namespace cgabor {

struct WindowSpec {
  std::function<Mat(const ManifoldPoint&)> A;
  double eigen_floor = 1e-6;

  static WindowSpec constant(const Mat& A);
  static WindowSpec scalar(int n, double a);
  // Default window: A = pi * Id.
  static WindowSpec standard(int n);

  // A(b), checked for symmetry and the eigenvalue floor.
  Mat at(const ManifoldPoint& b) const;
};

// exp(-V^T A V - i <eta, V>).
cplx window_eval(const Mat& A, const Vec& eta, const Vec& V);
cplx window_eval(const WindowSpec& spec, const CospherePoint& m, const Vec& V);

struct GaborAtom {
  CospherePoint m;
  Vec W;   // translation
  Vec xi;  // modulation
};

// exp(-2 pi i <xi, V>) * Psi(V - W).
cplx tf_shift_eval(const Mat& A, const Vec& eta, const Vec& W, const Vec& xi, const Vec& V);
cplx tf_shift_eval(const WindowSpec& spec, const GaborAtom& atom, const Vec& V);

// sum_k w_k vol s(V_k) conj(atom(V_k)).
cplx gabor_coefficient(const LiftedFiberSignal& s, const GaborAtom& atom, const WindowSpec& spec);

struct OutputParams {
  int fiber_nodes = 61;
  double delta = 0.25;
  double budget = kDefaultBudget;
};

// Lift at b once, then O(p) = sum_k w_k vol I(V_k) Psi_p(V_k) for any covector p.
class OutputEvaluator {
 public:
  OutputEvaluator(const RiemannianChart& chart, const SignalOnB& f, const ManifoldPoint& b,
                  const WindowSpec& spec, const OutputParams& params = {});

  cplx operator()(const Vec& p) const;
  // Unit covector for an orthonormal-coframe direction d: p = L d.
  Vec covector(const Vec& direction) const { return L_ * direction; }
  // |O| at the covector of the planar direction angle phi (n = 2).
  double magnitude_at_angle(double phi) const;
  // Largest |O| reachable by a signal of the same sup norm on this fiber.
  double magnitude_scale() const { return scale_; }
  int dim() const { return static_cast<int>(L_.rows()); }

 private:
  std::vector<Vec> nodes_;
  std::vector<double> weights_;  // w vol I(V) exp(-V^T A V); lifted signals are real
  Mat L_;
  double scale_ = 0;
};

cplx output_function(const RiemannianChart& chart, const SignalOnB& f, const ManifoldPoint& b,
                     const Vec& p, const WindowSpec& spec, const OutputParams& params = {});

struct OutputField {
  ManifoldPoint b;
  std::vector<Vec> directions;  // unit covectors
  std::vector<double> angles;   // n = 2
  std::vector<cplx> values;
  int resolution = 0;
};

struct DetectionParams {
  int sphere_resolution = 720;
  double tau = 0.05;
  // No-boundary is also declared when max |O| < floor * magnitude_scale().
  double magnitude_floor = 0.02;
  int refine_steps = 10;
  OutputParams output;
};

struct DetectionResult {
  Vec normal;        // unit covector; -normal is equally valid
  double angle = 0;  // n = 2, radians in [0, 2 pi)
  double value = 0;  // |O| at the refined optimum
  double contrast = 0;
  double magnitude_ratio = 0;
  bool no_boundary = false;
  OutputField field;
};

DetectionResult detect_boundary_normal(const RiemannianChart& chart, const SignalOnB& f,
                                       const ManifoldPoint& b, const WindowSpec& spec,
                                       const DetectionParams& params = {});

enum class ExtremeMethod { dense, power_iteration };
enum class CertificateStatus { frame_certified, unknown, not_applicable };
std::string_view certificate_name(CertificateStatus s);

// Sufficient condition for separable lattices: 0 < b_i < 1 and b_i = +-c_i, on an
// orthonormal (flat or hypercomplex) frame. Never reports "not a frame".
CertificateStatus corollary_frame_certificate(const Vec& b, const Vec& c,
                                              bool orthonormal_separable);

struct FrameGridParams {
  double oversample = 4.0;  // nodes per axis = oversample * half-width * bandwidth + min_nodes
  double decay = 30.0;      // Gaussian tails cut at exp(-decay)
  int min_nodes = 16;
  double max_atoms = 1e4;
  double node_budget = kDefaultBudget;
  double work_budget = 5e9;  // atoms * nodes * test dimension
  double gram_cutoff = 1e-10;
  double volume_element = 1;  // sqrt(det g) of the fiber
  ExtremeMethod method = ExtremeMethod::dense;
  int power_iterations = 500;
  double power_tolerance = 1e-8;
};

// Truncated frame operator restricted to the test space: the window itself plus
// tapered Fourier modes carried at the window frequency, supported in the central half
// of the lattice translation span and band-limited to the central half of its
// modulation span. Columns of test_basis are orthonormal in the weighted grid product.
struct FrameOperator {
  TensorGrid grid;
  double volume_element = 1;
  CMat test_basis;    // nodes x r
  CMat coefficients;  // atoms x r, <g_j, atom_a>
  CMat reduced;       // r x r, C^H C
  std::vector<LatticePoint> atoms;
  std::vector<int> nodes_per_axis;
};

FrameOperator build_frame_operator(const WindowSpec& spec, const LatticeFrame& lf, int K,
                                   const FrameGridParams& params = {});

struct FrameBounds {
  double A_est = 0;
  double B_est = 0;
  int test_dim = 0;
  int atom_count = 0;
  std::vector<int> nodes_per_axis;
};

FrameBounds frame_bounds_at(const WindowSpec& spec, const LatticeFrame& lf, int K,
                            const FrameGridParams& params = {});

struct FrameReport {
  LatticeSpec lattice;
  int K = 0;
  std::vector<int> nodes_per_axis;
  int test_dim = 0;
  double A_est = 0;
  double B_est = 0;
  CertificateStatus certificate = CertificateStatus::unknown;
  std::vector<int> trace_K;
  std::vector<double> trace_A;
  std::vector<double> trace_B;
  ExtremeMethod method = ExtremeMethod::dense;
};

// Bounds at K plus the convergence trace over K, K+1, K+2.
FrameReport frame_bounds_estimate(const WindowSpec& spec, const LatticeFrame& lf,
                                  const LatticeSpec& lattice, const FrameGridParams& params = {});

// Largest eigenvalue by power iteration; throws iteration-limit with the trace on failure.
double power_iteration_max(const CMat& S, int iterations, double tolerance,
                           std::vector<double>* trace = nullptr);

}  // namespace cgabor
