#include "cgabor/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cgabor/parallel.hpp"

namespace cgabor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool same_point(const CospherePoint& a, const CospherePoint& b) {
  return a.b.coords.size() == b.b.coords.size() && a.b.coords == b.b.coords && a.p == b.p;
}

}  // namespace

WindowSpec WindowSpec::constant(const Mat& A) {
  WindowSpec w;
  w.A = [A](const ManifoldPoint&) { return A; };
  return w;
}

WindowSpec WindowSpec::scalar(int n, double a) { return constant(a * Mat::Identity(n, n)); }

WindowSpec WindowSpec::standard(int n) { return scalar(n, kPi); }

Mat WindowSpec::at(const ManifoldPoint& b) const {
  if (!A) throw Error(ErrorCode::missing_parameter, "window tensor field is not set");
  const Mat a = A(b);
  const auto n = b.coords.size();
  if (a.rows() != n || a.cols() != n)
    throw Error(ErrorCode::window_degenerate, "window matrix has wrong shape");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::window_degenerate, "window matrix is not symmetric");
  const double lo = Eigen::SelfAdjointEigenSolver<Mat>(a, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (!(lo >= eigen_floor))
    throw Error(ErrorCode::window_degenerate,
                "window eigenvalue " + std::to_string(lo) + " below floor");
  return a;
}

cplx window_eval(const Mat& A, const Vec& eta, const Vec& V) {
  return std::exp(cplx(-V.dot(A * V), -eta.dot(V)));
}

cplx window_eval(const WindowSpec& spec, const CospherePoint& m, const Vec& V) {
  return window_eval(spec.at(m.b), m.p, V);
}

cplx tf_shift_eval(const Mat& A, const Vec& eta, const Vec& W, const Vec& xi, const Vec& V) {
  const Vec U = V - W;
  return std::exp(cplx(-U.dot(A * U), -eta.dot(U) - kTwoPi * xi.dot(V)));
}

cplx tf_shift_eval(const WindowSpec& spec, const GaborAtom& atom, const Vec& V) {
  return tf_shift_eval(spec.at(atom.m.b), atom.m.p, atom.W, atom.xi, V);
}

cplx gabor_coefficient(const LiftedFiberSignal& s, const GaborAtom& atom, const WindowSpec& spec) {
  if (s.samples.size() != s.grid.grid.size())
    throw Error(ErrorCode::shape_mismatch, "sample count differs from the fiber grid");
  if (!same_point(s.m, atom.m))
    throw Error(ErrorCode::shape_mismatch, "atom and signal live on different fibers");
  const Mat A = spec.at(atom.m.b);
  cplx acc = 0;
  for (std::int64_t k = 0; k < s.grid.grid.size(); ++k) {
    if (s.samples(k) == cplx(0)) continue;
    const Vec V = s.grid.grid.node(k);
    acc += s.grid.grid.weight(k) * s.samples(k) *
           std::conj(tf_shift_eval(A, atom.m.p, atom.W, atom.xi, V));
  }
  return acc * s.grid.volume_element;
}

OutputEvaluator::OutputEvaluator(const RiemannianChart& chart, const SignalOnB& f,
                                 const ManifoldPoint& b, const WindowSpec& spec,
                                 const OutputParams& params) {
  const Mat A = spec.at(b);
  const CutoffSpec cutoff{injectivity_radius(chart, b), params.delta};
  const FiberGrid fg = make_fiber_grid(chart, b, cutoff, params.fiber_nodes, params.budget);
  L_ = fg.metric.llt().matrixL().toDenseMatrix();
  Vec e1 = Vec::Zero(chart.n);
  e1(0) = 1;
  const LiftedFiberSignal s = lift_signal(chart, f, {b, L_ * e1}, fg, cutoff);
  double sup = 0, envelope = 0;
  for (std::int64_t k = 0; k < fg.grid.size(); ++k) {
    const Vec V = fg.grid.node(k);
    const double w = fg.grid.weight(k) * fg.volume_element * std::exp(-V.dot(A * V));
    const double r = std::sqrt(std::max(0.0, V.dot(fg.metric * V)));
    envelope += w * cutoff_chi(cutoff, r);
    const double val = s.samples(k).real();
    sup = std::max(sup, std::abs(val));
    if (val == 0.0) continue;
    nodes_.push_back(V);
    weights_.push_back(w * val);
  }
  scale_ = sup * envelope;
}

cplx OutputEvaluator::operator()(const Vec& p) const {
  cplx acc = 0;
  for (size_t k = 0; k < nodes_.size(); ++k) {
    const double ph = p.dot(nodes_[k]);
    acc += weights_[k] * cplx(std::cos(ph), -std::sin(ph));
  }
  return acc;
}

double OutputEvaluator::magnitude_at_angle(double phi) const {
  Vec d(2);
  d << std::cos(phi), std::sin(phi);
  return std::abs((*this)(covector(d)));
}

cplx output_function(const RiemannianChart& chart, const SignalOnB& f, const ManifoldPoint& b,
                     const Vec& p, const WindowSpec& spec, const OutputParams& params) {
  return OutputEvaluator(chart, f, b, spec, params)(p);
}

namespace {

// Golden-section search for a maximum of g on [a, b]; returns the best point seen.
double golden_max(const std::function<double(double)>& g, double a, double b, int steps,
                  double start, double start_value) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double best = start, best_v = start_value;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  auto consider = [&](double x, double v) {
    if (v > best_v) {
      best_v = v;
      best = x;
    }
  };
  consider(c, gc);
  consider(d, gd);
  for (int i = 0; i < steps; ++i) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
      consider(c, gc);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
      consider(d, gd);
    }
  }
  return best;
}

Vec canonical_sign(Vec v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace

DetectionResult detect_boundary_normal(const RiemannianChart& chart, const SignalOnB& f,
                                       const ManifoldPoint& b, const WindowSpec& spec,
                                       const DetectionParams& params) {
  if (params.sphere_resolution < 8)
    throw Error(ErrorCode::invalid_argument, "sphere resolution must be >= 8 directions");
  const OutputEvaluator O(chart, f, b, spec, params.output);
  const int n = chart.n;
  const SphereRule rule = sphere_rule(n, params.sphere_resolution);

  DetectionResult res;
  res.field.b = b;
  res.field.resolution = params.sphere_resolution;
  res.field.angles = rule.angles;
  const auto count = static_cast<std::ptrdiff_t>(rule.points.size());
  res.field.directions.resize(count);
  res.field.values.resize(count);
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    res.field.directions[k] = O.covector(rule.points[k]);
    res.field.values[k] = O(res.field.directions[k]);
  }

  std::ptrdiff_t best = 0;
  double hi = -1, lo = std::numeric_limits<double>::infinity();
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const double v = std::abs(res.field.values[k]);
    if (v > hi) {
      hi = v;
      best = k;
    }
    lo = std::min(lo, v);
  }
  res.contrast = hi > 0 ? (hi - lo) / hi : 0.0;
  res.magnitude_ratio = O.magnitude_scale() > 0 ? hi / O.magnitude_scale() : 0.0;
  res.no_boundary = res.contrast < params.tau || res.magnitude_ratio < params.magnitude_floor;

  Vec dir = rule.points[best];
  if (n == 2) {
    const double phi0 = rule.angles[best];
    const double step = kTwoPi / params.sphere_resolution;
    const double phi = golden_max([&](double t) { return O.magnitude_at_angle(t); }, phi0 - step,
                                  phi0 + step, params.refine_steps, phi0, hi);
    dir << std::cos(phi), std::sin(phi);
  } else if (n >= 3) {
    // Pattern ascent in the tangent plane of the best scan direction.
    double step = std::sqrt(unit_sphere_area(n) / params.sphere_resolution);
    double cur = hi;
    for (int it = 0; it < params.refine_steps; ++it) {
      bool moved = false;
      for (const Vec& t : orthonormal_completion_hat(dir)) {
        for (double sgn : {1.0, -1.0}) {
          const Vec cand = (dir + sgn * step * t).normalized();
          const double v = std::abs(O(O.covector(cand)));
          if (v > cur) {
            cur = v;
            dir = cand;
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
  }
  const Vec normal = canonical_sign(O.covector(dir));
  res.normal = normal;
  res.value = std::abs(O(normal));
  if (n == 2) {
    const Vec d = canonical_sign(dir);
    double a = std::atan2(d(1), d(0));
    if (a < 0) a += kTwoPi;
    res.angle = a;
  }
  return res;
}

std::string_view certificate_name(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::frame_certified: return "frame-certified";
    case CertificateStatus::unknown: return "unknown";
    case CertificateStatus::not_applicable: return "not-applicable";
  }
  return "unknown";
}

CertificateStatus corollary_frame_certificate(const Vec& b, const Vec& c,
                                              bool orthonormal_separable) {
  if (b.size() != c.size() || b.size() == 0) return CertificateStatus::not_applicable;
  if (!orthonormal_separable) return CertificateStatus::unknown;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (!(b(i) > 0 && b(i) < 1)) return CertificateStatus::unknown;
    if (std::abs(b(i)) != std::abs(c(i))) return CertificateStatus::unknown;
  }
  return CertificateStatus::frame_certified;
}

FrameOperator build_frame_operator(const WindowSpec& spec, const LatticeFrame& lf, int K,
                                   const FrameGridParams& params) {
  if (lf.degenerate) throw Error(ErrorCode::invalid_argument, "lattice frame is degenerate");
  const int n = lf.dim();
  const double atom_count = lattice_point_count(n, K);
  if (atom_count > params.max_atoms)
    throw Error(ErrorCode::budget_exceeded,
                "frame estimate needs " + std::to_string(atom_count) + " atoms");
  const CospherePoint& m = lf.source.m;
  const Mat A = spec.at(m.b);
  const Vec eta = m.p;
  const Mat& T = lf.translations;
  const Mat& M = lf.modulations;
  const Mat Ainv = A.inverse();

  FrameOperator op;
  op.volume_element = params.volume_element;
  std::vector<Rule1D> axes;
  std::vector<double> spans;
  double nodes_total = 1;
  for (int k = 0; k < n; ++k) {
    const double H = K * T.row(k).cwiseAbs().sum() + std::sqrt(params.decay * Ainv(k, k));
    const double F = K * M.row(k).cwiseAbs().sum() + std::abs(eta(k)) / kTwoPi +
                     std::sqrt(params.decay * A(k, k)) / kPi;
    const int N = static_cast<int>(std::ceil(params.oversample * H * F)) + params.min_nodes;
    op.nodes_per_axis.push_back(N);
    nodes_total *= N;
    spans.push_back(H);
  }
  check_tensor_budget(nodes_total, 1, params.node_budget);
  for (int k = 0; k < n; ++k) axes.push_back(gauss_legendre(op.nodes_per_axis[k], -spans[k], spans[k]));
  op.grid = TensorGrid(std::move(axes), params.node_budget);
  const std::int64_t nodes = op.grid.size();

  // Test functions: the window, then tapered modes in lattice coordinates u = T^{-1} V.
  const Mat Tinv = T.inverse();
  std::vector<Vec> freqs;
  if (K > 0) {
    const Mat TtM = T.transpose() * M;  // j = K T^T M v for modulation coordinates v
    std::vector<int> bound(n);
    for (int i = 0; i < n; ++i)
      bound[i] = static_cast<int>(std::floor(K * 0.5 * K * TtM.row(i).cwiseAbs().sum() + 1e-9));
    const Mat toV = M.inverse() * Tinv.transpose() / static_cast<double>(K);
    std::vector<int> j(n);
    for (int i = 0; i < n; ++i) j[i] = -bound[i];
    while (true) {
      Vec jv(n);
      for (int i = 0; i < n; ++i) jv(i) = j[i];
      const Vec v = toV * jv;
      if (v.cwiseAbs().maxCoeff() <= 0.5 * K + 1e-9)
        freqs.push_back(Tinv.transpose() * jv / static_cast<double>(K));
      int pos = n - 1;
      while (pos >= 0 && j[pos] == bound[pos]) {
        j[pos] = -bound[pos];
        --pos;
      }
      if (pos < 0) break;
      ++j[pos];
    }
  }
  const auto r0 = static_cast<Eigen::Index>(1 + freqs.size());
  const double work = atom_count * static_cast<double>(nodes) * static_cast<double>(r0);
  if (work > params.work_budget)
    throw Error(ErrorCode::budget_exceeded,
                "frame estimate work " + std::to_string(work) + " exceeds budget");

  CMat B(nodes, r0);
  Vec w(nodes);
  parallel_for(nodes, [&](std::ptrdiff_t k) {
    const Vec V = op.grid.node(k);
    w(k) = op.grid.weight(k) * op.volume_element;
    B(k, 0) = window_eval(A, eta, V);
    double taper = 0;
    if (K > 0) {
      const Vec u = Tinv * V;
      taper = 1;
      for (int i = 0; i < n; ++i)
        taper *= std::abs(u(i)) <= 0.5 * K ? std::pow(std::cos(kPi * u(i) / K), 2) : 0.0;
    }
    for (size_t j = 0; j < freqs.size(); ++j) {
      const double ph = kTwoPi * freqs[j].dot(V) - eta.dot(V);
      B(k, static_cast<Eigen::Index>(j) + 1) = taper * cplx(std::cos(ph), std::sin(ph));
    }
  });

  // Whitening: orthonormal basis of the span, dropping numerically dependent directions.
  const CMat G = B.adjoint() * w.asDiagonal() * B;
  Eigen::SelfAdjointEigenSolver<CMat> eg(G);
  const Vec ev = eg.eigenvalues();
  const double top = ev.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > params.gram_cutoff * top) keep.push_back(i);
  CMat Wt(r0, static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c)
    Wt.col(static_cast<Eigen::Index>(c)) = eg.eigenvectors().col(keep[c]) / std::sqrt(ev(keep[c]));
  op.test_basis = B * Wt;

  op.atoms = enumerate_lattice_points(lf, K);
  const auto na = static_cast<std::ptrdiff_t>(op.atoms.size());
  const Eigen::Index r = op.test_basis.cols();
  op.coefficients.resize(na, r);
  parallel_for(na, [&](std::ptrdiff_t a) {
    CVec t(nodes);
    for (std::int64_t k = 0; k < nodes; ++k)
      t(k) = w(k) * std::conj(tf_shift_eval(A, eta, op.atoms[a].W, op.atoms[a].xi, op.grid.node(k)));
    op.coefficients.row(a) = t.transpose() * op.test_basis;
  });
  op.reduced = op.coefficients.adjoint() * op.coefficients;
  return op;
}

double power_iteration_max(const CMat& S, int iterations, double tolerance,
                           std::vector<double>* trace) {
  const Eigen::Index r = S.rows();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  CVec v(r);
  for (Eigen::Index i = 0; i < r; ++i) v(i) = cplx(normal(rng), normal(rng));
  v.normalize();
  double lambda = 0;
  std::vector<double> local;
  for (int it = 0; it < iterations; ++it) {
    const CVec Sv = S * v;
    const double next = v.dot(Sv).real();
    local.push_back(next);
    const double nrm = Sv.norm();
    if (nrm == 0) return 0;
    v = Sv / nrm;
    if (it > 0 && std::abs(next - lambda) <= tolerance * std::abs(next)) {
      if (trace) *trace = local;
      return next;
    }
    lambda = next;
  }
  if (trace) *trace = local;
  std::ostringstream os;
  os.precision(17);
  os << "power iteration did not converge in " << iterations << " iterations; last estimates:";
  for (size_t i = local.size() >= 5 ? local.size() - 5 : 0; i < local.size(); ++i) os << " " << local[i];
  throw Error(ErrorCode::iteration_limit, os.str());
}

FrameBounds frame_bounds_at(const WindowSpec& spec, const LatticeFrame& lf, int K,
                            const FrameGridParams& params) {
  const FrameOperator op = build_frame_operator(spec, lf, K, params);
  FrameBounds fb;
  fb.test_dim = static_cast<int>(op.reduced.rows());
  fb.atom_count = static_cast<int>(op.atoms.size());
  fb.nodes_per_axis = op.nodes_per_axis;
  if (params.method == ExtremeMethod::dense) {
    Eigen::SelfAdjointEigenSolver<CMat> es(op.reduced, Eigen::EigenvaluesOnly);
    fb.A_est = std::max(0.0, es.eigenvalues()(0));
    fb.B_est = std::max(fb.A_est, es.eigenvalues()(es.eigenvalues().size() - 1));
  } else {
    fb.B_est = power_iteration_max(op.reduced, params.power_iterations, params.power_tolerance);
    const CMat shifted =
        fb.B_est * CMat::Identity(op.reduced.rows(), op.reduced.cols()) - op.reduced;
    fb.A_est = std::max(0.0, fb.B_est - power_iteration_max(shifted, params.power_iterations,
                                                            params.power_tolerance));
  }
  return fb;
}

FrameReport frame_bounds_estimate(const WindowSpec& spec, const LatticeFrame& lf,
                                  const LatticeSpec& lattice, const FrameGridParams& params) {
  FrameReport rep;
  rep.lattice = lattice;
  rep.K = lattice.K;
  rep.method = params.method;
  rep.certificate = lf.degenerate
                        ? CertificateStatus::not_applicable
                        : corollary_frame_certificate(lattice.translation_scales,
                                                      lattice.modulation_scales,
                                                      lf.source.orthonormal_separable);
  for (int K = lattice.K; K <= lattice.K + 2; ++K) {
    FrameBounds fb;
    try {
      fb = frame_bounds_at(spec, lf, K, params);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::iteration_limit) throw;
      std::string msg = e.what();
      msg = msg.substr(msg.find(": ") + 2);
      std::ostringstream os;
      os.precision(17);
      os << msg << "; partial trace (K, A_est):";
      for (size_t i = 0; i < rep.trace_K.size(); ++i) os << " (" << rep.trace_K[i] << ", " << rep.trace_A[i] << ")";
      throw Error(ErrorCode::iteration_limit, os.str());
    }
    rep.trace_K.push_back(K);
    rep.trace_A.push_back(fb.A_est);
    rep.trace_B.push_back(fb.B_est);
    if (K == lattice.K) {
      rep.A_est = fb.A_est;
      rep.B_est = fb.B_est;
      rep.test_dim = fb.test_dim;
      rep.nodes_per_axis = fb.nodes_per_axis;
    }
  }
  return rep;
}

}  // namespace cgabor
