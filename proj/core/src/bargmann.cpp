#include "cgabor/bargmann.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cgabor/parallel.hpp"

namespace cgabor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double factorial(int k) { return std::tgamma(k + 1.0); }

}  // namespace

ComplexFiberPoint complexify(const Vec& V, const Vec& eta) {
  if (V.size() != eta.size()) throw Error(ErrorCode::shape_mismatch, "V and eta sizes differ");
  return {V.cast<cplx>() + kI * eta.cast<cplx>()};
}

std::pair<Vec, Vec> decomplexify(const ComplexFiberPoint& z) { return {z.z.real(), z.z.imag()}; }

std::pair<Vec, Vec> complex_structure(const Vec& V, const Vec& eta) { return {-eta, V}; }

cplx quadratic_form_P(const Vec& V, const Vec& eta, const Mat& A) {
  return cplx(V.dot(A * V) / kPi - eta.dot(eta), 2.0 * eta.dot(V));
}

FockWeight FockWeight::from(const Mat& A) {
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::window_degenerate, "Fock weight needs an SPD matrix");
  FockWeight w;
  w.A = A;
  w.Q = llt.matrixL().transpose();
  w.Q_scaled = w.Q / std::sqrt(kPi);
  return w;
}

CVec FockWeight::apply(const CVec& z) const {
  const Vec re = Q_scaled * z.real();
  return re.cast<cplx>() + kI * z.imag().cast<cplx>();
}

double FockWeight::frak_P(const CVec& z) const {
  return (Q_scaled * z.real()).squaredNorm() + z.imag().squaredNorm();
}

double FockWeight::normalization() const { return std::sqrt(Q_scaled.diagonal().prod()); }

double FockWeight::density(const CVec& z) const { return std::exp(-kPi * frak_P(z)); }

CVec ZGrid::z(std::int64_t k) const {
  const Vec x = grid.node(k);
  return (real_map * x.head(n)).cast<cplx>() + kI * x.tail(n).cast<cplx>();
}

ZGrid make_z_grid(int n, double half_width, int nodes, double budget) {
  check_tensor_budget(nodes, 2 * n, budget);
  std::vector<Rule1D> axes(2 * n, gauss_legendre(nodes, -half_width, half_width));
  return {n, TensorGrid(std::move(axes), budget), Mat::Identity(n, n), 1.0};
}

ZGrid make_z_grid(const FockWeight& w, double half_width, int nodes, double budget) {
  ZGrid zg = make_z_grid(w.dim(), half_width, nodes, budget);
  zg.real_map = w.Q_scaled.triangularView<Eigen::Upper>().solve(Mat::Identity(w.dim(), w.dim()));
  zg.jacobian = std::abs(zg.real_map.determinant());
  return zg;
}

cplx bargmann_at(const CVec& f, const FiberGrid& fg, const Mat& A, const Vec& V, const Vec& eta) {
  if (f.size() != fg.grid.size()) throw Error(ErrorCode::shape_mismatch, "samples vs fiber grid");
  const Vec AV = A * V;
  cplx acc = 0;
  for (std::int64_t k = 0; k < fg.grid.size(); ++k) {
    if (f(k) == cplx(0)) continue;
    const Vec W = fg.grid.node(k);
    acc += fg.grid.weight(k) * f(k) *
           std::exp(cplx(2.0 * W.dot(AV) - W.dot(A * W), 2.0 * kPi * eta.dot(W)));
  }
  return acc * fg.volume_element * std::exp(-0.5 * kPi * quadratic_form_P(V, eta, A));
}

CVec bargmann_transform(const CVec& f, const FiberGrid& fg, const Mat& A, const ZGrid& zg,
                        double work_budget) {
  if (f.size() != fg.grid.size()) throw Error(ErrorCode::shape_mismatch, "samples vs fiber grid");
  const double work = static_cast<double>(zg.size()) * static_cast<double>(fg.grid.size());
  if (work > work_budget)
    throw Error(ErrorCode::budget_exceeded, "Bargmann transform work " + fmt(work));
  // Precompute the fiber side once.
  std::vector<Vec> W, AW;
  std::vector<cplx> c;
  std::vector<double> wAw;
  for (std::int64_t k = 0; k < fg.grid.size(); ++k) {
    if (f(k) == cplx(0)) continue;
    W.push_back(fg.grid.node(k));
    AW.push_back(A * W.back());
    wAw.push_back(W.back().dot(AW.back()));
    c.push_back(fg.grid.weight(k) * fg.volume_element * f(k));
  }
  const int n = zg.n;
  CVec out(zg.size());
  parallel_for(zg.size(), [&](std::ptrdiff_t j) {
    const CVec z = zg.z(j);
    const Vec V = z.real(), eta = z.imag();
    cplx acc = 0;
    for (size_t k = 0; k < W.size(); ++k)
      acc += c[k] * std::exp(cplx(2.0 * AW[k].dot(V) - wAw[k], 2.0 * kPi * eta.dot(W[k])));
    out(j) = acc * std::exp(-0.5 * kPi * quadratic_form_P(V, eta, A));
    (void)n;
  });
  return out;
}

cplx fock_inner_product(const CVec& F, const CVec& G, const FockWeight& w, const ZGrid& zg) {
  if (F.size() != zg.size() || G.size() != zg.size())
    throw Error(ErrorCode::shape_mismatch, "Fock inner product: values vs z-grid");
  cplx acc = 0;
  for (std::int64_t k = 0; k < zg.size(); ++k)
    acc += zg.weight(k) * w.density(zg.z(k)) * F(k) * std::conj(G(k));
  return acc;
}

cplx basis_e_alpha_at(const std::vector<int>& alpha, const FockWeight& w, const CVec& z) {
  const CVec u = w.apply(z);
  int deg = 0;
  double fact = 1;
  cplx mono = 1;
  for (size_t k = 0; k < alpha.size(); ++k) {
    deg += alpha[k];
    fact *= factorial(alpha[k]);
    for (int e = 0; e < alpha[k]; ++e) mono *= u(static_cast<Eigen::Index>(k));
  }
  return w.normalization() * std::sqrt(std::pow(kPi, deg) / fact) * mono;
}

CVec basis_e_alpha(const std::vector<int>& alpha, const FockWeight& w, const ZGrid& zg) {
  if (static_cast<int>(alpha.size()) != w.dim())
    throw Error(ErrorCode::shape_mismatch, "multi-index length differs from dimension");
  CVec out(zg.size());
  for (std::int64_t k = 0; k < zg.size(); ++k) out(k) = basis_e_alpha_at(alpha, w, zg.z(k));
  return out;
}

cplx reproducing_kernel_at(const CVec& z0, const CVec& z, const FockWeight& w) {
  const double N = w.normalization();
  const cplx s = w.apply(z0).conjugate().cwiseProduct(w.apply(z)).sum();
  return N * N * std::exp(kPi * s);
}

CVec reproducing_kernel(const CVec& z0, const FockWeight& w, const ZGrid& zg) {
  CVec out(zg.size());
  for (std::int64_t k = 0; k < zg.size(); ++k) out(k) = reproducing_kernel_at(z0, zg.z(k), w);
  return out;
}

LemmaCheck lemma_norm_verify(const LiftedFiberSignal& f, const Vec& W, const Vec& xi,
                             const WindowSpec& spec) {
  const Mat A = spec.at(f.m.b);
  LemmaCheck c;
  c.lhs = std::abs(gabor_coefficient(f, {f.m, W, xi}, spec));
  const Vec eta_t = xi + f.m.p / (2.0 * kPi);
  c.rhs = std::exp(-0.5 * kPi * (W.dot(A * W) / kPi + eta_t.dot(eta_t))) *
          std::abs(bargmann_at(f.samples, f.grid, A, W, eta_t));
  const double scale = std::max(c.lhs, c.rhs);
  c.relative_error = scale > 0 ? std::abs(c.lhs - c.rhs) / scale : 0.0;
  return c;
}

EmbeddingCheck embedding_check(const Mat& A) {
  const FockWeight w = FockWeight::from(A);
  Eigen::JacobiSVD<Mat> svd(w.Q_scaled);
  EmbeddingCheck e;
  e.rho = svd.singularValues()(0);
  e.embeds = e.rho <= 1.0 + 1e-12;
  return e;
}

double psi_norm_squared(const Mat& A) {
  return std::sqrt(std::pow(kPi, A.rows()) / (2.0 * A).determinant());
}

double gaussian_integral(const Mat& A) {
  return std::sqrt(std::pow(kPi, A.rows()) / A.determinant());
}

std::vector<std::vector<int>> multi_indices(int n, int d) {
  std::vector<std::vector<int>> out;
  for (int deg = 0; deg <= d; ++deg) {
    std::vector<int> a(n, 0);
    // Enumerate compositions of deg into n parts, first entry largest first.
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == n - 1) {
        a[pos] = left;
        out.push_back(a);
        return;
      }
      for (int v = left; v >= 0; --v) {
        a[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, deg);
  }
  return out;
}

namespace {

// Random test signal: a sum of three modulated Gaussian bumps near the fiber origin.
CVec random_signal(const FiberGrid& fg, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> centre(-0.5, 0.5), width(0.7, 1.5);
  std::normal_distribution<double> normal;
  CVec f = CVec::Zero(fg.grid.size());
  for (int j = 0; j < 3; ++j) {
    Vec a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = centre(rng);
      b(i) = centre(rng);
    }
    const double s = width(rng);
    const cplx c(normal(rng), normal(rng));
    for (std::int64_t k = 0; k < fg.grid.size(); ++k) {
      const Vec W = fg.grid.node(k);
      f(k) += c * std::exp(cplx(-kPi * s * (W - a).squaredNorm(), 2.0 * kPi * b.dot(W)));
    }
  }
  return f;
}

double grid_norm(const CVec& f, const FiberGrid& fg) {
  double acc = 0;
  for (std::int64_t k = 0; k < fg.grid.size(); ++k) acc += fg.grid.weight(k) * std::norm(f(k));
  return std::sqrt(acc * fg.volume_element);
}

}  // namespace

std::vector<IdentityResult> run_bargmann_suite(const BargmannSuiteParams& params) {
  const int n = params.n;
  const Mat A = params.A.size() ? params.A : Mat(kPi * Mat::Identity(n, n));
  if (A.rows() != n || A.cols() != n)
    throw Error(ErrorCode::shape_mismatch, "suite matrix A must be n x n");
  const WindowSpec spec = WindowSpec::constant(A);
  const FockWeight fw = FockWeight::from(A);
  const RiemannianChart chart = RiemannianChart::flat_torus(Vec::Ones(n));
  const ManifoldPoint b{Vec::Zero(n)};
  Vec p = Vec::Zero(n);
  p(0) = 1.0;
  const CospherePoint m{b, p};
  const CutoffSpec cutoff{injectivity_radius(chart, b), 0.25};
  const FiberGrid fg = make_fiber_grid(chart, b, cutoff, params.fiber_nodes, params.budget);
  const ZGrid zg = make_z_grid(fw, params.z_half_width, params.z_nodes, params.budget);
  std::mt19937_64 rng(params.seed);
  std::vector<IdentityResult> out;

  {  // Norm lemma over random (W, xi, f).
    IdentityResult r{"norm-lemma", 0, 0, 0, 1e-4, false, ""};
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0;
    for (int s = 0; s < params.lemma_samples; ++s) {
      const CVec f = random_signal(fg, n, rng);
      Vec W(n), xi(n);
      for (int i = 0; i < n; ++i) {
        W(i) = u(rng);
        xi(i) = u(rng);
      }
      const LemmaCheck c = lemma_norm_verify({m, fg, cutoff, f}, W, xi, spec);
      if (c.relative_error >= worst) {
        worst = c.relative_error;
        r.lhs = c.lhs;
        r.rhs = c.rhs;
      }
    }
    r.error = worst;
    r.pass = worst < r.tolerance;
    r.detail = "max relative error over " + std::to_string(params.lemma_samples) + " samples";
    out.push_back(r);
  }

  const auto alphas = multi_indices(n, params.max_degree);
  std::vector<CVec> basis;
  for (const auto& a : alphas) basis.push_back(basis_e_alpha(a, fw, zg));

  {  // Orthonormality of e_alpha.
    IdentityResult r{"orthonormal-basis", 0, 0, 0, 1e-3, false, ""};
    double worst = 0;
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = 0; j < basis.size(); ++j) {
        const cplx g = fock_inner_product(basis[i], basis[j], fw, zg);
        const double dev = std::abs(g - cplx(i == j ? 1.0 : 0.0));
        if (dev >= worst) {
          worst = dev;
          r.lhs = std::abs(g);
          r.rhs = i == j ? 1.0 : 0.0;
        }
      }
    r.error = worst;
    r.pass = worst < r.tolerance;
    r.detail = "max |Gram - Id| over " + std::to_string(basis.size()) + " basis functions";
    out.push_back(r);
  }

  {  // Reproducing kernel.
    IdentityResult r{"reproducing-kernel", 0, 0, 0, 1e-3, false, ""};
    std::uniform_real_distribution<double> radius(0.3, 1.0);
    std::normal_distribution<double> normal;
    const Mat Qinv = fw.Q_scaled.inverse();
    double worst = 0;
    for (int s = 0; s < params.kernel_points; ++s) {
      CVec u(n);
      for (int i = 0; i < n; ++i) u(i) = cplx(normal(rng), normal(rng));
      u *= radius(rng) / u.norm();
      const Vec re = Qinv * u.real();
      const CVec z0 = re.cast<cplx>() + kI * u.imag().cast<cplx>();
      const CVec K = reproducing_kernel(z0, fw, zg);
      for (size_t a = 0; a < alphas.size(); ++a) {
        const cplx lhs = fock_inner_product(basis[a], K, fw, zg);
        const cplx rhs = basis_e_alpha_at(alphas[a], fw, z0);
        const double rel = std::abs(lhs - rhs) / std::abs(rhs);
        if (rel >= worst) {
          worst = rel;
          r.lhs = std::abs(lhs);
          r.rhs = std::abs(rhs);
        }
      }
    }
    r.error = worst;
    r.pass = worst < r.tolerance;
    r.detail = "max relative error of <e_alpha, K_z0> - e_alpha(z0)";
    out.push_back(r);
  }

  {  // Constant ratio ||Bf|| / ||f||.
    IdentityResult r{"bijection-ratio", 0, 0, 0, 1e-3, false, ""};
    std::vector<double> ratios;
    for (int s = 0; s < params.ratio_samples; ++s) {
      const CVec f = random_signal(fg, n, rng);
      const CVec Bf = bargmann_transform(f, fg, A, zg);
      ratios.push_back(std::sqrt(fock_inner_product(Bf, Bf, fw, zg).real()) / grid_norm(f, fg));
    }
    double mean = 0;
    for (double v : ratios) mean += v;
    mean /= ratios.size();
    double var = 0;
    for (double v : ratios) var += (v - mean) * (v - mean);
    const double spread = std::sqrt(var / ratios.size()) / mean;
    const double claimed_constant = gaussian_integral(A);
    const double window_norm = std::sqrt(psi_norm_squared(A));
    r.lhs = mean;
    r.rhs = claimed_constant;
    r.error = spread;
    r.pass = spread < r.tolerance;
    r.detail = "relative spread " + fmt(spread) + "; mean ratio " + fmt(mean) +
               "; claimed constant sqrt(pi^n/det A) = " + fmt(claimed_constant) +
               " (deviation " + fmt(mean - claimed_constant) + "); ||Psi|| = sqrt(sqrt(pi^n/det 2A)) = " +
               fmt(window_norm) + "; integral of exp(-V^T A V) = " + fmt(gaussian_integral(A)) +
               ", of |Psi|^2 = " + fmt(psi_norm_squared(A));
    out.push_back(r);
  }

  {  // Embedding verdicts.
    IdentityResult r{"embedding", 0, 0, 0, 1e-12, true, ""};
    struct Ref {
      Mat A;
      double rho;
      bool embeds;
      const char* label;
    };
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = kPi;
    d(1, 1) = kPi / 4;
    const std::vector<Ref> refs{{kPi * Mat::Identity(1, 1), 1.0, true, "pi*I"},
                                {4 * kPi * Mat::Identity(1, 1), 2.0, false, "4pi*I"},
                                {d, 1.0, true, "diag(pi,pi/4)"}};
    std::ostringstream os;
    for (const Ref& ref : refs) {
      const EmbeddingCheck e = embedding_check(ref.A);
      const double err = std::abs(e.rho - ref.rho);
      r.error = std::max(r.error, err);
      r.pass = r.pass && e.embeds == ref.embeds && err <= r.tolerance;
      os << ref.label << ": rho=" << fmt(e.rho) << (e.embeds ? " embeds" : " not-embeds") << "; ";
    }
    const EmbeddingCheck cfg = embedding_check(A);
    r.lhs = cfg.rho;
    r.rhs = 1.0;
    os << "configured A: rho=" << fmt(cfg.rho) << (cfg.embeds ? " embeds" : " not-embeds")
       << " (informational)";
    r.detail = os.str();
    out.push_back(r);
  }

  {  // Closed form for the window itself.
    IdentityResult r{"gaussian-closed-form", 0, 0, 0, 1e-6, false, ""};
    CVec psi(fg.grid.size());
    for (std::int64_t k = 0; k < fg.grid.size(); ++k) psi(k) = window_eval(A, p, fg.grid.node(k));
    const cplx lhs = bargmann_at(psi, fg, A, Vec::Zero(n), Vec::Zero(n));
    const double rhs = psi_norm_squared(A) * std::exp(-p.dot(A.llt().solve(p)) / 8.0);
    r.lhs = std::abs(lhs);
    r.rhs = rhs;
    r.error = std::abs(lhs - rhs) / rhs;
    r.pass = r.error < r.tolerance;
    r.detail = "B(Psi)(0,0) against sqrt(pi^n/det 2A) exp(-eta^T A^{-1} eta / 8)";
    out.push_back(r);
  }
  return out;
}

}  // namespace cgabor
