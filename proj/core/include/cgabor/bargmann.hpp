#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cgabor/gabor.hpp"

namespace cgabor {

struct ComplexFiberPoint {
  CVec z;  // z_k = V_k + i eta_k
};

ComplexFiberPoint complexify(const Vec& V, const Vec& eta);
std::pair<Vec, Vec> decomplexify(const ComplexFiberPoint& z);
// The complex structure on pairs: (V, eta) -> (-eta, V).
std::pair<Vec, Vec> complex_structure(const Vec& V, const Vec& eta);

// V^T (A / pi) V + 2 i <eta, V> - eta^T eta.
cplx quadratic_form_P(const Vec& V, const Vec& eta, const Mat& A);

// A = Q^T Q; Ptilde acts as Q / sqrt(pi) on real parts and as the identity on imaginary parts.
struct FockWeight {
  Mat A;
  Mat Q;
  Mat Q_scaled;  // Q / sqrt(pi)

  static FockWeight from(const Mat& A);
  int dim() const { return static_cast<int>(A.rows()); }
  CVec apply(const CVec& z) const;           // Ptilde z
  double frak_P(const CVec& z) const;        // |Ptilde z|^2
  // Basis normalization: N_A^2 = det(Q / sqrt(pi)), so that <e_0, e_0> = 1.
  double normalization() const;
  // Weight density exp(-pi |Ptilde z|^2) of the Fock inner product.
  double density(const CVec& z) const;
};

// Tensor Gauss-Legendre grid over [-L, L]^{2n} in (u, eta), with V = real_map * u.
struct ZGrid {
  int n = 0;
  TensorGrid grid;
  Mat real_map;        // identity for the plain grid
  double jacobian = 1;  // |det real_map|
  CVec z(std::int64_t k) const;
  double weight(std::int64_t k) const { return grid.weight(k) * jacobian; }
  std::int64_t size() const { return grid.size(); }
};

ZGrid make_z_grid(int n, double half_width = 4.0, int nodes = 41, double budget = kDefaultBudget);
// Grid in the coordinates u = (Q / sqrt(pi)) V that whiten the Fock weight, so its
// resolution does not depend on A. Equals the plain grid for A = pi * Id.
ZGrid make_z_grid(const FockWeight& w, double half_width = 4.0, int nodes = 41,
                  double budget = kDefaultBudget);

// Bargmann transform of fiber samples, at one point and over a z-grid.
cplx bargmann_at(const CVec& f, const FiberGrid& fg, const Mat& A, const Vec& V, const Vec& eta);
CVec bargmann_transform(const CVec& f, const FiberGrid& fg, const Mat& A, const ZGrid& zg,
                        double work_budget = 5e9);

cplx fock_inner_product(const CVec& F, const CVec& G, const FockWeight& w, const ZGrid& zg);

cplx basis_e_alpha_at(const std::vector<int>& alpha, const FockWeight& w, const CVec& z);
CVec basis_e_alpha(const std::vector<int>& alpha, const FockWeight& w, const ZGrid& zg);

cplx reproducing_kernel_at(const CVec& z0, const CVec& z, const FockWeight& w);
CVec reproducing_kernel(const CVec& z0, const FockWeight& w, const ZGrid& zg);

struct LemmaCheck {
  double lhs = 0;
  double rhs = 0;
  double relative_error = 0;
};

// |<f, M_xi T_W Psi>| against exp(-pi/2 [W^T (A/pi) W + eta~^T eta~]) |Bf(W, eta~)|,
// eta~ = xi + eta_p / (2 pi).
LemmaCheck lemma_norm_verify(const LiftedFiberSignal& f, const Vec& W, const Vec& xi,
                             const WindowSpec& spec);

struct EmbeddingCheck {
  double rho = 0;
  bool embeds = false;
};
EmbeddingCheck embedding_check(const Mat& A);

// Integral of |Psi|^2 = exp(-2 V^T A V), and of exp(-V^T A V).
double psi_norm_squared(const Mat& A);
double gaussian_integral(const Mat& A);

// All multi-indices of length n with total degree <= d, graded lexicographic.
std::vector<std::vector<int>> multi_indices(int n, int d);

struct IdentityResult {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double error = 0;
  double tolerance = 0;
  bool pass = false;
  std::string detail;
};

struct BargmannSuiteParams {
  Mat A;  // empty means pi * Id
  int n = 1;
  // 61 nodes leave ~1% spread in the norm ratio; 121 resolves it to rounding.
  int fiber_nodes = 121;
  double z_half_width = 4.0;
  int z_nodes = 41;
  int lemma_samples = 20;
  int ratio_samples = 10;
  int kernel_points = 5;
  int max_degree = 3;
  std::uint64_t seed = 20240601;
  double budget = kDefaultBudget;
};

std::vector<IdentityResult> run_bargmann_suite(const BargmannSuiteParams& params);

}  // namespace cgabor
