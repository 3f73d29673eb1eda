#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "cgabor/manifold.hpp"

namespace cgabor {

// Point of the cosphere bundle: base point and a covector of unit dual norm.
struct CospherePoint {
  ManifoldPoint b;
  Vec p;
};

// Rescales p to unit dual norm at b.
CospherePoint make_cosphere_point(const RiemannianChart& chart, const ManifoldPoint& b, const Vec& p);

enum class FrameProvenance { analytic_flat, numeric_generic, hypercomplex };
std::string_view provenance_name(FrameProvenance p);

// Contact structure given by n orthogonal maps of the orthonormal coframe.
// Covector i at (b, p) is L(b) * M_i * L(b)^{-1} p, where g(b) = L L^T and the
// matrices M_i are chosen once at the reference unit vector p_hat0.
class ContactStructure {
 public:
  virtual ~ContactStructure() = default;
  virtual std::vector<Mat> coframe_maps(const Vec& p_hat0) const = 0;
  virtual FrameProvenance provenance(const RiemannianChart& chart) const;
  virtual bool orthonormal_separable() const { return true; }
};

// F_0 = Id, F_i = +90 degree rotation carrying p_hat0 onto the i-th completion vector.
class RotationStructure final : public ContactStructure {
 public:
  std::vector<Mat> coframe_maps(const Vec& p_hat0) const override;
};

struct HypercomplexStructure {
  Eigen::Matrix4d I, J, K;
  static HypercomplexStructure builtin();
};

// {Id, I^T, J^T, K^T}; four-dimensional base only.
class HypercomplexContact final : public ContactStructure {
 public:
  explicit HypercomplexContact(HypercomplexStructure h = HypercomplexStructure::builtin())
      : h_(std::move(h)) {}
  std::vector<Mat> coframe_maps(const Vec& p_hat0) const override;
  FrameProvenance provenance(const RiemannianChart&) const override {
    return FrameProvenance::hypercomplex;
  }
  const HypercomplexStructure& matrices() const { return h_; }

 private:
  HypercomplexStructure h_;
};

struct ContactFrame {
  CospherePoint m;
  std::vector<Vec> covectors;  // F_i^* alpha, chart coframe components
  std::vector<Vec> reeb;       // horizontal parts of the Reeb vectors
  std::vector<Vec> reeb_vertical;
  FrameProvenance provenance = FrameProvenance::analytic_flat;
  bool orthonormal_separable = true;
};

// Euclidean-orthonormal completion of a unit vector, positively oriented:
// n = 2 rotates by +pi/2, n >= 3 applies a sign-safe Householder map then Gram-Schmidt.
std::vector<Vec> orthonormal_completion_hat(const Vec& p_hat);

// The same in the chart coframe: {p, u_1..u_{n-1}} orthonormal for g^{-1}(b).
std::vector<Vec> orthonormal_completion(const Vec& p, const Mat& metric);

std::vector<Vec> contact_covectors(const RiemannianChart& chart, const CospherePoint& m,
                                   const ContactStructure& s);

// Local coordinates x = (b, q) on the cosphere bundle near m.
// p(b, q) = normalize_{g(b)}(p0 + sum_j q_j t_j), t_j the completion covectors at m.
// A 1-form field returns its components over (db, dq) at x.
using OneFormField = std::function<Vec(const Vec& x)>;

OneFormField structure_form(const RiemannianChart& chart, const CospherePoint& m,
                            const ContactStructure& s, int index);

// d(alpha) by central differences: Omega(mu, nu) = d_mu a_nu - d_nu a_mu.
Mat exterior_derivative(const RiemannianChart& chart, const OneFormField& alpha, const Vec& x0);

enum class ReebMethod { automatic, analytic, numeric };

// Reeb field of one form at x0 (2n-1 components): alpha(R) = 1, i_R d(alpha) = 0.
Vec reeb_vector(const RiemannianChart& chart, const OneFormField& alpha, const Vec& x0);

std::vector<Vec> reeb_fields(const RiemannianChart& chart, const CospherePoint& m,
                             const ContactStructure& s, ReebMethod method = ReebMethod::automatic);

ContactFrame build_contact_frame(const RiemannianChart& chart, const CospherePoint& m,
                                 const ContactStructure& s,
                                 ReebMethod method = ReebMethod::automatic);

// |alpha ^ (d alpha)^(order-1)| at x0, the top-form coefficient in (b, q) coordinates.
double contact_condition_check(const RiemannianChart& chart, const OneFormField& alpha,
                               const Vec& x0, int order);

// Local coordinate vector of m itself, (b, 0).
Vec local_origin(const CospherePoint& m);

}  // namespace cgabor
