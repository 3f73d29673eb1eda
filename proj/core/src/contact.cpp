#include "cgabor/contact.hpp"

#include <cmath>

#include "cgabor/error.hpp"

namespace cgabor {

namespace {

Mat cholesky_factor(const Mat& g) { return g.llt().matrixL().toDenseMatrix(); }

double finite_step(const RiemannianChart& chart, int axis) {
  // Base axes scale with the box width, fiber coordinates q have unit scale.
  return axis < chart.n ? 1e-5 * chart.width(axis) : 1e-5;
}

}  // namespace

std::string_view provenance_name(FrameProvenance p) {
  switch (p) {
    case FrameProvenance::analytic_flat: return "analytic-flat";
    case FrameProvenance::numeric_generic: return "numeric-generic";
    case FrameProvenance::hypercomplex: return "hypercomplex";
  }
  return "unknown";
}

CospherePoint make_cosphere_point(const RiemannianChart& chart, const ManifoldPoint& b,
                                  const Vec& p) {
  if (p.size() != chart.n) throw Error(ErrorCode::shape_mismatch, "covector dimension");
  const double nrm = dual_norm(chart, {b, p});
  if (!(nrm > 0)) throw Error(ErrorCode::invalid_argument, "zero covector");
  return {b, p / nrm};
}

FrameProvenance ContactStructure::provenance(const RiemannianChart& chart) const {
  return chart.is_flat() ? FrameProvenance::analytic_flat : FrameProvenance::numeric_generic;
}

std::vector<Mat> RotationStructure::coframe_maps(const Vec& p_hat0) const {
  const auto n = p_hat0.size();
  std::vector<Mat> maps{Mat::Identity(n, n)};
  for (const Vec& u : orthonormal_completion_hat(p_hat0)) {
    maps.push_back(Mat::Identity(n, n) - p_hat0 * p_hat0.transpose() - u * u.transpose() +
                   u * p_hat0.transpose() - p_hat0 * u.transpose());
  }
  return maps;
}

HypercomplexStructure HypercomplexStructure::builtin() {
  HypercomplexStructure h;
  h.I << 0, -1, 0, 0,
         1, 0, 0, 0,
         0, 0, 0, -1,
         0, 0, 1, 0;
  h.J << 0, 0, -1, 0,
         0, 0, 0, 1,
         1, 0, 0, 0,
         0, -1, 0, 0;
  h.K = h.I * h.J;
  return h;
}

std::vector<Mat> HypercomplexContact::coframe_maps(const Vec& p_hat0) const {
  if (p_hat0.size() != 4)
    throw Error(ErrorCode::invalid_argument, "hypercomplex structure needs a 4-dimensional base");
  return {Mat::Identity(4, 4), h_.I.transpose(), h_.J.transpose(), h_.K.transpose()};
}

std::vector<Vec> orthonormal_completion_hat(const Vec& p_hat) {
  const auto n = p_hat.size();
  std::vector<Vec> out;
  if (n < 2) return out;
  if (n == 2) {
    Vec u(2);
    u << -p_hat(1), p_hat(0);
    out.push_back(u);
    return out;
  }
  // Householder H = I - 2 w w^T / w^T w with H e_n = +-p_hat; the branch keeps |w|^2 >= 2.
  Vec w = Vec::Zero(n);
  w(n - 1) = 1.0;
  if (p_hat(n - 1) > 0) w += p_hat;
  else w -= p_hat;
  const double ww = w.squaredNorm();
  std::vector<Vec> basis{p_hat};
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    Vec v = -2.0 * w(i) / ww * w;
    v(i) += 1.0;
    for (const Vec& q : basis) v -= q.dot(v) * q;
    v.normalize();
    basis.push_back(v);
  }
  Mat frame(n, n);
  for (Eigen::Index i = 0; i < n; ++i) frame.col(i) = basis[i];
  if (frame.determinant() < 0) basis.back() = -basis.back();
  out.assign(basis.begin() + 1, basis.end());
  return out;
}

std::vector<Vec> orthonormal_completion(const Vec& p, const Mat& metric) {
  const Mat L = cholesky_factor(metric);
  const Vec p_hat = L.triangularView<Eigen::Lower>().solve(p);
  std::vector<Vec> out;
  for (const Vec& u : orthonormal_completion_hat(p_hat)) out.push_back(L * u);
  return out;
}

std::vector<Vec> contact_covectors(const RiemannianChart& chart, const CospherePoint& m,
                                   const ContactStructure& s) {
  const Mat L = cholesky_factor(metric_at(chart, m.b));
  const Vec p_hat = L.triangularView<Eigen::Lower>().solve(m.p);
  std::vector<Vec> out;
  for (const Mat& M : s.coframe_maps(p_hat)) out.push_back(L * (M * p_hat));
  return out;
}

Vec local_origin(const CospherePoint& m) {
  const auto n = m.b.coords.size();
  Vec x = Vec::Zero(2 * n - 1);
  x.head(n) = m.b.coords;
  return x;
}

OneFormField structure_form(const RiemannianChart& chart, const CospherePoint& m,
                            const ContactStructure& s, int index) {
  const int n = chart.n;
  const Mat L0 = cholesky_factor(metric_at(chart, m.b));
  const Vec p_hat0 = L0.triangularView<Eigen::Lower>().solve(m.p);
  const auto maps = s.coframe_maps(p_hat0);
  if (index < 0 || index >= static_cast<int>(maps.size()))
    throw Error(ErrorCode::invalid_argument, "contact form index out of range");
  const Mat M = maps[index];
  const auto tangents = orthonormal_completion(m.p, metric_at(chart, m.b));
  const Vec p0 = m.p;
  return [chart, M, tangents, p0, n](const Vec& x) {
    const Vec b = x.head(n);
    Vec p = p0;
    for (int j = 0; j + 1 < n; ++j) p += x(n + j) * tangents[j];
    const Mat L = cholesky_factor(metric_at(chart, {b}));
    const Vec p_hat = L.triangularView<Eigen::Lower>().solve(p).normalized();
    Vec a = Vec::Zero(2 * n - 1);
    a.head(n) = L * (M * p_hat);
    return a;
  };
}

Mat exterior_derivative(const RiemannianChart& chart, const OneFormField& alpha, const Vec& x0) {
  const auto d = x0.size();
  Mat D(d, d);  // D(mu, nu) = d_mu a_nu
  for (Eigen::Index mu = 0; mu < d; ++mu) {
    const double h = finite_step(chart, static_cast<int>(mu));
    Vec xp = x0, xm = x0;
    xp(mu) += h;
    xm(mu) -= h;
    D.row(mu) = ((alpha(xp) - alpha(xm)) / (2.0 * h)).transpose();
  }
  return D - D.transpose();
}

Vec reeb_vector(const RiemannianChart& chart, const OneFormField& alpha, const Vec& x0) {
  const auto d = x0.size();
  const Mat omega = exterior_derivative(chart, alpha, x0);
  const Vec a = alpha(x0);
  Mat sys(d + 1, d);
  sys.topRows(d) = omega;
  sys.row(d) = a.transpose();
  Vec rhs = Vec::Zero(d + 1);
  rhs(d) = 1.0;
  Eigen::ColPivHouseholderQR<Mat> qr(sys);
  qr.setThreshold(1e-10);
  if (qr.rank() < d)
    throw Error(ErrorCode::reeb_degenerate, "Reeb system is rank deficient at the given point");
  const Vec r = qr.solve(rhs);
  if ((sys * r - rhs).norm() > 1e-6)
    throw Error(ErrorCode::reeb_degenerate, "Reeb system is inconsistent at the given point");
  return r;
}

std::vector<Vec> reeb_fields(const RiemannianChart& chart, const CospherePoint& m,
                             const ContactStructure& s, ReebMethod method) {
  return build_contact_frame(chart, m, s, method).reeb;
}

ContactFrame build_contact_frame(const RiemannianChart& chart, const CospherePoint& m,
                                 const ContactStructure& s, ReebMethod method) {
  ContactFrame f;
  f.m = m;
  f.covectors = contact_covectors(chart, m, s);
  f.provenance = s.provenance(chart);
  f.orthonormal_separable = s.orthonormal_separable() && chart.is_flat();
  const int n = chart.n;
  const bool analytic =
      method == ReebMethod::analytic || (method == ReebMethod::automatic && chart.is_flat());
  if (analytic) {
    const Mat g = metric_at(chart, m.b);
    for (const Vec& c : f.covectors) {
      f.reeb.push_back(g.llt().solve(c));
      f.reeb_vertical.push_back(Vec::Zero(n - 1));
    }
    return f;
  }
  if (f.provenance == FrameProvenance::analytic_flat) f.provenance = FrameProvenance::numeric_generic;
  const Vec x0 = local_origin(m);
  for (size_t i = 0; i < f.covectors.size(); ++i) {
    const Vec r = reeb_vector(chart, structure_form(chart, m, s, static_cast<int>(i)), x0);
    f.reeb.push_back(r.head(n));
    f.reeb_vertical.push_back(r.tail(n - 1));
  }
  return f;
}

double contact_condition_check(const RiemannianChart& chart, const OneFormField& alpha,
                               const Vec& x0, int order) {
  const auto d = x0.size();
  if (d != 2 * order - 1)
    throw Error(ErrorCode::shape_mismatch, "order does not match the local dimension");
  const Mat omega = exterior_derivative(chart, alpha, x0);
  const Vec a = alpha(x0);
  Mat ext = Mat::Zero(d + 1, d + 1);
  ext.topLeftCorner(d, d) = omega;
  ext.topRightCorner(d, 1) = a;
  ext.bottomLeftCorner(1, d) = -a.transpose();
  // The top-form coefficient is k! times the Pfaffian of the bordered matrix.
  const double pf = std::sqrt(std::abs(ext.determinant()));
  return std::tgamma(order) * pf;
}

}  // namespace cgabor
