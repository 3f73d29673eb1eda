#pragma once

#include <string>

#include "cgabor/contact.hpp"

namespace oracle {

struct FrameCheck {
  double norm_error = 0;        // max | |F_i|_{g*} - 1 |
  double orthogonality = 0;     // max |<F_i, F_j>_{g*}|, i != j
  double pairing_error = 0;     // max |<F_i, R_i> - 1|
  double reeb_gram_det = 0;     // det of the Euclidean Gram matrix of the Reeb vectors
  double horizontality = 0;     // max vertical component
  bool pass(double tol = 1e-9) const {
    return norm_error < tol && orthogonality < tol && pairing_error < tol && reeb_gram_det > 1e-9 &&
           horizontality < tol;
  }
  std::string describe() const {
    return "norm " + std::to_string(norm_error) + " orth " + std::to_string(orthogonality) +
           " pair " + std::to_string(pairing_error) + " gram " + std::to_string(reeb_gram_det) +
           " vert " + std::to_string(horizontality);
  }
};

inline FrameCheck check_frame(const cgabor::RiemannianChart& chart, const cgabor::ContactFrame& f) {
  const Eigen::MatrixXd ginv = cgabor::inverse_metric_at(chart, f.m.b);
  const int n = static_cast<int>(f.covectors.size());
  FrameCheck c;
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i) {
    c.norm_error = std::max(c.norm_error, std::abs(std::sqrt(f.covectors[i].dot(ginv * f.covectors[i])) - 1));
    for (int j = 0; j < n; ++j)
      if (i != j) c.orthogonality = std::max(c.orthogonality, std::abs(f.covectors[i].dot(ginv * f.covectors[j])));
    c.pairing_error = std::max(c.pairing_error, std::abs(f.covectors[i].dot(f.reeb[i]) - 1));
    R.col(i) = f.reeb[i];
    if (i < static_cast<int>(f.reeb_vertical.size()) && f.reeb_vertical[i].size())
      c.horizontality = std::max(c.horizontality, f.reeb_vertical[i].cwiseAbs().maxCoeff());
  }
  c.reeb_gram_det = (R.transpose() * R).determinant();
  return c;
}

}  // namespace oracle
