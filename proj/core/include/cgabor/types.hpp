#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cgabor {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

}  // namespace cgabor
