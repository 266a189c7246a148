#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nbw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

} // namespace nbw
