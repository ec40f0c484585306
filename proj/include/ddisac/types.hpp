#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ddisac {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

} // namespace ddisac
