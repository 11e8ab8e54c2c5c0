// types.hpp — Scalar and matrix aliases shared by every module

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hops {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

} // namespace hops
