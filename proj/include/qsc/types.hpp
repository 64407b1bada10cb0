#pragma once

#include <Eigen/Dense>

namespace qsc {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;

// Orthonormal, det +1 within tolerance; validated where accepted as input.
using RotationMatrix = Mat3;

} // namespace qsc
