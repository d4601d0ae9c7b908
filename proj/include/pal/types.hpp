#pragma once

#include <Eigen/Dense>

namespace pal {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec12 = Eigen::Matrix<double, 12, 1>;

inline constexpr double kGravity = 9.81;
inline constexpr int kNumLegs = 4;
inline constexpr int kNumJoints = 12;

// Leg ordering used throughout: front-left, front-right, hind-left, hind-right.
enum class Leg : int { FL = 0, FR = 1, HL = 2, HR = 3 };

}  // namespace pal
