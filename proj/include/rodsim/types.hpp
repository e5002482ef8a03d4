#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>

namespace rodsim {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Vec11 = Eigen::Matrix<double, 11, 1>;
using Mat11 = Eigen::Matrix<double, 11, 11>;

inline Mat3 crossMat(const Vec3& v)
{
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return m;
}

/// Rotate v about the unit axis by angle (Rodrigues).
inline Vec3 rotateAboutAxis(const Vec3& v, const Vec3& axis, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return c * v + s * axis.cross(v) + (1.0 - c) * axis.dot(v) * axis;
}

/// Parallel-transport u from the frame of unit tangent t1 to unit tangent t2
/// using the minimal rotation mapping t1 onto t2.
inline Vec3 parallelTransport(const Vec3& u, const Vec3& t1, const Vec3& t2)
{
    Vec3 b = t1.cross(t2);
    const double bn = b.norm();
    if (bn < 1e-14)
        return u; // tangents (anti)parallel; near-parallel transport is identity
    b /= bn;
    // re-orthogonalize against both tangents for numerical safety
    b = (b - b.dot(t1) * t1).normalized();
    b = (b - b.dot(t2) * t2).normalized();
    const Vec3 n1 = t1.cross(b);
    const Vec3 n2 = t2.cross(b);
    return u.dot(t1) * t2 + u.dot(n1) * n2 + u.dot(b) * b;
}

/// Signed angle from u to v about the unit axis.
inline double signedAngle(const Vec3& u, const Vec3& v, const Vec3& axis)
{
    const Vec3 w = u.cross(v);
    double angle = std::atan2(w.norm(), u.dot(v));
    if (w.dot(axis) < 0.0)
        angle = -angle;
    return angle;
}

/// Numerically stable log(1 + exp(z)).
inline double softplus(double z)
{
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

/// Numerically stable logistic 1 / (1 + exp(-z)).
inline double logistic(double z)
{
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace rodsim
