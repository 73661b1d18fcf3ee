#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace hexsim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// 3x3 orthonormal matrix with det +1. Alias by convention; orthonormality
/// is guaranteed by the constructors below, not by the type.
using RotationMatrix = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Margin below |pitch| = pi/2 at which the Euler kinematic map is treated
/// as singular.
inline constexpr double kGimbalMargin = 1e-3;

constexpr double deg2rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Wrap an angle to (-pi, pi].
double wrap_angle(double angle);

/// Z-Y-X (yaw-pitch-roll) Euler angles in radians. Frame tilt angles reuse
/// this with yaw pinned to zero by the joint constraint.
struct EulerAngles {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;

    bool finite() const;
};

struct GimbalSingularity : std::runtime_error {
    explicit GimbalSingularity(double pitch);
};

RotationMatrix rot_x(double angle);
RotationMatrix rot_y(double angle);
RotationMatrix rot_z(double angle);

/// Tilt rotation of a passive frame relative to its parallel body frame:
/// R_x(roll) * R_y(pitch).
RotationMatrix frame_tilt_rotation(double roll, double pitch);
RotationMatrix frame_tilt_rotation(const Vec2& tilt_roll_pitch);

/// World-from-body rotation: R_z(yaw) * R_y(pitch) * R_x(roll).
RotationMatrix body_rotation(const EulerAngles& att);

/// Euler angles of a Z-Y-X rotation matrix, in canonical ranges
/// roll,yaw in (-pi, pi], pitch in [-pi/2, pi/2].
EulerAngles euler_from_rotation(const RotationMatrix& rot);

/// Kinematic map E with (roll_dot, pitch_dot, yaw_dot) = E * omega_body.
/// Throws GimbalSingularity for |pitch| >= pi/2 - kGimbalMargin.
Mat3 euler_rate_matrix(const EulerAngles& att);

/// Inverse map: omega_body = Einv * (roll_dot, pitch_dot, yaw_dot).
Mat3 euler_rate_matrix_inverse(const EulerAngles& att);

}  // namespace hexsim
