#include "hexsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hexsim {

double wrap_angle(double angle) {
    double a = std::fmod(angle + kPi, 2.0 * kPi);
    if (a <= 0.0) {
        a += 2.0 * kPi;
    }
    return a - kPi;
}

bool EulerAngles::finite() const {
    return std::isfinite(roll) && std::isfinite(pitch) && std::isfinite(yaw);
}

GimbalSingularity::GimbalSingularity(double pitch)
    : std::runtime_error("euler_rate_matrix singular at pitch = " + std::to_string(pitch)) {}

RotationMatrix rot_x(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    RotationMatrix r;
    r << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return r;
}

RotationMatrix rot_y(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    RotationMatrix r;
    r << c, 0, s,
         0, 1, 0,
        -s, 0, c;
    return r;
}

RotationMatrix rot_z(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    RotationMatrix r;
    r << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return r;
}

RotationMatrix frame_tilt_rotation(double roll, double pitch) {
    return rot_x(roll) * rot_y(pitch);
}

RotationMatrix frame_tilt_rotation(const Vec2& tilt_roll_pitch) {
    return frame_tilt_rotation(tilt_roll_pitch(0), tilt_roll_pitch(1));
}

RotationMatrix body_rotation(const EulerAngles& att) {
    return rot_z(att.yaw) * rot_y(att.pitch) * rot_x(att.roll);
}

EulerAngles euler_from_rotation(const RotationMatrix& rot) {
    EulerAngles att;
    // r20 = -sin(pitch); clamp for safety against 1 + eps.
    const double s = std::clamp(-rot(2, 0), -1.0, 1.0);
    att.pitch = std::asin(s);
    att.roll = std::atan2(rot(2, 1), rot(2, 2));
    att.yaw = std::atan2(rot(1, 0), rot(0, 0));
    return att;
}

Mat3 euler_rate_matrix(const EulerAngles& att) {
    if (std::abs(att.pitch) >= kPi / 2.0 - kGimbalMargin) {
        throw GimbalSingularity(att.pitch);
    }
    const double cr = std::cos(att.roll);
    const double sr = std::sin(att.roll);
    const double ct = std::cos(att.pitch);
    const double tt = std::tan(att.pitch);
    Mat3 e;
    e << 1, sr * tt, cr * tt,
         0, cr, -sr,
         0, sr / ct, cr / ct;
    return e;
}

Mat3 euler_rate_matrix_inverse(const EulerAngles& att) {
    const double cr = std::cos(att.roll);
    const double sr = std::sin(att.roll);
    const double ct = std::cos(att.pitch);
    const double st = std::sin(att.pitch);
    Mat3 e;
    e << 1, 0, -st,
         0, cr, ct * sr,
         0, -sr, ct * cr;
    return e;
}

}  // namespace hexsim
