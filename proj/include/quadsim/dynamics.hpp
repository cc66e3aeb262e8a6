#pragma once

#include <Eigen/Dense>

#include "quadsim/error.hpp"

namespace quadsim {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

// Physical constants of the vehicle. Defaults describe a 3DR Solo class
// quadcopter; the inertia matrix is diagonal for the stock airframe but the
// plant accepts a full symmetric matrix (e.g. when flying with a payload).
struct QuadParams {
    double mass = 1.50;             // [kg]
    double arm_length = 0.205;      // [m] motor to centre of mass
    double gravity = 9.81;          // [m/s^2]
    Mat3 inertia = default_inertia();  // [kg m^2]
    double force_to_torque = 0.01;  // [m] rotor drag torque per unit thrust
    double tau_max = 2.0;           // [N m] per-axis torque saturation
    double f_max = 8.0;             // [N] per-motor thrust limit

    static Mat3 default_inertia() {
        Mat3 inertia = Mat3::Zero();
        inertia.diagonal() << 8.85e-3, 15.5e-3, 23.09e-3;
        return inertia;
    }

    double hover_thrust() const { return mass * gravity; }

    // Throws ValidationError; the nominal inertia must be symmetric positive
    // definite.
    void validate() const;
};

// Euler angles (roll, pitch, yaw) and body angular rates (p, q, r).
struct AttitudeState {
    Vec3 angles = Vec3::Zero();  // [rad]
    Vec3 rates = Vec3::Zero();   // [rad/s]
};

enum class KinematicsMode { Approx, Full };

// W such that omega = W * angles_dot.
Mat3 euler_rate_matrix(const Vec3& angles);

// Inverse map angles_dot = W^-1 * omega; throws GimbalLockError when
// |cos(pitch)| < 1e-6.
Mat3 euler_rate_matrix_inverse(const Vec3& angles);

// Body-to-earth rotation, yaw-pitch-roll convention.
Mat3 rotation_matrix(const Vec3& angles);

// S(w) with S(w) * v == w x v.
Mat3 skew(const Vec3& w);

// Gyroscopic coupling torque -S(w) I w. For diagonal I this is
// ((Iyy-Izz) q r, (Izz-Ixx) p r, (Ixx-Iyy) p q).
Vec3 gyro_torque(const Vec3& rates, const Mat3& inertia);

struct MixOutput {
    Vec3 torque;   // [N m]
    double thrust; // [N]
};

// Allocation from the four rotor thrusts to body torques and total lift.
MixOutput mix_forces(const Vec4& forces, const QuadParams& params);

struct MotorSolution {
    Vec4 forces;      // exact solution, not clamped
    bool realizable;  // true when every motor lies inside [0, f_max]
};

// Inverse allocation. The exact per-motor thrusts are always returned;
// saturation is reported through `realizable` rather than applied silently.
MotorSolution unmix_torques(const Vec3& torque, double thrust,
                            const QuadParams& params);

// Angular acceleration for a diagonal inertia matrix (component form).
Vec3 attitude_accel_diagonal(const AttitudeState& state, const Vec3& u,
                             const Vec3& disturbance, const QuadParams& params);

// Angular acceleration I^-1 (gyro + u + d) for a general inertia matrix;
// throws SingularInertiaError when the matrix is not invertible
// (condition estimate > 1e12).
Vec3 attitude_accel_general(const AttitudeState& state, const Vec3& u,
                            const Vec3& disturbance, const QuadParams& params);

// Dispatches to the diagonal fast path when the off-diagonal entries are
// exactly zero, otherwise to the general path.
Vec3 attitude_accel(const AttitudeState& state, const Vec3& u,
                    const Vec3& disturbance, const QuadParams& params);

struct StateDerivative {
    Vec3 angles_dot;
    Vec3 rates_dot;
};

// Attitude dynamics. Approx mode uses angles_dot = rates (small-angle
// kinematics); Full mode solves the Euler-rate map and can raise
// GimbalLockError.
StateDerivative state_derivative(const AttitudeState& state, const Vec3& u,
                                 const Vec3& disturbance,
                                 const QuadParams& params,
                                 KinematicsMode mode = KinematicsMode::Approx);

}  // namespace quadsim
