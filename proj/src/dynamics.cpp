#include "quadsim/dynamics.hpp"

#include <cmath>

namespace quadsim {

namespace {
constexpr double kGimbalLockCos = 1e-6;
constexpr double kMaxConditionNumber = 1e12;
}  // namespace

void QuadParams::validate() const {
    if (!(mass > 0.0)) throw ValidationError("quad: mass must be > 0");
    if (!(arm_length > 0.0)) throw ValidationError("quad: arm_length must be > 0");
    if (!(gravity > 0.0)) throw ValidationError("quad: gravity must be > 0");
    if (!(force_to_torque > 0.0)) throw ValidationError("quad: force_to_torque must be > 0");
    if (!(tau_max > 0.0)) throw ValidationError("quad: tau_max must be > 0");
    if (!(f_max > 0.0)) throw ValidationError("quad: f_max must be > 0");
    if (!inertia.allFinite()) throw ValidationError("quad: inertia must be finite");
    if (!inertia.isApprox(inertia.transpose(), 1e-12)) {
        throw ValidationError("quad: inertia must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(inertia);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
        throw ValidationError("quad: inertia must be positive definite");
    }
}

Mat3 euler_rate_matrix(const Vec3& angles) {
    const double s_phi = std::sin(angles[0]), c_phi = std::cos(angles[0]);
    const double s_th = std::sin(angles[1]), c_th = std::cos(angles[1]);
    Mat3 w;
    w << 1.0, 0.0, -s_th,
         0.0, c_phi, c_th * s_phi,
         0.0, -s_phi, c_th * c_phi;
    return w;
}

Mat3 euler_rate_matrix_inverse(const Vec3& angles) {
    const double s_phi = std::sin(angles[0]), c_phi = std::cos(angles[0]);
    const double s_th = std::sin(angles[1]), c_th = std::cos(angles[1]);
    if (std::abs(c_th) < kGimbalLockCos) {
        throw GimbalLockError("euler rate matrix singular: |cos(pitch)| < 1e-6");
    }
    const double t_th = s_th / c_th;
    Mat3 w_inv;
    w_inv << 1.0, s_phi * t_th, c_phi * t_th,
             0.0, c_phi, -s_phi,
             0.0, s_phi / c_th, c_phi / c_th;
    return w_inv;
}

Mat3 rotation_matrix(const Vec3& angles) {
    const double s_phi = std::sin(angles[0]), c_phi = std::cos(angles[0]);
    const double s_th = std::sin(angles[1]), c_th = std::cos(angles[1]);
    const double s_psi = std::sin(angles[2]), c_psi = std::cos(angles[2]);
    Mat3 r;
    r << c_psi * c_th, c_psi * s_th * s_phi - s_psi * c_phi, c_psi * s_th * c_phi + s_psi * s_phi,
         s_psi * c_th, s_psi * s_th * s_phi + c_psi * c_phi, s_psi * s_th * c_phi - c_psi * s_phi,
         -s_th, c_th * s_phi, c_th * c_phi;
    return r;
}

Mat3 skew(const Vec3& w) {
    Mat3 s;
    s << 0.0, -w[2], w[1],
         w[2], 0.0, -w[0],
         -w[1], w[0], 0.0;
    return s;
}

Vec3 gyro_torque(const Vec3& rates, const Mat3& inertia) {
    return -skew(rates) * (inertia * rates);
}

MixOutput mix_forces(const Vec4& forces, const QuadParams& params) {
    const double l = params.arm_length;
    const double c = params.force_to_torque;
    MixOutput out;
    out.torque = Vec3(l * (forces[1] - forces[3]),
                      l * (-forces[0] + forces[2]),
                      c * (-forces[0] + forces[1] - forces[2] + forces[3]));
    out.thrust = forces.sum();
    return out;
}

MotorSolution unmix_torques(const Vec3& torque, double thrust,
                            const QuadParams& params) {
    const double l = params.arm_length;
    const double c = params.force_to_torque;
    // Closed-form inverse of the 4x4 allocation matrix.
    const double base = 0.25 * thrust;
    const double roll = torque[0] / (2.0 * l);
    const double pitch = torque[1] / (2.0 * l);
    const double yaw = torque[2] / (4.0 * c);
    MotorSolution sol;
    sol.forces = Vec4(base - pitch - yaw,
                      base + roll + yaw,
                      base + pitch - yaw,
                      base - roll + yaw);
    sol.realizable = true;
    for (int i = 0; i < 4; ++i) {
        if (!(sol.forces[i] >= 0.0 && sol.forces[i] <= params.f_max)) {
            sol.realizable = false;
        }
    }
    return sol;
}

Vec3 attitude_accel_diagonal(const AttitudeState& state, const Vec3& u,
                             const Vec3& disturbance, const QuadParams& params) {
    const double ixx = params.inertia(0, 0);
    const double iyy = params.inertia(1, 1);
    const double izz = params.inertia(2, 2);
    const double largest = std::max({std::abs(ixx), std::abs(iyy), std::abs(izz)});
    const double smallest = std::min({std::abs(ixx), std::abs(iyy), std::abs(izz)});
    if (!(smallest > 0.0) || largest / smallest > kMaxConditionNumber) {
        throw SingularInertiaError("inertia matrix not invertible");
    }
    const double p = state.rates[0], q = state.rates[1], r = state.rates[2];
    return Vec3(((iyy - izz) * q * r + u[0] + disturbance[0]) / ixx,
                ((izz - ixx) * p * r + u[1] + disturbance[1]) / iyy,
                ((ixx - iyy) * p * q + u[2] + disturbance[2]) / izz);
}

Vec3 attitude_accel_general(const AttitudeState& state, const Vec3& u,
                            const Vec3& disturbance, const QuadParams& params) {
    const Mat3 inv = params.inertia.inverse();
    const double cond = params.inertia.norm() * inv.norm();
    if (!std::isfinite(cond) || cond > kMaxConditionNumber) {
        throw SingularInertiaError("inertia matrix not invertible");
    }
    return inv * (gyro_torque(state.rates, params.inertia) + u + disturbance);
}

Vec3 attitude_accel(const AttitudeState& state, const Vec3& u,
                    const Vec3& disturbance, const QuadParams& params) {
    const Mat3& inertia = params.inertia;
    const bool diagonal = inertia(0, 1) == 0.0 && inertia(0, 2) == 0.0 &&
                          inertia(1, 0) == 0.0 && inertia(1, 2) == 0.0 &&
                          inertia(2, 0) == 0.0 && inertia(2, 1) == 0.0;
    return diagonal ? attitude_accel_diagonal(state, u, disturbance, params)
                    : attitude_accel_general(state, u, disturbance, params);
}

StateDerivative state_derivative(const AttitudeState& state, const Vec3& u,
                                 const Vec3& disturbance,
                                 const QuadParams& params, KinematicsMode mode) {
    StateDerivative d;
    d.angles_dot = (mode == KinematicsMode::Approx)
                       ? state.rates
                       : Vec3(euler_rate_matrix_inverse(state.angles) * state.rates);
    d.rates_dot = attitude_accel(state, u, disturbance, params);
    return d;
}

}  // namespace quadsim
