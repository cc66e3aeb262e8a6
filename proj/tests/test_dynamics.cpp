#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "quadsim/dynamics.hpp"

using namespace quadsim;

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 random_vec(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return Vec3(dist(rng), dist(rng), dist(rng));
}

}  // namespace

TEST_CASE("quad params defaults validate") {
    QuadParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.inertia(0, 0) == doctest::Approx(8.85e-3));
    CHECK(p.inertia(1, 1) == doctest::Approx(15.5e-3));
    CHECK(p.inertia(2, 2) == doctest::Approx(23.09e-3));
    CHECK(p.hover_thrust() == doctest::Approx(14.715));

    QuadParams bad = p;
    bad.mass = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = p;
    bad.inertia(0, 0) = -1e-3;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = p;
    bad.inertia(0, 1) = 1.0;  // asymmetric
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("euler rate matrix") {
    CHECK(euler_rate_matrix(Vec3::Zero()).isIdentity(1e-15));

    // first column is always (1, 0, 0)
    const Mat3 w = euler_rate_matrix(Vec3(0.1, 0.2, 0.3));
    const Vec3 col = w * Vec3(1.0, 0.0, 0.0);
    CHECK(col.isApprox(Vec3(1.0, 0.0, 0.0), 1e-15));

    SUBCASE("inverse map degenerates near pitch = pi/2") {
        CHECK_THROWS_AS(euler_rate_matrix_inverse(Vec3(0.0, kPi / 2.0 - 1e-9, 0.0)),
                        GimbalLockError);
        CHECK_NOTHROW(euler_rate_matrix_inverse(Vec3(0.0, kPi / 2.0 - 0.1, 0.0)));
    }

    SUBCASE("inverse actually inverts") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 1000; ++i) {
            const Vec3 angles = random_vec(rng, -1.4, 1.4);
            const Mat3 prod =
                euler_rate_matrix(angles) * euler_rate_matrix_inverse(angles);
            CHECK(prod.isIdentity(1e-9));
        }
    }
}

TEST_CASE("rotation matrix is a proper rotation") {
    CHECK(rotation_matrix(Vec3::Zero()).isIdentity(1e-15));

    // yaw by 90 degrees maps x to y
    const Vec3 mapped = rotation_matrix(Vec3(0.0, 0.0, kPi / 2.0)) * Vec3(1.0, 0.0, 0.0);
    CHECK(mapped.isApprox(Vec3(0.0, 1.0, 0.0), 1e-12));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const Mat3 r = rotation_matrix(random_vec(rng, -kPi, kPi));
        CHECK((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(r.determinant() - 1.0) < 1e-12);
    }
}

TEST_CASE("skew matrix") {
    CHECK(skew(Vec3::Zero()).isZero(0.0));
    CHECK((skew(Vec3(1.0, 2.0, 3.0)) * Vec3(1.0, 2.0, 3.0)).isZero(0.0));

    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 w = random_vec(rng, -10.0, 10.0);
        const Mat3 s = skew(w);
        CHECK((s + s.transpose()).isZero(0.0));  // exactly antisymmetric
        const Vec3 v = random_vec(rng, -10.0, 10.0);
        CHECK((s * v).isApprox(w.cross(v), 1e-14));
    }
}

TEST_CASE("gyroscopic torque") {
    const QuadParams params;
    CHECK(gyro_torque(Vec3::Zero(), params.inertia).isZero(0.0));

    SUBCASE("isotropic inertia gives exactly zero") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 1000; ++i) {
            const Vec3 w = random_vec(rng, -20.0, 20.0);
            CHECK(gyro_torque(w, 0.37 * Mat3::Identity()).isZero(0.0));
        }
    }

    SUBCASE("component form on the stock inertia") {
        // ((Iyy-Izz) q r, (Izz-Ixx) p r, (Ixx-Iyy) p q) at (p,q,r) = (1,1,0)
        const Vec3 tau = gyro_torque(Vec3(1.0, 1.0, 0.0), params.inertia);
        CHECK(tau[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(tau[1] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(tau[2] == doctest::Approx(-6.65e-3).epsilon(1e-9));
    }
}

TEST_CASE("motor mixing") {
    QuadParams params;

    SUBCASE("equal thrusts produce pure lift") {
        const MixOutput out = mix_forces(Vec4::Constant(1.7), params);
        CHECK(out.torque.isZero(0.0));
        CHECK(out.thrust == doctest::Approx(6.8));
    }

    SUBCASE("single motor") {
        const MixOutput out = mix_forces(Vec4(0.0, 1.0, 0.0, 0.0), params);
        CHECK(out.torque.isApprox(Vec3(0.205, 0.0, 0.01), 1e-15));
        CHECK(out.thrust == doctest::Approx(1.0));
    }

    SUBCASE("hover split") {
        const MotorSolution sol =
            unmix_torques(Vec3::Zero(), params.hover_thrust(), params);
        CHECK(sol.realizable);
        for (int i = 0; i < 4; ++i) {
            CHECK(sol.forces[i] == doctest::Approx(3.67875).epsilon(1e-12));
        }
    }

    SUBCASE("inverse of the single-motor case") {
        const MotorSolution sol = unmix_torques(Vec3(0.205, 0.0, 0.01), 1.0, params);
        CHECK(sol.realizable);
        CHECK(sol.forces.isApprox(Vec4(0.0, 1.0, 0.0, 0.0), 1e-12));
    }

    SUBCASE("excessive roll torque is not realizable") {
        const MotorSolution sol = unmix_torques(Vec3(100.0, 0.0, 0.0), 10.0, params);
        CHECK_FALSE(sol.realizable);
    }

    SUBCASE("mix and unmix are mutual inverses") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> dist(0.0, 8.0);
        for (int i = 0; i < 1000; ++i) {
            const Vec4 forces(dist(rng), dist(rng), dist(rng), dist(rng));
            const MixOutput mixed = mix_forces(forces, params);
            const MotorSolution sol = unmix_torques(mixed.torque, mixed.thrust, params);
            CHECK((sol.forces - forces).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("attitude acceleration") {
    const QuadParams params;
    AttitudeState rest;

    SUBCASE("roll torque on the stock inertia") {
        const Vec3 accel = attitude_accel(rest, Vec3(0.1, 0.0, 0.0), Vec3::Zero(), params);
        CHECK(accel[0] == doctest::Approx(0.1 / 8.85e-3).epsilon(1e-12));
        CHECK(accel[0] == doctest::Approx(11.2994350282).epsilon(1e-9));
        CHECK(accel[1] == 0.0);
        CHECK(accel[2] == 0.0);
    }

    SUBCASE("no input, no motion") {
        CHECK(attitude_accel(rest, Vec3::Zero(), Vec3::Zero(), params).isZero(0.0));
    }

    SUBCASE("diagonal and general paths agree") {
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> inertia_dist(5e-3, 3e-2);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            QuadParams p = params;
            p.inertia = Mat3::Zero();
            p.inertia.diagonal() << inertia_dist(rng), inertia_dist(rng), inertia_dist(rng);
            AttitudeState s;
            s.angles = random_vec(rng, -1.0, 1.0);
            s.rates = random_vec(rng, -3.0, 3.0);
            const Vec3 u = random_vec(rng, -2.0, 2.0);
            const Vec3 d = random_vec(rng, -0.5, 0.5);
            const Vec3 a = attitude_accel_diagonal(s, u, d, p);
            const Vec3 b = attitude_accel_general(s, u, d, p);
            worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
        }
        CHECK(worst < 1e-12);
    }

    SUBCASE("affine in torque and disturbance at fixed rates") {
        std::mt19937_64 rng(31);
        for (int i = 0; i < 1000; ++i) {
            const Vec3 u1 = random_vec(rng, -2.0, 2.0);
            const Vec3 u2 = random_vec(rng, -2.0, 2.0);
            const Vec3 zero = Vec3::Zero();
            const Vec3 lhs = attitude_accel(rest, u1 + u2, zero, params) -
                             attitude_accel(rest, u1, zero, params) -
                             attitude_accel(rest, u2, zero, params) +
                             attitude_accel(rest, zero, zero, params);
            CHECK(lhs.cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    SUBCASE("singular inertia is rejected") {
        QuadParams p = params;
        p.inertia = Mat3::Zero();
        CHECK_THROWS_AS(attitude_accel(rest, Vec3::Zero(), Vec3::Zero(), p),
                        SingularInertiaError);
        p.inertia = Mat3::Ones();  // rank one
        CHECK_THROWS_AS(attitude_accel_general(rest, Vec3::Zero(), Vec3::Zero(), p),
                        SingularInertiaError);
    }
}

TEST_CASE("state derivative") {
    const QuadParams params;

    SUBCASE("hover is an equilibrium") {
        const StateDerivative d =
            state_derivative(AttitudeState{}, Vec3::Zero(), Vec3::Zero(), params);
        CHECK(d.angles_dot.isZero(0.0));
        CHECK(d.rates_dot.isZero(0.0));
    }

    SUBCASE("pure disturbance at rest") {
        const StateDerivative d = state_derivative(AttitudeState{}, Vec3::Zero(),
                                                   Vec3::Constant(0.5), params);
        CHECK(d.rates_dot[0] == doctest::Approx(56.4972).epsilon(1e-4));
        CHECK(d.rates_dot[1] == doctest::Approx(32.2581).epsilon(1e-4));
        CHECK(d.rates_dot[2] == doctest::Approx(21.6544).epsilon(1e-4));
    }

    SUBCASE("small-angle kinematics stays close to the full map near hover") {
        double worst = 0.0;
        for (double phi = -5.0; phi <= 5.0; phi += 2.5) {
            for (double theta = -5.0; theta <= 5.0; theta += 2.5) {
                for (double psi = -5.0; psi <= 5.0; psi += 2.5) {
                    AttitudeState s;
                    s.angles = Vec3(phi, theta, psi) * kPi / 180.0;
                    s.rates = Vec3(0.01, -0.01, 0.01);
                    const StateDerivative approx = state_derivative(
                        s, Vec3::Zero(), Vec3::Zero(), params, KinematicsMode::Approx);
                    const StateDerivative full = state_derivative(
                        s, Vec3::Zero(), Vec3::Zero(), params, KinematicsMode::Full);
                    worst = std::max(worst, (approx.angles_dot - full.angles_dot)
                                                .cwiseAbs()
                                                .maxCoeff());
                }
            }
        }
        CHECK(worst < 1e-3);
    }

    SUBCASE("full kinematics propagates gimbal lock") {
        AttitudeState s;
        s.angles = Vec3(0.0, kPi / 2.0 - 1e-9, 0.0);
        CHECK_THROWS_AS(
            state_derivative(s, Vec3::Zero(), Vec3::Zero(), params, KinematicsMode::Full),
            GimbalLockError);
    }
}
