#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadsim/controller.hpp"
#include "quadsim/dynamics.hpp"

namespace quadsim {

enum class IntegratorKind { Rk4, Euler };

struct SimConfig {
    double dt_plant = 1e-5;  // plant integration step [s]
    double dt_ctrl = 2e-5;   // control update period [s]
    double dt_log = 1e-3;    // log sampling period [s], multiple of dt_ctrl
    double t_end = 5.0;      // [s]
    IntegratorKind integrator = IntegratorKind::Rk4;
    std::uint64_t seed = 0;
    KinematicsMode kinematics = KinematicsMode::Approx;

    void validate() const;  // dt_plant | dt_ctrl | dt_log must nest as multiples
    long long substeps() const;        // plant steps per control period
    long long ctrl_per_log() const;    // control periods per log sample
};

// Axis indices used throughout: 0 = roll, 1 = pitch, 2 = yaw.
struct StepEvent {
    double time = 0.0;    // [s]
    int axis = 0;
    double target = 0.0;  // [rad]
};

// Piecewise-constant angle references from an ordered list of step events.
struct ReferenceSchedule {
    std::vector<StepEvent> steps;

    Reference at(double t) const;
    void validate() const;  // times non-decreasing, targets inside angle limits
};

enum class DisturbanceKind { None, ConstantBias, UniformNoise };

struct DisturbanceSpec {
    DisturbanceKind kind = DisturbanceKind::None;
    double magnitude = 0.0;  // [N m]; noise is uniform in [0.8 m, 1.2 m]
};

// Torque disturbance for plant sample `index` (one sample per dt_plant).
// Stateless and deterministic in (seed, index), so every controller in a
// comparison sees the identical sequence.
Vec3 disturbance_sample(const DisturbanceSpec& spec, std::uint64_t seed,
                        std::int64_t index);

// Complete description of one experiment.
struct ScenarioSpec {
    std::string name = "custom";  // nominal | disturbance | variation | custom
    QuadParams quad;
    SlidingConfig sliding;
    SimConfig sim;
    ReferenceSchedule schedule;
    DisturbanceSpec disturbance;
    double payload_mass = 0.0;          // [kg] bookkeeping only (lift channel)
    Mat3 delta_inertia = Mat3::Zero();  // applied to the plant, hidden from the controller
    double inertia_scale = 1.0;

    // Plant-side parameters: inertia_scale * I + delta_inertia.
    QuadParams plant_params() const;

    bool operator==(const ScenarioSpec& other) const;
};

// Serialized-config hash; implemented by the scenario loader.
std::uint64_t scenario_hash(const ScenarioSpec& spec);

// One sample per control period.
struct RunSample {
    double t;
    Vec3 angles, rates, ref_angles;
    Vec3 sigma, sigma_dot;
    Vec3 u, u_eq, u_disc, alpha, disturbance;
    double lyapunov;
    unsigned sat_mask;  // bit i set when axis i torque saturated
};

struct RunLog {
    std::vector<RunSample> samples;
    std::vector<StepEvent> events;
    double dt_log = 0.0;  // sampling period of `samples`
    double t_end = 0.0;
    ControllerKind controller = ControllerKind::AdaptiveTwisting;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    bool failed = false;      // aborted run; samples hold the partial log
    std::string failure;
};

// Advances the attitude state one step with torque and disturbance held
// constant. Throws NumericalBlowupError when the state leaves [-1e6, 1e6]
// or turns non-finite.
AttitudeState integrate_step(const AttitudeState& state, const Vec3& u,
                             const Vec3& disturbance, const QuadParams& params,
                             double dt, IntegratorKind kind,
                             KinematicsMode mode = KinematicsMode::Approx);

// Fixed-step closed loop: controller evaluated every dt_ctrl with zero-order
// hold, plant integrated at dt_plant, disturbance sampled every dt_plant,
// log recorded every dt_log. Deterministic for a given spec and seed. Faults
// abort the run and return a partial log with `failed` set.
RunLog run_closed_loop(const ScenarioSpec& spec, ControllerKind kind);

}  // namespace quadsim
