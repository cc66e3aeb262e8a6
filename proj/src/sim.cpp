#include "quadsim/sim.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace quadsim {

namespace {

constexpr double kBlowupLimit = 1e6;
constexpr double kHalfPi = std::numbers::pi / 2.0;

AttitudeState add_scaled(const AttitudeState& s, const StateDerivative& k,
                         double h) {
    AttitudeState r;
    r.angles = s.angles + h * k.angles_dot;
    r.rates = s.rates + h * k.rates_dot;
    return r;
}

// splitmix64; stable across platforms, unlike std::uniform_real_distribution.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double unit_double(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt_plant > 0.0)) throw ValidationError("sim: dt_plant must be > 0");
    if (!(dt_ctrl >= dt_plant)) throw ValidationError("sim: need dt_plant <= dt_ctrl");
    if (!(dt_log >= dt_ctrl)) throw ValidationError("sim: need dt_ctrl <= dt_log");
    if (!(t_end > 0.0)) throw ValidationError("sim: t_end must be > 0");
    const double ratio = dt_ctrl / dt_plant;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        throw ValidationError("sim: dt_ctrl must be an integer multiple of dt_plant");
    }
    const double log_ratio = dt_log / dt_ctrl;
    if (std::abs(log_ratio - std::round(log_ratio)) > 1e-9 * log_ratio) {
        throw ValidationError("sim: dt_log must be an integer multiple of dt_ctrl");
    }
}

long long SimConfig::substeps() const {
    return std::llround(dt_ctrl / dt_plant);
}

long long SimConfig::ctrl_per_log() const {
    return std::llround(dt_log / dt_ctrl);
}

Reference ReferenceSchedule::at(double t) const {
    Reference ref;
    for (const StepEvent& ev : steps) {
        if (ev.time > t) break;
        ref.angles[ev.axis] = ev.target;
    }
    return ref;
}

void ReferenceSchedule::validate() const {
    double prev = -std::numeric_limits<double>::infinity();
    for (const StepEvent& ev : steps) {
        if (ev.axis < 0 || ev.axis > 2) throw ValidationError("schedule: axis must be 0..2");
        if (ev.time < prev) throw ValidationError("schedule: step times must be non-decreasing");
        prev = ev.time;
        if (ev.time < 0.0) throw ValidationError("schedule: step times must be >= 0");
        const bool ok = (ev.axis == 2) ? std::abs(ev.target) <= std::numbers::pi
                                       : std::abs(ev.target) < kHalfPi;
        if (!ok) throw ValidationError("schedule: target outside admissible angle range");
    }
}

Vec3 disturbance_sample(const DisturbanceSpec& spec, std::uint64_t seed,
                        std::int64_t index) {
    switch (spec.kind) {
        case DisturbanceKind::None:
            return Vec3::Zero();
        case DisturbanceKind::ConstantBias:
            return Vec3::Constant(spec.magnitude);
        case DisturbanceKind::UniformNoise: {
            Vec3 d;
            for (int axis = 0; axis < 3; ++axis) {
                const std::uint64_t word =
                    mix64(mix64(seed) ^ mix64(static_cast<std::uint64_t>(index) * 3u + axis));
                d[axis] = spec.magnitude * (0.8 + 0.4 * unit_double(word));
            }
            return d;
        }
    }
    return Vec3::Zero();
}

QuadParams ScenarioSpec::plant_params() const {
    QuadParams p = quad;
    p.inertia = inertia_scale * quad.inertia + delta_inertia;
    return p;
}

AttitudeState integrate_step(const AttitudeState& state, const Vec3& u,
                             const Vec3& disturbance, const QuadParams& params,
                             double dt, IntegratorKind kind, KinematicsMode mode) {
    AttitudeState next;
    if (kind == IntegratorKind::Euler) {
        const StateDerivative k1 = state_derivative(state, u, disturbance, params, mode);
        next = add_scaled(state, k1, dt);
    } else {
        const StateDerivative k1 = state_derivative(state, u, disturbance, params, mode);
        const StateDerivative k2 =
            state_derivative(add_scaled(state, k1, 0.5 * dt), u, disturbance, params, mode);
        const StateDerivative k3 =
            state_derivative(add_scaled(state, k2, 0.5 * dt), u, disturbance, params, mode);
        const StateDerivative k4 =
            state_derivative(add_scaled(state, k3, dt), u, disturbance, params, mode);
        next.angles = state.angles +
                      (dt / 6.0) * (k1.angles_dot + 2.0 * k2.angles_dot +
                                    2.0 * k3.angles_dot + k4.angles_dot);
        next.rates = state.rates +
                     (dt / 6.0) * (k1.rates_dot + 2.0 * k2.rates_dot +
                                   2.0 * k3.rates_dot + k4.rates_dot);
    }
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(next.angles[i]) || !std::isfinite(next.rates[i]) ||
            std::abs(next.angles[i]) > kBlowupLimit || std::abs(next.rates[i]) > kBlowupLimit) {
            throw NumericalBlowupError("state exceeded numerical bounds");
        }
    }
    return next;
}

namespace {

void check_angle_envelope(const AttitudeState& s) {
    if (std::abs(s.angles[0]) >= kHalfPi || std::abs(s.angles[1]) >= kHalfPi) {
        throw AngleLimitError("roll/pitch left (-pi/2, pi/2)");
    }
    if (std::abs(s.angles[2]) > std::numbers::pi) {
        throw AngleLimitError("yaw left [-pi, pi]");
    }
}

}  // namespace

RunLog run_closed_loop(const ScenarioSpec& spec, ControllerKind kind) {
    spec.quad.validate();
    spec.sliding.validate();
    spec.sim.validate();
    spec.schedule.validate();

    const QuadParams& nominal = spec.quad;
    const QuadParams plant = spec.plant_params();
    const SimConfig& sim = spec.sim;
    const long long substeps = sim.substeps();
    const long long ctrl_per_log = sim.ctrl_per_log();
    const long long n_log = std::llround(std::floor(sim.t_end / sim.dt_log + 0.5));
    const long long n_ctrl = n_log * ctrl_per_log;

    RunLog log;
    log.events = spec.schedule.steps;
    log.dt_log = sim.dt_log;
    log.t_end = n_log * sim.dt_log;
    log.controller = kind;
    log.seed = sim.seed;
    log.config_hash = scenario_hash(spec);
    log.samples.reserve(static_cast<std::size_t>(n_log) + 1);

    AttitudeState state;  // hover: all angles and rates zero
    ControllerState memory = ControllerState::initial(spec.sliding);

    for (long long k = 0; k <= n_ctrl; ++k) {
        const double t = k * sim.dt_ctrl;
        const Reference ref = spec.schedule.at(t);
        const ControlOutput out =
            controller_step(kind, state, ref, memory, spec.sliding, nominal, sim.dt_ctrl);

        if (k % ctrl_per_log == 0) {
            RunSample sample;
            sample.t = t;
            sample.angles = state.angles;
            sample.rates = state.rates;
            sample.ref_angles = ref.angles;
            sample.sigma = out.sigma;
            sample.sigma_dot = out.sigma_dot;
            sample.u = out.u;
            sample.u_eq = out.u_eq;
            sample.u_disc = out.u_disc;
            sample.alpha = out.alpha;
            sample.disturbance =
                disturbance_sample(spec.disturbance, sim.seed, k * substeps);
            sample.lyapunov = lyapunov_value(spec.sliding.adapt_sigma_scale * out.sigma,
                                             out.alpha, spec.sliding, nominal);
            sample.sat_mask = (out.saturated[0] ? 1u : 0u) |
                              (out.saturated[1] ? 2u : 0u) |
                              (out.saturated[2] ? 4u : 0u);
            log.samples.push_back(sample);
        }

        if (k == n_ctrl) break;
        try {
            for (long long j = 0; j < substeps; ++j) {
                const Vec3 d =
                    disturbance_sample(spec.disturbance, sim.seed, k * substeps + j);
                state = integrate_step(state, out.u, d, plant, sim.dt_plant,
                                       sim.integrator, sim.kinematics);
            }
            check_angle_envelope(state);
        } catch (const Error& err) {
            log.failed = true;
            log.failure = err.what();
            break;
        }
    }
    return log;
}

}  // namespace quadsim
