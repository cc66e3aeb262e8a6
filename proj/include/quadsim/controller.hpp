#pragma once

#include <array>

#include "quadsim/dynamics.hpp"

namespace quadsim {

enum class ControllerKind { Smc, TwistFixed, Atsm, AdaptiveTwisting, Pid };

// Sliding-surface and gain-policy constants, one entry per axis
// (roll, pitch, yaw). Defaults are the working set for the Solo model.
struct SlidingConfig {
    Vec3 lambda{4.68, 4.68, 3.84};    // surface slope [1/s]
    Vec3 mu{0.25, 0.25, 0.25};        // twisting ratio, 0 < mu < 1
    Vec3 rho{3.0, 3.0, 3.0};          // adaptation exponent
    Vec3 epsilon{0.6, 0.6, 0.6};      // sliding-magnitude deadband
    Vec3 omega_bar{200.0, 200.0, 200.0};  // adaptation rate
    Vec3 alpha_m{2.001, 2.001, 2.001};    // adaptation lower threshold
    Vec3 alpha_M{2.12, 2.12, 2.12};       // adaptive gain upper bound
    Vec3 eta{0.01, 0.01, 0.01};       // re-growth rate below alpha_m
    Vec3 xi_M{0.5, 0.5, 0.5};         // assumed disturbance bound [N m]

    // The gamma symbol is used both by the accelerated gain rule and by the
    // Lyapunov weighting; they are kept as independent constants.
    Vec3 gamma_accel{1.0, 1.0, 1.0};
    Vec3 gamma_lyap{1.0, 1.0, 1.0};
    Vec3 alpha_star{2.0, 2.0, 2.0};   // accelerated-twisting floor gain

    // Scale applied to sigma wherever a gain policy measures its magnitude
    // (adaptation deadband and rate, accelerated-gain power law, Lyapunov
    // decrease premise). The switching logic itself is scale-invariant.
    // Default measures sigma in degrees; epsilon = 0.6 then puts the
    // adaptation deadband at |e| ~ 0.18 deg instead of ~10 deg.
    double adapt_sigma_scale = 57.29577951308232;

    // Baseline controllers used for comparisons.
    Vec3 twist_alpha{2.0, 2.0, 2.0};  // fixed twisting gain, = xi_M / mu
    Vec3 smc_gain{2.0, 2.0, 2.0};     // conventional SMC switching gain
    Vec3 pid_kp{6.0, 6.0, 6.0};
    Vec3 pid_ki{0.0, 0.0, 0.0};
    Vec3 pid_kd{3.0, 3.0, 3.0};

    void validate() const;  // throws ValidationError
};

struct AdaptiveGainState {
    Vec3 alpha{2.001, 2.001, 2.001};  // current discontinuous gains [N m]
};

// Desired angles with feedforward rate/acceleration terms.
struct Reference {
    Vec3 angles = Vec3::Zero();  // [rad]
    Vec3 rates = Vec3::Zero();   // [rad/s]
    Vec3 accels = Vec3::Zero();  // [rad/s^2]
};

struct ControlOutput {
    Vec3 u;          // applied torque, saturated to +-tau_max
    Vec3 u_eq;       // equivalent (model-cancelling) part
    Vec3 u_disc;     // discontinuous part before saturation
    Vec3 sigma;
    Vec3 sigma_dot;
    Vec3 alpha;      // discontinuous gains used this step
    std::array<bool, 3> saturated{false, false, false};
};

// Per-run controller memory. A single instance must be stepped sequentially;
// independent instances may run concurrently.
struct ControllerState {
    AdaptiveGainState gains;
    Vec3 u_prev = Vec3::Zero();       // last applied torque
    Vec3 pid_integral = Vec3::Zero();

    static ControllerState initial(const SlidingConfig& cfg) {
        ControllerState s;
        s.gains.alpha = cfg.alpha_m;  // start at the adaptation threshold
        return s;
    }
};

inline double sign0(double x) { return (x > 0.0) ? 1.0 : (x < 0.0) ? -1.0 : 0.0; }

struct SlidingSurface {
    Vec3 sigma;
    Vec3 sigma_dot;
};

// sigma = (rates - ref.rates) + Lambda (angles - ref.angles). sigma_dot is
// evaluated from the nominal disturbance-free model with the previously
// applied torque, not by numerical differencing.
SlidingSurface sliding_surface(const AttitudeState& state, const Reference& ref,
                               const SlidingConfig& cfg, const QuadParams& params,
                               const Vec3& u_prev);

// u_eq = I (ref.accels - Lambda e_dot) - gyro(omega), nominal model.
Vec3 equivalent_control(const AttitudeState& state, const Reference& ref,
                        const SlidingConfig& cfg, const QuadParams& params);

// Twisting switching element: -mu alpha sign(sigma) while sigma sigma_dot <= 0,
// -alpha sign(sigma) otherwise; sign(0) == 0.
double twisting_term(double sigma, double sigma_dot, double alpha, double mu);

// One-stage accelerated gain max(alpha_star, gamma |sigma|^rho).
double accelerated_gain(double sigma, double gamma, double rho, double alpha_star);

// One explicit-Euler step of the gain adaptation law for axis `axis`,
// clamped to [alpha_m, alpha_M] (a decay step stops at the threshold, as in
// the continuous law; below it the gain re-grows at rate eta). `sigma` is
// expected in the gain-policy metric, i.e. already multiplied by
// adapt_sigma_scale.
double adapt_gain(double alpha, double sigma, const SlidingConfig& cfg, int axis,
                  double dt);

// V = 1/2 sigma^T I sigma + sum (alpha_i - alpha_M_i)^2 / (2 gamma_lyap_i).
// Monitoring instrument only; never fed back into the control law.
double lyapunov_value(const Vec3& sigma, const Vec3& alpha,
                      const SlidingConfig& cfg, const QuadParams& params);

// One control update: composes the equivalent control with the
// kind-specific discontinuous term, saturates, and advances the controller
// memory (adaptive gains, PID integral, last applied torque).
ControlOutput controller_step(ControllerKind kind, const AttitudeState& state,
                              const Reference& ref, ControllerState& memory,
                              const SlidingConfig& cfg, const QuadParams& params,
                              double dt);

}  // namespace quadsim
