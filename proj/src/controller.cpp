#include "quadsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quadsim {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

void SlidingConfig::validate() const {
    for (int i = 0; i < 3; ++i) {
        const std::string ax = "axis " + std::to_string(i) + ": ";
        require(lambda[i] > 0.0, "sliding: " + ax + "lambda must be > 0");
        require(mu[i] > 0.0 && mu[i] < 1.0, "sliding: " + ax + "mu must be in (0, 1)");
        require(rho[i] > 0.0, "sliding: " + ax + "rho must be > 0");
        require(epsilon[i] > 0.0, "sliding: " + ax + "epsilon must be > 0");
        require(omega_bar[i] > 0.0, "sliding: " + ax + "omega_bar must be > 0");
        require(eta[i] > 0.0, "sliding: " + ax + "eta must be > 0");
        require(alpha_m[i] > 0.0 && alpha_m[i] < alpha_M[i],
                "sliding: " + ax + "need 0 < alpha_m < alpha_M");
        require(xi_M[i] >= 0.0, "sliding: " + ax + "xi_M must be >= 0");
        require(alpha_m[i] >= xi_M[i] / mu[i],
                "sliding: " + ax + "alpha_m must be >= xi_M / mu (reaching condition)");
        require(gamma_accel[i] > 0.0, "sliding: " + ax + "gamma_accel must be > 0");
        require(gamma_lyap[i] > 0.0, "sliding: " + ax + "gamma_lyap must be > 0");
        require(adapt_sigma_scale > 0.0, "sliding: adapt_sigma_scale must be > 0");
        require(alpha_star[i] > 0.0, "sliding: " + ax + "alpha_star must be > 0");
        require(twist_alpha[i] > 0.0, "sliding: " + ax + "twist_alpha must be > 0");
        require(smc_gain[i] > 0.0, "sliding: " + ax + "smc_gain must be > 0");
        require(pid_kp[i] >= 0.0 && pid_ki[i] >= 0.0 && pid_kd[i] >= 0.0,
                "sliding: " + ax + "pid gains must be >= 0");
    }
}

SlidingSurface sliding_surface(const AttitudeState& state, const Reference& ref,
                               const SlidingConfig& cfg, const QuadParams& params,
                               const Vec3& u_prev) {
    const Vec3 e = state.angles - ref.angles;
    const Vec3 e_dot = state.rates - ref.rates;
    SlidingSurface s;
    s.sigma = e_dot + cfg.lambda.cwiseProduct(e);
    const Vec3 accel = attitude_accel(state, u_prev, Vec3::Zero(), params);
    s.sigma_dot = -ref.accels + accel + cfg.lambda.cwiseProduct(e_dot);
    return s;
}

Vec3 equivalent_control(const AttitudeState& state, const Reference& ref,
                        const SlidingConfig& cfg, const QuadParams& params) {
    const Vec3 e_dot = state.rates - ref.rates;
    return params.inertia * (ref.accels - cfg.lambda.cwiseProduct(e_dot)) -
           gyro_torque(state.rates, params.inertia);
}

double twisting_term(double sigma, double sigma_dot, double alpha, double mu) {
    const double s = sign0(sigma);
    return (sigma * sigma_dot <= 0.0) ? -mu * alpha * s : -alpha * s;
}

double accelerated_gain(double sigma, double gamma, double rho, double alpha_star) {
    return std::max(alpha_star, gamma * std::pow(std::abs(sigma), rho));
}

double adapt_gain(double alpha, double sigma, const SlidingConfig& cfg, int axis,
                  double dt) {
    const double abs_s = std::abs(sigma);
    double next;
    if (alpha > cfg.alpha_m[axis]) {
        const double rate = cfg.omega_bar[axis] * abs_s *
                            sign0(std::pow(abs_s, cfg.rho[axis]) - cfg.epsilon[axis]);
        // a decay step stops at the threshold instead of undershooting it
        next = std::max(alpha + rate * dt, cfg.alpha_m[axis]);
    } else {
        next = alpha + cfg.eta[axis] * dt;
    }
    return std::min(next, cfg.alpha_M[axis]);
}

double lyapunov_value(const Vec3& sigma, const Vec3& alpha,
                      const SlidingConfig& cfg, const QuadParams& params) {
    double v = 0.5 * sigma.dot(params.inertia * sigma);
    for (int i = 0; i < 3; ++i) {
        const double da = alpha[i] - cfg.alpha_M[i];
        v += 0.5 * da * da / cfg.gamma_lyap[i];
    }
    return v;
}

ControlOutput controller_step(ControllerKind kind, const AttitudeState& state,
                              const Reference& ref, ControllerState& memory,
                              const SlidingConfig& cfg, const QuadParams& params,
                              double dt) {
    ControlOutput out;
    const SlidingSurface surf = sliding_surface(state, ref, cfg, params, memory.u_prev);
    out.sigma = surf.sigma;
    out.sigma_dot = surf.sigma_dot;
    out.u_eq = Vec3::Zero();
    out.u_disc = Vec3::Zero();
    out.alpha = Vec3::Zero();

    const Vec3 e = state.angles - ref.angles;
    const Vec3 e_dot = state.rates - ref.rates;

    switch (kind) {
        case ControllerKind::Smc:
            out.u_eq = equivalent_control(state, ref, cfg, params);
            out.alpha = cfg.smc_gain;
            for (int i = 0; i < 3; ++i) {
                out.u_disc[i] = -cfg.smc_gain[i] * sign0(surf.sigma[i]);
            }
            break;
        case ControllerKind::TwistFixed:
            out.u_eq = equivalent_control(state, ref, cfg, params);
            out.alpha = cfg.twist_alpha;
            for (int i = 0; i < 3; ++i) {
                out.u_disc[i] = twisting_term(surf.sigma[i], surf.sigma_dot[i],
                                              cfg.twist_alpha[i], cfg.mu[i]);
            }
            break;
        case ControllerKind::Atsm:
            out.u_eq = equivalent_control(state, ref, cfg, params);
            for (int i = 0; i < 3; ++i) {
                out.alpha[i] =
                    accelerated_gain(cfg.adapt_sigma_scale * surf.sigma[i],
                                     cfg.gamma_accel[i], cfg.rho[i], cfg.alpha_star[i]);
                out.u_disc[i] = twisting_term(surf.sigma[i], surf.sigma_dot[i],
                                              out.alpha[i], cfg.mu[i]);
            }
            break;
        case ControllerKind::AdaptiveTwisting:
            out.u_eq = equivalent_control(state, ref, cfg, params);
            out.alpha = memory.gains.alpha;
            for (int i = 0; i < 3; ++i) {
                out.u_disc[i] = twisting_term(surf.sigma[i], surf.sigma_dot[i],
                                              out.alpha[i], cfg.mu[i]);
            }
            break;
        case ControllerKind::Pid:
            for (int i = 0; i < 3; ++i) {
                out.u_disc[i] = -(cfg.pid_kp[i] * e[i] +
                                  cfg.pid_ki[i] * memory.pid_integral[i] +
                                  cfg.pid_kd[i] * e_dot[i]);
            }
            break;
    }

    const Vec3 raw = out.u_eq + out.u_disc;
    for (int i = 0; i < 3; ++i) {
        out.u[i] = std::clamp(raw[i], -params.tau_max, params.tau_max);
        out.saturated[i] = raw[i] != out.u[i];
    }

    if (kind == ControllerKind::AdaptiveTwisting) {
        for (int i = 0; i < 3; ++i) {
            memory.gains.alpha[i] = adapt_gain(
                memory.gains.alpha[i], cfg.adapt_sigma_scale * surf.sigma[i], cfg, i, dt);
        }
    }
    if (kind == ControllerKind::Pid) {
        // Conditional integration: freeze the integral on saturated axes.
        for (int i = 0; i < 3; ++i) {
            if (!out.saturated[i]) memory.pid_integral[i] += e[i] * dt;
        }
    }
    memory.u_prev = out.u;
    return out;
}

}  // namespace quadsim
