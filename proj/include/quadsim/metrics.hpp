#pragma once

#include <vector>

#include "quadsim/sim.hpp"

namespace quadsim {

struct StepMetrics {
    int axis = 0;
    double step_time = 0.0;            // [s]
    double step_magnitude = 0.0;       // [rad]
    double settling_time_2pct = 0.0;   // [s] from the step; +inf if never settled
    double settling_time_5pct = 0.0;   // [s]
    double overshoot_pct = 0.0;        // peak excursion past the target / |step|
    double steady_state_error = 0.0;   // RMS error over the steady-state window [rad]
    double rms_tracking_error = 0.0;   // RMS error over the whole window [rad]
};

struct ChatterMetrics {
    int axis = 0;
    double total_variation = 0.0;      // sum |u_{k+1} - u_k| over the window [N m]
    long long switching_count = 0;     // sign changes of the discontinuous term
    double dominant_frequency = 0.0;   // zero-crossing rate of u_D / 2 [Hz]
};

struct GainTraceSummary {
    int axis = 0;
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    double fraction_of_time_at_bounds = 0.0;
};

struct LyapunovReport {
    long long steps_total = 0;     // control intervals examined
    long long steps_checked = 0;   // intervals where the decrease premise held
    long long violations = 0;
    double max_increase = 0.0;     // largest flagged V increase
    double tolerance = 1e-6;
};

// Metrics for one reference step. The measurement window is
// [event.time, window_end]; settling is the first instant after which the
// error stays inside the band until window_end. The steady-state window is
// the last 30% of the span to the next event on any axis (or t_end).
// Throws WindowTooShortError when the log does not cover the window.
StepMetrics step_metrics(const RunLog& log, const StepEvent& event,
                         double window_end);

// Per-event metrics with the default window: up to the next event on the
// same axis, or the end of the log.
std::vector<StepMetrics> analyze_steps(const RunLog& log);

// Chattering measures for one axis over [t_begin, t_end].
ChatterMetrics chatter_index(const RunLog& log, int axis, double t_begin,
                             double t_end);

// Min/max of the logged gain trace and the fraction of samples sitting at
// the adaptation bounds (within `bound_tol`).
GainTraceSummary gain_trace_summary(const RunLog& log, int axis,
                                    const SlidingConfig& cfg,
                                    double bound_tol = 1e-6);

// Flags control intervals where the decrease premise held on every axis
// (alpha_i >= xi_M_i / mu_i and |sigma_i|^rho_i > epsilon_i at both interval
// endpoints) yet V increased by more than `tolerance`.
LyapunovReport lyapunov_monotonicity(const RunLog& log, const SlidingConfig& cfg,
                                     double tolerance = 1e-6);

struct ComparisonRow {
    ControllerKind controller;
    StepMetrics step;
    ChatterMetrics chatter;  // over the step's steady-state window
};

struct ControllerSummary {
    ControllerKind controller;
    double steady_state_error_total = 0.0;  // sum of per-event RMS errors [rad]
    double settling_time_mean = 0.0;        // mean 2% settling time [s]
    double total_variation_sum = 0.0;       // [N m]
    int rank_by_ss_error = 0;               // 1 = best; ties share a rank
    int rank_by_settling = 0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;          // grouped by controller, then event
    std::vector<ControllerSummary> summary;   // input order preserved
};

// Side-by-side metrics for runs of the same scenario and seed.
// Throws MismatchedScenarioError when configs or seeds differ.
ComparisonTable compare_controllers(const std::vector<RunLog>& logs);

}  // namespace quadsim
