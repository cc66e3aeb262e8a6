#include "quadsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// First sample index with t >= time (uniform sampling).
std::size_t index_at(const RunLog& log, double time) {
    const double idx = time / log.dt_ctrl;
    const auto rounded = static_cast<long long>(std::ceil(idx - 1e-9));
    return static_cast<std::size_t>(std::max(0ll, rounded));
}

double reference_before(const RunLog& log, const StepEvent& event) {
    double value = 0.0;
    for (const StepEvent& ev : log.events) {
        if (ev.axis == event.axis && ev.time < event.time) value = ev.target;
    }
    return value;
}

double next_event_time(const RunLog& log, const StepEvent& event,
                       bool same_axis_only) {
    double next = log.t_end;
    for (const StepEvent& ev : log.events) {
        if (ev.time <= event.time) continue;
        if (same_axis_only && ev.axis != event.axis) continue;
        next = std::min(next, ev.time);
    }
    return next;
}

double settling_from_band(const RunLog& log, const StepEvent& event,
                          std::size_t first, std::size_t last, double band) {
    // Last sample outside the band decides; the response must then hold the
    // band through window_end.
    std::ptrdiff_t last_violation = -1;
    for (std::size_t k = first; k <= last; ++k) {
        const double err = log.samples[k].angles[event.axis] - event.target;
        if (std::abs(err) > band) last_violation = static_cast<std::ptrdiff_t>(k);
    }
    if (last_violation < 0) return 0.0;
    if (static_cast<std::size_t>(last_violation) == last) return kInf;  // never settled
    return log.samples[static_cast<std::size_t>(last_violation) + 1].t - event.time;
}

double rms_error(const RunLog& log, int axis, double target, std::size_t first,
                 std::size_t last) {
    double sum = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
        const double err = log.samples[k].angles[axis] - target;
        sum += err * err;
    }
    return std::sqrt(sum / static_cast<double>(last - first + 1));
}

int rank_ascending(const std::vector<double>& values, std::size_t i) {
    int rank = 1;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (values[j] < values[i]) ++rank;
    }
    return rank;
}

}  // namespace

StepMetrics step_metrics(const RunLog& log, const StepEvent& event,
                         double window_end) {
    if (log.samples.empty()) throw WindowTooShortError("metrics: empty log");
    if (window_end <= event.time) {
        throw WindowTooShortError("metrics: window ends before the step");
    }
    if (log.samples.back().t + 1e-9 < window_end) {
        throw WindowTooShortError("metrics: log ends before the window");
    }

    StepMetrics m;
    m.axis = event.axis;
    m.step_time = event.time;
    m.step_magnitude = event.target - reference_before(log, event);
    if (m.step_magnitude == 0.0) {
        throw WindowTooShortError("metrics: zero-magnitude step");
    }

    const std::size_t first = index_at(log, event.time);
    const std::size_t last =
        std::min(index_at(log, window_end), log.samples.size() - 1);
    const double step_abs = std::abs(m.step_magnitude);

    m.settling_time_2pct = settling_from_band(log, event, first, last, 0.02 * step_abs);
    m.settling_time_5pct = settling_from_band(log, event, first, last, 0.05 * step_abs);

    const double direction = (m.step_magnitude > 0.0) ? 1.0 : -1.0;
    double peak = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
        const double excursion =
            direction * (log.samples[k].angles[event.axis] - event.target);
        peak = std::max(peak, excursion);
    }
    m.overshoot_pct = 100.0 * peak / step_abs;

    m.rms_tracking_error = rms_error(log, event.axis, event.target, first, last);

    const double t_next = next_event_time(log, event, /*same_axis_only=*/false);
    const double ss_begin = event.time + 0.7 * (t_next - event.time);
    const std::size_t ss_first = index_at(log, ss_begin);
    const std::size_t ss_last =
        std::min(index_at(log, t_next), log.samples.size() - 1);
    m.steady_state_error = rms_error(log, event.axis, event.target, ss_first, ss_last);
    return m;
}

std::vector<StepMetrics> analyze_steps(const RunLog& log) {
    std::vector<StepMetrics> out;
    out.reserve(log.events.size());
    for (const StepEvent& ev : log.events) {
        const double window_end = next_event_time(log, ev, /*same_axis_only=*/true);
        out.push_back(step_metrics(log, ev, window_end));
    }
    return out;
}

ChatterMetrics chatter_index(const RunLog& log, int axis, double t_begin,
                             double t_end) {
    if (log.samples.empty()) throw WindowTooShortError("chatter: empty log");
    const std::size_t first = index_at(log, t_begin);
    const std::size_t last = std::min(index_at(log, t_end), log.samples.size() - 1);
    if (last <= first) throw WindowTooShortError("chatter: window shorter than two samples");

    ChatterMetrics c;
    c.axis = axis;
    double prev_sign = sign0(log.samples[first].u_disc[axis]);
    for (std::size_t k = first + 1; k <= last; ++k) {
        c.total_variation += std::abs(log.samples[k].u[axis] - log.samples[k - 1].u[axis]);
        const double s = sign0(log.samples[k].u_disc[axis]);
        if (s != 0.0) {
            if (prev_sign != 0.0 && s != prev_sign) ++c.switching_count;
            prev_sign = s;
        }
    }
    const double duration = log.samples[last].t - log.samples[first].t;
    c.dominant_frequency = static_cast<double>(c.switching_count) / (2.0 * duration);
    return c;
}

GainTraceSummary gain_trace_summary(const RunLog& log, int axis,
                                    const SlidingConfig& cfg, double bound_tol) {
    if (log.samples.empty()) throw WindowTooShortError("gain trace: empty log");
    GainTraceSummary g;
    g.axis = axis;
    g.alpha_min = kInf;
    g.alpha_max = -kInf;
    long long at_bounds = 0;
    for (const RunSample& s : log.samples) {
        const double a = s.alpha[axis];
        g.alpha_min = std::min(g.alpha_min, a);
        g.alpha_max = std::max(g.alpha_max, a);
        if (std::abs(a - cfg.alpha_m[axis]) <= bound_tol ||
            std::abs(a - cfg.alpha_M[axis]) <= bound_tol) {
            ++at_bounds;
        }
    }
    g.fraction_of_time_at_bounds =
        static_cast<double>(at_bounds) / static_cast<double>(log.samples.size());
    return g;
}

LyapunovReport lyapunov_monotonicity(const RunLog& log, const SlidingConfig& cfg,
                                     double tolerance) {
    LyapunovReport r;
    r.tolerance = tolerance;
    if (log.samples.size() < 2) return r;

    auto premise = [&](const RunSample& s) {
        for (int i = 0; i < 3; ++i) {
            if (s.alpha[i] < cfg.xi_M[i] / cfg.mu[i]) return false;
            if (std::pow(std::abs(s.sigma[i]), cfg.rho[i]) <= cfg.epsilon[i]) return false;
        }
        return true;
    };

    r.steps_total = static_cast<long long>(log.samples.size()) - 1;
    for (std::size_t k = 0; k + 1 < log.samples.size(); ++k) {
        if (!premise(log.samples[k]) || !premise(log.samples[k + 1])) continue;
        ++r.steps_checked;
        const double dv = log.samples[k + 1].lyapunov - log.samples[k].lyapunov;
        if (dv > tolerance) {
            ++r.violations;
            r.max_increase = std::max(r.max_increase, dv);
        }
    }
    return r;
}

ComparisonTable compare_controllers(const std::vector<RunLog>& logs) {
    if (logs.empty()) throw MismatchedScenarioError("compare: no runs given");
    for (const RunLog& log : logs) {
        if (log.config_hash != logs.front().config_hash ||
            log.seed != logs.front().seed) {
            throw MismatchedScenarioError("compare: runs come from different scenarios");
        }
    }

    ComparisonTable table;
    std::vector<double> ss_totals, settling_means;
    for (const RunLog& log : logs) {
        ControllerSummary sum;
        sum.controller = log.controller;
        double settling_acc = 0.0;
        const auto steps = analyze_steps(log);
        for (std::size_t e = 0; e < steps.size(); ++e) {
            const StepMetrics& m = steps[e];
            ComparisonRow row;
            row.controller = log.controller;
            row.step = m;
            const double t_next = next_event_time(log, log.events[e], false);
            const double ss_begin = m.step_time + 0.7 * (t_next - m.step_time);
            row.chatter = chatter_index(log, m.axis, ss_begin, t_next);
            table.rows.push_back(row);

            sum.steady_state_error_total += m.steady_state_error;
            settling_acc += m.settling_time_2pct;
            sum.total_variation_sum += row.chatter.total_variation;
        }
        sum.settling_time_mean =
            steps.empty() ? 0.0 : settling_acc / static_cast<double>(steps.size());
        table.summary.push_back(sum);
        ss_totals.push_back(sum.steady_state_error_total);
        settling_means.push_back(sum.settling_time_mean);
    }
    for (std::size_t i = 0; i < table.summary.size(); ++i) {
        table.summary[i].rank_by_ss_error = rank_ascending(ss_totals, i);
        table.summary[i].rank_by_settling = rank_ascending(settling_means, i);
    }
    return table;
}

}  // namespace quadsim
