#include "quadsim/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "quadsim/scenario.hpp"

namespace quadsim {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

const char* axis_label(int axis) {
    return axis == 0 ? "roll" : axis == 1 ? "pitch" : "yaw";
}

}  // namespace

const char* const kRunCsvHeader =
    "t,phi,theta,psi,p,q,r,phi_ref,theta_ref,psi_ref,"
    "sigma_phi,sigma_theta,sigma_psi,sigma_dot_phi,sigma_dot_theta,sigma_dot_psi,"
    "u_phi,u_theta,u_psi,u_eq_phi,u_eq_theta,u_eq_psi,u_D_phi,u_D_theta,u_D_psi,"
    "alpha_1,alpha_2,alpha_3,d_phi,d_theta,d_psi,V,sat_flags";

std::string run_csv_text(const RunLog& log) {
    std::ostringstream out;
    out << kRunCsvHeader << '\n';
    for (const RunSample& s : log.samples) {
        out << num(s.t);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.angles[i] * kRadToDeg);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.rates[i] * kRadToDeg);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.ref_angles[i] * kRadToDeg);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.sigma[i]);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.sigma_dot[i]);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.u[i]);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.u_eq[i]);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.u_disc[i]);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.alpha[i]);
        for (int i = 0; i < 3; ++i) out << ',' << num(s.disturbance[i]);
        out << ',' << num(s.lyapunov) << ',' << s.sat_mask << '\n';
    }
    if (log.failed) out << "# aborted: " << log.failure << '\n';
    return out.str();
}

void write_run_csv(const RunLog& log, const std::filesystem::path& path) {
    write_text_atomic(run_csv_text(log), path);
}

std::string step_metrics_csv(const std::vector<StepMetrics>& metrics) {
    std::ostringstream out;
    out << "axis,step_time,step_deg,settling_2pct,settling_5pct,overshoot_pct,"
           "steady_state_error_deg,rms_tracking_error_deg\n";
    for (const StepMetrics& m : metrics) {
        out << axis_label(m.axis) << ',' << num(m.step_time) << ','
            << num(m.step_magnitude * kRadToDeg) << ',' << num(m.settling_time_2pct)
            << ',' << num(m.settling_time_5pct) << ',' << num(m.overshoot_pct) << ','
            << num(m.steady_state_error * kRadToDeg) << ','
            << num(m.rms_tracking_error * kRadToDeg) << '\n';
    }
    return out.str();
}

std::string comparison_csv(const ComparisonTable& table) {
    std::ostringstream out;
    out << "controller,axis,step_time,settling_2pct,settling_5pct,overshoot_pct,"
           "steady_state_error_deg,rms_tracking_error_deg,total_variation,"
           "switching_count,dominant_frequency\n";
    for (const ComparisonRow& r : table.rows) {
        out << controller_kind_name(r.controller) << ',' << axis_label(r.step.axis) << ','
            << num(r.step.step_time) << ',' << num(r.step.settling_time_2pct) << ','
            << num(r.step.settling_time_5pct) << ',' << num(r.step.overshoot_pct) << ','
            << num(r.step.steady_state_error * kRadToDeg) << ','
            << num(r.step.rms_tracking_error * kRadToDeg) << ','
            << num(r.chatter.total_variation) << ',' << r.chatter.switching_count << ','
            << num(r.chatter.dominant_frequency) << '\n';
    }
    out << "\ncontroller,steady_state_error_total_deg,settling_mean,"
           "total_variation_sum,rank_by_ss_error,rank_by_settling\n";
    for (const ControllerSummary& s : table.summary) {
        out << controller_kind_name(s.controller) << ','
            << num(s.steady_state_error_total * kRadToDeg) << ','
            << num(s.settling_time_mean) << ',' << num(s.total_variation_sum) << ','
            << s.rank_by_ss_error << ',' << s.rank_by_settling << '\n';
    }
    return out.str();
}

std::string comparison_text(const ComparisonTable& table) {
    std::ostringstream out;
    char line[256];
    out << "controller          axis   step[s]  st2%[s]  st5%[s]   ovs[%]  ss_err[deg]  "
           "rms[deg]   TV[Nm]  switches\n";
    for (const ComparisonRow& r : table.rows) {
        std::snprintf(line, sizeof line,
                      "%-18s %-6s %8.3f %8.3f %8.3f %8.2f %12.5f %9.4f %8.3f %9lld\n",
                      controller_kind_name(r.controller), axis_label(r.step.axis),
                      r.step.step_time, r.step.settling_time_2pct,
                      r.step.settling_time_5pct, r.step.overshoot_pct,
                      r.step.steady_state_error * kRadToDeg,
                      r.step.rms_tracking_error * kRadToDeg, r.chatter.total_variation,
                      r.chatter.switching_count);
        out << line;
    }
    out << "\ncontroller          ss_err_total[deg]  settling_mean[s]  TV_sum[Nm]  "
           "rank(ss)  rank(settling)\n";
    for (const ControllerSummary& s : table.summary) {
        std::snprintf(line, sizeof line, "%-18s %17.5f %17.3f %11.3f %9d %15d\n",
                      controller_kind_name(s.controller),
                      s.steady_state_error_total * kRadToDeg, s.settling_time_mean,
                      s.total_variation_sum, s.rank_by_ss_error, s.rank_by_settling);
        out << line;
    }
    return out.str();
}

void write_text_atomic(const std::string& content, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'", 2);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace quadsim
