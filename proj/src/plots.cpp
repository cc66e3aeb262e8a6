#include "quadsim/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "quadsim/csv_io.hpp"

namespace quadsim {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

constexpr double kWidth = 880.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 700.0;   // plot box x extent
constexpr double kTop = 42.0, kBottom = 390.0;   // plot box y extent

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c",
                           "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double clamp01(double v) const { return (v - lo) / (hi - lo); }
};

Range data_range(const std::vector<PlotSeries>& series, bool use_y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const PlotSeries& s : series) {
        const std::vector<double>& v = use_y ? s.y : s.x;
        for (double value : v) {
            lo = std::min(lo, value);
            hi = std::max(hi, value);
        }
    }
    if (!(lo < hi)) {
        lo -= 1.0;
        hi += 1.0;
    }
    return {lo, hi};
}

}  // namespace

std::string render_line_svg(const std::vector<PlotSeries>& series,
                            const PlotOptions& options) {
    Range xr = data_range(series, false);
    Range yr = data_range(series, true);
    if (options.fix_y_range) {
        yr.lo = std::min(options.y_min, yr.lo);
        yr.hi = std::max(options.y_max, yr.hi);
    } else {
        const double pad = 0.05 * (yr.hi - yr.lo);
        yr.lo -= pad;
        yr.hi += pad;
    }

    auto px = [&](double x) { return kLeft + xr.clamp01(x) * (kRight - kLeft); };
    auto py = [&](double y) { return kBottom - yr.clamp01(y) * (kBottom - kTop); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << (kLeft + kRight) / 2.0
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">"
        << options.title << "</text>\n";

    // grid and ticks
    for (int i = 0; i <= 6; ++i) {
        const double fx = static_cast<double>(i) / 6.0;
        const double gx = kLeft + fx * (kRight - kLeft);
        const double gy = kBottom - fx * (kBottom - kTop);
        svg << "<line x1=\"" << fmt(gx) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(gx)
            << "\" y2=\"" << kBottom << "\" stroke=\"#dddddd\"/>\n";
        svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(gy) << "\" x2=\"" << kRight
            << "\" y2=\"" << fmt(gy) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << fmt(gx) << "\" y=\"" << kBottom + 20.0
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(xr.lo + fx * (xr.hi - xr.lo), "%.4g") << "</text>\n";
        svg << "<text x=\"" << kLeft - 8.0 << "\" y=\"" << fmt(gy + 4.0)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(yr.lo + fx * (yr.hi - yr.lo), "%.4g") << "</text>\n";
    }
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
        << "\" height=\"" << kBottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << (kLeft + kRight) / 2.0 << "\" y=\"" << kHeight - 12.0
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << options.x_label << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2.0
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << (kTop + kBottom) / 2.0 << ")\">" << options.y_label << "</text>\n";

    for (const PlotSeries& s : series) {
        if (s.x.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) svg << " stroke-dasharray=\"6,4\"";
        svg << " points=\"";
        // thin very dense traces to keep files small
        const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 4000);
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            svg << fmt(px(s.x[i]), "%.2f") << ',' << fmt(py(s.y[i]), "%.2f") << ' ';
        }
        if ((s.x.size() - 1) % stride != 0) {
            svg << fmt(px(s.x.back()), "%.2f") << ',' << fmt(py(s.y.back()), "%.2f");
        }
        svg << "\"/>\n";
    }

    double ly = kTop + 14.0;
    for (const PlotSeries& s : series) {
        svg << "<line x1=\"" << kRight + 14.0 << "\" y1=\"" << fmt(ly - 4.0) << "\" x2=\""
            << kRight + 40.0 << "\" y2=\"" << fmt(ly - 4.0) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"";
        if (s.dashed) svg << " stroke-dasharray=\"6,4\"";
        svg << "/>\n";
        svg << "<text x=\"" << kRight + 46.0 << "\" y=\"" << fmt(ly)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        ly += 18.0;
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

PlotSeries make_series(const RunLog& log, const std::string& label, int color_index,
                       double scale, const Vec3 RunSample::*field, int axis,
                       bool dashed = false, double t_begin = 0.0) {
    PlotSeries s;
    s.label = label;
    s.color = kPalette[color_index % 6];
    s.dashed = dashed;
    s.x.reserve(log.samples.size());
    s.y.reserve(log.samples.size());
    for (const RunSample& sample : log.samples) {
        if (sample.t < t_begin) continue;
        s.x.push_back(sample.t);
        s.y.push_back((sample.*field)[axis] * scale);
    }
    return s;
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const RunLog& log,
                                              const SlidingConfig& cfg,
                                              const std::filesystem::path& dir) {
    if (log.samples.empty()) throw MissingDataError("emit_plots: empty run log");
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> files;
    const char* axis_labels[3] = {"roll", "pitch", "yaw"};

    {
        std::vector<PlotSeries> series;
        for (int i = 0; i < 3; ++i) {
            series.push_back(make_series(log, axis_labels[i], i, kRadToDeg,
                                         &RunSample::angles, i));
        }
        for (int i = 0; i < 3; ++i) {
            series.push_back(make_series(log, std::string(axis_labels[i]) + " ref", i,
                                         kRadToDeg, &RunSample::ref_angles, i, true));
        }
        PlotOptions opt{.title = "Attitude response", .x_label = "time [s]",
                        .y_label = "angle [deg]"};
        const auto path = dir / "attitude.svg";
        write_text_atomic(render_line_svg(series, opt), path);
        files.push_back(path);
    }
    {
        std::vector<PlotSeries> series;
        for (int i = 0; i < 3; ++i) {
            series.push_back(make_series(log, std::string("u_") + axis_labels[i], i, 1.0,
                                         &RunSample::u, i));
        }
        PlotOptions opt{.title = "Control torques", .x_label = "time [s]",
                        .y_label = "torque [N m]"};
        const auto path = dir / "torques.svg";
        write_text_atomic(render_line_svg(series, opt), path);
        files.push_back(path);
    }
    {
        std::vector<PlotSeries> series;
        double amin = cfg.alpha_m.minCoeff(), amax = cfg.alpha_M.maxCoeff();
        for (int i = 0; i < 3; ++i) {
            series.push_back(make_series(log, std::string("alpha_") + std::to_string(i + 1),
                                         i, 1.0, &RunSample::alpha, i));
            for (double v : series.back().y) {
                amin = std::min(amin, v);
                amax = std::max(amax, v);
            }
        }
        PlotOptions opt{.title = "Discontinuous gain trace", .x_label = "time [s]",
                        .y_label = "alpha [N m]", .fix_y_range = true,
                        .y_min = amin - 0.01, .y_max = amax + 0.01};
        const auto path = dir / "gains.svg";
        write_text_atomic(render_line_svg(series, opt), path);
        files.push_back(path);
    }
    {
        // zoom on the tail after the last reference event
        double t_begin = 0.0;
        for (const StepEvent& ev : log.events) t_begin = std::max(t_begin, ev.time);
        t_begin += 0.7 * (log.t_end - t_begin);
        std::vector<PlotSeries> series;
        for (int i = 0; i < 3; ++i) {
            PlotSeries s;
            s.label = std::string(axis_labels[i]) + " error";
            s.color = kPalette[i];
            for (const RunSample& sample : log.samples) {
                if (sample.t < t_begin) continue;
                s.x.push_back(sample.t);
                s.y.push_back((sample.angles[i] - sample.ref_angles[i]) * kRadToDeg);
            }
            series.push_back(std::move(s));
        }
        PlotOptions opt{.title = "Steady-state tracking error (zoom)",
                        .x_label = "time [s]", .y_label = "error [deg]"};
        const auto path = dir / "steady_state_error.svg";
        write_text_atomic(render_line_svg(series, opt), path);
        files.push_back(path);
    }
    return files;
}

}  // namespace quadsim
