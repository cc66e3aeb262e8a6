#include "quadsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace quadsim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double deg2rad(double deg) { return deg * kDegToRad; }

// Degree value that parses back to exactly `rad`; keeps serialize/load a
// lossless round trip.
double rad2deg_exact(double rad) {
    double deg = rad / kDegToRad;
    for (int i = 0; i < 8 && deg2rad(deg) != rad; ++i) {
        deg = std::nextafter(deg, deg2rad(deg) < rad
                                      ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity());
    }
    return deg;
}

std::string format_number(double v) {
    char buf[64];
    for (int precision : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct ConfigEntry {
    int line = 0;
    std::string section;
    std::string key;
    std::vector<std::string> tokens;
};

std::vector<ConfigEntry> tokenize(const std::string& text) {
    std::vector<ConfigEntry> entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError("line " + std::to_string(line_no) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ParseError("line " + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        if (section.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": key outside any section");
        }
        ConfigEntry entry;
        entry.line = line_no;
        entry.section = section;
        entry.key = trim(line.substr(0, eq));
        if (entry.key.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty key");
        }
        std::istringstream values(line.substr(eq + 1));
        std::string tok;
        while (values >> tok) entry.tokens.push_back(tok);
        if (entry.tokens.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": missing value for '" +
                             entry.key + "'");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

double parse_double(const ConfigEntry& e, const std::string& token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
        throw ParseError("line " + std::to_string(e.line) + ": bad number '" + token + "'");
    }
    return v;
}

std::uint64_t parse_u64(const ConfigEntry& e, const std::string& token) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0') {
        throw ParseError("line " + std::to_string(e.line) + ": bad integer '" + token + "'");
    }
    return v;
}

double scalar(const ConfigEntry& e) {
    if (e.tokens.size() != 1) {
        throw ParseError("line " + std::to_string(e.line) + ": '" + e.key +
                         "' takes a single number");
    }
    return parse_double(e, e.tokens[0]);
}

// One number broadcasts to all axes; otherwise exactly three.
Vec3 vector3(const ConfigEntry& e) {
    if (e.tokens.size() == 1) return Vec3::Constant(parse_double(e, e.tokens[0]));
    if (e.tokens.size() != 3) {
        throw ParseError("line " + std::to_string(e.line) + ": '" + e.key +
                         "' takes 1 or 3 numbers");
    }
    return Vec3(parse_double(e, e.tokens[0]), parse_double(e, e.tokens[1]),
                parse_double(e, e.tokens[2]));
}

// Three numbers form a diagonal, nine a full row-major matrix.
Mat3 matrix3(const ConfigEntry& e) {
    if (e.tokens.size() == 3) {
        Mat3 m = Mat3::Zero();
        m.diagonal() << parse_double(e, e.tokens[0]), parse_double(e, e.tokens[1]),
            parse_double(e, e.tokens[2]);
        return m;
    }
    if (e.tokens.size() != 9) {
        throw ParseError("line " + std::to_string(e.line) + ": '" + e.key +
                         "' takes 3 (diagonal) or 9 (row-major) numbers");
    }
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = parse_double(e, e.tokens[i]);
    return m;
}

int axis_from_name(const ConfigEntry& e, const std::string& name) {
    if (name == "roll") return 0;
    if (name == "pitch") return 1;
    if (name == "yaw") return 2;
    throw ParseError("line " + std::to_string(e.line) + ": unknown axis '" + name + "'");
}

const char* axis_name(int axis) {
    return axis == 0 ? "roll" : axis == 1 ? "pitch" : "yaw";
}

void apply_entry(ScenarioSpec& spec, const ConfigEntry& e, bool& schedule_reset) {
    auto unknown = [&]() -> ParseError {
        return ParseError("line " + std::to_string(e.line) + ": unknown key '" + e.key +
                          "' in section [" + e.section + "]");
    };
    if (e.section == "scenario") {
        if (e.key == "name") return;  // consumed up front
        if (e.key == "payload_mass") spec.payload_mass = scalar(e);
        else if (e.key == "delta_inertia") spec.delta_inertia = matrix3(e);
        else if (e.key == "inertia_scale") spec.inertia_scale = scalar(e);
        else throw unknown();
    } else if (e.section == "quad") {
        if (e.key == "mass") spec.quad.mass = scalar(e);
        else if (e.key == "arm_length") spec.quad.arm_length = scalar(e);
        else if (e.key == "gravity") spec.quad.gravity = scalar(e);
        else if (e.key == "inertia") spec.quad.inertia = matrix3(e);
        else if (e.key == "force_to_torque") spec.quad.force_to_torque = scalar(e);
        else if (e.key == "tau_max") spec.quad.tau_max = scalar(e);
        else if (e.key == "f_max") spec.quad.f_max = scalar(e);
        else throw unknown();
    } else if (e.section == "sliding") {
        SlidingConfig& c = spec.sliding;
        if (e.key == "lambda") c.lambda = vector3(e);
        else if (e.key == "mu") c.mu = vector3(e);
        else if (e.key == "rho") c.rho = vector3(e);
        else if (e.key == "epsilon") c.epsilon = vector3(e);
        else if (e.key == "omega_bar") c.omega_bar = vector3(e);
        else if (e.key == "alpha_m") c.alpha_m = vector3(e);
        else if (e.key == "alpha_M") c.alpha_M = vector3(e);
        else if (e.key == "eta") c.eta = vector3(e);
        else if (e.key == "xi_M") c.xi_M = vector3(e);
        else if (e.key == "gamma_accel") c.gamma_accel = vector3(e);
        else if (e.key == "gamma_lyap") c.gamma_lyap = vector3(e);
        else if (e.key == "alpha_star") c.alpha_star = vector3(e);
        else if (e.key == "twist_alpha") c.twist_alpha = vector3(e);
        else if (e.key == "smc_gain") c.smc_gain = vector3(e);
        else if (e.key == "pid_kp") c.pid_kp = vector3(e);
        else if (e.key == "pid_ki") c.pid_ki = vector3(e);
        else if (e.key == "pid_kd") c.pid_kd = vector3(e);
        else throw unknown();
    } else if (e.section == "sim") {
        SimConfig& c = spec.sim;
        if (e.key == "dt_plant") c.dt_plant = scalar(e);
        else if (e.key == "dt_ctrl") c.dt_ctrl = scalar(e);
        else if (e.key == "t_end") c.t_end = scalar(e);
        else if (e.key == "seed") {
            if (e.tokens.size() != 1) throw unknown();
            c.seed = parse_u64(e, e.tokens[0]);
        } else if (e.key == "integrator") {
            if (e.tokens.size() != 1) throw unknown();
            if (e.tokens[0] == "rk4") c.integrator = IntegratorKind::Rk4;
            else if (e.tokens[0] == "euler") c.integrator = IntegratorKind::Euler;
            else throw ParseError("line " + std::to_string(e.line) +
                                  ": integrator must be rk4 or euler");
        } else if (e.key == "kinematics") {
            if (e.tokens.size() != 1) throw unknown();
            if (e.tokens[0] == "approx") c.kinematics = KinematicsMode::Approx;
            else if (e.tokens[0] == "full") c.kinematics = KinematicsMode::Full;
            else throw ParseError("line " + std::to_string(e.line) +
                                  ": kinematics must be approx or full");
        } else throw unknown();
    } else if (e.section == "schedule") {
        if (e.key != "step") throw unknown();
        if (e.tokens.size() != 3) {
            throw ParseError("line " + std::to_string(e.line) +
                             ": step takes '<time> <axis> <degrees>'");
        }
        if (!schedule_reset) {
            spec.schedule.steps.clear();  // a file schedule replaces the preset one
            schedule_reset = true;
        }
        StepEvent ev;
        ev.time = parse_double(e, e.tokens[0]);
        ev.axis = axis_from_name(e, e.tokens[1]);
        ev.target = deg2rad(parse_double(e, e.tokens[2]));
        spec.schedule.steps.push_back(ev);
    } else if (e.section == "disturbance") {
        if (e.key == "kind") {
            if (e.tokens.size() != 1) throw unknown();
            if (e.tokens[0] == "none") spec.disturbance.kind = DisturbanceKind::None;
            else if (e.tokens[0] == "constant_bias")
                spec.disturbance.kind = DisturbanceKind::ConstantBias;
            else if (e.tokens[0] == "uniform_noise")
                spec.disturbance.kind = DisturbanceKind::UniformNoise;
            else throw ParseError("line " + std::to_string(e.line) +
                                  ": kind must be none, constant_bias or uniform_noise");
        } else if (e.key == "magnitude") {
            spec.disturbance.magnitude = scalar(e);
        } else throw unknown();
    } else {
        throw ParseError("line " + std::to_string(e.line) + ": unknown section [" +
                         e.section + "]");
    }
}

}  // namespace

ScenarioSpec make_preset(const std::string& name) {
    ScenarioSpec spec;  // struct defaults carry the base parameter set
    spec.schedule.steps = {{0.5, 0, deg2rad(-10.0)},
                           {1.0, 1, deg2rad(10.0)},
                           {2.0, 2, deg2rad(45.0)}};
    if (name == "custom") {
        spec.name = "custom";
    } else if (name == "nominal") {
        spec.name = "nominal";
    } else if (name == "disturbance") {
        spec.name = "disturbance";
        spec.disturbance.kind = DisturbanceKind::ConstantBias;
        spec.disturbance.magnitude = 0.5;
    } else if (name == "variation") {
        spec.name = "variation";
        spec.payload_mass = 0.8;
        spec.delta_inertia << 0.0, 0.0044, -0.0077,
                              0.0044, 0.0, 0.0115,
                              -0.0077, 0.0115, 0.0;
    } else {
        throw UnknownPresetError("unknown preset '" + name + "'");
    }
    return spec;
}

ScenarioSpec parse_scenario(const std::string& text) {
    const std::vector<ConfigEntry> entries = tokenize(text);
    std::string base = "custom";
    for (const ConfigEntry& e : entries) {
        if (e.section == "scenario" && e.key == "name") {
            if (e.tokens.size() != 1) {
                throw ParseError("line " + std::to_string(e.line) + ": name takes one token");
            }
            base = e.tokens[0];
        }
    }
    ScenarioSpec spec = make_preset(base);
    bool schedule_reset = false;
    for (const ConfigEntry& e : entries) apply_entry(spec, e, schedule_reset);
    validate_scenario(spec);
    return spec;
}

ScenarioSpec load_scenario(const std::string& path_or_preset) {
    if (path_or_preset == "nominal" || path_or_preset == "disturbance" ||
        path_or_preset == "variation" || path_or_preset == "custom") {
        ScenarioSpec spec = make_preset(path_or_preset);
        validate_scenario(spec);
        return spec;
    }
    std::ifstream in(path_or_preset);
    if (!in) {
        throw ParseError("cannot open scenario file '" + path_or_preset + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

namespace {

void emit_vec3(std::ostream& out, const char* key, const Vec3& v) {
    out << key << " = " << format_number(v[0]) << ' ' << format_number(v[1]) << ' '
        << format_number(v[2]) << '\n';
}

void emit_mat3(std::ostream& out, const char* key, const Mat3& m) {
    out << key << " =";
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) out << ' ' << format_number(m(r, c));
    }
    out << '\n';
}

}  // namespace

std::string serialize_scenario(const ScenarioSpec& spec) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "name = " << spec.name << '\n';
    out << "payload_mass = " << format_number(spec.payload_mass) << '\n';
    emit_mat3(out, "delta_inertia", spec.delta_inertia);
    out << "inertia_scale = " << format_number(spec.inertia_scale) << '\n';

    out << "\n[quad]\n";
    out << "mass = " << format_number(spec.quad.mass) << '\n';
    out << "arm_length = " << format_number(spec.quad.arm_length) << '\n';
    out << "gravity = " << format_number(spec.quad.gravity) << '\n';
    emit_mat3(out, "inertia", spec.quad.inertia);
    out << "force_to_torque = " << format_number(spec.quad.force_to_torque) << '\n';
    out << "tau_max = " << format_number(spec.quad.tau_max) << '\n';
    out << "f_max = " << format_number(spec.quad.f_max) << '\n';

    const SlidingConfig& c = spec.sliding;
    out << "\n[sliding]\n";
    emit_vec3(out, "lambda", c.lambda);
    emit_vec3(out, "mu", c.mu);
    emit_vec3(out, "rho", c.rho);
    emit_vec3(out, "epsilon", c.epsilon);
    emit_vec3(out, "omega_bar", c.omega_bar);
    emit_vec3(out, "alpha_m", c.alpha_m);
    emit_vec3(out, "alpha_M", c.alpha_M);
    emit_vec3(out, "eta", c.eta);
    emit_vec3(out, "xi_M", c.xi_M);
    emit_vec3(out, "gamma_accel", c.gamma_accel);
    emit_vec3(out, "gamma_lyap", c.gamma_lyap);
    emit_vec3(out, "alpha_star", c.alpha_star);
    emit_vec3(out, "twist_alpha", c.twist_alpha);
    emit_vec3(out, "smc_gain", c.smc_gain);
    emit_vec3(out, "pid_kp", c.pid_kp);
    emit_vec3(out, "pid_ki", c.pid_ki);
    emit_vec3(out, "pid_kd", c.pid_kd);

    out << "\n[sim]\n";
    out << "dt_plant = " << format_number(spec.sim.dt_plant) << '\n';
    out << "dt_ctrl = " << format_number(spec.sim.dt_ctrl) << '\n';
    out << "t_end = " << format_number(spec.sim.t_end) << '\n';
    out << "integrator = "
        << (spec.sim.integrator == IntegratorKind::Rk4 ? "rk4" : "euler") << '\n';
    out << "seed = " << spec.sim.seed << '\n';
    out << "kinematics = "
        << (spec.sim.kinematics == KinematicsMode::Approx ? "approx" : "full") << '\n';

    out << "\n[schedule]\n";
    for (const StepEvent& ev : spec.schedule.steps) {
        out << "step = " << format_number(ev.time) << ' ' << axis_name(ev.axis) << ' '
            << format_number(rad2deg_exact(ev.target)) << '\n';
    }

    out << "\n[disturbance]\n";
    const char* kind = spec.disturbance.kind == DisturbanceKind::None ? "none"
                       : spec.disturbance.kind == DisturbanceKind::ConstantBias
                           ? "constant_bias"
                           : "uniform_noise";
    out << "kind = " << kind << '\n';
    out << "magnitude = " << format_number(spec.disturbance.magnitude) << '\n';
    return out.str();
}

void validate_scenario(const ScenarioSpec& spec) {
    if (spec.name != "nominal" && spec.name != "disturbance" &&
        spec.name != "variation" && spec.name != "custom") {
        throw ValidationError("scenario: unknown name '" + spec.name + "'");
    }
    spec.quad.validate();
    spec.sliding.validate();
    spec.sim.validate();
    spec.schedule.validate();
    if (spec.payload_mass < 0.0) throw ValidationError("scenario: payload_mass must be >= 0");
    if (!(spec.inertia_scale > 0.0)) throw ValidationError("scenario: inertia_scale must be > 0");
    if (spec.disturbance.magnitude < 0.0) {
        throw ValidationError("scenario: disturbance magnitude must be >= 0");
    }
    if (spec.delta_inertia != spec.delta_inertia.transpose()) {
        throw ValidationError("scenario: delta_inertia must be symmetric");
    }
    const Mat3 plant_inertia = spec.plant_params().inertia;
    const Mat3 inv = plant_inertia.inverse();
    const double cond = plant_inertia.norm() * inv.norm();
    if (!std::isfinite(cond) || cond > 1e12) {
        throw ValidationError("scenario: plant inertia is not invertible");
    }
}

bool ScenarioSpec::operator==(const ScenarioSpec& other) const {
    auto eq_mat = [](const Mat3& a, const Mat3& b) {
        return (a.array() == b.array()).all();
    };
    auto eq_vec = [](const Vec3& a, const Vec3& b) {
        return (a.array() == b.array()).all();
    };
    if (name != other.name) return false;
    if (quad.mass != other.quad.mass || quad.arm_length != other.quad.arm_length ||
        quad.gravity != other.quad.gravity || !eq_mat(quad.inertia, other.quad.inertia) ||
        quad.force_to_torque != other.quad.force_to_torque ||
        quad.tau_max != other.quad.tau_max || quad.f_max != other.quad.f_max) {
        return false;
    }
    const SlidingConfig& a = sliding;
    const SlidingConfig& b = other.sliding;
    if (!eq_vec(a.lambda, b.lambda) || !eq_vec(a.mu, b.mu) || !eq_vec(a.rho, b.rho) ||
        !eq_vec(a.epsilon, b.epsilon) || !eq_vec(a.omega_bar, b.omega_bar) ||
        !eq_vec(a.alpha_m, b.alpha_m) || !eq_vec(a.alpha_M, b.alpha_M) ||
        !eq_vec(a.eta, b.eta) || !eq_vec(a.xi_M, b.xi_M) ||
        !eq_vec(a.gamma_accel, b.gamma_accel) || !eq_vec(a.gamma_lyap, b.gamma_lyap) ||
        !eq_vec(a.alpha_star, b.alpha_star) || !eq_vec(a.twist_alpha, b.twist_alpha) ||
        !eq_vec(a.smc_gain, b.smc_gain) || !eq_vec(a.pid_kp, b.pid_kp) ||
        !eq_vec(a.pid_ki, b.pid_ki) || !eq_vec(a.pid_kd, b.pid_kd)) {
        return false;
    }
    if (sim.dt_plant != other.sim.dt_plant || sim.dt_ctrl != other.sim.dt_ctrl ||
        sim.t_end != other.sim.t_end || sim.integrator != other.sim.integrator ||
        sim.seed != other.sim.seed || sim.kinematics != other.sim.kinematics) {
        return false;
    }
    if (schedule.steps.size() != other.schedule.steps.size()) return false;
    for (std::size_t i = 0; i < schedule.steps.size(); ++i) {
        const StepEvent& x = schedule.steps[i];
        const StepEvent& y = other.schedule.steps[i];
        if (x.time != y.time || x.axis != y.axis || x.target != y.target) return false;
    }
    if (disturbance.kind != other.disturbance.kind ||
        disturbance.magnitude != other.disturbance.magnitude) {
        return false;
    }
    return payload_mass == other.payload_mass &&
           eq_mat(delta_inertia, other.delta_inertia) &&
           inertia_scale == other.inertia_scale;
}

const char* controller_kind_name(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::Smc: return "smc";
        case ControllerKind::TwistFixed: return "twisting";
        case ControllerKind::Atsm: return "atsm";
        case ControllerKind::AdaptiveTwisting: return "adaptive-twisting";
        case ControllerKind::Pid: return "pid";
    }
    return "unknown";
}

ControllerKind controller_kind_from_name(const std::string& name) {
    if (name == "smc") return ControllerKind::Smc;
    if (name == "twisting" || name == "fixed-twisting") return ControllerKind::TwistFixed;
    if (name == "atsm") return ControllerKind::Atsm;
    if (name == "adaptive-twisting" || name == "adaptive") return ControllerKind::AdaptiveTwisting;
    if (name == "pid") return ControllerKind::Pid;
    throw ValidationError("unknown controller '" + name +
                          "' (expected smc, twisting, atsm, adaptive-twisting or pid)");
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char ch : bytes) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t scenario_hash(const ScenarioSpec& spec) {
    return fnv1a_hash(serialize_scenario(spec));
}

}  // namespace quadsim
