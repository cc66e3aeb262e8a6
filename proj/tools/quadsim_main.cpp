#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadsim/csv_io.hpp"
#include "quadsim/metrics.hpp"
#include "quadsim/plots.hpp"
#include "quadsim/scenario.hpp"
#include "quadsim/sim.hpp"

namespace fs = std::filesystem;
using namespace quadsim;

namespace {

fs::path default_out_dir() {
    const char* env = std::getenv("QUADSIM_OUT_DIR");
    return env && *env ? fs::path(env) : fs::path("out");
}

std::string hash_hex(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const fs::path& dir, const ScenarioSpec& spec,
                    const std::string& controllers, const RunLog* log,
                    const std::vector<std::string>& files) {
    std::ostringstream out;
    out << "scenario = " << spec.name << '\n';
    out << "controllers = " << controllers << '\n';
    out << "seed = " << spec.sim.seed << '\n';
    out << "config_hash = " << hash_hex(scenario_hash(spec)) << '\n';
    out << "config_file = config.cfg\n";
    out << "status = " << (log && log->failed ? "failed" : "ok") << '\n';
    if (log && log->failed) out << "failure = " << log->failure << '\n';
    out << "files =";
    for (const std::string& f : files) out << ' ' << f;
    out << '\n';
    write_text_atomic(out.str(), dir / "manifest.txt");
}

ScenarioSpec load_with_seed(const std::string& scenario, const CLI::Option* seed_opt,
                            std::uint64_t seed) {
    ScenarioSpec spec = load_scenario(scenario);
    if (seed_opt->count() > 0) spec.sim.seed = seed;
    return spec;
}

int cmd_run(const std::string& scenario_arg, const std::string& controller,
            const CLI::Option* seed_opt, std::uint64_t seed, const fs::path& out_dir,
            bool plots) {
    const ScenarioSpec spec = load_with_seed(scenario_arg, seed_opt, seed);
    const ControllerKind kind = controller_kind_from_name(controller);
    const RunLog log = run_closed_loop(spec, kind);

    fs::create_directories(out_dir);
    std::vector<std::string> files = {"run.csv", "config.cfg"};
    write_run_csv(log, out_dir / "run.csv");
    write_text_atomic(serialize_scenario(spec), out_dir / "config.cfg");
    if (!log.failed) {
        write_text_atomic(step_metrics_csv(analyze_steps(log)), out_dir / "metrics.csv");
        files.push_back("metrics.csv");
    }
    if (plots) {
        for (const fs::path& p : emit_plots(log, spec.sliding, out_dir / "plots")) {
            files.push_back("plots/" + p.filename().string());
        }
    }
    write_manifest(out_dir, spec, controller, &log, files);

    if (log.failed) {
        std::cerr << "run aborted: " << log.failure << '\n';
        return 2;
    }
    for (const StepMetrics& m : analyze_steps(log)) {
        std::printf("%-5s step %4.2fs: settling %.3fs (2%%) %.3fs (5%%), overshoot %.2f%%\n",
                    m.axis == 0 ? "roll" : m.axis == 1 ? "pitch" : "yaw", m.step_time,
                    m.settling_time_2pct, m.settling_time_5pct, m.overshoot_pct);
    }
    std::printf("wrote %s\n", (out_dir / "run.csv").string().c_str());
    return 0;
}

int cmd_compare(const std::string& scenario_arg, const std::string& controllers_arg,
                const CLI::Option* seed_opt, std::uint64_t seed, const fs::path& out_dir) {
    const ScenarioSpec spec = load_with_seed(scenario_arg, seed_opt, seed);

    std::vector<ControllerKind> kinds;
    std::stringstream list(controllers_arg);
    std::string token;
    while (std::getline(list, token, ',')) {
        if (!token.empty()) kinds.push_back(controller_kind_from_name(token));
    }
    if (kinds.empty()) throw ValidationError("compare: no controllers given");

    fs::create_directories(out_dir);
    std::vector<RunLog> logs;
    std::vector<std::string> files = {"config.cfg"};
    for (const ControllerKind kind : kinds) {
        RunLog log = run_closed_loop(spec, kind);
        const std::string name = std::string(controller_kind_name(kind)) + "_run.csv";
        write_run_csv(log, out_dir / name);
        files.push_back(name);
        if (log.failed) {
            std::cerr << "run aborted (" << controller_kind_name(kind)
                      << "): " << log.failure << '\n';
            write_text_atomic(serialize_scenario(spec), out_dir / "config.cfg");
            write_manifest(out_dir, spec, controllers_arg, &log, files);
            return 2;
        }
        logs.push_back(std::move(log));
    }

    const ComparisonTable table = compare_controllers(logs);
    write_text_atomic(comparison_csv(table), out_dir / "metrics.csv");
    write_text_atomic(comparison_text(table), out_dir / "comparison.txt");
    write_text_atomic(serialize_scenario(spec), out_dir / "config.cfg");
    files.push_back("metrics.csv");
    files.push_back("comparison.txt");
    write_manifest(out_dir, spec, controllers_arg, nullptr, files);

    std::cout << comparison_text(table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadsim: quadcopter attitude dynamics and sliding-mode control bench"};
    app.require_subcommand(1);

    std::string scenario = "nominal";
    std::string controller = "adaptive-twisting";
    std::string controllers = "smc,twisting,atsm,adaptive-twisting";
    std::uint64_t seed = 0;
    fs::path out_dir = default_out_dir();
    bool plots = false;

    CLI::App* run = app.add_subcommand("run", "simulate one scenario/controller pair");
    run->add_option("--scenario", scenario, "preset name or config file path");
    run->add_option("--controller", controller, "smc|twisting|atsm|adaptive-twisting|pid");
    CLI::Option* run_seed = run->add_option("--seed", seed, "override the scenario RNG seed");
    run->add_option("--out", out_dir, "output directory (default $QUADSIM_OUT_DIR or ./out)");
    run->add_flag("--plots", plots, "emit SVG diagnostic plots");

    CLI::App* compare = app.add_subcommand("compare", "run several controllers side by side");
    compare->add_option("--scenario", scenario, "preset name or config file path");
    compare->add_option("--controllers", controllers, "comma-separated controller list");
    CLI::Option* cmp_seed = compare->add_option("--seed", seed, "override the scenario RNG seed");
    compare->add_option("--out", out_dir, "output directory");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario without running it");
    validate->add_option("--scenario", scenario, "preset name or config file path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(scenario, controller, run_seed, seed, out_dir, plots);
        }
        if (compare->parsed()) {
            return cmd_compare(scenario, controllers, cmp_seed, seed, out_dir);
        }
        if (validate->parsed()) {
            load_scenario(scenario);
            std::cout << "ok\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
