#include "mrsim/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mrsim/error.hpp"
#include "mrsim/svg_plot.hpp"
#include "mrsim/telemetry_io.hpp"

namespace mrsim {

namespace {

namespace fs = std::filesystem;

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::string join_out(const std::string& out_dir, const std::string& name) {
    return (fs::path(out_dir) / name).string();
}

std::string format_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", ms);
    return buf;
}

int run_command(const std::string& config_path, const std::string& out_dir, bool strict) {
    const ScenarioConfig config = parse_config(config_path);
    std::cout << "# effective configuration\n";
    echo_config(config, std::cout);

    fs::create_directories(out_dir);
    const std::string stem = stem_of(config_path);
    const std::string telemetry_path = join_out(out_dir, stem + "_telemetry.csv");
    const std::string report_path = join_out(out_dir, stem + "_safety.txt");
    const std::string plot_path = join_out(out_dir, stem + "_plots.svg");

    RunResult result;
    try {
        result = run_scenario(config);
    } catch (const DivergenceError& e) {
        write_telemetry(e.partial().records, telemetry_path);
        std::cerr << "error: " << e.what() << " (partial telemetry flushed to " << telemetry_path << ")\n";
        return kExitDivergence;
    }

    write_telemetry(result.records, telemetry_path);
    write_safety_report(result, config.slew, report_path);
    if (!result.records.empty()) {
        char label[32];
        std::snprintf(label, sizeof(label), "Tp=%gms", config.tp * 1e3);
        render_plots({result.records}, default_plot_spec({label}), plot_path);
    }

    const bool slew_pass = !result.slew || result.slew->pass;
    const bool fixture_pass = result.fixture_violations.empty();
    std::cout << "completed: " << (result.completed ? "yes" : "no") << "  end_time_s: " << result.end_time
              << "  records: " << result.records.size() << "  commands: " << result.commands.size() << '\n';
    std::cout << "slew_pass: " << (slew_pass ? "yes" : "no") << "  fixture_pass: " << (fixture_pass ? "yes" : "no")
              << '\n';
    std::cout << "wrote " << telemetry_path << ", " << report_path << ", " << plot_path << '\n';
    if (strict && (!slew_pass || !fixture_pass)) {
        std::cerr << "error: safety violation under --strict\n";
        return kExitSafety;
    }
    return kExitOk;
}

int safety_command(const std::string& telemetry_path, bool strict, double rise_time_ms, double limit,
                   double isocenter_distance) {
    const auto records = read_telemetry(telemetry_path);
    const auto commands = commands_from_telemetry(records);
    SlewParams params;
    params.rise_time = rise_time_ms * 1e-3;
    params.limit = limit;
    params.isocenter_distance = isocenter_distance;

    bool pass = true;
    if (commands.size() >= 2) {
        const SlewReport report = check_slew_series(commands, params);
        pass = report.pass;
        std::cout << "commands: " << commands.size() << '\n'
                  << "max_dbdt_x_t_per_s: " << report.max_abs[0] << '\n'
                  << "max_dbdt_y_t_per_s: " << report.max_abs[1] << '\n'
                  << "max_dbdt_z_t_per_s: " << report.max_abs[2] << '\n'
                  << "limit_t_per_s: " << report.limit << '\n'
                  << "violations: " << report.violations.size() << '\n'
                  << "pass: " << (report.pass ? "yes" : "no") << '\n';
    } else {
        std::cout << "commands: " << commands.size() << "\npass: yes (fewer than 2 commands)\n";
    }
    // Fixture status is already recorded per row.
    std::size_t fixture_violations = 0;
    for (const auto& r : records) {
        if (!r.fixture_ok) ++fixture_violations;
    }
    std::cout << "fixture_violations: " << fixture_violations << '\n';
    if (fixture_violations > 0) pass = false;
    if (strict && !pass) {
        std::cerr << "error: safety violation under --strict\n";
        return kExitSafety;
    }
    return kExitOk;
}

int bench_command(const std::string& config_path, int n) {
    const ScenarioConfig config = parse_config(config_path);
    const BatchStats stats = batch_run(config, n);
    std::cout << "bench: n=" << stats.runs << "  min/mean/max ms: " << format_ms(stats.min_ms) << '/'
              << format_ms(stats.mean_ms) << '/' << format_ms(stats.max_ms) << '\n';
    return kExitOk;
}

int plot_command(const std::vector<std::string>& telemetry_paths, const std::string& out_file) {
    std::vector<std::vector<TelemetryRecord>> variants;
    std::vector<std::string> labels;
    for (const auto& p : telemetry_paths) {
        variants.push_back(read_telemetry(p));
        labels.push_back(stem_of(p));
    }
    render_plots(variants, default_plot_spec(labels), out_file);
    std::cout << "wrote " << out_file << '\n';
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    for (const auto& a : args) {
        if (a.rfind("--seedless=", 0) == 0) {
            std::cerr << "error: --seedless takes no value (the simulator uses no RNG)\n";
            return kExitUsage;
        }
    }

    CLI::App app{"Deterministic closed-loop simulator of an MRI-gradient-propelled sphere in vessel channels"};
    app.require_subcommand(1);
    bool seedless = false;
    app.add_flag("--seedless", seedless, "reserved: the simulator is seedless by construction");

    auto* run = app.add_subcommand("run", "run a scenario; write telemetry, safety report and plots");
    std::string run_config, run_out = ".";
    bool run_strict = false;
    run->add_option("config", run_config, "scenario config file")->required();
    run->add_option("--out", run_out, "output directory");
    run->add_flag("--strict", run_strict, "exit 2 on any safety violation");

    auto* safety = app.add_subcommand("safety", "re-check an existing telemetry trace");
    std::string safety_file;
    bool safety_strict = false;
    double rise_time_ms = 100.0, limit = 20.0, isocenter = 0.5;
    safety->add_option("telemetry", safety_file, "telemetry CSV")->required();
    safety->add_flag("--strict", safety_strict, "exit 2 on any safety violation");
    safety->add_option("--rise-time-ms", rise_time_ms, "gradient rise time (ms)");
    safety->add_option("--limit", limit, "dB/dt limit (T/s)");
    safety->add_option("--isocenter-distance-m", isocenter, "evaluation distance from isocenter (m)");

    auto* bench = app.add_subcommand("bench", "time repeated scenario runs");
    std::string bench_config;
    int bench_n = 100;
    bench->add_option("config", bench_config, "scenario config file")->required();
    bench->add_option("--n", bench_n, "number of runs")->check(CLI::PositiveNumber);

    auto* plot = app.add_subcommand("plot", "re-render plots from telemetry CSVs");
    std::vector<std::string> plot_files;
    std::string plot_out = "plots.svg";
    plot->add_option("telemetry", plot_files, "telemetry CSV files (one series per file)")->required();
    plot->add_option("--out", plot_out, "output SVG file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (run->parsed()) return run_command(run_config, run_out, run_strict);
        if (safety->parsed()) return safety_command(safety_file, safety_strict, rise_time_ms, limit, isocenter);
        if (bench->parsed()) return bench_command(bench_config, bench_n);
        if (plot->parsed()) return plot_command(plot_files, plot_out);
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::NumericalDivergence ? kExitDivergence : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace mrsim
