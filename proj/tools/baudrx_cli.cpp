// Command-line front end: scenario runs, sweeps, and the measurement
// experiments (eye, bathtub, jtol, spectrum), emitting CSV files plus a
// key=value summary on stdout.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "baudrx/baudrx.hpp"

namespace fs = std::filesystem;
using namespace baudrx;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "scenario config file")->required();
    cmd->add_option("-o,--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override run.seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--set", args.overrides, "override a config field, section.key=value");
}

ScenarioConfig load(const CommonArgs& args) {
    ScenarioConfig cfg = load_config(args.config_path);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects section.key=value, got: " + kv);
        config_set(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.seed_set)
        cfg.run_seed = args.seed;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    const fs::path p = fs::path(args.out_dir) / name;
    std::ofstream f(p);
    if (!f)
        throw std::runtime_error("cannot open output file: " + p.string());
    return f;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"behavioral multi-lane baud-rate CDR simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, eye_args, tub_args, jtol_args, spec_args;

    auto* cmd_run = app.add_subcommand("run", "run a scenario and emit the report");
    add_common(cmd_run, run_args);
    bool telemetry = false;
    cmd_run->add_flag("--telemetry", telemetry, "write lane/fdiv telemetry CSVs");

    auto* cmd_sweep = app.add_subcommand("sweep", "independent runs over a config field");
    add_common(cmd_sweep, sweep_args);
    std::string sweep_param;
    std::vector<std::string> sweep_values;
    cmd_sweep->add_option("--param", sweep_param, "config field path, e.g. clock.ppm_offset")
        ->required();
    cmd_sweep->add_option("--values", sweep_values, "values to sweep")->required();

    auto* cmd_eye = app.add_subcommand("eye", "accumulate an eye diagram while locked");
    add_common(cmd_eye, eye_args);
    int eye_decimate = 8;
    cmd_eye->add_option("--decimate", eye_decimate, "probe every Nth UI");

    auto* cmd_tub = app.add_subcommand("bathtub", "BER vs sampling offset, lock frozen");
    add_common(cmd_tub, tub_args);
    double tub_span = 0.45;
    int tub_points = 31;
    long tub_ui = 0;
    cmd_tub->add_option("--span", tub_span, "offset span around lock, UI");
    cmd_tub->add_option("--points", tub_points, "number of offsets");
    cmd_tub->add_option("--ui-per-point", tub_ui, "UIs per offset");

    auto* cmd_jtol = app.add_subcommand("jtol", "jitter tolerance sweep");
    add_common(cmd_jtol, jtol_args);
    std::vector<double> jtol_freqs{0.125e6, 0.25e6, 0.5e6, 1e6, 2e6, 4e6, 8e6, 16e6, 32e6};
    double jtol_ber = 1e-4;
    long jtol_budget = 700000;
    cmd_jtol->add_option("--freqs", jtol_freqs, "SJ frequencies, Hz");
    cmd_jtol->add_option("--target-ber", jtol_ber, "target BER");
    cmd_jtol->add_option("--ui-budget", jtol_budget, "UIs per probe");

    auto* cmd_spec = app.add_subcommand("spectrum", "recovered-clock spur spectrum");
    add_common(cmd_spec, spec_args);
    std::string spec_stream = "clock";
    cmd_spec->add_option("--stream", spec_stream, "clock | fdiv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            ScenarioConfig cfg = load(run_args);
            if (telemetry && cfg.run_telemetry_every <= 0)
                cfg.run_telemetry_every = 1024;
            SimEngine eng(cfg);
            std::ofstream lane_csv, fdiv_csv;
            if (telemetry) {
                lane_csv = open_out(run_args, "lane_telemetry.csv");
                fdiv_csv = open_out(run_args, "fdiv_telemetry.csv");
                eng.set_lane_telemetry(&lane_csv);
                eng.set_fdiv_telemetry(&fdiv_csv);
            }
            const RunReport r = eng.run();
            auto f = open_out(run_args, "report.json");
            f << r.to_json_text();
            std::cout << r.to_kv_text();
            return r.loss_of_lock ? 2 : 0;
        }
        if (cmd_sweep->parsed()) {
            ScenarioConfig cfg = load(sweep_args);
            const auto reports = sweep(cfg, sweep_param, sweep_values);
            auto f = open_out(sweep_args, "sweep.csv");
            write_sweep_csv(sweep_param, sweep_values, reports, f);
            for (std::size_t i = 0; i < reports.size(); ++i) {
                auto rf = open_out(sweep_args, "report_" + std::to_string(i) + ".json");
                rf << reports[i].to_json_text();
            }
            std::cout << "points=" << reports.size() << "\n";
            return 0;
        }
        if (cmd_eye->parsed()) {
            ScenarioConfig cfg = load(eye_args);
            if (cfg.run_eye_decimate <= 0)
                cfg.run_eye_decimate = eye_decimate;
            SimEngine eng(cfg);
            const RunReport r = eng.run();
            const EyeDiagram* eye = eng.eye();
            if (!eye)
                throw std::runtime_error("eye accumulation disabled");
            auto f = open_out(eye_args, "eye.csv");
            eye->write_csv(f);
            std::cout << "vem_volts=" << measure_vem(*eye) << "\n";
            std::cout << "lock_phase_ui=" << r.lane.at(0).lock_phase_ui << "\n";
            return r.loss_of_lock ? 2 : 0;
        }
        if (cmd_tub->parsed()) {
            ScenarioConfig cfg = load(tub_args);
            const auto curve = bathtub_scan(cfg, tub_span, tub_points, tub_ui);
            auto f = open_out(tub_args, "bathtub.csv");
            curve.write_csv(f);
            std::uint64_t errors = 0;
            for (const auto& p : curve.points)
                errors += p.errors;
            std::cout << "points=" << curve.points.size() << "\n";
            std::cout << "total_errors=" << errors << "\n";
            return 0;
        }
        if (cmd_jtol->parsed()) {
            ScenarioConfig cfg = load(jtol_args);
            const auto curve = jtol_sweep(cfg, jtol_freqs, jtol_ber, jtol_budget);
            auto f = open_out(jtol_args, "jtol.csv");
            curve.write_csv(f);
            std::cout << "points=" << curve.points.size() << "\n";
            if (curve.points.size() >= 3) {
                std::cout << "slope_db_per_decade="
                          << jtol_slope_db_per_decade(curve, 0, 2) << "\n";
                std::cout << "corner_hz=" << jtol_corner_hz(curve) << "\n";
            }
            return 0;
        }
        if (cmd_spec->parsed()) {
            ScenarioConfig cfg = load(spec_args);
            cfg.run_spectrum = spec_stream;
            cfg.validate();
            SimEngine eng(cfg);
            const RunReport r = eng.run();
            const auto spec =
                spectrum(eng.spectrum_capture(), eng.spectrum_sample_rate());
            auto f = open_out(spec_args, "spectrum.csv");
            f << "freq_hz,power_dbc\n";
            for (std::size_t i = 0; i < spec.freqs.size(); ++i)
                f << spec.freqs[i] << ',' << spec.power_dbc[i] << '\n';
            std::cout << "spur_peak_dbc=" << spec.spur_peak_dbc << "\n";
            std::cout << "spur_peak_hz=" << spec.spur_peak_hz << "\n";
            std::cout << "integrated_spur_dbc=" << spec.integrated_spur_dbc << "\n";
            std::cout << "integration_bw_hz=" << spec.integration_bw_hz << "\n";
            return r.loss_of_lock ? 2 : 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
