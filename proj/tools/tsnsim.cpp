// tsnsim: command-line front end for the TSN simulator.
//
// Exit codes: 0 success, 2 invalid input or config, 1 runtime failure.

#include "tsnsim/tsnsim.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
    std::optional<std::string> out;
};

void add_overrides(CLI::App* cmd, RunOverrides& o) {
    cmd->add_option("--seed", o.seed, "Override the scenario seed");
    cmd->add_option("--duration", o.duration_s, "Override the run length in seconds")->check(CLI::PositiveNumber);
}

tsn::ScenarioConfig load_with(const std::string& path, const RunOverrides& o) {
    tsn::ScenarioConfig c = tsn::load_config(path);
    if (o.seed) c.seed = *o.seed;
    if (o.duration_s) c.duration_ns = std::llround(*o.duration_s * 1e9);
    if (o.out) c.output.dir = *o.out;
    tsn::validate(c);
    return c;
}

int cmd_validate(const std::vector<std::string>& paths) {
    int rc = kExitOk;
    for (const auto& p : paths) {
        try {
            const auto c = tsn::load_config(p);
            std::cout << p << ": ok (" << c.nodes.size() << " nodes, " << c.flows.size() << " flows)\n";
        } catch (const tsn::ConfigValidationError& e) {
            std::cout << p << ": invalid\n";
            for (const auto& problem : e.problems()) std::cout << "  - " << problem << '\n';
            rc = kExitInvalid;
        }
    }
    return rc;
}

int cmd_run(const std::string& path, const RunOverrides& o) {
    const auto c = load_with(path, o);
    const auto r = tsn::run_scenario(c);
    tsn::write_outputs(c.output.dir, r, c.output);
    std::cout << "## " << r.name << '\n';
    tsn::write_summary_markdown(std::cout, r.summary);
    std::uint64_t drops = 0;
    for (const auto& d : r.drops) drops += d.drops;
    std::cout << "\nevents " << r.events << ", drops " << drops << ", trace digest " << std::hex << r.trace_digest
              << std::dec << "\noutputs in " << c.output.dir << '\n';
    return kExitOk;
}

struct SweepArgs {
    std::string param;
    std::int64_t from = 0;
    std::int64_t to = 0;
    std::int64_t step = 1;
    unsigned parallel = 1;
};

int cmd_sweep(const std::string& path, const RunOverrides& o, const SweepArgs& a) {
    const auto c = load_with(path, o);
    tsn::SweepTarget target;
    std::vector<std::int64_t> values;
    try {
        target = tsn::parse_sweep_target(a.param, c);
        values = tsn::sweep_range(a.from, a.to, a.step);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    const auto points = tsn::sweep(c, target, values, a.parallel);
    if (o.out) {
        std::filesystem::create_directories(*o.out);
        std::ofstream os(std::filesystem::path(*o.out) / "sweep.csv");
        tsn::write_sweep_csv(os, points);
    } else {
        tsn::write_sweep_csv(std::cout, points);
    }
    for (const auto& e : tsn::sweep_extrema(points)) {
        std::cerr << e.flow << ": max " << tsn::format_us(e.max_delay) << " us at " << a.param << " = " << e.at_value
                  << '\n';
    }
    return kExitOk;
}

struct CalibrateArgs {
    double k1_us = 3.83;
    double k2_us = 9.35;
    std::int64_t link_near_ns = 10;
    std::int64_t link_far_ns = 10;
    double share = 0.4;
};

int cmd_calibrate(const CalibrateArgs& a) {
    tsn::CalibrationTarget t;
    t.k1 = tsn::Duration{std::llround(a.k1_us * 1000.0)};
    t.k2 = tsn::Duration{std::llround(a.k2_us * 1000.0)};
    t.link_near = tsn::Duration{a.link_near_ns};
    t.link_far = tsn::Duration{a.link_far_ns};
    t.processing_share = a.share;
    tsn::SwitchTiming s;
    try {
        s = tsn::calibrate(t);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    nlohmann::ordered_json j;
    j["ingress_ns"] = s.ingress.ns;
    j["processing_ns"] = s.processing.ns;
    j["egress_ns"] = s.egress.ns;
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_report(const std::vector<std::string>& paths, const RunOverrides& o, bool with_no_load, unsigned parallel,
               const std::string& format) {
    std::vector<tsn::ScenarioConfig> configs;
    for (const auto& p : paths) configs.push_back(load_with(p, o));
    const auto rows = tsn::report_rows(configs, with_no_load, parallel);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (o.out) {
        std::filesystem::create_directories(*o.out);
        file.open(std::filesystem::path(*o.out) / (format == "csv" ? "report.csv" : "report.md"));
        os = &file;
    }
    if (format == "csv") tsn::write_summary_csv(*os, rows);
    else tsn::write_summary_markdown(*os, rows);
    return kExitOk;
}

int cmd_presets(const std::string& dir) {
    std::filesystem::create_directories(dir);
    using tsn::Experiment;
    using tsn::LinkSpeed;
    for (auto e : {Experiment::SamePriorityBlocking, Experiment::LowerPriorityBlocking, Experiment::TimeAwareShaper}) {
        for (auto s : {LinkSpeed::Fast100M, LinkSpeed::Gigabit}) {
            const auto path = std::filesystem::path(dir) / (tsn::preset_name(e, s) + ".json");
            tsn::save_config(tsn::make_preset(e, s), path.string());
            std::cout << path.string() << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator for time-sensitive switched Ethernet"};
    app.require_subcommand(1);

    RunOverrides ov;
    std::string config;
    std::vector<std::string> configs;

    auto* validate = app.add_subcommand("validate", "Check one or more scenario configs");
    validate->add_option("--config", configs, "Scenario JSON (repeatable)")->required()->take_all();

    auto* run = app.add_subcommand("run", "Run a scenario and write records, summary and plot data");
    run->add_option("--config", config, "Scenario JSON")->required();
    add_overrides(run, ov);
    run->add_option("--out", ov.out, "Output directory (overrides the config)");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Run one scenario per parameter value");
    sweep->add_option("--config", config, "Scenario JSON")->required();
    add_overrides(sweep, ov);
    sweep->add_option("--out", ov.out, "Directory for sweep.csv (stdout if absent)");
    sweep->add_option("--param", sw.param, "phase:<flow> | load:<flow> | payload:<flow> | jitter")->required();
    sweep->add_option("--from", sw.from, "First value (ns, bit/s or bytes)")->required();
    sweep->add_option("--to", sw.to, "Last value, inclusive")->required();
    sweep->add_option("--step", sw.step, "Increment")->required();
    sweep->add_option("--parallel", sw.parallel, "Worker threads")->check(CLI::PositiveNumber);

    CalibrateArgs cal;
    auto* calibrate = app.add_subcommand("calibrate", "Solve switch constants from measured no-load delays");
    calibrate->add_option("--k1-us", cal.k1_us, "No-load delay A1 -> RC in microseconds")->capture_default_str();
    calibrate->add_option("--k2-us", cal.k2_us, "No-load delay A2 -> RC in microseconds")->capture_default_str();
    calibrate->add_option("--link-near-ns", cal.link_near_ns, "Propagation A1 -> RC")->capture_default_str();
    calibrate->add_option("--link-far-ns", cal.link_far_ns, "Propagation A2 -> A1")->capture_default_str();
    calibrate->add_option("--processing-share", cal.share, "Share of processing in processing + egress")
        ->capture_default_str();

    bool no_load_rows = true;
    unsigned report_parallel = 1;
    std::string format = "md";
    auto* report = app.add_subcommand("report", "Summary table over several scenarios, with and without load");
    report->add_option("--config", configs, "Scenario JSON (repeatable)")->required()->take_all();
    add_overrides(report, ov);
    report->add_option("--out", ov.out, "Directory for report.md / report.csv (stdout if absent)");
    report->add_flag("!--load-only", no_load_rows, "Skip the no-load rows");
    report->add_option("--parallel", report_parallel, "Worker threads")->check(CLI::PositiveNumber);
    report->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "csv"}));

    std::string preset_dir = "presets";
    auto* presets = app.add_subcommand("presets", "Write the built-in experiment configs as JSON");
    presets->add_option("--out", preset_dir, "Target directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*validate) return cmd_validate(configs);
        if (*run) return cmd_run(config, ov);
        if (*sweep) return cmd_sweep(config, ov, sw);
        if (*calibrate) return cmd_calibrate(cal);
        if (*report) return cmd_report(configs, ov, no_load_rows, report_parallel, format);
        if (*presets) return cmd_presets(preset_dir);
    } catch (const tsn::ConfigValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitInvalid;
    } catch (const tsn::ConfigError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
