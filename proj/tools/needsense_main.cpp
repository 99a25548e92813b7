#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "needsense/cli.hpp"

int main(int argc, char** argv) {
    using namespace needsense::cli;

    CLI::App app{"needsense - detects latent accessibility needs from device-usage traces "
                 "and recommends accessibility features"};
    app.require_subcommand(1);

    // calibrate
    std::vector<std::string> calibrate_traces;
    std::string calibrate_out = "baselines.json";
    bool calibrate_lenient = false;
    auto* calibrate = app.add_subcommand("calibrate", "Compute baseline statistics from traces");
    calibrate->add_option("traces", calibrate_traces, "trace files");
    calibrate->add_option("--out", calibrate_out, "output baseline file");
    calibrate->add_flag("--lenient", calibrate_lenient, "tolerate unknown trace fields");

    // detect
    DetectOptions detect_opts;
    auto* detect = app.add_subcommand("detect", "Replay one trace against the rules");
    detect->add_option("--trace", detect_opts.trace_file, "trace file")->required();
    detect->add_option("--rules", detect_opts.inputs.rules, "rules file (.a11yrules)");
    detect->add_option("--baseline", detect_opts.inputs.baselines, "baseline file");
    detect->add_option("--catalog", detect_opts.inputs.catalog, "catalog file");
    detect->add_option("--templates", detect_opts.inputs.templates, "message template file");
    detect->add_flag("--lenient", detect_opts.lenient, "tolerate unknown trace fields");
    detect->add_flag("--json", detect_opts.json, "emit the report as a single JSON object");

    // simulate
    SimulateOptions sim_opts;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic trace from a profile");
    simulate->add_option("--profile", sim_opts.profile_file, "profile file")->required();
    simulate->add_option("--seed", sim_opts.seed, "random seed");
    simulate->add_option("--duration", sim_opts.duration, "session length in seconds");
    simulate->add_option("--interval", sim_opts.sample_interval, "sample interval in seconds");
    simulate->add_option("--out", sim_opts.out_file, "output trace file")->required();

    // report
    ReportOptions report_opts;
    auto* report = app.add_subcommand("report", "Replay many traces and aggregate firing counts");
    report->add_option("traces", report_opts.trace_files, "trace files");
    report->add_option("--rules", report_opts.inputs.rules, "rules file (.a11yrules)");
    report->add_option("--baseline", report_opts.inputs.baselines, "baseline file");
    report->add_option("--catalog", report_opts.inputs.catalog, "catalog file");
    report->add_option("--templates", report_opts.inputs.templates, "message template file");
    report->add_flag("--lenient", report_opts.lenient, "tolerate unknown trace fields");
    report->add_flag("--json", report_opts.json, "emit all reports as a single JSON object");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    if (calibrate->parsed())
        return cmd_calibrate(calibrate_traces, calibrate_out, calibrate_lenient, std::cout,
                             std::cerr);
    if (detect->parsed()) return cmd_detect(detect_opts, std::cout, std::cerr);
    if (simulate->parsed()) return cmd_simulate(sim_opts, std::cout, std::cerr);
    if (report->parsed()) return cmd_report(report_opts, std::cout, std::cerr);
    return exit_input_error;
}
