#include "needsense/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"

#include "needsense/baseline.hpp"
#include "needsense/errors.hpp"
#include "needsense/report.hpp"
#include "needsense/rules_config.hpp"
#include "needsense/tracegen.hpp"

namespace needsense::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

struct Inputs {
    RuleSet rules;
    BaselineSet baselines;
    FeatureCatalog catalog;
    TemplateMap templates;
};

Inputs load_inputs(const InputPaths& paths) {
    Inputs inputs;
    std::optional<std::string> rules_path = paths.rules;
    if (!rules_path) {
        if (const char* env = std::getenv(rules_env_var); env && *env) rules_path = env;
    }
    inputs.rules = rules_path ? parse_rules(read_file(*rules_path)) : default_rules();
    inputs.baselines =
        paths.baselines ? load_baselines(read_file(*paths.baselines)) : default_baselines();
    inputs.catalog = paths.catalog ? load_catalog(read_file(*paths.catalog)) : default_catalog();
    inputs.templates =
        paths.templates ? parse_templates(read_file(*paths.templates)) : default_templates();
    return inputs;
}

std::string trace_id_for(const Trace& trace, const std::string& path) {
    return trace.meta.session_id ? *trace.meta.session_id : path;
}

int classify(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    if (dynamic_cast<const RuleSemanticsError*>(&e)) return exit_rule_semantics;
    if (dynamic_cast<const CalibrationError*>(&e)) return exit_empty_calibration;
    return exit_input_error;
}

Report run_one(const std::string& trace_file, const Inputs& inputs, bool lenient) {
    Trace trace = parse_trace(read_file(trace_file), {.lenient = lenient});
    return build_report(trace_id_for(trace, trace_file), trace, inputs.rules, inputs.baselines,
                        inputs.catalog, PolicyConfig{}, inputs.templates);
}

} // namespace

int cmd_calibrate(const std::vector<std::string>& trace_files, const std::string& out_file,
                  bool lenient, std::ostream& out, std::ostream& err) {
    try {
        if (trace_files.empty()) {
            err << "error: calibrate needs at least one trace file\n";
            return exit_input_error;
        }
        std::vector<Trace> traces;
        traces.reserve(trace_files.size());
        for (const auto& path : trace_files)
            traces.push_back(parse_trace(read_file(path), {.lenient = lenient}));

        BaselineSet set = calibrate(traces);
        write_file(out_file, save_baselines(set));

        out << std::left << std::setw(18) << "signal" << std::setw(12) << "mean" << std::setw(12)
            << "stddev" << "n\n";
        for (const auto& [signal, b] : set.entries) {
            out << std::left << std::setw(18) << to_string(signal) << std::setw(12)
                << std::setprecision(6) << std::fixed << b.mean << std::setw(12) << b.stddev
                << b.n << "\n";
            out.unsetf(std::ios::fixed);
        }
        return exit_ok;
    } catch (const std::exception& e) {
        return classify(e, err);
    }
}

int cmd_detect(const DetectOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        Inputs inputs = load_inputs(opts.inputs);
        Report report = run_one(opts.trace_file, inputs, opts.lenient);
        if (opts.json) {
            out << nlohmann::json(report).dump() << "\n";
        } else {
            out << render_report_text(report);
        }
        return exit_ok;
    } catch (const std::exception& e) {
        return classify(e, err);
    }
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        GenSpec spec;
        spec.profile = parse_profile(read_file(opts.profile_file));
        spec.seed = opts.seed;
        spec.duration = opts.duration;
        spec.sample_interval = opts.sample_interval;

        Trace trace = generate_trace(spec);
        write_file(opts.out_file, serialize_trace(trace));

        out << "events: " << trace.events.size() << "\n";
        std::map<std::string, int> counts;
        for (const auto& event : trace.events) counts[std::string(to_string(event.kind()))]++;
        for (const auto& [kind, count] : counts) out << "  " << kind << ": " << count << "\n";
        return exit_ok;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        return classify(e, err);
    }
}

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (opts.trace_files.empty()) {
            err << "error: report needs at least one trace file\n";
            return exit_input_error;
        }
        Inputs inputs = load_inputs(opts.inputs);

        std::vector<Report> reports;
        reports.reserve(opts.trace_files.size());
        for (const auto& path : opts.trace_files)
            reports.push_back(run_one(path, inputs, opts.lenient));

        std::map<std::string, int> aggregate;
        for (const auto& report : reports)
            for (const auto& [rule, stat] : report.rule_stats) aggregate[rule] += stat.fired;

        if (opts.json) {
            nlohmann::json j;
            j["traces"] = reports;
            j["aggregate_fired"] = aggregate;
            out << j.dump() << "\n";
        } else {
            for (const auto& report : reports) {
                out << render_report_text(report) << "\n";
            }
            out << "aggregate firings by rule:\n";
            for (const auto& [rule, count] : aggregate)
                out << "  " << rule << ": " << count << "\n";
        }
        return exit_ok;
    } catch (const std::exception& e) {
        return classify(e, err);
    }
}

} // namespace needsense::cli
