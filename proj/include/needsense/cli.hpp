#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace needsense::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 2;      // unreadable files, parse errors, usage
inline constexpr int exit_empty_calibration = 3;
inline constexpr int exit_rule_semantics = 4;   // rules reference unknown/unusable targets

// Env var consulted when --rules is not given.
inline constexpr const char* rules_env_var = "NEEDSENSE_RULES";

struct InputPaths {
    std::optional<std::string> rules;
    std::optional<std::string> baselines;
    std::optional<std::string> catalog;
    std::optional<std::string> templates;
};

struct DetectOptions {
    std::string trace_file;
    InputPaths inputs;
    bool lenient = false;
    bool json = false;
};

struct SimulateOptions {
    std::string profile_file;
    std::uint64_t seed = 0;
    double duration = 0.0;
    double sample_interval = 1.0;
    std::string out_file;
};

struct ReportOptions {
    std::vector<std::string> trace_files;
    InputPaths inputs;
    bool lenient = false;
    bool json = false;
};

int cmd_calibrate(const std::vector<std::string>& trace_files, const std::string& out_file,
                  bool lenient, std::ostream& out, std::ostream& err);
int cmd_detect(const DetectOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);

} // namespace needsense::cli
