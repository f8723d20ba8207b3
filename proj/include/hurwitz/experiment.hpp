#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hq {

inline constexpr const char* kVersion = "1.0.0";

enum class ParamType { integer, real, text, integer_list, real_list, boolean };

struct ParamSpec {
    std::string name;
    ParamType type;
    std::string default_value;  // empty: derived at run time
    std::string help;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
};

const std::vector<CommandSpec>& experiment_commands();
const CommandSpec& command_spec(const std::string& name);

struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> params;
    uint64_t seed = 1;
    std::string out_dir = "out";
    std::string format = "csv";
    int workers = 1;

    /// Reserved keys (command, seed, out, format, workers) go to the fields, the rest to params.
    void set(const std::string& key, const std::string& value);
    /// Flat `key = value` lines; `#` starts a comment.
    void load_file(const std::string& path);
};

struct ExperimentResult {
    int exit_code = 0;  // 0 ok, 1 validation, 2 property failure, 3 internal
    std::vector<std::string> files;
    std::string summary;
    std::vector<std::string> failures;
};

/// Validates against the command schema, runs, writes tables and manifest.json into out_dir.
/// Throws hq::Error on validation or internal errors.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace hq
