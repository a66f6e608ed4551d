#pragma once

// Command-line workflows. A run is resolved from defaults, then a flat
// `key = value` config file, then explicit flags (flags win), validated as a
// whole, executed into in-memory tables and finally written to disk.

#include "cvqpv/attack_analysis.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace cvqpv::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kSchemaVersion = "1";

enum class Command { feasibility, bounds, resources, rounds, simulate, sweep };
enum class OutputFormat { csv, json };

std::string to_string(Command c);
std::string to_string(OutputFormat f);

struct RunConfig {
    Command command = Command::bounds;

    // channel
    double t = 1.0;
    double u = 0.0;

    // bound inputs
    double eps = 0.1;
    double energy = 1e3;
    double eps_tilde = 0.0; // 0: take the optimizer's maximum

    // protocol
    double sigma = 10.0;
    unsigned n = 30;
    unsigned m0 = 5;
    double eps_hon = 0.01;
    std::uint64_t rounds = 0; // 0: plan from the attack analysis
    std::uint64_t sessions = 1000;
    std::string function = "random:0";
    bool trace = false;
    EpsUnit eps_unit = EpsUnit::nats;
    std::uint64_t variance_samples = 100'000;

    // grids
    double u_min = 0.0, u_max = 0.3;
    unsigned u_steps = 61;
    double t_min = 0.5, t_max = 1.0;
    unsigned t_steps = 51;
    double alpha_min = 1e-3, alpha_max = 0.2;
    unsigned alpha_steps = 80;
    double eps_tilde_min = 1e-5, eps_tilde_max = 0.01;
    unsigned eps_tilde_steps = 80;
    std::string sweep = "resources"; // resources | rounds | energy

    // run
    std::uint64_t seed = 20240101;
    std::filesystem::path out = "out";
    OutputFormat format = OutputFormat::csv;
    unsigned threads = 1; // execution only; never echoed
};

using Settings = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment. Throws on malformed lines.
Settings parse_config_text(const std::string& text);

/// Applies settings over defaults. Every problem is collected; a non-empty
/// error list means the config must not be dispatched.
RunConfig resolve_config(const Settings& settings, std::vector<std::string>& errors);

/// Canonical, complete echo of a config. Feeding it back through
/// parse_config_text + resolve_config yields the same RunConfig.
std::string to_config_text(const RunConfig& cfg);

/// Names accepted in config files and (prefixed with --) on the command line.
const std::vector<std::string>& setting_keys();

using Cell = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Data for a figure: named axes and a row-major value matrix.
struct FigureGrid {
    struct Axis {
        std::string name;
        std::vector<double> values;
    };
    std::vector<Axis> axes;
    std::string value_name;
    std::vector<double> values;

    /// Long-format table (one column per axis plus the value); throws if the
    /// value count does not match the axis lengths.
    [[nodiscard]] Table to_table(std::string name) const;
};

std::string format_cell(const Cell& c);

/// RFC 4180: comma separated, CRLF line ends, quoting where needed.
std::string to_csv(const Table& t);

struct CommandOutcome {
    int exit_code = 0; // 0 ok, 2 infeasible-parameter outcome
    std::vector<Table> tables;
    std::vector<std::string> summary;
    std::vector<std::string> warnings;
};

CommandOutcome run_command(const RunConfig& cfg);

/// Writes <out>/<command>.cfg plus either one CSV per table or a single
/// <command>.json. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const RunConfig& cfg, const CommandOutcome& outcome);

std::string render_json(const RunConfig& cfg, const CommandOutcome& outcome);

/// Full CLI entry point; returns the process exit code.
int main_entry(int argc, char** argv);

} // namespace cvqpv::cli
