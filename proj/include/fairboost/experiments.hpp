#pragma once

// Command layer behind the CLI and the C API: audit, learn, hardcore, verify,
// gen and gl. Every command takes an input document plus an options object
// and returns a JSON report, an exit code and named text artifacts.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fairboost/io.hpp"

namespace fairboost {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitNonConvergence = 2,
    kExitBoundViolation = 3,
};

struct CommandResult {
    Json report;
    int exit_code = kExitOk;
    /// "predictor", "trace_csv", "measure", "instance", "table_csv".
    std::map<std::string, std::string> artifacts;
};

/// Per-trial rows, min/median/max aggregates and named pass/fail checks.
class RunReport {
public:
    RunReport(std::string command, std::uint64_t seed) : command_(std::move(command)), seed_(seed) {}

    void add_row(Json row) { rows_.push_back(std::move(row)); }
    void add_check(const std::string& name, bool passed, Json detail = Json::object());
    void set(const std::string& key, Json value) { extra_[key] = std::move(value); }

    bool passed() const;
    Json to_json() const;
    /// Header from the union of row keys in first-seen order.
    std::string rows_csv() const;

private:
    std::string command_;
    std::uint64_t seed_;
    std::vector<Json> rows_;
    Json checks_ = Json::array();
    Json extra_ = Json::object();
};

/// Runs fn(0..count-1) on up to `jobs` threads; results are merged by index
/// and the first exception (by index) is rethrown.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

CommandResult cmd_audit(const Json& input, const Json& options);
CommandResult cmd_learn(const Json& input, const Json& options);
CommandResult cmd_hardcore(const Json& input, const Json& options);
CommandResult cmd_verify(const Json& input, const Json& options);
CommandResult cmd_gen(const Json& input, const Json& options);
CommandResult cmd_gl(const Json& input, const Json& options);

/// Dispatches by name and stamps the wall-clock time under "timing".
CommandResult run_command(const std::string& command, const Json& input, const Json& options);

std::vector<std::string> verify_suite_names();

/// Builds the instance document described by a generator spec:
/// {"generator": "maj" | "showcase" | "random", ...}.
Json generate_instance(const Json& spec, std::uint64_t seed);

}  // namespace fairboost
