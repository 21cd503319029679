#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acap_gemm/config.hpp"

namespace acap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitConfig = 4;

/// Rendered report plus diagnostics for stderr.
struct CommandOutput {
    int exit_code = kExitOk;
    std::string body;
    std::vector<std::string> messages;
};

/// One cell rendered both ways, so CSV and JSON always agree.
struct Cell {
    std::string csv;
    std::string json;  // serialized JSON value
};

Cell cell(long long v);
Cell cell(std::string_view s);
Cell cell_fixed(double v, int decimals);
Cell cell_bool(bool b);
Cell cell_empty();

/// Column-ordered table with provenance metadata. CSV: `# key: value` lines, then the
/// header, then rows; LF line endings. JSON: an object with the same data.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::string cost_model_json;
    std::string memory_json;

    std::string render(OutputFormat format) const;
};

/// gemm_blocked vs reference_gemm for every tile count. Exit 2 on the first mismatch.
CommandOutput cmd_verify(const RunConfig& cfg);
/// Strong-scaling table, one row per tile count.
CommandOutput cmd_simulate(const RunConfig& cfg);
/// Ablation table for one micro-kernel call.
CommandOutput cmd_ablate(const RunConfig& cfg);
/// Derived CCPs and the footprint of the selected profile. Exit 3 if a level overflows.
CommandOutput cmd_ccp(const RunConfig& cfg);

/// Dispatches by subcommand name and maps errors to exit codes:
/// ConfigError / std::invalid_argument -> 4, CapacityError -> 3.
CommandOutput run_command(std::string_view name, const RunConfig& cfg);

}  // namespace acap
