#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acap_gemm/blocking.hpp"
#include "acap_gemm/memory_model.hpp"
#include "acap_gemm/parallel_sim.hpp"

namespace acap {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

/// Effective settings of one CLI run. Defaults reproduce the strong-scaling experiment.
struct RunConfig {
    ProblemDims dims{256, 256, 2048};
    std::optional<Profile> profile;                // unset: each command picks its own default
    std::optional<BlockingParams> explicit_params;  // overrides the profile
    std::vector<std::size_t> tiles{1, 2, 4, 8, 16, 32};
    std::uint64_t seed = 1;
    CostModel cost;
    MemorySpec memory;
    BrTransfer br_mode = BrTransfer::stream;
    std::uint64_t local_reserve_bytes = kDefaultLocalReserveBytes;
    std::optional<std::size_t> kc;  // ablate: micro-kernel depth, defaults to the resolved kc
    OutputFormat format = OutputFormat::csv;
    std::string out;  // empty: stdout
    int threads = 0;
    bool inject_fault = false;

    /// Throws ConfigError when dims or tiles are zero or the cost model is invalid.
    void validate() const;

    /// explicit_params, else the profile (or `fallback`) resolved against memory and dims.
    BlockingParams resolve_params(Profile fallback) const;
    Profile effective_profile(Profile fallback) const;
};

/// "MxNxK" -> dims. Throws ConfigError.
ProblemDims parse_dims(std::string_view text);
/// "1,2,4" -> {1, 2, 4}. Throws ConfigError.
std::vector<std::size_t> parse_tiles(std::string_view text);
OutputFormat parse_format(std::string_view text);
BrTransfer parse_br_mode(std::string_view text);
MbConvention parse_units(std::string_view text);

/// Applies the keys present in a JSON config document on top of `cfg`.
/// Unknown keys are rejected. Throws ConfigError.
void apply_config_json(RunConfig& cfg, std::string_view json_text);
void apply_config_file(RunConfig& cfg, const std::string& path);

}  // namespace acap
