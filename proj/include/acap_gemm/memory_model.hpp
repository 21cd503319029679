#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acap_gemm/params.hpp"

namespace acap {

/// Memory levels of the VCK190, fastest first.
enum class Level { registers, local, ultra_ram, block_ram, ddr };
inline constexpr std::array kAllLevels = {Level::registers, Level::local, Level::ultra_ram, Level::block_ram,
                                          Level::ddr};

std::string_view to_string(Level level) noexcept;

enum class MbConvention { binary, decimal };

/// Capacities of each level in human units. Byte counts use 1024-based units under
/// MbConvention::binary and 1000-based units under MbConvention::decimal.
struct MemorySpec {
    double registers_kb = 2.0;
    double local_kb = 32.0;
    double ultra_ram_mb = 16.27;
    double block_ram_mb = 4.25;
    double ddr_gb = 2.0;
    MbConvention units = MbConvention::binary;

    std::uint64_t bytes(Level level) const noexcept;

    /// Positive capacities; throws std::invalid_argument otherwise.
    void validate() const;

    /// registers < local < block_ram < ultra_ram < ddr, the ordering of the default profile.
    bool is_ordered() const noexcept;
};

/// GEMM operands placed in the hierarchy.
enum class Operand { A, B, C, Ac, Bc, Ar, Br, Cr };
inline constexpr std::array kAllOperands = {Operand::A,  Operand::B,  Operand::C,  Operand::Ac,
                                            Operand::Bc, Operand::Ar, Operand::Br, Operand::Cr};

std::string_view to_string(Operand op) noexcept;

/// Operand -> level assignment. Indexed by operand, so each operand has exactly one home.
class PlacementMap {
public:
    /// Cr in registers, Br in local memory, Ac/Ar in Ultra RAM, Bc in Block RAM, A/B/C in DDR.
    static PlacementMap versal_default() noexcept;

    Level level_of(Operand op) const noexcept { return levels_[static_cast<std::size_t>(op)]; }
    std::vector<Operand> operands_at(Level level) const;
    void assign(Operand op, Level level) noexcept { levels_[static_cast<std::size_t>(op)] = level; }

private:
    std::array<Level, kAllOperands.size()> levels_{};
};

/// How Br reaches the local memory. GMIO needs a ping and a pong buffer of the same size.
enum class BrTransfer { stream, gmio };

std::string_view to_string(BrTransfer mode) noexcept;

struct LevelUsage {
    Level level;
    std::uint64_t used_bytes = 0;
    std::uint64_t capacity_bytes = 0;
    std::string contents;

    bool fits() const noexcept { return used_bytes <= capacity_bytes; }
};

struct FootprintReport {
    BlockingParams params;
    BrTransfer br_mode = BrTransfer::stream;
    std::uint64_t br_data_bytes = 0;       // kc * nr
    std::uint64_t br_footprint_bytes = 0;  // including ping/pong buffers under GMIO
    std::uint64_t local_reserve_bytes = 0;
    std::vector<LevelUsage> levels;

    bool ok() const noexcept;
    const LevelUsage& at(Level level) const;
    /// First level that does not fit, fastest first.
    std::optional<Level> first_overflow() const noexcept;
};

class CapacityError : public std::runtime_error {
public:
    CapacityError(Level level, const std::string& what, std::optional<FootprintReport> report = std::nullopt)
        : std::runtime_error(what), level_(level), report_(std::move(report)) {}

    Level level() const noexcept { return level_; }
    const std::optional<FootprintReport>& report() const noexcept { return report_; }

private:
    Level level_;
    std::optional<FootprintReport> report_;
};

struct ProblemDims {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;

    friend bool operator==(const ProblemDims&, const ProblemDims&) = default;
};

/// Per-level byte usage for the given blocking (u8 operands, i32 C). The local level holds
/// Br plus `local_reserve_bytes`; DDR is only charged when dims are given.
FootprintReport compute_footprints(const BlockingParams& params, const MemorySpec& mem, BrTransfer br_mode,
                                   std::uint64_t local_reserve_bytes = 0,
                                   std::optional<ProblemDims> dims = std::nullopt);

/// compute_footprints, then throws CapacityError (carrying the report) naming the first
/// level that overflows.
FootprintReport validate_footprints(const BlockingParams& params, const MemorySpec& mem, BrTransfer br_mode,
                                    std::uint64_t local_reserve_bytes = 0,
                                    std::optional<ProblemDims> dims = std::nullopt);

struct CommRatio {
    /// 2*mr*nr*kc / (2*mr*nr + mr*kc + nr*kc): arithmetic operations per element moved.
    double ops_per_element = 0.0;
    /// Same traffic, counting MACs instead of operations.
    double macs_per_element = 0.0;
    /// MACs per byte with u8 A/B elements and i32 Cr load+store.
    double macs_per_byte = 0.0;
    /// One unrolled L6 iteration: 16*mr*nr MACs over the 16*mr bytes of Ar streamed in.
    double inner_loop_macs_per_ar_byte = 0.0;
};

/// Compute-to-communication ratios of one micro-kernel call. Any zero input yields all zeros.
CommRatio compute_to_comm_ratio(std::size_t mr, std::size_t nr, std::size_t kc) noexcept;

struct ReuseFactors {
    double bc = 0.0;  // m / mc: L3 iterations reading the same Bc
    double ac = 0.0;  // nc / nr: L4 iterations reading the same Ac
    double br = 0.0;  // mc / mr: L5 iterations reading the same Br
    double cr = 0.0;  // kc: L6 iterations updating the same Cr

    friend bool operator==(const ReuseFactors&, const ReuseFactors&) = default;
};

/// Analytic reuse counts. Blocks are clipped to the problem (min(mc, m) etc.).
ReuseFactors reuse_factors(const ProblemDims& dims, const BlockingParams& params);

}  // namespace acap
