#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acap_gemm/memory_model.hpp"
#include "acap_gemm/params.hpp"

namespace acap {

/// Calibration constants of the cycle model. Defaults are the VCK190 measurements for an
/// 8x8 UINT8 micro-kernel.
struct CostModel {
    double ar_read64_cycles = 19.0;                 // stream one 64-element Ar vector
    double ar_merged_iter_cycles = 4106.0 / 128.0;  // merged 128-element Ar read per L6 iteration
    double mac16_cycles = 1.0;
    double mac16_per_iter = 8.0;
    double loop_overhead_total = 18.0;  // per micro-kernel, arithmetic-only measured minus theoretical
    double baseline_epilogue = 4.0;     // per micro-kernel, baseline minus Ar-only
    double br_copy_cycles = 3280.0;     // per Br copy, independent of the tile count
    /// Cr load+store over GMIO, keyed by tile count.
    std::map<std::size_t, double> cr_copy_table{{1, 40.0}, {2, 58.0}, {4, 63.0}, {8, 84.0}, {16, 157.0}, {32, 282.0}};

    /// Cr copy cycles for `tiles`. Between table points the cost is piecewise linear in
    /// log2(tiles); outside the table the nearest segment is extended (clamped at zero).
    double cr_copy_cycles(std::size_t tiles) const;

    /// Nonnegative constants, nonempty Cr table, monotone nondecreasing Cr costs.
    /// Throws std::invalid_argument otherwise.
    void validate() const;

    double macs_per_iter() const noexcept;
};

enum class KernelMode { baseline, read_ar_only, mac_only };
inline constexpr KernelMode kAllKernelModes[] = {KernelMode::read_ar_only, KernelMode::mac_only,
                                                 KernelMode::baseline};

std::string_view to_string(KernelMode mode) noexcept;
/// Accepts baseline, read_ar_only and mac_only. Throws std::invalid_argument otherwise.
KernelMode parse_kernel_mode(std::string_view name);

struct CycleEstimate {
    double theoretical = 0.0;
    double calibrated = 0.0;
};

/// Cycles of one micro-kernel call with kc k-steps (ceil(kc/16) unrolled iterations).
///   read_ar_only: 2 * ar_read64 per iteration; calibrated at the merged-read rate.
///   mac_only:     mac16_per_iter * mac16 per iteration; calibrated adds the loop overhead.
///   baseline:     sum of both per iteration; calibrated overlaps them fully:
///                 max(read_ar_only, mac_only) + epilogue.
CycleEstimate microkernel_cycles(std::size_t kc, KernelMode mode, const CostModel& cm);

/// MACs per cycle of one tile: mr*nr*kc / (calibrated baseline + Cr copy).
double perf_per_tile(std::size_t kc, std::size_t tiles, const CostModel& cm);

/// Measured strong-scaling row for the (256, 256, 2048) problem.
struct ReferenceRow {
    std::size_t tiles;
    double copy_cr;
    double arithmetic;
    double total;
    double macs_per_cycle_per_tile;
};
const std::vector<ReferenceRow>& reference_scaling_table();
std::optional<ReferenceRow> reference_row(std::size_t tiles);
inline constexpr ProblemDims kReferenceDims{256, 256, 2048};

struct SimReport {
    ProblemDims dims;
    BlockingParams params;
    std::size_t tiles = 1;

    // Per micro-kernel.
    double copy_cr = 0.0;
    double arithmetic_loop = 0.0;

    // Per-tile totals over the whole run.
    std::uint64_t br_copies = 0;
    std::uint64_t kernel_calls = 0;
    double br_copy_cycles = 0.0;
    double arithmetic_cycles = 0.0;
    double cr_copy_cycles = 0.0;
    double total = 0.0;

    double macs_per_cycle_per_tile = 0.0;
    double effective_macs_per_cycle = 0.0;  // m*n*k / total, all tiles together
    double speedup = 1.0;                   // vs the 1-tile model
    double efficiency = 1.0;                // speedup / tiles
    bool imbalanced = false;                // some outer block had strips % tiles != 0

    std::optional<double> reference_total;    // reported total, when the run matches it
    std::optional<double> unmodeled_overlap;  // reference_total - total
};

/// Strong-scaling model of gemm_blocked on `tiles` tiles. Outer blocks run one after the
/// other; inside each, every tile executes ceil(strips / tiles) L4 iterations of
///   br_copy + (mc/mr) * (baseline kernel + Cr copy).
/// Edge blocks use their clipped sizes.
SimReport simulate_run(const ProblemDims& dims, const BlockingParams& params, std::size_t tiles,
                       const CostModel& cm);

/// simulate_run for each tile count, with speedup and efficiency against 1 tile. Rows keep
/// the order of `tiles`.
std::vector<SimReport> simulate_sweep(const ProblemDims& dims, const BlockingParams& params,
                                      const std::vector<std::size_t>& tiles, const CostModel& cm);

struct TheoreticalEstimate {
    double estimate = 0.0;            // MACs per iteration / (2 * ar_read64)
    double printed = 22.2;            // published value next to 1024/38
    bool printed_consistent = false;  // whether `printed` matches the quotient
    double calibrated_single_tile = 0.0;
    std::string explanation;
};

/// Upper-level estimate ignoring overlap and merged long reads. Throws
/// std::invalid_argument when ar_read64_cycles is not positive.
TheoreticalEstimate theoretical_estimate(const CostModel& cm);

}  // namespace acap
