#include "acap_gemm/parallel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

#include "acap_gemm/microkernel.hpp"

namespace acap {

double CostModel::cr_copy_cycles(std::size_t tiles) const {
    if (tiles == 0) throw std::invalid_argument("cr_copy_cycles: tiles must be at least 1");
    if (cr_copy_table.empty()) throw std::invalid_argument("cr_copy_cycles: empty calibration table");
    if (auto it = cr_copy_table.find(tiles); it != cr_copy_table.end()) return it->second;
    if (cr_copy_table.size() == 1) return cr_copy_table.begin()->second;

    auto hi = cr_copy_table.upper_bound(tiles);
    if (hi == cr_copy_table.begin()) ++hi;
    if (hi == cr_copy_table.end()) --hi;
    auto lo = std::prev(hi);
    const double x0 = std::log2(static_cast<double>(lo->first));
    const double x1 = std::log2(static_cast<double>(hi->first));
    const double x = std::log2(static_cast<double>(tiles));
    const double y = lo->second + (hi->second - lo->second) * (x - x0) / (x1 - x0);
    return std::max(0.0, y);
}

void CostModel::validate() const {
    const double values[] = {ar_read64_cycles, ar_merged_iter_cycles, mac16_cycles,  mac16_per_iter,
                             loop_overhead_total, baseline_epilogue,  br_copy_cycles};
    for (double v : values) {
        if (!(v >= 0.0)) throw std::invalid_argument("cost model constants must be nonnegative");
    }
    if (cr_copy_table.empty()) throw std::invalid_argument("cost model needs at least one Cr copy entry");
    double prev = -1.0;
    for (const auto& [tiles, cycles] : cr_copy_table) {
        if (tiles == 0 || !(cycles >= 0.0)) throw std::invalid_argument("invalid Cr copy table entry");
        if (cycles < prev) throw std::invalid_argument("Cr copy cycles must not decrease with tile count");
        prev = cycles;
    }
}

double CostModel::macs_per_iter() const noexcept { return mac16_per_iter * static_cast<double>(kMacsPerMac16); }

std::string_view to_string(KernelMode mode) noexcept {
    switch (mode) {
        case KernelMode::baseline: return "baseline";
        case KernelMode::read_ar_only: return "read_ar_only";
        case KernelMode::mac_only: return "mac_only";
    }
    return "?";
}

KernelMode parse_kernel_mode(std::string_view name) {
    if (name == "baseline") return KernelMode::baseline;
    if (name == "read_ar_only") return KernelMode::read_ar_only;
    if (name == "mac_only") return KernelMode::mac_only;
    throw std::invalid_argument("unknown kernel mode '" + std::string(name) + "'");
}

CycleEstimate microkernel_cycles(std::size_t kc, KernelMode mode, const CostModel& cm) {
    const double iters = static_cast<double>(ceil_div(kc, kUnroll));
    const CycleEstimate ar{iters * 2.0 * cm.ar_read64_cycles, iters * cm.ar_merged_iter_cycles};
    const double mac_theory = iters * cm.mac16_per_iter * cm.mac16_cycles;
    const CycleEstimate mac{mac_theory, mac_theory + cm.loop_overhead_total};
    switch (mode) {
        case KernelMode::read_ar_only: return ar;
        case KernelMode::mac_only: return mac;
        case KernelMode::baseline:
            return {ar.theoretical + mac.theoretical, std::max(ar.calibrated, mac.calibrated) + cm.baseline_epilogue};
    }
    throw std::invalid_argument("microkernel_cycles: unknown mode");
}

double perf_per_tile(std::size_t kc, std::size_t tiles, const CostModel& cm) {
    const double cycles = microkernel_cycles(kc, KernelMode::baseline, cm).calibrated + cm.cr_copy_cycles(tiles);
    return static_cast<double>(kMr * kNr * kc) / cycles;
}

const std::vector<ReferenceRow>& reference_scaling_table() {
    static const std::vector<ReferenceRow> rows{
        {1, 40, 4110, 3694.1e3, 31.5}, {2, 58, 4110, 1916.0e3, 31.4},  {4, 63, 4110, 958.1e3, 31.3},
        {8, 84, 4110, 498.9e3, 31.2},  {16, 157, 4110, 275.3e3, 30.7}, {32, 282, 4110, 162.9e3, 29.8},
    };
    return rows;
}

std::optional<ReferenceRow> reference_row(std::size_t tiles) {
    for (const auto& r : reference_scaling_table()) {
        if (r.tiles == tiles) return r;
    }
    return std::nullopt;
}

SimReport simulate_run(const ProblemDims& dims, const BlockingParams& params, std::size_t tiles,
                       const CostModel& cm) {
    params.validate();
    if (tiles == 0) throw std::invalid_argument("simulate_run: tiles must be at least 1");
    if (dims.m == 0 || dims.n == 0 || dims.k == 0) {
        throw std::invalid_argument("simulate_run: problem dimensions must be positive");
    }
    SimReport r;
    r.dims = dims;
    r.params = params;
    r.tiles = tiles;
    r.copy_cr = cm.cr_copy_cycles(tiles);
    r.arithmetic_loop = microkernel_cycles(std::min(params.kc, dims.k), KernelMode::baseline, cm).calibrated;

    for (std::size_t jc = 0; jc < dims.n; jc += params.nc) {
        const std::size_t strips = ceil_div(std::min(params.nc, dims.n - jc), params.nr);
        const std::size_t l4_iters = ceil_div(strips, tiles);
        if (strips % tiles != 0) r.imbalanced = true;
        for (std::size_t pc = 0; pc < dims.k; pc += params.kc) {
            const std::size_t kc = std::min(params.kc, dims.k - pc);
            const double kernel = microkernel_cycles(kc, KernelMode::baseline, cm).calibrated;
            for (std::size_t ic = 0; ic < dims.m; ic += params.mc) {
                const std::size_t l5_iters = ceil_div(std::min(params.mc, dims.m - ic), params.mr);
                const std::uint64_t calls = static_cast<std::uint64_t>(l4_iters) * l5_iters;
                r.br_copies += l4_iters;
                r.kernel_calls += calls;
                r.br_copy_cycles += static_cast<double>(l4_iters) * cm.br_copy_cycles;
                r.arithmetic_cycles += static_cast<double>(calls) * kernel;
                r.cr_copy_cycles += static_cast<double>(calls) * r.copy_cr;
            }
        }
    }
    r.total = r.br_copy_cycles + r.arithmetic_cycles + r.cr_copy_cycles;
    r.macs_per_cycle_per_tile = perf_per_tile(std::min(params.kc, dims.k), tiles, cm);
    r.effective_macs_per_cycle =
        static_cast<double>(dims.m) * static_cast<double>(dims.n) * static_cast<double>(dims.k) / r.total;

    if (dims == kReferenceDims && params.mc == 256 && params.nc == 256 && params.kc == 2048 &&
        params.mr == kMr && params.nr == kNr) {
        if (auto ref = reference_row(tiles)) {
            r.reference_total = ref->total;
            r.unmodeled_overlap = ref->total - r.total;
        }
    }
    return r;
}

std::vector<SimReport> simulate_sweep(const ProblemDims& dims, const BlockingParams& params,
                                      const std::vector<std::size_t>& tiles, const CostModel& cm) {
    for (std::size_t t : tiles) {
        if (t == 0) throw std::invalid_argument("simulate_sweep: tile counts must be at least 1");
    }
    cm.validate();
    const double single = simulate_run(dims, params, 1, cm).total;
    std::vector<SimReport> rows(tiles.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tiles.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        rows[idx] = simulate_run(dims, params, tiles[idx], cm);
        rows[idx].speedup = single / rows[idx].total;
        rows[idx].efficiency = rows[idx].speedup / static_cast<double>(tiles[idx]);
    }
    return rows;
}

TheoreticalEstimate theoretical_estimate(const CostModel& cm) {
    if (!(cm.ar_read64_cycles > 0.0)) {
        throw std::invalid_argument("theoretical_estimate: ar_read64_cycles must be positive");
    }
    TheoreticalEstimate e;
    e.estimate = cm.macs_per_iter() / (2.0 * cm.ar_read64_cycles);
    e.printed_consistent = std::abs(e.estimate - e.printed) < 0.05;
    e.calibrated_single_tile = perf_per_tile(2048, 1, cm);
    e.explanation =
        "merged long reads: two 64-element Ar reads per iteration are issued as one 128-element read, "
        "so the calibrated rate exceeds the per-vector estimate";
    return e;
}

}  // namespace acap
