#include "acap_gemm/memory_model.hpp"

#include <algorithm>
#include <cmath>

namespace acap {

std::string_view to_string(Level level) noexcept {
    switch (level) {
        case Level::registers: return "registers";
        case Level::local: return "local";
        case Level::ultra_ram: return "ultra_ram";
        case Level::block_ram: return "block_ram";
        case Level::ddr: return "ddr";
    }
    return "?";
}

std::string_view to_string(Operand op) noexcept {
    switch (op) {
        case Operand::A: return "A";
        case Operand::B: return "B";
        case Operand::C: return "C";
        case Operand::Ac: return "Ac";
        case Operand::Bc: return "Bc";
        case Operand::Ar: return "Ar";
        case Operand::Br: return "Br";
        case Operand::Cr: return "Cr";
    }
    return "?";
}

std::string_view to_string(BrTransfer mode) noexcept {
    return mode == BrTransfer::gmio ? "gmio" : "stream";
}

std::uint64_t MemorySpec::bytes(Level level) const noexcept {
    const double kb = units == MbConvention::binary ? 1024.0 : 1000.0;
    const double mb = kb * kb;
    double value = 0.0;
    switch (level) {
        case Level::registers: value = registers_kb * kb; break;
        case Level::local: value = local_kb * kb; break;
        case Level::ultra_ram: value = ultra_ram_mb * mb; break;
        case Level::block_ram: value = block_ram_mb * mb; break;
        case Level::ddr: value = ddr_gb * mb * kb; break;
    }
    return static_cast<std::uint64_t>(std::floor(value));
}

void MemorySpec::validate() const {
    for (Level level : kAllLevels) {
        if (bytes(level) == 0) {
            throw std::invalid_argument("memory capacity of level '" + std::string(to_string(level)) +
                                        "' must be positive");
        }
    }
}

bool MemorySpec::is_ordered() const noexcept {
    return bytes(Level::registers) < bytes(Level::local) && bytes(Level::local) < bytes(Level::block_ram) &&
           bytes(Level::block_ram) < bytes(Level::ultra_ram) && bytes(Level::ultra_ram) < bytes(Level::ddr);
}

PlacementMap PlacementMap::versal_default() noexcept {
    PlacementMap map;
    map.assign(Operand::Cr, Level::registers);
    map.assign(Operand::Br, Level::local);
    map.assign(Operand::Ac, Level::ultra_ram);
    map.assign(Operand::Ar, Level::ultra_ram);
    map.assign(Operand::Bc, Level::block_ram);
    map.assign(Operand::A, Level::ddr);
    map.assign(Operand::B, Level::ddr);
    map.assign(Operand::C, Level::ddr);
    return map;
}

std::vector<Operand> PlacementMap::operands_at(Level level) const {
    std::vector<Operand> out;
    for (Operand op : kAllOperands) {
        if (level_of(op) == level) out.push_back(op);
    }
    return out;
}

bool FootprintReport::ok() const noexcept { return !first_overflow().has_value(); }

const LevelUsage& FootprintReport::at(Level level) const {
    auto it = std::find_if(levels.begin(), levels.end(), [&](const LevelUsage& u) { return u.level == level; });
    if (it == levels.end()) throw std::out_of_range("level missing from footprint report");
    return *it;
}

std::optional<Level> FootprintReport::first_overflow() const noexcept {
    for (const auto& u : levels) {
        if (!u.fits()) return u.level;
    }
    return std::nullopt;
}

FootprintReport compute_footprints(const BlockingParams& params, const MemorySpec& mem, BrTransfer br_mode,
                                   std::uint64_t local_reserve_bytes, std::optional<ProblemDims> dims) {
    params.validate();
    FootprintReport r;
    r.params = params;
    r.br_mode = br_mode;
    r.local_reserve_bytes = local_reserve_bytes;
    r.br_data_bytes = static_cast<std::uint64_t>(params.kc) * params.nr;
    r.br_footprint_bytes = br_mode == BrTransfer::gmio ? 3 * r.br_data_bytes : r.br_data_bytes;

    const std::uint64_t cr = static_cast<std::uint64_t>(params.mr) * params.nr * sizeof(std::int32_t);
    const std::uint64_t ac = static_cast<std::uint64_t>(params.mc) * params.kc;
    const std::uint64_t bc = static_cast<std::uint64_t>(params.kc) * params.nc;

    auto add = [&](Level level, std::uint64_t used, std::string contents) {
        r.levels.push_back({level, used, mem.bytes(level), std::move(contents)});
    };
    add(Level::registers, cr, "Cr");
    add(Level::local, r.br_footprint_bytes + local_reserve_bytes,
        br_mode == BrTransfer::gmio ? "Br + ping/pong + reserve" : "Br + reserve");
    add(Level::ultra_ram, ac, "Ac");
    add(Level::block_ram, bc, "Bc");
    std::uint64_t ddr = 0;
    if (dims) {
        ddr = static_cast<std::uint64_t>(dims->m) * dims->k + static_cast<std::uint64_t>(dims->k) * dims->n +
              static_cast<std::uint64_t>(dims->m) * dims->n * sizeof(std::int32_t);
    }
    add(Level::ddr, ddr, "A, B, C");
    return r;
}

FootprintReport validate_footprints(const BlockingParams& params, const MemorySpec& mem, BrTransfer br_mode,
                                    std::uint64_t local_reserve_bytes, std::optional<ProblemDims> dims) {
    FootprintReport r = compute_footprints(params, mem, br_mode, local_reserve_bytes, dims);
    if (auto level = r.first_overflow()) {
        const auto& u = r.at(*level);
        throw CapacityError(*level,
                            "capacity exceeded at level '" + std::string(to_string(*level)) + "': " +
                                std::to_string(u.used_bytes) + " bytes needed (" + u.contents + "), " +
                                std::to_string(u.capacity_bytes) + " available",
                            r);
    }
    return r;
}

CommRatio compute_to_comm_ratio(std::size_t mr, std::size_t nr, std::size_t kc) noexcept {
    CommRatio out;
    if (mr == 0 || nr == 0 || kc == 0) return out;
    const double m = static_cast<double>(mr), n = static_cast<double>(nr), k = static_cast<double>(kc);
    const double elements = 2.0 * m * n + m * k + n * k;
    out.ops_per_element = 2.0 * m * n * k / elements;
    out.macs_per_element = m * n * k / elements;
    out.macs_per_byte = m * n * k / (2.0 * m * n * sizeof(std::int32_t) + m * k + n * k);
    out.inner_loop_macs_per_ar_byte = (16.0 * m * n) / (16.0 * m);
    return out;
}

ReuseFactors reuse_factors(const ProblemDims& dims, const BlockingParams& params) {
    params.validate();
    if (dims.m == 0 || dims.n == 0 || dims.k == 0) {
        throw std::invalid_argument("reuse_factors: problem dimensions must be positive");
    }
    const double mc = static_cast<double>(std::min(params.mc, dims.m));
    const double nc = static_cast<double>(std::min(params.nc, dims.n));
    const double kc = static_cast<double>(std::min(params.kc, dims.k));
    return {static_cast<double>(dims.m) / mc, nc / static_cast<double>(params.nr),
            mc / static_cast<double>(params.mr), kc};
}

}  // namespace acap
