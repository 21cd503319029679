#include "acap_gemm/blocking.hpp"

#include <algorithm>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace acap {

namespace {

void check_offsets(const MatrixU8& m, std::size_t row0, std::size_t col0, const char* who) {
    if (row0 >= m.rows() || col0 >= m.cols()) {
        throw std::invalid_argument(std::string(who) + ": block offset (" + std::to_string(row0) + ", " +
                                    std::to_string(col0) + ") outside " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + " matrix");
    }
}

// Scalar kernel for micro-tile shapes other than 8x8.
KernelStats generic_micro_kernel(std::span<std::int32_t> cr, std::span<const std::uint8_t> ar,
                                 std::span<const std::uint8_t> br, std::size_t kc, std::size_t mr,
                                 std::size_t nr) {
    KernelStats stats;
    ++stats.cr_loads;
    for (std::size_t r = 0; r < mr; ++r) {
        for (std::size_t c = 0; c < nr; ++c) {
            std::int64_t sum = 0;
            for (std::size_t t = 0; t < kc; ++t) {
                sum += static_cast<std::int64_t>(ar[t * mr + r]) * br[t * nr + c];
            }
            cr[r * nr + c] = wrap_add(cr[r * nr + c], sum);
        }
    }
    ++stats.cr_stores;
    stats.macs = static_cast<std::uint64_t>(mr) * nr * kc;
    return stats;
}

std::uint32_t u32(std::size_t v) noexcept { return static_cast<std::uint32_t>(v); }

}  // namespace

PackedA pack_A(const MatrixU8& a, std::size_t row0, std::size_t col0, const BlockingParams& params) {
    params.validate();
    check_offsets(a, row0, col0, "pack_A");
    PackedA p;
    p.mr = params.mr;
    p.valid_rows = std::min(params.mc, a.rows() - row0);
    p.mc = round_up(p.valid_rows, params.mr);
    p.kc = std::min(params.kc, a.cols() - col0);
    p.data.assign(p.mc * p.kc, 0);
    for (std::size_t panel = 0; panel < p.panels(); ++panel) {
        std::uint8_t* dst = p.data.data() + panel * p.mr * p.kc;
        const std::size_t rows_here = std::min(p.mr, p.valid_rows - std::min(p.valid_rows, panel * p.mr));
        for (std::size_t r = 0; r < rows_here; ++r) {
            const auto src = a.row(row0 + panel * p.mr + r);
            for (std::size_t t = 0; t < p.kc; ++t) dst[t * p.mr + r] = src[col0 + t];
        }
    }
    return p;
}

PackedB pack_B(const MatrixU8& b, std::size_t row0, std::size_t col0, const BlockingParams& params) {
    params.validate();
    check_offsets(b, row0, col0, "pack_B");
    PackedB p;
    p.nr = params.nr;
    p.kc = std::min(params.kc, b.rows() - row0);
    p.valid_cols = std::min(params.nc, b.cols() - col0);
    p.nc = round_up(p.valid_cols, params.nr);
    p.data.assign(p.kc * p.nc, 0);
    for (std::size_t panel = 0; panel < p.panels(); ++panel) {
        std::uint8_t* dst = p.data.data() + panel * p.kc * p.nr;
        const std::size_t first = panel * p.nr;
        const std::size_t cols_here = std::min(p.nr, p.valid_cols - std::min(p.valid_cols, first));
        for (std::size_t t = 0; t < p.kc; ++t) {
            const auto src = b.row(row0 + t);
            std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(col0 + first), cols_here, dst + t * p.nr);
        }
    }
    return p;
}

MatrixU8 unpack(const PackedA& packed) {
    MatrixU8 out(packed.valid_rows, packed.kc);
    for (std::size_t r = 0; r < packed.valid_rows; ++r) {
        for (std::size_t t = 0; t < packed.kc; ++t) out(r, t) = packed.at(r, t);
    }
    return out;
}

MatrixU8 unpack(const PackedB& packed) {
    MatrixU8 out(packed.kc, packed.valid_cols);
    for (std::size_t t = 0; t < packed.kc; ++t) {
        for (std::size_t c = 0; c < packed.valid_cols; ++c) out(t, c) = packed.at(t, c);
    }
    return out;
}

std::size_t max_mc_for(const MemorySpec& mem, std::size_t kc, std::size_t mr, std::size_t elem_bytes) {
    if (kc == 0 || mr == 0 || elem_bytes == 0) throw std::invalid_argument("max_mc_for: zero argument");
    const std::uint64_t rows = mem.bytes(Level::ultra_ram) / (static_cast<std::uint64_t>(kc) * elem_bytes);
    return static_cast<std::size_t>(rows / mr * mr);
}

std::size_t max_nc_for(const MemorySpec& mem, std::size_t kc, std::size_t nr, std::size_t elem_bytes) {
    if (kc == 0 || nr == 0 || elem_bytes == 0) throw std::invalid_argument("max_nc_for: zero argument");
    const std::uint64_t cols = mem.bytes(Level::block_ram) / (static_cast<std::uint64_t>(kc) * elem_bytes);
    return static_cast<std::size_t>(cols / nr * nr);
}

BlockingParams select_ccp(const MemorySpec& mem, std::size_t mr, std::size_t nr, std::size_t elem_bytes,
                          std::uint64_t local_reserve_bytes) {
    mem.validate();
    if (mr == 0 || nr == 0 || elem_bytes == 0) {
        throw std::invalid_argument("select_ccp: mr, nr and elem_bytes must be positive");
    }
    const std::uint64_t local = mem.bytes(Level::local);
    const std::uint64_t usable = local > local_reserve_bytes ? local - local_reserve_bytes : 0;
    BlockingParams p;
    p.mr = mr;
    p.nr = nr;
    p.kc = static_cast<std::size_t>(usable / (static_cast<std::uint64_t>(nr) * elem_bytes));
    if (p.kc == 0) {
        throw CapacityError(Level::local, "local memory (" + std::to_string(local) + " bytes, " +
                                              std::to_string(local_reserve_bytes) +
                                              " reserved) cannot hold one Br micro-panel row");
    }
    p.mc = max_mc_for(mem, p.kc, mr, elem_bytes);
    if (p.mc == 0) {
        throw CapacityError(Level::ultra_ram, "ultra_ram (" + std::to_string(mem.bytes(Level::ultra_ram)) +
                                                  " bytes) cannot hold one Ar micro-panel with kc=" +
                                                  std::to_string(p.kc));
    }
    p.nc = max_nc_for(mem, p.kc, nr, elem_bytes);
    if (p.nc == 0) {
        throw CapacityError(Level::block_ram, "block_ram (" + std::to_string(mem.bytes(Level::block_ram)) +
                                                  " bytes) cannot hold one Br micro-panel with kc=" +
                                                  std::to_string(p.kc));
    }
    return p;
}

BlockingParams paper_ccp() noexcept { return BlockingParams{4496, 1200, 3750, 8, 8}; }

std::string_view to_string(Profile p) noexcept {
    switch (p) {
        case Profile::paper: return "paper";
        case Profile::derived: return "derived";
        case Profile::dims: return "dims";
    }
    return "?";
}

Profile parse_profile(std::string_view name) {
    if (name == "paper") return Profile::paper;
    if (name == "derived") return Profile::derived;
    if (name == "dims") return Profile::dims;
    throw std::invalid_argument("unknown profile '" + std::string(name) + "' (expected paper, derived or dims)");
}

BlockingParams resolve_profile(Profile p, const MemorySpec& mem, const ProblemDims& dims) {
    switch (p) {
        case Profile::paper: return paper_ccp();
        case Profile::derived: return select_ccp(mem, kMr, kNr, 1, kDefaultLocalReserveBytes);
        case Profile::dims:
            if (dims.m == 0 || dims.n == 0 || dims.k == 0) {
                throw std::invalid_argument("dims profile needs positive problem dimensions");
            }
            return BlockingParams{round_up(dims.m, kMr), round_up(dims.n, kNr), dims.k, kMr, kNr};
    }
    throw std::invalid_argument("unknown profile");
}

std::vector<std::size_t> l4_strips_for_tile(std::size_t strips, std::size_t tiles, std::size_t tile) {
    std::vector<std::size_t> out;
    for (std::size_t s = tile; s < strips; s += tiles) out.push_back(s);
    return out;
}

GemmResult gemm_blocked(MatrixI32& c, const MatrixU8& a, const MatrixU8& b, const BlockingParams& params,
                        std::size_t tiles, const GemmOptions& options) {
    params.validate();
    if (tiles == 0) throw std::invalid_argument("gemm_blocked: tiles must be at least 1");
    if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols()) {
        throw std::invalid_argument("gemm_blocked: nonconforming shapes");
    }
    const std::size_t m = a.rows(), n = b.cols(), k = a.cols();
    const std::size_t mr = params.mr, nr = params.nr;
    const bool vector_kernel = mr == kMr && nr == kNr;

    GemmResult result;
    result.kernels_per_tile.assign(tiles, 0);
    result.br_copies_per_tile.assign(tiles, 0);
    std::vector<TransferLog> tile_logs(tiles);
    std::vector<KernelStats> tile_stats(tiles);

    int workers = 1;
#ifdef _OPENMP
    workers = options.threads > 0 ? options.threads : omp_get_max_threads();
#endif
    if (!options.use_parallel) workers = 1;
    workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), tiles));

    for (std::size_t jc = 0; jc < n; jc += params.nc) {  // L1
        for (std::size_t pc = 0; pc < k; pc += params.kc) {  // L2
            const PackedB bc = pack_B(b, pc, jc, params);
            const LoopIndex outer_b{u32(jc / params.nc), u32(pc / params.kc), 0, 0, 0};
            if (options.record_log) {
                result.log.record({Operand::Bc, Level::ddr, Level::block_ram,
                                   static_cast<std::uint64_t>(bc.kc) * bc.valid_cols, LoopSite::L2, 0, outer_b});
            }
            for (std::size_t ic = 0; ic < m; ic += params.mc) {  // L3
                const PackedA ac = pack_A(a, ic, pc, params);
                LoopIndex outer = outer_b;
                outer.ic = u32(ic / params.mc);
                if (options.record_log) {
                    result.log.record({Operand::Ac, Level::ddr, Level::ultra_ram,
                                       static_cast<std::uint64_t>(ac.valid_rows) * ac.kc, LoopSite::L3, 0, outer});
                }
                const std::size_t kc = ac.kc;
                const std::size_t strips = bc.panels();
                const std::size_t panels = ac.panels();
                std::exception_ptr failure;

                // L4, distributed over tiles
#pragma omp parallel for schedule(static) num_threads(workers) if (workers > 1)
                for (std::ptrdiff_t ti = 0; ti < static_cast<std::ptrdiff_t>(tiles); ++ti) {
                    const auto tile = static_cast<std::size_t>(ti);
                    try {
                        TransferLog& log = tile_logs[tile];
                        KernelStats& stats = tile_stats[tile];
                        std::vector<std::uint8_t> br_local(kc * nr);
                        std::vector<std::int32_t> cr(mr * nr);
                        for (std::size_t jr : l4_strips_for_tile(strips, tiles, tile)) {
                            const auto src = bc.panel(jr);
                            std::copy(src.begin(), src.end(), br_local.begin());
                            ++result.br_copies_per_tile[tile];
                            LoopIndex at = outer;
                            at.jr = u32(jr);
                            if (options.record_log) {
                                log.record({Operand::Br, Level::block_ram, Level::local,
                                            static_cast<std::uint64_t>(kc) * nr, LoopSite::L4, u32(tile), at});
                            }
                            const std::size_t col0 = jc + jr * nr;
                            const std::size_t cols = std::min(nr, n - col0);
                            for (std::size_t ir = 0; ir < panels; ++ir) {  // L5
                                const std::size_t row0 = ic + ir * mr;
                                const std::size_t rows = std::min(mr, m - row0);
                                std::fill(cr.begin(), cr.end(), 0);
                                for (std::size_t r = 0; r < rows; ++r) {
                                    for (std::size_t cc = 0; cc < cols; ++cc) cr[r * nr + cc] = c(row0 + r, col0 + cc);
                                }
                                KernelStats ks;
                                if (vector_kernel) {
                                    ks = micro_kernel(std::span<std::int32_t, kMr * kNr>(cr.data(), kMr * kNr),
                                                      ac.panel(ir), br_local, kc);
                                } else {
                                    ks = generic_micro_kernel(cr, ac.panel(ir), br_local, kc, mr, nr);
                                }
                                if (options.inject_fault && tile == 0 && jc == 0 && pc == 0 && ic == 0 &&
                                    jr == 0 && ir == 0) {
                                    cr[0] += 1;
                                }
                                for (std::size_t r = 0; r < rows; ++r) {
                                    for (std::size_t cc = 0; cc < cols; ++cc) c(row0 + r, col0 + cc) = cr[r * nr + cc];
                                }
                                stats += ks;
                                ++result.kernels_per_tile[tile];
                                if (options.record_log) {
                                    at.ir = u32(ir);
                                    const auto cr_bytes = static_cast<std::uint64_t>(mr) * nr * sizeof(std::int32_t);
                                    log.record({Operand::Cr, Level::ddr, Level::registers, cr_bytes, LoopSite::L5,
                                                u32(tile), at});
                                    log.record({Operand::Ar, Level::ultra_ram, Level::registers,
                                                static_cast<std::uint64_t>(kc) * mr, LoopSite::L6, u32(tile), at,
                                                u32(kc)});
                                    log.record({Operand::Br, Level::local, Level::registers,
                                                static_cast<std::uint64_t>(kc) * nr, LoopSite::L6, u32(tile), at,
                                                u32(kc)});
                                    log.record({Operand::Cr, Level::registers, Level::ddr, cr_bytes, LoopSite::L5,
                                                u32(tile), at});
                                }
                            }
                        }
                    } catch (...) {
#pragma omp critical(acap_gemm_failure)
                        if (!failure) failure = std::current_exception();
                    }
                }
                if (failure) std::rethrow_exception(failure);
            }
        }
    }

    for (std::size_t t = 0; t < tiles; ++t) {
        result.log.append(tile_logs[t]);
        result.stats += tile_stats[t];
    }
    if (options.record_log) result.log.sort_canonical();
    return result;
}

}  // namespace acap
