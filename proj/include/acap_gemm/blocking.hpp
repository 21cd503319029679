#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "acap_gemm/matrix.hpp"
#include "acap_gemm/memory_model.hpp"
#include "acap_gemm/microkernel.hpp"
#include "acap_gemm/params.hpp"
#include "acap_gemm/transfer_log.hpp"

namespace acap {

/// Packed mc x kc block of A: mc/mr micro-panels, each storing one mr-element column per
/// k-step. Rows beyond the source matrix are zero.
struct PackedA {
    std::size_t mc = 0;  // rows, padded to a multiple of mr
    std::size_t kc = 0;
    std::size_t mr = 0;
    std::size_t valid_rows = 0;
    std::vector<std::uint8_t> data;

    std::size_t panels() const noexcept { return mr == 0 ? 0 : mc / mr; }
    std::span<const std::uint8_t> panel(std::size_t p) const noexcept {
        return std::span<const std::uint8_t>(data).subspan(p * mr * kc, mr * kc);
    }
    std::uint8_t at(std::size_t row, std::size_t t) const noexcept {
        return data[(row / mr) * mr * kc + t * mr + row % mr];
    }
};

/// Packed kc x nc block of B: nc/nr micro-panels, each storing one nr-element row per
/// k-step. Columns beyond the source matrix are zero.
struct PackedB {
    std::size_t kc = 0;
    std::size_t nc = 0;  // columns, padded to a multiple of nr
    std::size_t nr = 0;
    std::size_t valid_cols = 0;
    std::vector<std::uint8_t> data;

    std::size_t panels() const noexcept { return nr == 0 ? 0 : nc / nr; }
    std::span<const std::uint8_t> panel(std::size_t q) const noexcept {
        return std::span<const std::uint8_t>(data).subspan(q * kc * nr, kc * nr);
    }
    std::uint8_t at(std::size_t t, std::size_t col) const noexcept {
        return data[(col / nr) * kc * nr + t * nr + col % nr];
    }
};

/// Packs A[row0 : row0+mc, col0 : col0+kc), clipped to the matrix. The row count is padded
/// up to a multiple of mr. Throws std::invalid_argument if the offsets lie outside A.
PackedA pack_A(const MatrixU8& a, std::size_t row0, std::size_t col0, const BlockingParams& params);

/// Packs B[row0 : row0+kc, col0 : col0+nc), clipped to the matrix. The column count is
/// padded up to a multiple of nr.
PackedB pack_B(const MatrixU8& b, std::size_t row0, std::size_t col0, const BlockingParams& params);

/// Inverse of packing, dropping padding: valid_rows x kc and kc x valid_cols.
MatrixU8 unpack(const PackedA& packed);
MatrixU8 unpack(const PackedB& packed);

/// Largest multiple of mr with mc * kc * elem_bytes <= Ultra RAM capacity.
std::size_t max_mc_for(const MemorySpec& mem, std::size_t kc, std::size_t mr, std::size_t elem_bytes = 1);
/// Largest multiple of nr with kc * nc * elem_bytes <= Block RAM capacity.
std::size_t max_nc_for(const MemorySpec& mem, std::size_t kc, std::size_t nr, std::size_t elem_bytes = 1);

/// Derives (mc, nc, kc) from the capacities: kc fills the local memory left after the
/// reserve with one Br micro-panel, then mc and nc exhaust Ultra RAM and Block RAM.
/// Throws CapacityError naming the level that cannot hold a single micro-panel.
BlockingParams select_ccp(const MemorySpec& mem, std::size_t mr, std::size_t nr, std::size_t elem_bytes,
                          std::uint64_t local_reserve_bytes);

/// Local-memory bytes kept free for other data when deriving kc (about 2.5 KB).
inline constexpr std::uint64_t kDefaultLocalReserveBytes = 2560;

/// Upper limits quoted for the VCK190 (kc 3750, mc about 4500, nc 1200), with mc rounded
/// down to a multiple of mr = 8.
BlockingParams paper_ccp() noexcept;

/// Named blocking profiles.
enum class Profile { paper, derived, dims };
std::string_view to_string(Profile p) noexcept;
Profile parse_profile(std::string_view name);

/// Resolves a profile. `dims` makes the blocks equal to the problem (rounded up to mr/nr),
/// the configuration of the strong-scaling experiment.
BlockingParams resolve_profile(Profile p, const MemorySpec& mem, const ProblemDims& dims);

struct GemmOptions {
    bool record_log = true;
    int threads = 0;  // OpenMP workers; 0 keeps the runtime default
    bool use_parallel = true;
    /// Fault injection for verification tests: corrupt one element of the first micro-tile.
    bool inject_fault = false;
};

struct GemmResult {
    TransferLog log;
    KernelStats stats;
    std::vector<std::uint64_t> kernels_per_tile;
    std::vector<std::uint64_t> br_copies_per_tile;
};

/// C += A * B through the five blocked loops. Loop L4 (nr-wide strips of the current Cc block)
/// is dealt block-cyclically to `tiles` logical tiles, each owning disjoint output columns;
/// tiles run on OpenMP workers. The result is bit-exact with reference_gemm for any tiling
/// and worker count. Throws std::invalid_argument on shape mismatch, tiles == 0, or invalid
/// params.
GemmResult gemm_blocked(MatrixI32& c, const MatrixU8& a, const MatrixU8& b, const BlockingParams& params,
                        std::size_t tiles, const GemmOptions& options = {});

/// Strip indices [0, strips) owned by `tile` under the block-cyclic L4 partition.
std::vector<std::size_t> l4_strips_for_tile(std::size_t strips, std::size_t tiles, std::size_t tile);

}  // namespace acap
