#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace acap {

inline constexpr std::size_t kMr = 8;
inline constexpr std::size_t kNr = 8;
inline constexpr std::size_t kUnroll = 16;       // k-steps per L6 iteration
inline constexpr std::size_t kLanes = 16;        // lanes per accumulator register
inline constexpr std::size_t kAccumulators = 4;  // each holds two adjacent Cr columns
inline constexpr std::size_t kMacsPerMac16 = 128;

/// 16 lanes of a 48-bit accumulator register, held in 64-bit storage.
using Acc48x16 = std::array<std::int64_t, kLanes>;

/// Lane (r + 8*c) of accumulator a holds micro-tile element (r, 2a + c).
struct AccBank {
    std::array<Acc48x16, kAccumulators> acc{};

    static constexpr std::size_t row_of(std::size_t lane) noexcept { return lane % kMr; }
    static constexpr std::size_t col_of(std::size_t a, std::size_t lane) noexcept { return 2 * a + lane / kMr; }
};

inline constexpr std::int64_t kAcc48Min = -(std::int64_t{1} << 47);
inline constexpr std::int64_t kAcc48Max = (std::int64_t{1} << 47) - 1;

/// lane(r + 8c) += sum_{t<8} a_slice[t*8 + r] * b_slice[t*2 + c]; exactly 128 MACs.
/// a_slice is 8 k-steps of an Ar column (64 bytes); b_slice is 8 k-steps of two Br columns.
/// Throws std::logic_error if a lane leaves the 48-bit range.
void mac16_emulated(Acc48x16& acc, std::span<const std::uint8_t, 64> a_slice,
                    std::span<const std::uint8_t, 16> b_slice);

struct KernelStats {
    std::uint64_t iterations = 0;  // unrolled L6 iterations, ceil(kc/16)
    std::uint64_t mac16_calls = 0;
    std::uint64_t macs = 0;
    std::uint64_t ar_reads = 0;  // 64-element vector reads of Ar
    std::uint64_t br_reads = 0;  // 32-element vector reads of Br
    std::uint64_t cr_loads = 0;
    std::uint64_t cr_stores = 0;
    std::uint64_t padded_ksteps = 0;

    KernelStats& operator+=(const KernelStats& o) noexcept;
    friend bool operator==(const KernelStats&, const KernelStats&) = default;
};

/// Cr += Ar * Br over kc k-steps for an 8x8 micro-tile.
///
/// `ar` is one packed A micro-panel: k-step t occupies ar[t*8 .. t*8+8) (one Ar column).
/// `br` is one packed B micro-panel: k-step t occupies br[t*8 .. t*8+8) (one Br row).
/// `cr` is the row-major micro-tile. A tail with kc % 16 != 0 runs as a zero-padded
/// iteration and the padded reads are counted.
KernelStats micro_kernel(std::span<std::int32_t, kMr * kNr> cr, std::span<const std::uint8_t> ar,
                         std::span<const std::uint8_t> br, std::size_t kc);

}  // namespace acap
