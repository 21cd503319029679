#include "acap_gemm/microkernel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "acap_gemm/matrix.hpp"

namespace acap {

void mac16_emulated(Acc48x16& acc, std::span<const std::uint8_t, 64> a_slice,
                    std::span<const std::uint8_t, 16> b_slice) {
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t r = 0; r < kMr; ++r) {
            std::int64_t sum = 0;
            for (std::size_t t = 0; t < 8; ++t) {
                sum += static_cast<std::int64_t>(a_slice[t * kMr + r]) * b_slice[t * 2 + c];
            }
            std::int64_t& lane = acc[r + kMr * c];
            lane += sum;
            if (lane < kAcc48Min || lane > kAcc48Max) {
                throw std::logic_error("mac16: accumulator lane " + std::to_string(r + kMr * c) +
                                       " left the 48-bit range");
            }
        }
    }
}

KernelStats& KernelStats::operator+=(const KernelStats& o) noexcept {
    iterations += o.iterations;
    mac16_calls += o.mac16_calls;
    macs += o.macs;
    ar_reads += o.ar_reads;
    br_reads += o.br_reads;
    cr_loads += o.cr_loads;
    cr_stores += o.cr_stores;
    padded_ksteps += o.padded_ksteps;
    return *this;
}

KernelStats micro_kernel(std::span<std::int32_t, kMr * kNr> cr, std::span<const std::uint8_t> ar,
                         std::span<const std::uint8_t> br, std::size_t kc) {
    if (kc == 0) throw std::invalid_argument("micro_kernel: kc must be positive");
    if (ar.size() < kc * kMr || br.size() < kc * kNr) {
        throw std::invalid_argument("micro_kernel: micro-panels shorter than kc");
    }

    KernelStats stats;
    AccBank bank;
    const std::size_t iters = (kc + kUnroll - 1) / kUnroll;

    std::array<std::uint8_t, 64> ar0_pad{}, ar1_pad{};
    std::array<std::uint8_t, 32> br_vec{};

    for (std::size_t it = 0; it < iters; ++it) {
        const std::size_t k0 = it * kUnroll;
        std::span<const std::uint8_t, 64> ar0{ar0_pad}, ar1{ar1_pad};
        if (k0 + kUnroll <= kc) {
            ar0 = ar.subspan(k0 * kMr).first<64>();
            ar1 = ar.subspan((k0 + 8) * kMr).first<64>();
        } else {
            // tail: zero-fill past kc
            const std::size_t valid = kc - k0;
            stats.padded_ksteps += kUnroll - valid;
            ar0_pad.fill(0);
            ar1_pad.fill(0);
            const std::size_t n0 = std::min<std::size_t>(valid, 8) * kMr;
            std::copy_n(ar.begin() + static_cast<std::ptrdiff_t>(k0 * kMr), n0, ar0_pad.begin());
            if (valid > 8) {
                std::copy_n(ar.begin() + static_cast<std::ptrdiff_t>((k0 + 8) * kMr), (valid - 8) * kMr,
                            ar1_pad.begin());
            }
        }
        stats.ar_reads += 2;

        for (std::size_t q = 0; q < kAccumulators; ++q) {
            // br <- 16 k-steps of columns 2q, 2q+1
            for (std::size_t t = 0; t < kUnroll; ++t) {
                const std::size_t k = k0 + t;
                for (std::size_t c = 0; c < 2; ++c) {
                    br_vec[t * 2 + c] = k < kc ? br[k * kNr + 2 * q + c] : std::uint8_t{0};
                }
            }
            ++stats.br_reads;
            mac16_emulated(bank.acc[q], ar0, std::span<const std::uint8_t, 32>(br_vec).first<16>());
            mac16_emulated(bank.acc[q], ar1, std::span<const std::uint8_t, 32>(br_vec).last<16>());
            stats.mac16_calls += 2;
        }
        ++stats.iterations;
    }
    stats.macs = stats.mac16_calls * kMacsPerMac16;

    ++stats.cr_loads;
    for (std::size_t a = 0; a < kAccumulators; ++a) {
        for (std::size_t lane = 0; lane < kLanes; ++lane) {
            std::int32_t& c = cr[AccBank::row_of(lane) * kNr + AccBank::col_of(a, lane)];
            c = wrap_add(c, bank.acc[a][lane]);
        }
    }
    ++stats.cr_stores;
    return stats;
}

}  // namespace acap
