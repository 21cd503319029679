#pragma once

// Test-only oracles, written independently of the library's kernels.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "acap_gemm/matrix.hpp"

namespace acap::testing {

/// Plain 3-loop micro-kernel over packed panels: Cr[r][c] += sum_t Ar[t][r] * Br[t][c].
inline void scalar_micro_kernel(std::span<std::int32_t> cr, std::span<const std::uint8_t> ar,
                                std::span<const std::uint8_t> br, std::size_t kc, std::size_t mr = 8,
                                std::size_t nr = 8) {
    for (std::size_t r = 0; r < mr; ++r) {
        for (std::size_t c = 0; c < nr; ++c) {
            std::int64_t acc = cr[r * nr + c];
            for (std::size_t t = 0; t < kc; ++t) acc += std::int64_t{ar[t * mr + r]} * br[t * nr + c];
            cr[r * nr + c] = static_cast<std::int32_t>(static_cast<std::uint32_t>(acc));
        }
    }
}

/// Small deterministic generator for test case shapes (splitmix64).
class CaseRng {
public:
    explicit CaseRng(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::size_t uniform(std::size_t lo, std::size_t hi) { return lo + next() % (hi - lo + 1); }

private:
    std::uint64_t s_;
};

inline std::vector<std::uint8_t> random_bytes(std::size_t n, CaseRng& rng) {
    std::vector<std::uint8_t> v(n);
    for (auto& x : v) x = static_cast<std::uint8_t>(rng.next() >> 56);
    return v;
}

}  // namespace acap::testing
