#include "acap_gemm/matrix.hpp"

namespace acap {

void fill_random(MatrixU8& m, std::uint64_t seed) {
    XorShift64Star rng(seed);
    for (auto& v : m.data()) {
        v = static_cast<std::uint8_t>(rng.next() & 0xFFu);
    }
}

void fill_random(MatrixI32& m, std::uint64_t seed) {
    XorShift64Star rng(seed);
    for (auto& v : m.data()) {
        v = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng.next() & 0xFFFFFFFFu));
    }
}

void reference_gemm(MatrixI32& c, const MatrixU8& a, const MatrixU8& b) {
    if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols()) {
        throw std::invalid_argument("reference_gemm: nonconforming shapes A " + std::to_string(a.rows()) +
                                    "x" + std::to_string(a.cols()) + ", B " + std::to_string(b.rows()) +
                                    "x" + std::to_string(b.cols()) + ", C " + std::to_string(c.rows()) +
                                    "x" + std::to_string(c.cols()));
    }
    const std::size_t m = a.rows(), n = b.cols(), k = a.cols();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t sum = 0;
            for (std::size_t t = 0; t < k; ++t) {
                sum += static_cast<std::int64_t>(a(i, t)) * static_cast<std::int64_t>(b(t, j));
            }
            c(i, j) = wrap_add(c(i, j), sum);
        }
    }
}

std::uint64_t checksum(const MatrixI32& c) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::int32_t v : c.data()) {
        auto u = static_cast<std::uint32_t>(v);
        for (int b = 0; b < 4; ++b) {
            h ^= (u >> (8 * b)) & 0xFFu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

}  // namespace acap
