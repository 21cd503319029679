#include <doctest.h>

#include <set>

#include "acap_gemm/matrix.hpp"
#include "oracles.hpp"

using namespace acap;

TEST_CASE("new matrices are zero-initialized") {
    MatrixU8 one(1, 1);
    CHECK(one(0, 0) == 0);

    MatrixI32 c(2, 3);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 3);
    for (auto v : c.data()) CHECK(v == 0);

    MatrixU8 big(256, 2048);
    CHECK(big.size() == 524288);
}

TEST_CASE("zero dimensions are rejected") {
    CHECK_THROWS_AS(MatrixU8(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(MatrixI32(4, 0), std::invalid_argument);
}

TEST_CASE("fill_random is deterministic and seed-sensitive") {
    MatrixU8 a(16, 16), b(16, 16), c(16, 16);
    fill_random(a, 7);
    fill_random(b, 7);
    fill_random(c, 8);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("fill_random matches the published xorshift64* stream") {
    // Frozen from an independent Python implementation of the generator.
    MatrixU8 a(1, 8);
    fill_random(a, 7);
    const std::uint8_t expected7[] = {174, 174, 34, 46, 17, 116, 43, 68};
    for (std::size_t j = 0; j < 8; ++j) CHECK(a(0, j) == expected7[j]);

    MatrixU8 h(64, 64);
    fill_random(h, 1);
    const std::uint8_t expected1[] = {29, 29, 87, 157, 0, 217, 129, 141};
    for (std::size_t j = 0; j < 8; ++j) CHECK(h(0, j) == expected1[j]);
    std::set<int> distinct(h.data().begin(), h.data().end());
    CHECK(distinct.size() == 256);
    CHECK(distinct.size() >= 200);
}

TEST_CASE("reference_gemm closed forms") {
    SUBCASE("zero A leaves C unchanged") {
        MatrixU8 a(3, 5), b(5, 4);
        fill_random(b, 3);
        MatrixI32 c(3, 4);
        fill_random(c, 4);
        const MatrixI32 before = c;
        reference_gemm(c, a, b);
        CHECK(c == before);
    }
    SUBCASE("identity A adds B") {
        MatrixU8 a(6, 6), b(6, 6);
        for (std::size_t i = 0; i < 6; ++i) a(i, i) = 1;
        fill_random(b, 11);
        MatrixI32 c(6, 6);
        fill_random(c, 12);
        MatrixI32 expected = c;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) expected(i, j) = wrap_add(expected(i, j), b(i, j));
        reference_gemm(c, a, b);
        CHECK(c == expected);
    }
    SUBCASE("all-255 4x4x4") {
        MatrixU8 a(4, 4), b(4, 4);
        for (auto& v : a.data()) v = 255;
        for (auto& v : b.data()) v = 255;
        MatrixI32 c(4, 4);
        reference_gemm(c, a, b);
        for (auto v : c.data()) CHECK(v == 260100);
    }
}

TEST_CASE("reference_gemm rejects nonconforming shapes") {
    MatrixU8 a(3, 4), b(5, 2);
    MatrixI32 c(3, 2);
    CHECK_THROWS_AS(reference_gemm(c, a, b), std::invalid_argument);
    MatrixU8 b2(4, 2);
    MatrixI32 c2(2, 2);
    CHECK_THROWS_AS(reference_gemm(c2, a, b2), std::invalid_argument);
}

TEST_CASE("store wraps to 32 bits") {
    // 255*255*k exceeds 2^31 for k = 40000: 2,601,000,000.
    const std::size_t k = 40000;
    MatrixU8 a(1, k), b(k, 1);
    for (auto& v : a.data()) v = 255;
    for (auto& v : b.data()) v = 255;
    MatrixI32 c(1, 1);
    reference_gemm(c, a, b);
    CHECK(c(0, 0) == static_cast<std::int32_t>(static_cast<std::uint32_t>(2601000000ull)));
    CHECK(c(0, 0) < 0);
}

TEST_CASE("property: bilinear modulo 2^32 and B = I gives C += A") {
    testing::CaseRng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = rng.uniform(1, 9), k = rng.uniform(1, 9), n = rng.uniform(1, 9);
        MatrixU8 a1(m, k), a2(m, k), b(k, n);
        fill_random(a1, rng.next());
        fill_random(b, rng.next());
        // keep a1 + a2 inside u8
        for (std::size_t i = 0; i < a1.size(); ++i) {
            a1.data()[i] = static_cast<std::uint8_t>(a1.data()[i] / 2);
            a2.data()[i] = static_cast<std::uint8_t>(rng.next() % 128);
        }
        MatrixU8 sum(m, k);
        for (std::size_t i = 0; i < sum.size(); ++i)
            sum.data()[i] = static_cast<std::uint8_t>(a1.data()[i] + a2.data()[i]);

        MatrixI32 c1(m, n), c2(m, n), cs(m, n);
        reference_gemm(c1, a1, b);
        reference_gemm(c2, a2, b);
        reference_gemm(cs, sum, b);
        for (std::size_t i = 0; i < cs.size(); ++i)
            CHECK(cs.data()[i] == wrap_add(c1.data()[i], c2.data()[i]));

        MatrixU8 eye(k, k);
        for (std::size_t i = 0; i < k; ++i) eye(i, i) = 1;
        MatrixI32 c(m, k);
        fill_random(c, rng.next());
        MatrixI32 expected = c;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < k; ++j) expected(i, j) = wrap_add(expected(i, j), a1(i, j));
        reference_gemm(c, a1, eye);
        CHECK(c == expected);
    }
}

TEST_CASE("checksum distinguishes single-element changes") {
    MatrixI32 c(4, 4);
    fill_random(c, 5);
    const auto h = checksum(c);
    c(3, 3) += 1;
    CHECK(checksum(c) != h);
}
