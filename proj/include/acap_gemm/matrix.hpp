#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace acap {

/// Dense row-major matrix. A and B operands use std::uint8_t, C uses std::int32_t.
template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("matrix dimensions must be positive, got " +
                                        std::to_string(rows) + "x" + std::to_string(cols));
        }
        data_.assign(rows * cols, T{0});
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    std::span<T> row(std::size_t i) noexcept { return std::span<T>(data_).subspan(i * cols_, cols_); }
    std::span<const T> row(std::size_t i) const noexcept {
        return std::span<const T>(data_).subspan(i * cols_, cols_);
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using MatrixU8 = Matrix<std::uint8_t>;
using MatrixI32 = Matrix<std::int32_t>;

/// xorshift64* (Vigna 2016): shifts 12/25/27, multiplier 0x2545F4914F6CDD1D.
/// A zero seed is remapped so the state never sticks at zero.
class XorShift64Star {
public:
    explicit XorShift64Star(std::uint64_t seed) noexcept
        : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ull) {}

    std::uint64_t next() noexcept {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1Dull;
    }

private:
    std::uint64_t state_;
};

/// Fills m in row-major order with the low byte of successive generator outputs.
void fill_random(MatrixU8& m, std::uint64_t seed);
/// Same generator, low 32 bits per element.
void fill_random(MatrixI32& m, std::uint64_t seed);

/// Naive triple loop: C[i,j] += sum_t A[i,t] * B[t,j]. The sum is exact in 64 bits and
/// the store wraps to 32-bit two's complement. Throws std::invalid_argument on shape mismatch.
void reference_gemm(MatrixI32& c, const MatrixU8& a, const MatrixU8& b);

/// Two's-complement wraparound add, the store rule shared by every GEMM path.
inline std::int32_t wrap_add(std::int32_t c, std::int64_t delta) noexcept {
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(c) +
                                     static_cast<std::uint32_t>(static_cast<std::uint64_t>(delta)));
}

/// FNV-1a over the little-endian bytes of every element.
std::uint64_t checksum(const MatrixI32& c) noexcept;

}  // namespace acap
