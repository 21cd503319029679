#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acap {

/// Cache configuration parameters (mc, nc, kc) plus the micro-kernel shape (mr, nr).
struct BlockingParams {
    std::size_t mc = 0;
    std::size_t nc = 0;
    std::size_t kc = 0;
    std::size_t mr = 8;
    std::size_t nr = 8;

    /// Throws std::invalid_argument unless all fields are positive and mc, nc are
    /// multiples of mr, nr.
    void validate() const {
        if (mc == 0 || nc == 0 || kc == 0 || mr == 0 || nr == 0) {
            throw std::invalid_argument("blocking parameters must be positive: " + to_string());
        }
        if (mc % mr != 0) throw std::invalid_argument("mc must be a multiple of mr: " + to_string());
        if (nc % nr != 0) throw std::invalid_argument("nc must be a multiple of nr: " + to_string());
    }

    std::string to_string() const {
        return "mc=" + std::to_string(mc) + " nc=" + std::to_string(nc) + " kc=" + std::to_string(kc) +
               " mr=" + std::to_string(mr) + " nr=" + std::to_string(nr);
    }

    friend bool operator==(const BlockingParams&, const BlockingParams&) = default;
};

inline std::size_t ceil_div(std::size_t a, std::size_t b) noexcept { return (a + b - 1) / b; }
inline std::size_t round_up(std::size_t a, std::size_t b) noexcept { return ceil_div(a, b) * b; }

}  // namespace acap
