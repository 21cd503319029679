#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>
#include <tuple>
#include <vector>

#include "acap_gemm/memory_model.hpp"

namespace acap {

/// Loop of the blocked algorithm in which a transfer is issued.
/// L1: jc over n, L2: pc over k, L3: ic over m, L4: jr over nc, L5: ir over mc,
/// L6: the micro-kernel's k loop.
enum class LoopSite { L2, L3, L4, L5, L6 };

std::string_view to_string(LoopSite site) noexcept;

struct LoopIndex {
    std::uint32_t jc = 0, pc = 0, ic = 0, jr = 0, ir = 0;

    auto tie() const noexcept { return std::tie(jc, pc, ic, jr, ir); }
    friend bool operator==(const LoopIndex&, const LoopIndex&) = default;
};

struct TransferEvent {
    Operand operand;
    Level from;
    Level to;
    std::uint64_t bytes = 0;
    LoopSite site;
    std::uint32_t tile = 0;
    LoopIndex at;
    std::uint32_t ksteps = 0;  // k-steps consumed, set on L6 events

    friend bool operator==(const TransferEvent&, const TransferEvent&) = default;
};

/// Ordered list of modeled transfers. Events from concurrent tiles are merged and
/// put into canonical order so the log does not depend on the schedule.
class TransferLog {
public:
    void record(const TransferEvent& e) { events_.push_back(e); }
    void append(const TransferLog& other);
    void sort_canonical();

    const std::vector<TransferEvent>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }

    struct Tally {
        std::uint64_t count = 0;
        std::uint64_t bytes = 0;
    };
    Tally tally(Operand op, LoopSite site) const noexcept;
    /// Events per tile for one (operand, site) pair.
    std::map<std::uint32_t, std::uint64_t> count_by_tile(Operand op, LoopSite site) const;

    /// Reuse counts observed in the log:
    ///   Bc: Br-copy bytes / Bc-pack bytes; Ac: Ar-stream bytes / Ac-pack bytes;
    ///   Br: Br-read bytes / Br-copy bytes; Cr: k-steps per Cr load.
    ReuseFactors reuse() const;

private:
    std::vector<TransferEvent> events_;
};

}  // namespace acap
