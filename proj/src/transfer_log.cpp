#include "acap_gemm/transfer_log.hpp"

#include <algorithm>

namespace acap {

std::string_view to_string(LoopSite site) noexcept {
    switch (site) {
        case LoopSite::L2: return "L2";
        case LoopSite::L3: return "L3";
        case LoopSite::L4: return "L4";
        case LoopSite::L5: return "L5";
        case LoopSite::L6: return "L6";
    }
    return "?";
}

void TransferLog::append(const TransferLog& other) {
    events_.insert(events_.end(), other.events_.begin(), other.events_.end());
}

void TransferLog::sort_canonical() {
    auto key = [](const TransferEvent& e) {
        return std::make_tuple(e.at.jc, e.at.pc, e.at.ic, e.at.jr, e.at.ir, static_cast<int>(e.site),
                               static_cast<int>(e.operand), static_cast<int>(e.from), static_cast<int>(e.to),
                               e.tile, e.bytes);
    };
    std::stable_sort(events_.begin(), events_.end(),
                     [&](const TransferEvent& a, const TransferEvent& b) { return key(a) < key(b); });
}

TransferLog::Tally TransferLog::tally(Operand op, LoopSite site) const noexcept {
    Tally t;
    for (const auto& e : events_) {
        if (e.operand == op && e.site == site) {
            ++t.count;
            t.bytes += e.bytes;
        }
    }
    return t;
}

std::map<std::uint32_t, std::uint64_t> TransferLog::count_by_tile(Operand op, LoopSite site) const {
    std::map<std::uint32_t, std::uint64_t> out;
    for (const auto& e : events_) {
        if (e.operand == op && e.site == site) ++out[e.tile];
    }
    return out;
}

ReuseFactors TransferLog::reuse() const {
    auto ratio = [](std::uint64_t num, std::uint64_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    const Tally bc_pack = tally(Operand::Bc, LoopSite::L2);
    const Tally ac_pack = tally(Operand::Ac, LoopSite::L3);
    const Tally br_copy = tally(Operand::Br, LoopSite::L4);
    const Tally ar_stream = tally(Operand::Ar, LoopSite::L6);
    const Tally br_read = tally(Operand::Br, LoopSite::L6);

    std::uint64_t ksteps = 0, cr_loads = 0;
    for (const auto& e : events_) {
        if (e.operand == Operand::Br && e.site == LoopSite::L6) ksteps += e.ksteps;
        if (e.operand == Operand::Cr && e.site == LoopSite::L5 && e.to == Level::registers) ++cr_loads;
    }
    ReuseFactors r;
    r.bc = ratio(br_copy.bytes, bc_pack.bytes);
    r.ac = ratio(ar_stream.bytes, ac_pack.bytes);
    r.br = ratio(br_read.bytes, br_copy.bytes);
    r.cr = ratio(ksteps, cr_loads);
    return r;
}

}  // namespace acap
