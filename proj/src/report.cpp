#include "acap_gemm/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "acap_gemm/blocking.hpp"
#include "acap_gemm/matrix.hpp"

namespace acap {

using nlohmann::json;

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    if (s == "-0" || s.rfind("-0.", 0) == 0) {
        // avoid "-0.0" for tiny negatives
        bool all_zero = s.find_first_not_of("-0.") == std::string::npos;
        if (all_zero) s.erase(0, 1);
    }
    return s;
}

// Integral cycle counts print without decimals, anything else with two.
std::string cycles_text(double v) {
    if (std::abs(v - std::round(v)) < 1e-9) return std::to_string(std::llround(v));
    return fixed(v, 2);
}

Cell cycles_cell(double v) {
    const std::string s = cycles_text(v);
    return {s, s};
}

std::string params_text(const BlockingParams& p) { return p.to_string(); }

std::string dims_text(const ProblemDims& d) {
    return std::to_string(d.m) + "x" + std::to_string(d.n) + "x" + std::to_string(d.k);
}

std::string cost_model_json(const CostModel& cm) {
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (const auto& [tiles, cycles] : cm.cr_copy_table) table[std::to_string(tiles)] = cycles;
    nlohmann::ordered_json j = {{"ar_read64_cycles", cm.ar_read64_cycles},
              {"ar_merged_iter_cycles", cm.ar_merged_iter_cycles},
              {"mac16_cycles", cm.mac16_cycles},
              {"mac16_per_iter", cm.mac16_per_iter},
              {"loop_overhead_total", cm.loop_overhead_total},
              {"baseline_epilogue", cm.baseline_epilogue},
              {"br_copy_cycles", cm.br_copy_cycles},
              {"cr_copy_table", table}};
    return j.dump();
}

std::string memory_json(const MemorySpec& mem) {
    nlohmann::ordered_json j = {{"registers_kb", mem.registers_kb},
              {"local_kb", mem.local_kb},
              {"ultra_ram_mb", mem.ultra_ram_mb},
              {"block_ram_mb", mem.block_ram_mb},
              {"ddr_gb", mem.ddr_gb},
              {"units", mem.units == MbConvention::binary ? "binary" : "decimal"}};
    return j.dump();
}

Report make_report(const char* command, const RunConfig& cfg) {
    Report r;
    r.command = command;
    r.cost_model_json = cost_model_json(cfg.cost);
    r.memory_json = memory_json(cfg.memory);
    return r;
}

CommandOutput finish(const Report& report, const RunConfig& cfg, int exit_code = kExitOk) {
    CommandOutput out;
    out.exit_code = exit_code;
    out.body = report.render(cfg.format);
    return out;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

double kb(std::uint64_t bytes, MbConvention units) {
    return static_cast<double>(bytes) / (units == MbConvention::binary ? 1024.0 : 1000.0);
}

constexpr std::uint64_t kOracleMacLimit = std::uint64_t{1} << 31;

}  // namespace

Cell cell(long long v) {
    const std::string s = std::to_string(v);
    return {s, s};
}

Cell cell(std::string_view s) {
    std::string csv(s);
    if (csv.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : csv) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        csv = quoted + "\"";
    }
    return {csv, json(std::string(s)).dump()};
}

Cell cell_fixed(double v, int decimals) {
    const std::string s = fixed(v, decimals);
    return {s, s};
}

Cell cell_bool(bool b) { return {b ? "true" : "false", b ? "true" : "false"}; }

Cell cell_empty() { return {"", "null"}; }

std::string Report::render(OutputFormat format) const {
    std::ostringstream os;
    if (format == OutputFormat::csv) {
        os << "# command: " << command << '\n';
        for (const auto& [key, value] : meta) os << "# " << key << ": " << value << '\n';
        os << "# cost_model: " << cost_model_json << '\n';
        os << "# memory: " << memory_json << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].csv;
            os << '\n';
        }
        return os.str();
    }
    // Hand-assembled so cell text is emitted verbatim and key order stays fixed.
    os << "{\n  \"command\": " << json(command).dump() << ",\n  \"meta\": {";
    for (std::size_t i = 0; i < meta.size(); ++i) {
        os << (i ? ", " : "") << json(meta[i].first).dump() << ": " << json(meta[i].second).dump();
    }
    os << "},\n  \"cost_model\": " << cost_model_json << ",\n  \"memory\": " << memory_json
       << ",\n  \"columns\": " << json(columns).dump() << ",\n  \"rows\": [";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        os << (r ? ",\n    {" : "\n    {");
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            os << (i ? ", " : "") << json(columns[i]).dump() << ": " << rows[r][i].json;
        }
        os << "}";
    }
    os << (rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

CommandOutput cmd_verify(const RunConfig& cfg) {
    cfg.validate();
    const ProblemDims d = cfg.dims;
    const double macs = static_cast<double>(d.m) * static_cast<double>(d.n) * static_cast<double>(d.k);
    if (macs > static_cast<double>(kOracleMacLimit)) {
        throw ConfigError("verify: " + dims_text(d) + " needs more than 2^31 MACs, too large for the oracle");
    }
    const Profile profile = cfg.effective_profile(Profile::dims);
    const BlockingParams params = cfg.resolve_params(Profile::dims);

    MatrixU8 a(d.m, d.k), b(d.k, d.n);
    MatrixI32 c0(d.m, d.n);
    fill_random(a, cfg.seed);
    fill_random(b, cfg.seed + 1);
    fill_random(c0, cfg.seed + 2);
    MatrixI32 expected = c0;
    reference_gemm(expected, a, b);

    Report report = make_report("verify", cfg);
    report.meta = {{"dims", dims_text(d)},
                   {"profile", cfg.explicit_params ? "explicit" : std::string(to_string(profile))},
                   {"params", params_text(params)},
                   {"seed", std::to_string(cfg.seed)},
                   {"reference_checksum", hex64(checksum(expected))}};
    report.columns = {"tiles", "status", "checksum", "micro_kernels", "mismatch_row", "mismatch_col"};

    CommandOutput out;
    int exit_code = kExitOk;
    GemmOptions opts;
    opts.record_log = false;
    opts.threads = cfg.threads;
    opts.inject_fault = cfg.inject_fault;
    for (std::size_t tiles : cfg.tiles) {
        MatrixI32 actual = c0;
        const GemmResult res = gemm_blocked(actual, a, b, params, tiles, opts);
        std::uint64_t kernels = 0;
        for (auto v : res.kernels_per_tile) kernels += v;

        std::optional<std::pair<std::size_t, std::size_t>> bad;
        for (std::size_t i = 0; i < d.m && !bad; ++i) {
            for (std::size_t j = 0; j < d.n; ++j) {
                if (actual(i, j) != expected(i, j)) {
                    bad = {i, j};
                    break;
                }
            }
        }
        if (bad) {
            exit_code = kExitValidation;
            out.messages.push_back("FAIL tiles=" + std::to_string(tiles) + ": first mismatch at (" +
                                   std::to_string(bad->first) + ", " + std::to_string(bad->second) + "): expected " +
                                   std::to_string(expected(bad->first, bad->second)) + ", got " +
                                   std::to_string(actual(bad->first, bad->second)));
        }
        report.rows.push_back({cell(static_cast<long long>(tiles)), cell(bad ? "FAIL" : "PASS"),
                               cell(hex64(checksum(actual))), cell(static_cast<long long>(kernels)),
                               bad ? cell(static_cast<long long>(bad->first)) : cell_empty(),
                               bad ? cell(static_cast<long long>(bad->second)) : cell_empty()});
    }
    CommandOutput rendered = finish(report, cfg, exit_code);
    rendered.messages = std::move(out.messages);
    return rendered;
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
    cfg.validate();
    const Profile profile = cfg.effective_profile(Profile::dims);
    const BlockingParams params = cfg.resolve_params(Profile::dims);
    const auto rows = simulate_sweep(cfg.dims, params, cfg.tiles, cfg.cost);

    Report report = make_report("simulate", cfg);
    report.meta = {{"dims", dims_text(cfg.dims)},
                   {"profile", cfg.explicit_params ? "explicit" : std::string(to_string(profile))},
                   {"params", params_text(params)}};
    report.columns = {"tiles",      "copy_cr",   "arithmetic",      "total",          "macs_per_cycle_per_tile",
                      "br_copies",  "micro_kernels", "speedup",     "efficiency",     "imbalanced",
                      "reference_total", "unmodeled_overlap"};
    for (const auto& r : rows) {
        report.rows.push_back({cell(static_cast<long long>(r.tiles)), cycles_cell(r.copy_cr),
                               cycles_cell(r.arithmetic_loop), cell(std::llround(r.total)),
                               cell_fixed(r.macs_per_cycle_per_tile, 1), cell(static_cast<long long>(r.br_copies)),
                               cell(static_cast<long long>(r.kernel_calls)), cell_fixed(r.speedup, 3),
                               cell_fixed(r.efficiency, 3), cell_bool(r.imbalanced),
                               r.reference_total ? cell(std::llround(*r.reference_total)) : cell_empty(),
                               r.unmodeled_overlap ? cell(std::llround(*r.unmodeled_overlap)) : cell_empty()});
    }
    return finish(report, cfg);
}

CommandOutput cmd_ablate(const RunConfig& cfg) {
    cfg.validate();
    const BlockingParams params = cfg.resolve_params(Profile::dims);
    const std::size_t kc = cfg.kc.value_or(params.kc);

    Report report = make_report("ablate", cfg);
    CommandOutput out;
    if (kc % kUnroll != 0) {
        out.messages.push_back("warning: kc=" + std::to_string(kc) + " is not a multiple of " +
                               std::to_string(kUnroll) + "; the tail iteration is zero-padded to kc=" +
                               std::to_string(round_up(kc, kUnroll)));
    }
    const TheoreticalEstimate est = theoretical_estimate(cfg.cost);
    const CommRatio ratio = compute_to_comm_ratio(kMr, kNr, kc);
    report.meta = {{"kc", std::to_string(kc)},
                   {"iterations", std::to_string(ceil_div(kc, kUnroll))},
                   {"estimate_macs_per_cycle", fixed(est.estimate, 2)},
                   {"printed_estimate", fixed(est.printed, 1)},
                   {"printed_estimate_consistent", est.printed_consistent ? "true" : "false"},
                   {"calibrated_macs_per_cycle", fixed(est.calibrated_single_tile, 2)},
                   {"inner_loop_macs_per_byte", fixed(ratio.inner_loop_macs_per_ar_byte, 2)},
                   {"ops_per_element", fixed(ratio.ops_per_element, 4)}};
    report.columns = {"experiment", "measured", "theoretical"};
    for (KernelMode mode : kAllKernelModes) {
        const CycleEstimate e = microkernel_cycles(kc, mode, cfg.cost);
        report.rows.push_back({cell(to_string(mode)), cycles_cell(e.calibrated), cycles_cell(e.theoretical)});
    }
    CommandOutput rendered = finish(report, cfg);
    rendered.messages = std::move(out.messages);
    return rendered;
}

CommandOutput cmd_ccp(const RunConfig& cfg) {
    cfg.validate();
    const BlockingParams derived = select_ccp(cfg.memory, kMr, kNr, 1, cfg.local_reserve_bytes);
    const Profile profile = cfg.effective_profile(Profile::paper);
    const BlockingParams params = cfg.resolve_params(Profile::paper);
    const FootprintReport fp =
        compute_footprints(params, cfg.memory, cfg.br_mode, cfg.local_reserve_bytes);
    const MbConvention units = cfg.memory.units;

    Report report = make_report("ccp", cfg);
    report.meta = {{"profile", cfg.explicit_params ? "explicit" : std::string(to_string(profile))},
                   {"params", params_text(params)},
                   {"derived_params", params_text(derived)},
                   {"derived_mc_at_kc", std::to_string(max_mc_for(cfg.memory, params.kc, kMr))},
                   {"derived_nc_at_kc", std::to_string(max_nc_for(cfg.memory, params.kc, kNr))},
                   {"br_mode", std::string(to_string(cfg.br_mode))},
                   {"local_reserve_bytes", std::to_string(cfg.local_reserve_bytes)},
                   {"br_data_bytes", std::to_string(fp.br_data_bytes)},
                   {"br_footprint_bytes", std::to_string(fp.br_footprint_bytes)},
                   {"br_footprint_kb", fixed(kb(fp.br_footprint_bytes, units), 1)}};
    report.columns = {"level", "operands", "used_bytes", "used_kb", "capacity_bytes", "capacity_kb", "status"};
    for (const auto& u : fp.levels) {
        report.rows.push_back({cell(to_string(u.level)), cell(u.contents), cell(static_cast<long long>(u.used_bytes)),
                               cell_fixed(kb(u.used_bytes, units), 1), cell(static_cast<long long>(u.capacity_bytes)),
                               cell_fixed(kb(u.capacity_bytes, units), 1), cell(u.fits() ? "ok" : "overflow")});
    }
    CommandOutput out = finish(report, cfg, fp.ok() ? kExitOk : kExitCapacity);
    for (const auto& u : fp.levels) {
        if (!u.fits()) {
            out.messages.push_back("capacity error: level '" + std::string(to_string(u.level)) + "' needs " +
                                   std::to_string(u.used_bytes) + " bytes (" + u.contents + ") but holds " +
                                   std::to_string(u.capacity_bytes));
        }
    }
    return out;
}

CommandOutput run_command(std::string_view name, const RunConfig& cfg) {
    CommandOutput out;
    try {
        if (name == "verify") return cmd_verify(cfg);
        if (name == "simulate") return cmd_simulate(cfg);
        if (name == "ablate") return cmd_ablate(cfg);
        if (name == "ccp") return cmd_ccp(cfg);
        out.exit_code = kExitConfig;
        out.messages.push_back("unknown command '" + std::string(name) + "'");
    } catch (const CapacityError& e) {
        out.exit_code = kExitCapacity;
        out.messages.push_back("capacity error at level '" + std::string(to_string(e.level())) + "': " + e.what());
    } catch (const ConfigError& e) {
        out.exit_code = kExitConfig;
        out.messages.push_back(std::string("config error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        out.exit_code = kExitConfig;
        out.messages.push_back(std::string("invalid argument: ") + e.what());
    }
    return out;
}

}  // namespace acap
