#include "acap_gemm/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace acap {

using nlohmann::json;

namespace {

std::size_t parse_count(std::string_view text, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return value;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!keys.count(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
}

template <typename T>
void read_if(const json& obj, const char* key, T& dst) {
    if (obj.contains(key)) dst = obj.at(key).get<T>();
}

}  // namespace

void RunConfig::validate() const {
    if (dims.m == 0 || dims.n == 0 || dims.k == 0) throw ConfigError("dims must be at least 1 in every dimension");
    if (tiles.empty()) throw ConfigError("tiles list is empty");
    for (std::size_t t : tiles) {
        if (t == 0) throw ConfigError("tile counts must be at least 1");
    }
    if (kc && *kc == 0) throw ConfigError("kc must be at least 1");
    try {
        cost.validate();
        memory.validate();
        if (explicit_params) explicit_params->validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Profile RunConfig::effective_profile(Profile fallback) const { return profile.value_or(fallback); }

BlockingParams RunConfig::resolve_params(Profile fallback) const {
    if (explicit_params) return *explicit_params;
    return resolve_profile(effective_profile(fallback), memory, dims);
}

ProblemDims parse_dims(std::string_view text) {
    std::vector<std::size_t> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find('x', start);
        parts.push_back(parse_count(text.substr(start, pos - start), "dims"));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (parts.size() != 3) throw ConfigError("dims must look like MxNxK, got '" + std::string(text) + "'");
    ProblemDims d{parts[0], parts[1], parts[2]};
    if (d.m == 0 || d.n == 0 || d.k == 0) throw ConfigError("dims must be at least 1 in every dimension");
    return d;
}

std::vector<std::size_t> parse_tiles(std::string_view text) {
    std::vector<std::size_t> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(',', start);
        const std::size_t t = parse_count(text.substr(start, pos - start), "tile count");
        if (t == 0) throw ConfigError("tile counts must be at least 1");
        out.push_back(t);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw ConfigError("format must be csv or json, got '" + std::string(text) + "'");
}

BrTransfer parse_br_mode(std::string_view text) {
    if (text == "stream") return BrTransfer::stream;
    if (text == "gmio") return BrTransfer::gmio;
    throw ConfigError("br_mode must be stream or gmio, got '" + std::string(text) + "'");
}

MbConvention parse_units(std::string_view text) {
    if (text == "binary") return MbConvention::binary;
    if (text == "decimal") return MbConvention::decimal;
    throw ConfigError("units must be binary or decimal, got '" + std::string(text) + "'");
}

void apply_config_json(RunConfig& cfg, std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");

    try {
        reject_unknown(doc,
                       {"dims", "profile", "params", "tiles", "seed", "cost_model", "memory", "br_mode",
                        "local_reserve_bytes", "kc", "format", "out", "threads"},
                       "config");
        if (doc.contains("dims")) {
            const auto& d = doc.at("dims");
            if (d.is_string()) {
                cfg.dims = parse_dims(d.get<std::string>());
            } else {
                const auto v = d.get<std::vector<std::size_t>>();
                if (v.size() != 3) throw ConfigError("dims array needs exactly three entries");
                cfg.dims = {v[0], v[1], v[2]};
            }
        }
        if (doc.contains("profile")) {
            try {
                cfg.profile = parse_profile(doc.at("profile").get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        if (doc.contains("params")) {
            const auto& p = doc.at("params");
            reject_unknown(p, {"mc", "nc", "kc", "mr", "nr"}, "params");
            BlockingParams bp;
            read_if(p, "mc", bp.mc);
            read_if(p, "nc", bp.nc);
            read_if(p, "kc", bp.kc);
            read_if(p, "mr", bp.mr);
            read_if(p, "nr", bp.nr);
            cfg.explicit_params = bp;
        }
        if (doc.contains("tiles")) cfg.tiles = doc.at("tiles").get<std::vector<std::size_t>>();
        read_if(doc, "seed", cfg.seed);
        if (doc.contains("cost_model")) {
            const auto& c = doc.at("cost_model");
            reject_unknown(c,
                           {"ar_read64_cycles", "ar_merged_iter_cycles", "mac16_cycles", "mac16_per_iter",
                            "loop_overhead_total", "baseline_epilogue", "br_copy_cycles", "cr_copy_table"},
                           "cost_model");
            read_if(c, "ar_read64_cycles", cfg.cost.ar_read64_cycles);
            read_if(c, "ar_merged_iter_cycles", cfg.cost.ar_merged_iter_cycles);
            read_if(c, "mac16_cycles", cfg.cost.mac16_cycles);
            read_if(c, "mac16_per_iter", cfg.cost.mac16_per_iter);
            read_if(c, "loop_overhead_total", cfg.cost.loop_overhead_total);
            read_if(c, "baseline_epilogue", cfg.cost.baseline_epilogue);
            read_if(c, "br_copy_cycles", cfg.cost.br_copy_cycles);
            if (c.contains("cr_copy_table")) {
                cfg.cost.cr_copy_table.clear();
                for (const auto& [key, value] : c.at("cr_copy_table").items()) {
                    cfg.cost.cr_copy_table[parse_count(key, "cr_copy_table key")] = value.get<double>();
                }
            }
        }
        if (doc.contains("memory")) {
            const auto& m = doc.at("memory");
            reject_unknown(m, {"registers_kb", "local_kb", "ultra_ram_mb", "block_ram_mb", "ddr_gb", "units"},
                           "memory");
            read_if(m, "registers_kb", cfg.memory.registers_kb);
            read_if(m, "local_kb", cfg.memory.local_kb);
            read_if(m, "ultra_ram_mb", cfg.memory.ultra_ram_mb);
            read_if(m, "block_ram_mb", cfg.memory.block_ram_mb);
            read_if(m, "ddr_gb", cfg.memory.ddr_gb);
            if (m.contains("units")) cfg.memory.units = parse_units(m.at("units").get<std::string>());
        }
        if (doc.contains("br_mode")) cfg.br_mode = parse_br_mode(doc.at("br_mode").get<std::string>());
        read_if(doc, "local_reserve_bytes", cfg.local_reserve_bytes);
        if (doc.contains("kc")) cfg.kc = doc.at("kc").get<std::size_t>();
        if (doc.contains("format")) cfg.format = parse_format(doc.at("format").get<std::string>());
        read_if(doc, "out", cfg.out);
        read_if(doc, "threads", cfg.threads);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_json(cfg, buf.str());
}

}  // namespace acap
