#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "acap_gemm/config.hpp"
#include "acap_gemm/report.hpp"

using namespace acap;

namespace {

struct Csv {
    std::vector<std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string at(std::size_t row, const std::string& col) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == col) return rows.at(row).at(i);
        throw std::out_of_range("no column " + col);
    }
    bool has_meta(const std::string& line) const {
        for (const auto& m : meta)
            if (m == line) return true;
        return false;
    }
};

// Plain comma split; tables under test only quote cells in the ccp operands column.
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            csv.meta.push_back(line.substr(2));
        } else if (csv.header.empty()) {
            csv.header = split(line);
        } else {
            csv.rows.push_back(split(line));
        }
    }
    return csv;
}

RunConfig config(ProblemDims dims, std::vector<std::size_t> tiles) {
    RunConfig cfg;
    cfg.dims = dims;
    cfg.tiles = std::move(tiles);
    return cfg;
}

}  // namespace

TEST_CASE("verify passes on blocked and single-kernel problems") {
    RunConfig cfg = config({64, 64, 128}, {4});
    cfg.explicit_params = BlockingParams{32, 32, 64, 8, 8};
    auto out = run_command("verify", cfg);
    CHECK(out.exit_code == kExitOk);
    auto csv = parse_csv(out.body);
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.at(0, "status") == "PASS");
    CHECK(csv.at(0, "tiles") == "4");
    CHECK(csv.has_meta("dims: 64x64x128"));
    CHECK(csv.has_meta("params: mc=32 nc=32 kc=64 mr=8 nr=8"));
    CHECK(csv.at(0, "micro_kernels") == std::to_string(8 * 8 * 2));

    out = run_command("verify", config({8, 8, 16}, {1}));
    CHECK(out.exit_code == kExitOk);
    CHECK(parse_csv(out.body).at(0, "status") == "PASS");
}

TEST_CASE("verify reports the first mismatching element of a corrupted kernel") {
    RunConfig cfg = config({24, 24, 32}, {1, 2});
    cfg.inject_fault = true;
    const auto out = run_command("verify", cfg);
    CHECK(out.exit_code == kExitValidation);
    auto csv = parse_csv(out.body);
    CHECK(csv.at(0, "status") == "FAIL");
    CHECK(csv.at(0, "mismatch_row") == "0");
    CHECK(csv.at(0, "mismatch_col") == "0");
    REQUIRE_FALSE(out.messages.empty());
    CHECK(out.messages[0].find("(0, 0)") != std::string::npos);
}

TEST_CASE("verify refuses problems beyond the oracle guard") {
    const auto out = run_command("verify", config({2048, 2048, 1024}, {1}));
    CHECK(out.exit_code == kExitConfig);
}

TEST_CASE("simulate reproduces the per-tile performance column") {
    const auto out = run_command("simulate", RunConfig{});
    REQUIRE(out.exit_code == kExitOk);
    const auto csv = parse_csv(out.body);
    const std::vector<std::string> cols{"tiles", "copy_cr", "arithmetic", "total", "macs_per_cycle_per_tile"};
    for (std::size_t i = 0; i < cols.size(); ++i) CHECK(csv.header[i] == cols[i]);
    REQUIRE(csv.rows.size() == 6);
    const char* perf[] = {"31.6", "31.4", "31.4", "31.3", "30.7", "29.8"};
    const char* totals[] = {"4354560", "2186496", "1094528", "549952", "279648", "143824"};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(csv.at(i, "macs_per_cycle_per_tile") == perf[i]);
        CHECK(csv.at(i, "total") == totals[i]);
        CHECK(csv.at(i, "arithmetic") == "4110");
    }
    CHECK(csv.at(0, "unmodeled_overlap") == "-660460");
    bool has_cost = false, has_memory = false;
    for (const auto& m : csv.meta) {
        has_cost |= m.rfind("cost_model: {", 0) == 0;
        has_memory |= m.rfind("memory: {", 0) == 0;
    }
    CHECK(has_cost);
    CHECK(has_memory);
}

TEST_CASE("simulate with one tile count yields one row") {
    const auto out = run_command("simulate", config({256, 256, 2048}, {1}));
    CHECK(parse_csv(out.body).rows.size() == 1);
}

TEST_CASE("simulate json carries the same values") {
    RunConfig cfg;
    const auto csv = parse_csv(run_command("simulate", cfg).body);
    cfg.format = OutputFormat::json;
    const auto doc = nlohmann::json::parse(run_command("simulate", cfg).body);
    CHECK(doc["command"] == "simulate");
    CHECK(doc["cost_model"]["br_copy_cycles"] == 3280.0);
    CHECK(doc["memory"]["local_kb"] == 32.0);
    REQUIRE(doc["rows"].size() == csv.rows.size());
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const auto& row = doc["rows"][i];
        CHECK(row["tiles"].get<long long>() == std::stoll(csv.at(i, "tiles")));
        CHECK(row["total"].get<long long>() == std::stoll(csv.at(i, "total")));
        CHECK(row["macs_per_cycle_per_tile"].get<double>() == std::stod(csv.at(i, "macs_per_cycle_per_tile")));
        CHECK(row["imbalanced"] == false);
    }
}

TEST_CASE("simulate output does not depend on worker count") {
    RunConfig cfg;
    const auto first = run_command("simulate", cfg).body;
    cfg.threads = 4;
    CHECK(run_command("simulate", cfg).body == first);
    CHECK(run_command("simulate", RunConfig{}).body == first);
}

TEST_CASE("ablate rows") {
    auto out = run_command("ablate", RunConfig{});
    REQUIRE(out.exit_code == kExitOk);
    auto csv = parse_csv(out.body);
    REQUIRE(csv.rows.size() == 3);
    CHECK(csv.rows[0] == std::vector<std::string>{"read_ar_only", "4106", "4864"});
    CHECK(csv.rows[1] == std::vector<std::string>{"mac_only", "1042", "1024"});
    CHECK(csv.rows[2] == std::vector<std::string>{"baseline", "4110", "5888"});
    CHECK(csv.has_meta("estimate_macs_per_cycle: 26.95"));
    CHECK(csv.has_meta("printed_estimate_consistent: false"));
    CHECK(csv.has_meta("inner_loop_macs_per_byte: 8.00"));
    CHECK(out.messages.empty());

    RunConfig one;
    one.kc = 16;
    csv = parse_csv(run_command("ablate", one).body);
    CHECK(csv.at(0, "theoretical") == "38");
    CHECK(csv.at(1, "theoretical") == "8");
    CHECK(csv.at(2, "theoretical") == "46");

    RunConfig odd;
    odd.kc = 20;
    out = run_command("ablate", odd);
    CHECK(out.exit_code == kExitOk);
    REQUIRE(out.messages.size() == 1);
    CHECK(out.messages[0].find("zero-padded") != std::string::npos);
}

TEST_CASE("ccp: paper profile fits local memory, Block RAM overflow is reported") {
    const auto out = run_command("ccp", RunConfig{});
    CHECK(out.exit_code == kExitCapacity);
    const auto csv = parse_csv(out.body);
    CHECK(csv.has_meta("params: mc=4496 nc=1200 kc=3750 mr=8 nr=8"));
    CHECK(csv.has_meta("br_footprint_kb: 29.3"));
    CHECK(csv.at(1, "level") == "local");
    CHECK(csv.at(1, "status") == "ok");
    CHECK(csv.at(3, "level") == "block_ram");
    CHECK(csv.at(3, "status") == "overflow");
    CHECK(csv.at(4, "operands") == "A, B, C");
    REQUIRE(out.messages.size() == 1);
    CHECK(out.messages[0].find("block_ram") != std::string::npos);
}

TEST_CASE("ccp: derived profile passes every level") {
    RunConfig cfg;
    cfg.profile = Profile::derived;
    const auto out = run_command("ccp", cfg);
    CHECK(out.exit_code == kExitOk);
    CHECK(parse_csv(out.body).has_meta("params: mc=4512 nc=1176 kc=3776 mr=8 nr=8"));
}

TEST_CASE("ccp: GMIO with kc = 3750 overflows local memory") {
    RunConfig cfg;
    cfg.br_mode = BrTransfer::gmio;
    const auto out = run_command("ccp", cfg);
    CHECK(out.exit_code == kExitCapacity);
    const auto csv = parse_csv(out.body);
    CHECK(csv.has_meta("br_footprint_kb: 87.9"));
    CHECK(csv.at(1, "status") == "overflow");
}

TEST_CASE("ccp: tiny memory fails and names the level") {
    RunConfig cfg;
    cfg.memory.local_kb = 1;
    const auto out = run_command("ccp", cfg);
    CHECK(out.exit_code == kExitCapacity);
    REQUIRE(out.messages.size() == 1);
    CHECK(out.messages[0].find("'local'") != std::string::npos);
}

TEST_CASE("config json overrides defaults") {
    RunConfig cfg;
    apply_config_json(cfg, R"({"dims": "64x32x16", "tiles": [1, 4], "seed": 9, "profile": "derived",
        "cost_model": {"br_copy_cycles": 100, "cr_copy_table": {"1": 10, "2": 20}},
        "memory": {"local_kb": 64, "units": "decimal"}, "format": "json", "br_mode": "gmio", "kc": 32})");
    CHECK(cfg.dims == ProblemDims{64, 32, 16});
    CHECK(cfg.tiles == std::vector<std::size_t>{1, 4});
    CHECK(cfg.seed == 9);
    CHECK(cfg.profile == Profile::derived);
    CHECK(cfg.cost.br_copy_cycles == 100);
    CHECK(cfg.cost.cr_copy_table.size() == 2);
    CHECK(cfg.cost.ar_read64_cycles == 19);
    CHECK(cfg.memory.bytes(Level::local) == 64000);
    CHECK(cfg.format == OutputFormat::json);
    CHECK(cfg.br_mode == BrTransfer::gmio);
    CHECK(cfg.kc == 32u);

    apply_config_json(cfg, R"({"dims": [8, 8, 8], "params": {"mc": 8, "nc": 8, "kc": 8}})");
    CHECK(cfg.dims == ProblemDims{8, 8, 8});
    CHECK(cfg.resolve_params(Profile::dims) == BlockingParams{8, 8, 8, 8, 8});
}

TEST_CASE("config errors") {
    RunConfig cfg;
    CHECK_THROWS_AS(apply_config_json(cfg, "{"), ConfigError);
    CHECK_THROWS_AS(apply_config_json(cfg, R"({"dimz": "1x1x1"})"), ConfigError);
    CHECK_THROWS_AS(apply_config_json(cfg, R"({"seed": "abc"})"), ConfigError);
    CHECK_THROWS_AS(apply_config_json(cfg, R"({"memory": {"l1": 3}})"), ConfigError);
    CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/acap.json"), ConfigError);
    CHECK_THROWS_AS(parse_dims("64x64"), ConfigError);
    CHECK_THROWS_AS(parse_dims("0x4x4"), ConfigError);
    CHECK_THROWS_AS(parse_tiles("1,,2"), ConfigError);
    CHECK_THROWS_AS(parse_tiles("0"), ConfigError);
    CHECK(parse_tiles("1,2,32") == std::vector<std::size_t>{1, 2, 32});

    RunConfig bad;
    bad.cost.cr_copy_table = {{1, 50}, {2, 10}};
    CHECK(run_command("simulate", bad).exit_code == kExitConfig);
    CHECK(run_command("bogus", RunConfig{}).exit_code == kExitConfig);
}
