// acap-gemm: verification, cycle simulation, ablation and CCP reports for the blocked
// UINT8 GEMM. Settings come from a JSON config (--config or ACAP_GEMM_CONFIG) with flags
// taking precedence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "acap_gemm/config.hpp"
#include "acap_gemm/report.hpp"

namespace {

struct Flags {
    std::string config;
    std::string dims;
    std::string tiles;
    std::string profile;
    std::optional<std::uint64_t> seed;
    std::string format;
    std::string out;
    std::string br_mode;
    std::optional<std::size_t> kc;
    std::optional<std::uint64_t> reserve;
    std::string units;
    std::optional<int> threads;
    bool inject_fault = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config file (fallback: $ACAP_GEMM_CONFIG)");
    cmd->add_option("--dims", f.dims, "problem size MxNxK");
    cmd->add_option("--tiles", f.tiles, "comma-separated tile counts");
    cmd->add_option("--profile", f.profile, "blocking profile: paper | derived | dims");
    cmd->add_option("--seed", f.seed, "PRNG seed for operands");
    cmd->add_option("--format", f.format, "csv | json");
    cmd->add_option("--out", f.out, "output path (default stdout)");
    cmd->add_option("--br-mode", f.br_mode, "Br transfer: stream | gmio");
    cmd->add_option("--kc", f.kc, "micro-kernel depth for ablate");
    cmd->add_option("--reserve", f.reserve, "local memory bytes reserved when deriving kc");
    cmd->add_option("--units", f.units, "MB convention: binary | decimal");
    cmd->add_option("--threads", f.threads, "OpenMP workers (does not change results)");
    cmd->add_flag("--inject-fault", f.inject_fault, "corrupt one micro-tile (verification self-test)");
}

acap::RunConfig build_config(const Flags& f) {
    acap::RunConfig cfg;
    std::string path = f.config;
    if (path.empty()) {
        if (const char* env = std::getenv("ACAP_GEMM_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) acap::apply_config_file(cfg, path);

    if (!f.dims.empty()) cfg.dims = acap::parse_dims(f.dims);
    if (!f.tiles.empty()) cfg.tiles = acap::parse_tiles(f.tiles);
    if (!f.profile.empty()) {
        try {
            cfg.profile = acap::parse_profile(f.profile);
        } catch (const std::invalid_argument& e) {
            throw acap::ConfigError(e.what());
        }
        cfg.explicit_params.reset();
    }
    if (f.seed) cfg.seed = *f.seed;
    if (!f.format.empty()) cfg.format = acap::parse_format(f.format);
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.br_mode.empty()) cfg.br_mode = acap::parse_br_mode(f.br_mode);
    if (f.kc) cfg.kc = *f.kc;
    if (f.reserve) cfg.local_reserve_bytes = *f.reserve;
    if (!f.units.empty()) cfg.memory.units = acap::parse_units(f.units);
    if (f.threads) cfg.threads = *f.threads;
    if (f.inject_fault) cfg.inject_fault = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blocked UINT8 GEMM for the Versal ACAP: functional emulation and cycle model"};
    app.require_subcommand(1);
    Flags flags;
    for (const char* name : {"verify", "simulate", "ablate", "ccp"}) {
        add_common(app.add_subcommand(name), flags);
    }
    app.get_subcommand("verify")->description("run the blocked GEMM against the reference triple loop");
    app.get_subcommand("simulate")->description("strong-scaling cycle table over tile counts");
    app.get_subcommand("ablate")->description("micro-kernel cycles: Ar reads only, mac16 only, baseline");
    app.get_subcommand("ccp")->description("derive cache configuration parameters and check footprints");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : acap::kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    acap::CommandOutput out;
    acap::RunConfig cfg;
    try {
        cfg = build_config(flags);
        out = acap::run_command(command, cfg);
    } catch (const acap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return acap::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return acap::kExitFailure;
    }

    for (const auto& m : out.messages) std::cerr << m << '\n';
    if (!out.body.empty()) {
        if (cfg.out.empty()) {
            std::cout << out.body;
        } else {
            std::ofstream file(cfg.out, std::ios::binary);
            if (!file || !(file << out.body)) {
                std::cerr << "error: cannot write '" << cfg.out << "'\n";
                return acap::kExitFailure;
            }
        }
    }
    return out.exit_code;
}
