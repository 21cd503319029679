// Wall-clock comparison of the reference triple loop, the blocked GEMM on one worker and
// the blocked GEMM with OpenMP workers. Every run is checked against the reference.

#include <chrono>
#include <cstdio>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "acap_gemm/blocking.hpp"
#include "acap_gemm/config.hpp"
#include "acap_gemm/matrix.hpp"

namespace {

template <typename F>
double best_of(int reps, F&& run) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blocked GEMM benchmark"};
    std::string dims_text = "256x256x2048";
    std::size_t tiles = 32;
    int reps = 3;
    int threads = 0;
    app.add_option("--dims", dims_text, "problem size MxNxK");
    app.add_option("--tiles", tiles, "logical tiles for the blocked runs");
    app.add_option("--reps", reps, "repetitions, best time is reported")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "OpenMP workers for the parallel run (0: runtime default)");
    CLI11_PARSE(app, argc, argv);

    acap::ProblemDims d;
    try {
        d = acap::parse_dims(dims_text);
    } catch (const acap::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    }
    const acap::BlockingParams params{acap::round_up(d.m, 8), acap::round_up(d.n, 8), d.k, 8, 8};
    acap::MatrixU8 a(d.m, d.k), b(d.k, d.n);
    acap::fill_random(a, 1);
    acap::fill_random(b, 2);

    acap::MatrixI32 expect(d.m, d.n);
    const double t_ref = best_of(reps, [&] {
        expect = acap::MatrixI32(d.m, d.n);
        acap::reference_gemm(expect, a, b);
    });

    acap::GemmOptions serial;
    serial.record_log = false;
    serial.use_parallel = false;
    acap::GemmOptions parallel = serial;
    parallel.use_parallel = true;
    parallel.threads = threads;

    bool ok = true;
    auto blocked = [&](const acap::GemmOptions& opt) {
        return best_of(reps, [&] {
            acap::MatrixI32 c(d.m, d.n);
            acap::gemm_blocked(c, a, b, params, tiles, opt);
            ok = ok && c == expect;
        });
    };
    const double t_serial = blocked(serial);
    const double t_parallel = blocked(parallel);

    const double macs = static_cast<double>(d.m) * d.n * d.k;
    const int workers = threads > 0 ? threads : omp_get_max_threads();
    std::printf("dims %zux%zux%zu, %s, tiles %zu, %d workers\n", d.m, d.n, d.k, params.to_string().c_str(), tiles,
                workers);
    std::printf("%-18s %10s %10s\n", "variant", "seconds", "GMAC/s");
    std::printf("%-18s %10.4f %10.3f\n", "reference", t_ref, macs / t_ref * 1e-9);
    std::printf("%-18s %10.4f %10.3f\n", "blocked serial", t_serial, macs / t_serial * 1e-9);
    std::printf("%-18s %10.4f %10.3f\n", "blocked openmp", t_parallel, macs / t_parallel * 1e-9);
    std::printf("results %s\n", ok ? "match" : "DIFFER");
    return ok ? 0 : 1;
}
