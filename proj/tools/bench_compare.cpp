// Serial vs OpenMP timing for the three data-parallel kernels, with a
// bit-identity check between the two execution modes.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "uavnet/hop_analysis.hpp"
#include "uavnet/parallel.hpp"
#include "uavnet/rng.hpp"
#include "uavnet/simulation.hpp"

using namespace uavnet;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_ms(F&& fn) {
    double t0 = now_ms();
    fn();
    return now_ms() - t0;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s %10.1f ms %10.1f ms   x%.2f   %s\n", name, serial_ms, parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
                identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;

    std::printf("threads: %d\n", hardware_threads());
    std::printf("%-28s %13s %13s %7s\n", "kernel", "serial", "openmp", "speedup");

    {
        NetworkConfig cfg;
        cfg.n = quick ? 60 : 140;
        cfg.alpha = 1;
        cfg.beta = 0.5;
        cfg.gamma = 2;
        cfg.L = 3;
        auto rng = make_rng(7, 0, 1);
        auto pos = place_nodes(cfg.n, rng);
        HopAnalysis a, b;
        AnalysisOptions ser;
        ser.exec = Exec::Serial;
        AnalysisOptions par;
        par.exec = Exec::OpenMP;
        double ts = time_ms([&] { a = analyze_exact(pos, cfg, ser); });
        double tp = time_ms([&] { b = analyze_exact(pos, cfg, par); });
        report("analyze_exact", ts, tp, a.hop.pmf == b.hop.pmf);
    }
    {
        NetworkConfig cfg;
        cfg.n = quick ? 500 : 2000;
        auto rng = make_rng(7, 0, 2);
        auto pos = place_nodes(cfg.n, rng);
        std::uint64_t samples = quick ? 50000 : 200000;
        HopAnalysis a, b;
        AnalysisOptions ser;
        ser.exec = Exec::Serial;
        AnalysisOptions par;
        par.exec = Exec::OpenMP;
        double ts = time_ms([&] { a = analyze_mc(pos, cfg, samples, 11, ser); });
        double tp = time_ms([&] { b = analyze_mc(pos, cfg, samples, 11, par); });
        report("analyze_mc", ts, tp, a.hop.pmf == b.hop.pmf);
    }
    {
        NetworkConfig cfg;
        cfg.n = quick ? 300 : 800;
        cfg.rounds = quick ? 8 : 16;
        SimResult a, b;
        double ts = time_ms([&] { a = simulate(cfg, Exec::Serial); });
        double tp = time_ms([&] { b = simulate(cfg, Exec::OpenMP); });
        bool same = a.lambda_total == b.lambda_total && a.ef_avg == b.ef_avg &&
                    a.n_a == b.n_a && a.f_max == b.f_max;
        report("simulate", ts, tp, same);
    }
    return 0;
}
