// serial reference vs OpenMP kernels; prints wall time and whether the outputs agree
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "fibtrace/kernels.hpp"
#include "fibtrace/rng.hpp"

using namespace fibtrace;

template <class F>
double seconds(F&& f, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* name, double ts, double tp, bool same) {
    std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2f  %s\n", name, ts, tp, ts / tp,
                same ? "identical" : "MISMATCH");
}

int main(int argc, char** argv) {
    int threads = configure_threads(argc > 1 ? std::atoi(argv[1]) : 0);
    std::printf("threads: %d\n", threads);

    std::vector<Point3> pts(1 << 20);
    Rng r(7);
    for (auto& p : pts) p = {r.uniform(-10, 10), r.uniform(-10, 10), r.uniform(-10, 10)};
    double a = 0, b = 0;
    double ts = seconds([&] { a = serial::fricke_drift(pts); }, 3);
    double tp = seconds([&] { b = parallel::fricke_drift(pts); }, 3);
    row("fricke_drift", ts, tp, a == b);

    DefectGrid gs, gp;
    ts = seconds([&] { gs = serial::semiconj_defect_grid(1024); }, 1);
    tp = seconds([&] { gp = parallel::semiconj_defect_grid(1024); }, 1);
    row("semiconj_defect_grid", ts, tp, gs.defect == gp.defect && gs.max_defect == gp.max_defect);

    std::vector<double> E(4001);
    for (std::size_t i = 0; i < E.size(); ++i) E[i] = -3.0 + 6.0 * double(i) / double(E.size() - 1);
    std::vector<OrbitRecord> es, ep;
    ts = seconds([&] { es = serial::escape_sweep(E, 1.0, 10000, 2.0); }, 1);
    tp = seconds([&] { ep = parallel::escape_sweep(E, 1.0, 10000, 2.0); }, 1);
    bool same = es.size() == ep.size();
    for (std::size_t i = 0; same && i < es.size(); ++i)
        same = es[i].status == ep[i].status && es[i].steps_used == ep[i].steps_used && es[i].max_norm == ep[i].max_norm;
    row("escape_sweep V=1", ts, tp, same);

    std::vector<double> hs, hp;
    E.resize(200001);
    for (std::size_t i = 0; i < E.size(); ++i) E[i] = -3.0 + 6.0 * double(i) / double(E.size() - 1);
    ts = seconds([&] { hs = serial::half_trace_grid(E, 20, 1.0); }, 1);
    tp = seconds([&] { hp = parallel::half_trace_grid(E, 20, 1.0); }, 1);
    row("half_trace_grid k=20", ts, tp, hs == hp);
    return 0;
}
