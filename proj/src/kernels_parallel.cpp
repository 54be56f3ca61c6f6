#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fibtrace/kernels.hpp"
#include "fibtrace/torus.hpp"

namespace fibtrace {

namespace parallel {

double fricke_drift(const std::vector<Point3>& pts) {
    double worst = 0;
    const long n = static_cast<long>(pts.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (long i = 0; i < n; ++i) {
        double g = fricke(pts[i]);
        worst = std::max(worst, std::abs(fricke(trace_step_raw(pts[i])) - g) / (1.0 + std::abs(g)));
    }
    return worst;
}

DefectGrid semiconj_defect_grid(int n) {
    DefectGrid g{n, std::vector<double>(static_cast<std::size_t>(n) * n), 0.0};
    double worst = 0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d = semiconj_defect({static_cast<double>(i) / n, static_cast<double>(j) / n});
            g.defect[static_cast<std::size_t>(i) * n + j] = d;
            worst = std::max(worst, d);
        }
    g.max_defect = worst;
    return g;
}

std::vector<OrbitRecord> escape_sweep(const std::vector<double>& energies, double V, long n_max, double radius) {
    std::vector<OrbitRecord> out(energies.size());
    for_each_index(energies.size(), [&](std::size_t i) { out[i] = escape_test(energies[i], V, n_max, radius); });
    return out;
}

std::vector<double> half_trace_grid(const std::vector<double>& energies, int k, double V) {
    std::vector<double> out(energies.size());
    const long n = static_cast<long>(energies.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = half_trace(k, energies[i], V);
    return out;
}

}  // namespace parallel

int configure_threads(int requested) {
    int n = requested > 0 ? requested : omp_get_max_threads();
    if (const char* cap = std::getenv("FIBTRACE_MAX_THREADS")) {
        int c = std::atoi(cap);
        if (c > 0) n = std::min(n, c);
    }
    n = std::max(1, n);
    omp_set_num_threads(n);
    return n;
}

}  // namespace fibtrace
