#include <algorithm>
#include <cmath>

#include "fibtrace/kernels.hpp"
#include "fibtrace/torus.hpp"

namespace fibtrace::serial {

double fricke_drift(const std::vector<Point3>& pts) {
    double worst = 0;
    for (const auto& p : pts) {
        double g = fricke(p);
        worst = std::max(worst, std::abs(fricke(trace_step_raw(p)) - g) / (1.0 + std::abs(g)));
    }
    return worst;
}

DefectGrid semiconj_defect_grid(int n) {
    DefectGrid g{n, std::vector<double>(static_cast<std::size_t>(n) * n), 0.0};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d = semiconj_defect({static_cast<double>(i) / n, static_cast<double>(j) / n});
            g.defect[static_cast<std::size_t>(i) * n + j] = d;
            g.max_defect = std::max(g.max_defect, d);
        }
    return g;
}

std::vector<OrbitRecord> escape_sweep(const std::vector<double>& energies, double V, long n_max, double radius) {
    std::vector<OrbitRecord> out;
    out.reserve(energies.size());
    for (double E : energies) out.push_back(escape_test(E, V, n_max, radius));
    return out;
}

std::vector<double> half_trace_grid(const std::vector<double>& energies, int k, double V) {
    std::vector<double> out;
    out.reserve(energies.size());
    for (double E : energies) out.push_back(half_trace(k, E, V));
    return out;
}

}  // namespace fibtrace::serial
