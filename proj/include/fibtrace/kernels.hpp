#pragma once

#include <cstddef>
#include <vector>

#include "fibtrace/core_map.hpp"
#include "fibtrace/spectrum.hpp"

// Data-parallel sweeps. The serial versions are the reference; the parallel
// ones must return identical results (each element is computed independently).
namespace fibtrace {

struct DefectGrid {
    int n = 0;
    std::vector<double> defect;  // row-major, theta index outer
    double max_defect = 0;
};

namespace serial {
double fricke_drift(const std::vector<Point3>& pts);
DefectGrid semiconj_defect_grid(int n);
std::vector<OrbitRecord> escape_sweep(const std::vector<double>& energies, double V, long n_max, double radius);
std::vector<double> half_trace_grid(const std::vector<double>& energies, int k, double V);
}  // namespace serial

namespace parallel {
double fricke_drift(const std::vector<Point3>& pts);
DefectGrid semiconj_defect_grid(int n);
std::vector<OrbitRecord> escape_sweep(const std::vector<double>& energies, double V, long n_max, double radius);
std::vector<double> half_trace_grid(const std::vector<double>& energies, int k, double V);

// run f(i) for i in [0, n); f must only write to slot i of its output
template <class F>
void for_each_index(std::size_t n, F&& f) {
    const long m = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < m; ++i) f(static_cast<std::size_t>(i));
}
}  // namespace parallel

// honours FIBTRACE_MAX_THREADS; returns the thread count actually set
int configure_threads(int requested);

}  // namespace fibtrace
