#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fibtrace/band_set.hpp"
#include "fibtrace/core_map.hpp"

namespace fibtrace {

using Mat2 = std::array<std::array<double, 2>, 2>;

// inverse golden mean, the rotation number of the potential
double alpha();

// V * chi_[1-alpha, 1)(m alpha mod 1)
double potential(long m, double V);

// one-step transfer matrix (E - v(m), -1; 1, 0)
Mat2 transfer_matrix(long m, double E, double V);

// F_0 = F_1 = 1, F_{k+1} = F_k + F_{k-1} (F_{-1} = 0)
long fibonacci(int k);

// half trace of the product of transfer matrices over one Fibonacci block, -1 <= k <= 16
double half_trace_oracle(int k, double E, double V);

struct TraceSequenceState {
    double x_prev2 = 1, x_prev1 = 0, x_curr = 0;  // x_{k-2}, x_{k-1}, x_k
    int k = 1;

    static TraceSequenceState seed(double E, double V);
    void advance();
    // x_{k}^2 + x_{k-1}^2 + x_{k-2}^2 - 2 x_k x_{k-1} x_{k-2} - 1
    double fricke_value() const;
};

struct TraceSequence {
    std::vector<double> x;  // x[j] = x_{j-1}
    bool escaped = false;   // truncated by the overflow guard
    double at(int k) const { return x.at(static_cast<std::size_t>(k + 1)); }
    int last_index() const { return static_cast<int>(x.size()) - 2; }
};

inline constexpr double kOverflowGuard = 1e300;

TraceSequence trace_sequence(double E, double V, int k_max);

// x_k(E) by the recursion. Past 1e150 only signs are propagated and +-inf is
// returned, which keeps |x_k| > 1 and the sign of x_k right.
double half_trace(int k, double E, double V);

enum class OrbitStatus { bounded_so_far, escaped };

struct OrbitRecord {
    Point3 start;
    OrbitStatus status = OrbitStatus::bounded_so_far;
    long steps_used = 0;
    std::optional<long> escape_index;
    double max_norm = 0;  // largest sup-norm seen along the orbit
    bool nonfinite = false;
};

inline constexpr long kDefaultNMax = 10000;
inline constexpr double kDefaultEscapeRadius = 2.0;

// Iterates T from the line point. Escape at step j means |x_j| > 1, |x_{j+1}| > 1
// and |x_{j+1}| > radius, where the j-th iterate is (x_{j+1}, x_j, x_{j-1}).
OrbitRecord escape_test(double E, double V, long n_max = kDefaultNMax, double escape_radius = kDefaultEscapeRadius);

struct BandSearchOptions {
    double root_tolerance = 1e-12;
    // smallest gap worth resolving; cells between two inside samples below this width are kept whole
    double min_gap = 0.0;
    int samples_per_component = 64;
};

// sigma_k = {E : |x_k(E)| <= 1}, 1 <= k <= 30
BandSet approximant_bands(int k, double V, const BandSearchOptions& opt = {});

// number of edges of sigma_k (with multiplicity) strictly below E, from a
// Sturm count of the Dirichlet problem on one period
long band_edges_below(int k, double E, double V);

// sigma_k u sigma_{k+1}, merged with gap tolerance = resolution
BandSet spectrum_cover(double V, int k, double resolution = 1e-4);

// full hierarchy sigma_1..sigma_kmax, reused by the cover
std::vector<BandSet> band_hierarchy(int k_max, double V, const BandSearchOptions& opt);

}  // namespace fibtrace
