#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fibtrace/band_set.hpp"

namespace fibtrace {

struct ScaleCount {
    double eps = 0;
    std::uint64_t count = 0;
};

struct DimensionEstimate {
    double value = 0;
    double eps_min = 0, eps_max = 0;
    double residual = 0;  // rms of the log-log fit
    bool poor_fit = false;
    std::vector<ScaleCount> counts;  // decreasing eps
};

inline constexpr double kPoorFitResidual = 0.05;

// number of grid boxes [j eps, (j+1) eps] meeting the set
std::uint64_t box_count(const BandSet& b, double eps);

// geometric grid eps_max * ratio^i, i = 0..n-1
std::vector<double> eps_grid(double eps_max, double ratio, int n);

// eps_max = largest power of two <= diameter/64, eps_min >= 4 x native resolution
std::vector<double> default_eps_grid(const BandSet& b, double ratio = 0.5);

DimensionEstimate box_dimension(const BandSet& b, const std::vector<double>& eps);
DimensionEstimate local_dimension(const BandSet& b, double lo, double hi, const std::vector<double>& eps);

struct AsymptoteRow {
    double V = 0;
    DimensionEstimate dim;
    double dim_log_v = 0;
};

// eps empty means default_eps_grid per cover
std::vector<AsymptoteRow> asymptote_check(const std::vector<double>& couplings, int k, const std::vector<double>& eps = {});

double asymptote_target();  // log(1 + sqrt 2)

// closed-interval approximation of the self-similar set with two maps of ratio r
BandSet cantor_set(double r, int depth);

}  // namespace fibtrace
