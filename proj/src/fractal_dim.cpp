#include "fibtrace/fractal_dim.hpp"

#include <algorithm>
#include <cmath>

#include "fibtrace/error.hpp"
#include "fibtrace/spectrum.hpp"

namespace fibtrace {

std::uint64_t box_count(const BandSet& b, double eps) {
    if (b.empty()) throw DomainError("box_count: empty set");
    if (!(eps > 0.0)) throw DomainError("box_count: eps must be > 0");
    std::uint64_t n = 0;
    bool open = false;
    double cur_lo = 0, cur_hi = 0;
    for (const auto& i : b.intervals()) {
        double jl = std::floor(i.lo / eps);
        // boxes are half-open, so a right endpoint on the grid does not start a new box
        double jh = std::max(jl, std::ceil(i.hi / eps) - 1.0);
        if (open && jl <= cur_hi) {
            cur_hi = std::max(cur_hi, jh);
            continue;
        }
        if (open) n += static_cast<std::uint64_t>(cur_hi - cur_lo + 1.0);
        cur_lo = jl;
        cur_hi = jh;
        open = true;
    }
    n += static_cast<std::uint64_t>(cur_hi - cur_lo + 1.0);
    return n;
}

std::vector<double> eps_grid(double eps_max, double ratio, int n) {
    if (!(eps_max > 0.0) || !(ratio > 0.0 && ratio < 1.0) || n < 1) throw DomainError("eps_grid: bad parameters");
    std::vector<double> e(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e[i] = eps_max * std::pow(ratio, i);
    return e;
}

std::vector<double> default_eps_grid(const BandSet& b, double ratio) {
    if (b.empty()) throw DomainError("default_eps_grid: empty set");
    if (!(ratio > 0.0 && ratio <= 0.5)) throw DomainError("eps ratio must lie in (0, 1/2]");
    double diam = b.diameter();
    if (!(diam > 0.0)) throw DomainError("default_eps_grid: set has zero diameter");
    double eps_max = std::exp2(std::floor(std::log2(diam / 64.0)));
    double eps_min = b.resolution() > 0.0 ? 4.0 * b.resolution() : eps_max * std::exp2(-12.0);
    int n = eps_min > eps_max ? 0 : static_cast<int>(std::floor(std::log(eps_max / eps_min) / std::log(1.0 / ratio) + 1e-9)) + 1;
    if (n < 1) return {};
    return eps_grid(eps_max, ratio, n);
}

DimensionEstimate box_dimension(const BandSet& b, const std::vector<double>& eps) {
    if (b.empty()) throw DomainError("box_dimension: empty set");
    std::vector<double> e = eps;
    std::sort(e.begin(), e.end(), std::greater<>());
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        if (!(e[i + 1] <= 0.5 * e[i] * (1.0 + 1e-9)))
            throw DomainError("eps grid must be geometric with ratio <= 1/2");
    std::vector<double> usable;
    const double floor_eps = 4.0 * b.resolution() * (1.0 - 1e-9);
    for (double x : e)
        if (x > 0.0 && x >= floor_eps) usable.push_back(x);
    if (usable.size() < 5) throw DomainError("box_dimension: fewer than 5 usable scales above 4x the native resolution");

    DimensionEstimate d;
    d.eps_max = usable.front();
    d.eps_min = usable.back();
    std::vector<double> xs, ys;
    for (double x : usable) {
        auto n = box_count(b, x);
        d.counts.push_back({x, n});
        xs.push_back(std::log(1.0 / x));
        ys.push_back(std::log(static_cast<double>(n)));
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (my + slope * (xs[i] - mx));
        rss += r * r;
    }
    d.value = std::clamp(slope, 0.0, 1.0);
    d.residual = std::sqrt(rss / m);
    d.poor_fit = d.residual > kPoorFitResidual;
    return d;
}

DimensionEstimate local_dimension(const BandSet& b, double lo, double hi, const std::vector<double>& eps) {
    if (!(lo < hi)) throw DomainError("local_dimension: window must have lo < hi");
    BandSet w = b.clipped(lo, hi);
    if (w.empty()) throw DomainError("local_dimension: window does not meet the set");
    return box_dimension(w, eps.empty() ? default_eps_grid(w) : eps);
}

double asymptote_target() { return std::log(1.0 + std::sqrt(2.0)); }

std::vector<AsymptoteRow> asymptote_check(const std::vector<double>& couplings, int k, const std::vector<double>& eps) {
    for (double V : couplings)
        if (!(V >= 16.0)) throw DomainError("asymptote_check: every coupling must be >= 16");
    std::vector<AsymptoteRow> rows;
    for (double V : couplings) {
        // the gaps at large coupling are tiny, so no merging beyond round-off
        BandSet c = spectrum_cover(V, k, 1e-12);
        AsymptoteRow r;
        r.V = V;
        r.dim = box_dimension(c, eps.empty() ? default_eps_grid(c) : eps);
        r.dim_log_v = r.dim.value * std::log(V);
        rows.push_back(r);
    }
    return rows;
}

BandSet cantor_set(double r, int depth) {
    if (!(r > 0.0 && r < 0.5)) throw DomainError("cantor_set: ratio must lie in (0, 1/2)");
    if (depth < 0 || depth > 24) throw DomainError("cantor_set: depth must lie in 0..24");
    std::vector<Interval> iv{{0.0, 1.0}};
    for (int d = 0; d < depth; ++d) {
        std::vector<Interval> next;
        next.reserve(iv.size() * 2);
        for (const auto& i : iv) {
            double w = r * (i.hi - i.lo);
            next.push_back({i.lo, i.lo + w});
            next.push_back({i.hi - w, i.hi});
        }
        iv.swap(next);
    }
    return BandSet::from_intervals(std::move(iv), depth, 0.0, std::pow(r, depth));
}

}  // namespace fibtrace
