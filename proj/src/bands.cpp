#include <algorithm>
#include <cmath>
#include <limits>

#include "fibtrace/error.hpp"
#include "fibtrace/kernels.hpp"
#include "fibtrace/spectrum.hpp"

namespace fibtrace {

namespace {

struct Level {
    int k;
    long p;
    double V;
    std::vector<double> pot;  // v(1..p-1), the Dirichlet block of one period
};

Level make_level(int k, double V) {
    Level L{k, fibonacci(k), V, {}};
    L.pot.resize(static_cast<std::size_t>(std::max(0L, L.p - 1)));
    for (long m = 1; m < L.p; ++m) L.pot[m - 1] = potential(m, V);
    return L;
}

// eigenvalues below E of the tridiagonal Dirichlet matrix (Sturm count)
long dirichlet_below(const Level& L, double E) {
    constexpr double tiny = std::numeric_limits<double>::min() * 1e10;
    long neg = 0;
    double d = 1.0;
    bool first = true;
    for (double v : L.pot) {
        d = first ? v - E : v - E - 1.0 / d;
        first = false;
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++neg;
    }
    return neg;
}

bool inside(const Level& L, double E) { return std::abs(half_trace(L.k, E, L.V)) <= 1.0; }

// Band j (1-based) contributes edges 2j-1, 2j. Inside band j the Dirichlet count is
// j-1; in the gap above band j it is j-1 or j and the sign of x_k fixes j's parity.
long edges_below(const Level& L, double E) {
    double x = half_trace(L.k, E, L.V);
    long D = dirichlet_below(L, E);
    if (std::abs(x) <= 1.0) return 2 * D + 1;
    bool even_gap = ((x > 0.0) == (L.p % 2 == 0));
    long j = (D % 2 == 0) == even_gap ? D : D + 1;
    return 2 * j;
}

struct Sample {
    double E;
    bool in;
    long below = -1;
};

class ComponentSearch {
public:
    ComponentSearch(const Level& L, const BandSearchOptions& o) : L_(L), o_(o) {}

    Sample at(double E, bool with_count) const {
        Sample s{E, inside(L_, E)};
        if (with_count) s.below = edges_below(L_, E);
        return s;
    }

    // crossing of the inside/outside status between a and b; returns the outside end
    double bisect(Sample a, Sample b) const {
        for (int it = 0; it < 60 && b.E - a.E > o_.root_tolerance; ++it) {
            double m = 0.5 * (a.E + b.E);
            if (m <= a.E || m >= b.E) break;
            bool in = inside(L_, m);
            (in == a.in ? a : b) = Sample{m, in};
        }
        return a.in ? b.E : a.E;
    }

    void refine(const Sample& a, const Sample& b, std::vector<double>& cross) const {
        long c = b.below - a.below;
        long e = a.in != b.in ? 1 : 0;
        if (c <= e) {
            if (e) cross.push_back(bisect(a, b));
            return;
        }
        double w = b.E - a.E;
        if (a.in && b.in && w <= o_.min_gap) return;
        double m = 0.5 * (a.E + b.E);
        if (w <= o_.root_tolerance || m <= a.E || m >= b.E) {
            if (!a.in && !b.in) {
                // band narrower than the tolerance: keep it as a point
                cross.push_back(m);
                cross.push_back(m);
            } else if (e) {
                cross.push_back(bisect(a, b));
            }
            return;
        }
        Sample s = at(m, true);
        refine(a, s, cross);
        refine(s, b, cross);
    }

    // crossings inside [lo, hi]; false if an end of the component lies inside a band
    bool run(double lo, double hi, std::vector<double>& cross, long& count) const {
        int n = std::max(2, o_.samples_per_component);
        std::vector<Sample> s(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) s[i] = at(i == n ? hi : lo + (hi - lo) * i / n, false);
        if (s.front().in || s.back().in) return false;
        s.front().below = edges_below(L_, lo);
        s.back().below = edges_below(L_, hi);
        count = s.back().below - s.front().below;
        long transitions = 0;
        for (int i = 0; i < n; ++i) transitions += s[i].in != s[i + 1].in;
        if (count == transitions) {
            for (int i = 0; i < n; ++i)
                if (s[i].in != s[i + 1].in) cross.push_back(bisect(s[i], s[i + 1]));
            return true;
        }
        for (int i = 1; i < n; ++i) s[i].below = edges_below(L_, s[i].E);
        for (int i = 0; i < n; ++i) refine(s[i], s[i + 1], cross);
        return true;
    }

private:
    const Level& L_;
    const BandSearchOptions& o_;
};

std::vector<Interval> merged_candidates(const std::vector<Interval>& iv, double margin) {
    std::vector<Interval> c;
    for (const auto& i : iv) c.push_back({i.lo - margin, i.hi + margin});
    std::sort(c.begin(), c.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& i : c) {
        if (!out.empty() && i.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, i.hi);
        else
            out.push_back(i);
    }
    return out;
}

// bands from sorted crossing points, every component starting outside
std::vector<Interval> assemble(std::vector<double> cross) {
    std::sort(cross.begin(), cross.end());
    std::vector<Interval> iv;
    for (std::size_t i = 0; i + 1 < cross.size(); i += 2) iv.push_back({cross[i], cross[i + 1]});
    return iv;
}

bool search_components(const Level& L, const std::vector<Interval>& comps, const BandSearchOptions& opt,
                       std::vector<Interval>& bands) {
    ComponentSearch cs(L, opt);
    std::vector<std::vector<double>> cross(comps.size());
    std::vector<long> counts(comps.size(), 0);
    std::vector<char> ok(comps.size(), 1);
    parallel::for_each_index(comps.size(), [&](std::size_t i) {
        ok[i] = cs.run(comps[i].lo, comps[i].hi, cross[i], counts[i]);
    });
    long total = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (!ok[i] || cross[i].size() % 2) return false;
        total += counts[i];
    }
    if (total != 2 * L.p) return false;
    bands.clear();
    for (auto& c : cross) {
        auto iv = assemble(std::move(c));
        bands.insert(bands.end(), iv.begin(), iv.end());
    }
    return true;
}

BandSet level_bands(const Level& L, const std::vector<Interval>& parents, const BandSearchOptions& opt) {
    std::vector<Interval> bands;
    const double window_lo = -2.5, window_hi = L.V + 2.5;
    bool done = false;
    if (!parents.empty()) {
        double margin = 4.0 * opt.root_tolerance + 1e-12 * (2.0 + L.V);
        done = search_components(L, merged_candidates(parents, margin), opt, bands);
    }
    if (!done) {
        BandSearchOptions wide = opt;
        wide.samples_per_component = std::max<int>(opt.samples_per_component, static_cast<int>(64 * L.p));
        if (!search_components(L, {{window_lo, window_hi}}, wide, bands))
            throw NumericError("band search failed to account for all band edges at k = " + std::to_string(L.k));
    }
    return BandSet::from_intervals(std::move(bands), L.k, 0.0, 0.0);
}

void check_options(const BandSearchOptions& opt) {
    if (!(opt.root_tolerance > 0.0)) throw DomainError("root_tolerance must be > 0");
    if (!(opt.min_gap >= 0.0)) throw DomainError("min_gap must be >= 0");
    if (opt.samples_per_component < 2) throw DomainError("samples_per_component must be >= 2");
}

}  // namespace

long band_edges_below(int k, double E, double V) { return edges_below(make_level(k, V), E); }

std::vector<BandSet> band_hierarchy(int k_max, double V, const BandSearchOptions& opt) {
    if (k_max < 1 || k_max > 30) throw DomainError("approximant index k must lie in 1..30");
    checked_coupling(V);
    check_options(opt);
    std::vector<BandSet> out;
    for (int k = 1; k <= k_max; ++k) {
        std::vector<Interval> parents;
        if (k >= 3) {
            parents = out[k - 2].intervals();
            const auto& q = out[k - 3].intervals();
            parents.insert(parents.end(), q.begin(), q.end());
        }
        out.push_back(level_bands(make_level(k, V), parents, opt));
    }
    return out;
}

BandSet approximant_bands(int k, double V, const BandSearchOptions& opt) {
    return band_hierarchy(k, V, opt).back();
}

BandSet spectrum_cover(double V, int k, double resolution) {
    if (k < 1 || k > 29) throw DomainError("approximant index k must lie in 1..29");
    if (!(resolution > 0.0)) throw DomainError("resolution must be > 0");
    BandSearchOptions opt;
    opt.root_tolerance = std::min(1e-12, 0.01 * resolution);
    opt.min_gap = resolution;
    auto h = band_hierarchy(k + 1, V, opt);
    BandSet c = unite(h[k - 1], h[k], resolution);
    c = BandSet::from_intervals(c.intervals(), k, 0.0, 0.0);
    c.set_resolution(std::max(resolution, c.max_length()));
    return c;
}

}  // namespace fibtrace
