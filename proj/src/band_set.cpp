#include "fibtrace/band_set.hpp"

#include <algorithm>
#include <cmath>

#include "fibtrace/error.hpp"

namespace fibtrace {

BandSet BandSet::from_intervals(std::vector<Interval> iv, int generation, double merge_gap, double resolution) {
    for (const auto& i : iv)
        if (!std::isfinite(i.lo) || !std::isfinite(i.hi) || i.lo > i.hi)
            throw DomainError("BandSet: intervals must be finite with lo <= hi");
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    BandSet b;
    b.generation_ = generation;
    b.resolution_ = resolution;
    for (const auto& i : iv) {
        if (!b.iv_.empty() && i.lo - b.iv_.back().hi <= merge_gap)
            b.iv_.back().hi = std::max(b.iv_.back().hi, i.hi);
        else
            b.iv_.push_back(i);
    }
    return b;
}

double BandSet::lo() const { return iv_.front().lo; }
double BandSet::hi() const { return iv_.back().hi; }

double BandSet::max_length() const {
    double m = 0;
    for (const auto& i : iv_) m = std::max(m, i.length());
    return m;
}

bool BandSet::contains(double E, double slack) const { return distance_to(E) <= slack; }

double BandSet::distance_to(double E) const {
    if (iv_.empty()) return INFINITY;
    auto it = std::lower_bound(iv_.begin(), iv_.end(), E, [](const Interval& i, double e) { return i.hi < e; });
    double d = INFINITY;
    if (it != iv_.end()) d = std::max(0.0, it->lo - E);
    if (it != iv_.begin()) d = std::min(d, E - std::prev(it)->hi);
    return d;
}

BandSet BandSet::clipped(double a, double b) const {
    std::vector<Interval> out;
    for (const auto& i : iv_) {
        double lo = std::max(i.lo, a), hi = std::min(i.hi, b);
        if (lo <= hi) out.push_back({lo, hi});
    }
    BandSet r;
    r.iv_ = std::move(out);
    r.generation_ = generation_;
    r.resolution_ = resolution_;
    return r;
}

bool BandSet::is_valid() const {
    for (std::size_t k = 0; k < iv_.size(); ++k) {
        if (!(iv_[k].lo <= iv_[k].hi)) return false;
        if (k > 0 && !(iv_[k - 1].hi < iv_[k].lo)) return false;
    }
    return true;
}

double band_measure(const BandSet& b) {
    double s = 0;
    for (const auto& i : b.intervals()) s += i.length();
    return s;
}

BandSet unite(const BandSet& a, const BandSet& b, double merge_gap) {
    std::vector<Interval> iv = a.intervals();
    iv.insert(iv.end(), b.intervals().begin(), b.intervals().end());
    return BandSet::from_intervals(std::move(iv), std::max(a.generation(), b.generation()), merge_gap,
                                   std::max(a.resolution(), b.resolution()));
}

// sup over points of a of the distance to b; the sup is attained at endpoints of a
// or at midpoints of the gaps of b that lie inside a
static double directed(const BandSet& a, const BandSet& b) {
    double d = 0;
    for (const auto& i : a.intervals()) {
        d = std::max({d, b.distance_to(i.lo), b.distance_to(i.hi)});
        const auto& bi = b.intervals();
        for (std::size_t k = 0; k + 1 < bi.size(); ++k) {
            double m = 0.5 * (bi[k].hi + bi[k + 1].lo);
            if (m > i.lo && m < i.hi) d = std::max(d, b.distance_to(m));
        }
    }
    return d;
}

double hausdorff_distance(const BandSet& a, const BandSet& b) {
    if (a.empty() || b.empty()) throw DomainError("hausdorff_distance: empty set");
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace fibtrace
