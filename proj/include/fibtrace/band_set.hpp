#pragma once

#include <vector>

namespace fibtrace {

struct Interval {
    double lo = 0, hi = 0;
    double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, pairwise disjoint closed intervals. `resolution` is the length scale
// below which the set is an artefact of its construction (0 for exact sets).
class BandSet {
public:
    BandSet() = default;

    // sorts, drops nothing, merges intervals whose gap is <= merge_gap
    static BandSet from_intervals(std::vector<Interval> iv, int generation = 0, double merge_gap = 0.0,
                                  double resolution = 0.0);

    const std::vector<Interval>& intervals() const { return iv_; }
    int generation() const { return generation_; }
    double resolution() const { return resolution_; }
    void set_resolution(double r) { resolution_ = r; }
    bool empty() const { return iv_.empty(); }
    std::size_t size() const { return iv_.size(); }

    double lo() const;
    double hi() const;
    double diameter() const { return empty() ? 0.0 : hi() - lo(); }
    double max_length() const;

    bool contains(double E, double slack = 0.0) const;
    double distance_to(double E) const;

    BandSet clipped(double lo, double hi) const;
    bool is_valid() const;

private:
    std::vector<Interval> iv_;
    int generation_ = 0;
    double resolution_ = 0.0;
};

double band_measure(const BandSet& b);

// union merged with the given gap tolerance
BandSet unite(const BandSet& a, const BandSet& b, double merge_gap);

// Hausdorff distance between the two closed sets
double hausdorff_distance(const BandSet& a, const BandSet& b);

}  // namespace fibtrace
