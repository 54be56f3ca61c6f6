#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fibtrace/band_set.hpp"
#include "fibtrace/error.hpp"
#include "fibtrace/rng.hpp"
#include "fibtrace/spectrum.hpp"

using namespace fibtrace;

TEST_CASE("band set construction and measure") {
    CHECK(band_measure(BandSet::from_intervals({{-2, 2}})) == 4.0);
    CHECK(band_measure(BandSet{}) == 0.0);
    CHECK(band_measure(BandSet::from_intervals({{2, 2.5}, {0, 1}})) == 1.5);
    BandSet m = BandSet::from_intervals({{0, 1}, {0.5, 2}, {3, 4}, {4.05, 5}}, 0, 0.1);
    REQUIRE(m.size() == 2);
    CHECK(m.intervals()[0] == Interval{0, 2});
    CHECK(m.intervals()[1] == Interval{3, 5});
    CHECK(m.is_valid());
    CHECK_THROWS_AS(BandSet::from_intervals({{1, 0}}), DomainError);
    CHECK_THROWS_AS(BandSet::from_intervals({{0, NAN}}), DomainError);
    CHECK(m.contains(1.5));
    CHECK_FALSE(m.contains(2.5));
    CHECK(m.contains(2.05, 0.1));
    CHECK(m.distance_to(2.5) == doctest::Approx(0.5));
    CHECK(m.distance_to(-1) == doctest::Approx(1));
    CHECK(m.distance_to(3.5) == 0.0);
    BandSet c = m.clipped(1, 3.5);
    REQUIRE(c.size() == 2);
    CHECK(c.intervals()[0] == Interval{1, 2});
    CHECK(c.intervals()[1] == Interval{3, 3.5});
}

TEST_CASE("union and Hausdorff distance") {
    BandSet a = BandSet::from_intervals({{0, 1}});
    BandSet b = BandSet::from_intervals({{0, 1}, {3, 4}});
    CHECK(hausdorff_distance(a, b) == doctest::Approx(3.0));
    BandSet g = BandSet::from_intervals({{0, 1}, {1.4, 2}});
    BandSet s = BandSet::from_intervals({{0, 2}});
    CHECK(hausdorff_distance(g, s) == doctest::Approx(0.2));
    CHECK(hausdorff_distance(s, s) == 0.0);
    BandSet u = unite(a, BandSet::from_intervals({{1.05, 2}}), 0.1);
    CHECK(u.size() == 1);
    CHECK(band_measure(u) == doctest::Approx(2.0));
    CHECK_THROWS_AS(hausdorff_distance(a, BandSet{}), DomainError);

    // brute force on a fine grid
    Rng r(8);
    for (int t = 0; t < 50; ++t) {
        std::vector<Interval> x, y;
        for (int i = 0; i < 4; ++i) {
            double p = r.uniform(0, 10);
            x.push_back({p, p + r.uniform(0, 1)});
            p = r.uniform(0, 10);
            y.push_back({p, p + r.uniform(0, 1)});
        }
        BandSet A = BandSet::from_intervals(x), B = BandSet::from_intervals(y);
        double h = 0;
        for (int i = 0; i <= 20000; ++i) {
            double e = -1 + 13.0 * i / 20000;
            if (A.contains(e)) h = std::max(h, B.distance_to(e));
            if (B.contains(e)) h = std::max(h, A.distance_to(e));
        }
        CHECK(hausdorff_distance(A, B) == doctest::Approx(h).epsilon(1e-3).scale(1.0));
    }
}

TEST_CASE("first approximants in closed form") {
    for (double V : {0.0, 0.5, 3.0}) {
        BandSet b = approximant_bands(1, V);
        REQUIRE(b.size() == 1);
        CHECK(b.intervals()[0].lo == doctest::Approx(V - 2).epsilon(1e-11));
        CHECK(b.intervals()[0].hi == doctest::Approx(V + 2).epsilon(1e-11));
    }
    // sigma_2 = {|(E - V)E/2 - 1| <= 1}: E(E - V) in [0, 4]
    for (double V : {0.5, 3.0}) {
        BandSet b = approximant_bands(2, V);
        REQUIRE(b.size() == 2);
        double r4 = std::sqrt(V * V + 16);
        CHECK(b.intervals()[0].lo == doctest::Approx((V - r4) / 2).epsilon(1e-11));
        CHECK(b.intervals()[0].hi == doctest::Approx(0.0).scale(1).epsilon(1e-11));
        CHECK(b.intervals()[1].lo == doctest::Approx(V).epsilon(1e-11));
        CHECK(b.intervals()[1].hi == doctest::Approx((V + r4) / 2).epsilon(1e-11));
    }
    CHECK_THROWS_AS(approximant_bands(0, 1), DomainError);
    CHECK_THROWS_AS(approximant_bands(31, 1), DomainError);
}

TEST_CASE("approximant bands: F_k bands, edges where |x_k| = 1") {
    for (double V : {0.3, 1.0, 4.0})
        for (int k = 1; k <= 14; ++k) {
            BandSet b = approximant_bands(k, V);
            CHECK(b.is_valid());
            CHECK(static_cast<long>(b.size()) <= fibonacci(k));
            CHECK(b.size() >= 1);
            for (const auto& iv : b.intervals()) {
                // edges are located to ~1e-12 in E; narrow bands are steep, so scale by the slope
                for (double e : {iv.lo, iv.hi}) {
                    double slope = std::abs(half_trace(k, e + 1e-9, V) - half_trace(k, e - 1e-9, V)) / 2e-9;
                    CHECK(std::abs(std::abs(half_trace(k, e, V)) - 1.0) <= 1e-9 + 1e-12 * (1 + std::abs(e)) * slope);
                }
                CHECK(std::abs(half_trace(k, 0.5 * (iv.lo + iv.hi), V)) <= 1.0 + 1e-9);
            }
            // dense sampling oracle: inside samples must be covered
            for (int i = 0; i <= 4000; ++i) {
                double E = -2.5 + (V + 5) * i / 4000;
                if (std::abs(half_trace(k, E, V)) <= 1.0) CHECK(b.contains(E, 1e-9));
            }
            // bands never overlap at V > 0, so they are exactly F_k
            if (V >= 1.0) CHECK(static_cast<long>(b.size()) == fibonacci(k));
        }
}

TEST_CASE("edge counting") {
    double V = 1.0;
    for (int k = 1; k <= 10; ++k) {
        BandSet b = approximant_bands(k, V);
        CHECK(band_edges_below(k, -10, V) == 0);
        CHECK(band_edges_below(k, V + 10, V) == 2 * fibonacci(k));
        long e = 0;
        for (const auto& iv : b.intervals()) {
            double mid = 0.5 * (iv.lo + iv.hi);
            CHECK(band_edges_below(k, mid, V) == e + 1);
            e += 2;
            CHECK(band_edges_below(k, iv.hi + 1e-9, V) == e);
        }
    }
}

TEST_CASE("V = 0 bands fill [-2, 2] and contain 0 and 2") {
    for (int k = 1; k <= 12; ++k) {
        BandSet b = approximant_bands(k, 0.0);
        CHECK(b.contains(0.0, 1e-12));
        CHECK(b.contains(2.0, 1e-12));
        CHECK(b.lo() >= -2 - 1e-9);
        CHECK(b.hi() <= 2 + 1e-9);
    }
    BandSet c = spectrum_cover(0.0, 10, 1e-3);
    CHECK(std::abs(band_measure(c) - 4.0) <= 0.05);
    CHECK(hausdorff_distance(c, BandSet::from_intervals({{-2, 2}})) <= 1e-2);
}

TEST_CASE("covers: monotone, bounded, and containing every bounded energy") {
    for (double V : {0.5, 1.0, 4.0}) {
        double prev = INFINITY;
        for (int k = 1; k <= 12; ++k) {
            BandSet c = spectrum_cover(V, k, 1e-4);
            CHECK(c.lo() >= -3 - V);
            CHECK(c.hi() <= 3 + V);
            double m = band_measure(c);
            CHECK(m <= prev + 1e-4);
            prev = m;
        }
    }
    for (double V : {0.5, 1.0, 2.0}) {
        BandSet c = spectrum_cover(V, 12, 1e-4);
        for (int i = 0; i <= 3000; ++i) {
            double E = -3 + (V + 6) * i / 3000;
            auto o = escape_test(E, V, 10000);
            if (o.status == OrbitStatus::bounded_so_far) CHECK(c.contains(E, 1e-4));
        }
    }
    CHECK_THROWS_AS(spectrum_cover(1, 0, 1e-4), DomainError);
    CHECK_THROWS_AS(spectrum_cover(1, 5, 0.0), DomainError);
    CHECK_THROWS_AS(spectrum_cover(-1, 5, 1e-4), DomainError);
}

TEST_CASE("escaped energies stay out of deep covers") {
    const double V = 1.0;
    BandSet c = spectrum_cover(V, 20, 1e-6);
    int escaped_inside = 0, escaped = 0;
    for (int i = 0; i <= 4000; ++i) {
        double E = -3 + 7.0 * i / 4000;
        auto o = escape_test(E, V, 10000);
        // escape by step 15 rules out sigma_20 and sigma_21; later escapes can still sit in the cover
        if (o.status != OrbitStatus::escaped || *o.escape_index > 15) continue;
        ++escaped;
        escaped_inside += c.contains(E, 1e-6);
    }
    CHECK(escaped > 0);
    CHECK(escaped_inside == 0);
}
