#include <cmath>
#include <set>

#include "doctest.h"
#include "fibtrace/error.hpp"
#include "fibtrace/fractal_dim.hpp"
#include "fibtrace/rng.hpp"
#include "fibtrace/spectrum.hpp"

using namespace fibtrace;

namespace {
// box j is [j eps, (j+1) eps); raster every box index the interval can touch
std::uint64_t raster_count(const BandSet& b, double eps) {
    std::set<long> hit;
    for (const auto& iv : b.intervals())
        for (long j = static_cast<long>(std::floor(iv.lo / eps)) - 1; j <= static_cast<long>(std::floor(iv.hi / eps)) + 1; ++j)
            if (j * eps <= iv.hi && (j + 1) * eps > iv.lo) hit.insert(j);
    return hit.size();
}
}  // namespace

TEST_CASE("box counts") {
    CHECK(box_count(BandSet::from_intervals({{0, 1}}), 0.1) == 10);
    CHECK(box_count(BandSet::from_intervals({{2.05, 2.05}}), 0.1) == 1);
    CHECK(box_count(BandSet::from_intervals({{2.05, 2.05}}), 1e-7) == 1);
    CHECK(box_count(BandSet::from_intervals({{0, 0.25}, {0.75, 1}}), 0.5) == 2);
    CHECK_THROWS_AS(box_count(BandSet{}, 0.1), DomainError);
    CHECK_THROWS_AS(box_count(BandSet::from_intervals({{0, 1}}), 0), DomainError);
}

TEST_CASE("box counts equal a rasterised count on random sets") {
    Rng r(12);
    for (int t = 0; t < 1000; ++t) {
        std::vector<Interval> iv;
        int n = 1 + static_cast<int>(r.below(8));
        for (int i = 0; i < n; ++i) {
            double a = r.uniform(-3, 3);
            double w = r.uniform() < 0.2 ? 0.0 : r.uniform(0, 0.3);
            iv.push_back({a, a + w});
        }
        BandSet b = BandSet::from_intervals(iv);
        for (double eps : {1e-1, 1e-2}) CHECK(box_count(b, eps) == raster_count(b, eps));
    }
}

TEST_CASE("eps grids") {
    auto g = eps_grid(1.0, 0.5, 4);
    REQUIRE(g.size() == 4);
    CHECK(g[3] == 0.125);
    BandSet c = cantor_set(1.0 / 3.0, 10);
    auto d = default_eps_grid(c);
    CHECK(d.front() == 1.0 / 64);
    CHECK(d.back() >= 4 * c.resolution());
    CHECK(d.back() * 0.5 < 4 * c.resolution());
    CHECK_THROWS_AS(eps_grid(1.0, 1.5, 4), DomainError);
}

TEST_CASE("unit interval has dimension one") {
    auto d = box_dimension(BandSet::from_intervals({{0, 1}}), eps_grid(1.0 / 16, 0.5, 10));
    CHECK(d.value == doctest::Approx(1.0).epsilon(0.01));
    CHECK(d.residual < 0.01);
    CHECK_FALSE(d.poor_fit);
}

TEST_CASE("Cantor oracles") {
    for (double r : {1.0 / 3.0, 0.25, 0.2, 0.3}) {
        BandSet c = cantor_set(r, 10);
        CHECK(c.size() == 1024);
        CHECK(band_measure(c) == doctest::Approx(std::pow(2 * r, 10)));
        auto d = box_dimension(c, default_eps_grid(c));
        double exact = std::log(2.0) / std::log(1.0 / r);
        CHECK(std::abs(d.value - exact) <= 0.02);
        CHECK(d.value < 1.0);
        for (std::size_t i = 1; i < d.counts.size(); ++i) {
            CHECK(d.counts[i].eps < d.counts[i - 1].eps);
            CHECK(d.counts[i].count >= d.counts[i - 1].count);
            CHECK(d.counts[i].count > 0);
        }
        // a coarser ladder on a deeper set gives nearly the same slope
        BandSet deep = cantor_set(r, 14);
        auto q = box_dimension(deep, default_eps_grid(deep, 0.25));
        CHECK(std::abs(q.value - d.value) <= 0.02);
    }
    CHECK_THROWS_AS(cantor_set(0.5, 3), DomainError);
    CHECK_THROWS_AS(cantor_set(0.3, 30), DomainError);
}

TEST_CASE("estimator preconditions") {
    BandSet c = cantor_set(1.0 / 3.0, 10);
    CHECK_THROWS_AS(box_dimension(c, eps_grid(0.1, 0.7, 10)), DomainError);
    CHECK_THROWS_AS(box_dimension(c, eps_grid(0.1, 0.5, 4)), DomainError);
    // scales under 4x the native resolution are dropped
    CHECK_THROWS_AS(box_dimension(c, eps_grid(1e-4, 0.5, 10)), DomainError);
}

TEST_CASE("local dimension") {
    BandSet c = cantor_set(1.0 / 3.0, 12);
    auto eps = eps_grid(1.0 / 512, 0.5, 9);
    auto global = box_dimension(c, eps);
    auto whole = local_dimension(c, -1, 2, eps);
    CHECK(whole.value == global.value);
    // [0, 1/9] is a scaled copy of the whole set
    auto part = local_dimension(c, 0, 1.0 / 9, default_eps_grid(c.clipped(0, 1.0 / 9)));
    CHECK(std::abs(part.value - std::log(2.0) / std::log(3.0)) <= 0.03);
    CHECK_THROWS_AS(local_dimension(c, 0.4, 0.6, eps), DomainError);
    CHECK_THROWS_AS(local_dimension(c, 0.6, 0.4, eps), DomainError);
}

TEST_CASE("large coupling trend toward log(1 + sqrt 2)") {
    CHECK(asymptote_target() == doctest::Approx(0.881373587019543));
    auto rows = asymptote_check({16, 32, 64, 128}, 12);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].dim.value < 1.0);
        CHECK(rows[i].dim_log_v > 0.5);
        CHECK(rows[i].dim_log_v < 1.3);
        if (i) CHECK(rows[i].dim.value < rows[i - 1].dim.value);
    }
    CHECK_THROWS_AS(asymptote_check({8}, 10), DomainError);
}

TEST_CASE("spectrum dimension below one at moderate coupling") {
    BandSet c = spectrum_cover(4.0, 16, 1e-10);
    auto d = box_dimension(c, default_eps_grid(c));
    CHECK(d.value > 0.2);
    CHECK(d.value < 1.0);
}
