#include <cmath>

#include "doctest.h"
#include "fibtrace/error.hpp"
#include "fibtrace/rng.hpp"
#include "fibtrace/spectrum.hpp"

using namespace fibtrace;

TEST_CASE("potential and transfer matrices") {
    CHECK(alpha() == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-15));
    CHECK(potential(1, 1.0) == 1.0);  // 0.618 lies in [0.382, 1)
    CHECK(potential(2, 1.0) == 0.0);  // 0.236
    CHECK(potential(3, 2.5) == 2.5);  // 0.854
    Mat2 m = transfer_matrix(1, 0.7, 1.0);
    CHECK(m[0][0] == doctest::Approx(-0.3));
    CHECK(m[0][1] == -1.0);
    CHECK(m[1][0] == 1.0);
    CHECK(m[1][1] == 0.0);
    for (long k = 1; k < 50; ++k) CHECK(transfer_matrix(k, 1.3, 0.0)[0][0] == 1.3);
    Rng r(1);
    for (int i = 0; i < 1000; ++i) {
        Mat2 t = transfer_matrix(1 + static_cast<long>(r.below(1000)), r.uniform(-4, 4), r.uniform(0, 5));
        CHECK(t[0][0] * t[1][1] - t[0][1] * t[1][0] == 1.0);
    }
    CHECK_THROWS_AS(transfer_matrix(0, 0, 0), DomainError);
}

TEST_CASE("fibonacci numbers") {
    CHECK(fibonacci(0) == 1);
    CHECK(fibonacci(1) == 1);
    CHECK(fibonacci(2) == 2);
    CHECK(fibonacci(5) == 8);
    CHECK(fibonacci(16) == 1597);
    for (int k = 1; k < 40; ++k) CHECK(fibonacci(k + 1) == fibonacci(k) + fibonacci(k - 1));
}

TEST_CASE("half trace oracle seeds") {
    for (double E : {-2.5, 0.0, 1.7})
        for (double V : {0.0, 0.3, 4.0}) {
            CHECK(half_trace_oracle(-1, E, V) == 1.0);
            CHECK(half_trace_oracle(0, E, V) == E / 2);
            CHECK(half_trace_oracle(1, E, V) == doctest::Approx((E - V) / 2));
        }
    CHECK_THROWS_AS(half_trace_oracle(17, 0, 0), DomainError);
    CHECK_THROWS_AS(half_trace_oracle(-2, 0, 0), DomainError);
}

TEST_CASE("trace recursion matches transfer-matrix products") {
    double worst = 0;
    for (double V : {0.0, 0.1, 1.0})
        for (int i = 0; i < 300; ++i) {
            double E = -3 + 6.0 * i / 299;
            TraceSequence s = trace_sequence(E, V, 16);
            for (int k = -1; k <= std::min(16, s.last_index()); ++k) {
                double o = half_trace_oracle(k, E, V);
                worst = std::max(worst, std::abs(s.at(k) - o) / std::max(1.0, std::abs(o)));
                CHECK(half_trace(k, E, V) == s.at(k));
            }
        }
    CHECK(worst <= 1e-8);
}

TEST_CASE("trace sequence examples") {
    TraceSequence a = trace_sequence(2, 0, 30);
    for (double x : a.x) CHECK(x == 1.0);
    TraceSequence b = trace_sequence(0, 0, 5);
    std::vector<double> expect{1, 0, 0, -1, 0, 0, 1};
    REQUIRE(b.x.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(b.x[i] == expect[i]);
    TraceSequence c = trace_sequence(3, 0, 40);
    CHECK(c.escaped);
    CHECK(std::abs(c.x.back()) > 1e100);
    CHECK_THROWS_AS(trace_sequence(0, 0, 0), DomainError);
    CHECK_THROWS_AS(trace_sequence(0, -1, 5), DomainError);
}

TEST_CASE("half trace keeps sign and size past overflow") {
    for (double E : {3.0, -3.5, 5.0}) {
        double x = half_trace(60, E, 1.0);
        CHECK(std::isinf(x));
        CHECK(std::abs(half_trace(20, E, 1.0)) > 1.0);
    }
    // sign agrees with the exact recursion while it is still finite
    Rng r(2);
    for (int i = 0; i < 200; ++i) {
        double E = r.uniform(-4, 6), V = r.uniform(0, 3);
        TraceSequence s = trace_sequence(E, V, 25);
        for (int k = 1; k <= s.last_index(); ++k) CHECK(half_trace(k, E, V) == s.at(k));
    }
}

TEST_CASE("Fricke invariant along trace sequences") {
    Rng r(4);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        double E = r.uniform(-4, 4), V = r.uniform(0, 2);
        auto s = TraceSequenceState::seed(E, V);
        for (int k = 0; k < 40; ++k) {
            double a = s.x_curr, b = s.x_prev1, c = s.x_prev2;
            if (std::abs(a) > 1e6 || std::abs(b) > 1e6 || std::abs(c) > 1e6) break;
            // relative to the size of the terms being cancelled
            double scale = 1 + a * a + b * b + c * c + 2 * std::abs(a * b * c);
            CHECK(std::abs(s.fricke_value() - V * V / 4) <= 1e-8 * scale);
            ++checked;
            s.advance();
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("escape test examples and invariants") {
    auto a = escape_test(0, 0, 5000);
    CHECK(a.status == OrbitStatus::bounded_so_far);
    CHECK(a.steps_used == 5000);
    auto b = escape_test(10, 1, 10);
    CHECK(b.status == OrbitStatus::escaped);
    REQUIRE(b.escape_index.has_value());
    CHECK(*b.escape_index <= 10);
    CHECK(*b.escape_index <= b.steps_used);
    auto c = escape_test(2, 0, 1000);
    CHECK(c.status == OrbitStatus::bounded_so_far);
    CHECK(c.max_norm == 1.0);
    CHECK_THROWS_AS(escape_test(0, 0, 0), DomainError);
    CHECK_THROWS_AS(escape_test(0, 0, 10, 1.0), DomainError);

    Rng r(6);
    for (int i = 0; i < 2000; ++i) {
        double V = r.uniform(0, 0.5), E = r.uniform(-3, 3);
        auto o = escape_test(E, V, 2000);
        if (o.status == OrbitStatus::escaped) {
            CHECK(*o.escape_index <= o.steps_used);
        } else {
            // at small coupling bounded orbits never leave the box of radius 2
            CHECK(o.max_norm <= kDefaultEscapeRadius);
        }
    }
}

TEST_CASE("escape agrees with the spectrum at V = 0") {
    // the free operator has spectrum [-2, 2]
    for (int i = 0; i <= 400; ++i) {
        double E = -3 + 6.0 * i / 400;
        auto o = escape_test(E, 0, 10000);
        if (std::abs(E) > 2.05) CHECK(o.status == OrbitStatus::escaped);
    }
    CHECK(escape_test(1.0, 0, 10000).status == OrbitStatus::bounded_so_far);
    CHECK(escape_test(-1.9, 0, 10000).status == OrbitStatus::bounded_so_far);
}
