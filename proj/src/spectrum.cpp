#include "fibtrace/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fibtrace/error.hpp"

namespace fibtrace {

double alpha() {
    static const double a = (std::sqrt(5.0) - 1.0) / 2.0;
    return a;
}

double potential(long m, double V) {
    double t = static_cast<double>(m) * alpha();
    double f = t - std::floor(t);
    return f >= 1.0 - alpha() ? V : 0.0;
}

Mat2 transfer_matrix(long m, double E, double V) {
    if (m < 1) throw DomainError("transfer_matrix: site index m must be >= 1");
    return {{{E - potential(m, V), -1.0}, {1.0, 0.0}}};
}

long fibonacci(int k) {
    if (k < -1) throw DomainError("fibonacci: k must be >= -1");
    if (k == -1) return 0;
    long a = 1, b = 1;  // F_0, F_1
    for (int i = 1; i < k; ++i) {
        long c = a + b;
        a = b;
        b = c;
    }
    return b;
}

static Mat2 mul(const Mat2& a, const Mat2& b) {
    return {{{a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]},
             {a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]}}};
}

double half_trace_oracle(int k, double E, double V) {
    if (k < -1 || k > 16) throw DomainError("half_trace_oracle: k must lie in -1..16");
    checked_coupling(V);
    Mat2 M;
    if (k == -1) {
        M = {{{1.0, -V}, {0.0, 1.0}}};
    } else if (k == 0) {
        M = {{{E, -1.0}, {1.0, 0.0}}};
    } else {
        M = {{{1.0, 0.0}, {0.0, 1.0}}};
        long n = fibonacci(k);
        for (long m = 1; m <= n; ++m) M = mul(transfer_matrix(m, E, V), M);
    }
    return 0.5 * (M[0][0] + M[1][1]);
}

TraceSequenceState TraceSequenceState::seed(double E, double V) {
    TraceSequenceState s;
    s.x_prev2 = 1.0;
    s.x_prev1 = 0.5 * E;
    s.x_curr = 0.5 * (E - V);
    s.k = 1;
    return s;
}

void TraceSequenceState::advance() {
    double next = 2.0 * x_curr * x_prev1 - x_prev2;
    x_prev2 = x_prev1;
    x_prev1 = x_curr;
    x_curr = next;
    ++k;
}

double TraceSequenceState::fricke_value() const {
    return x_curr * x_curr + x_prev1 * x_prev1 + x_prev2 * x_prev2 - 2.0 * x_curr * x_prev1 * x_prev2 - 1.0;
}

TraceSequence trace_sequence(double E, double V, int k_max) {
    if (k_max < 1) throw DomainError("trace_sequence: k_max must be >= 1");
    if (!std::isfinite(E)) throw DomainError("trace_sequence: non-finite energy");
    checked_coupling(V);
    TraceSequence out;
    auto s = TraceSequenceState::seed(E, V);
    out.x = {s.x_prev2, s.x_prev1, s.x_curr};
    while (s.k < k_max) {
        s.advance();
        if (!std::isfinite(s.x_curr) || std::abs(s.x_curr) > kOverflowGuard) {
            out.escaped = true;
            break;
        }
        out.x.push_back(s.x_curr);
    }
    return out;
}

double half_trace(int k, double E, double V) {
    if (k == -1) return 1.0;
    if (k == 0) return 0.5 * E;
    double a = 1.0, b = 0.5 * E, c = 0.5 * (E - V);
    constexpr double big = 1e150;
    for (int j = 1; j < k; ++j) {
        double next;
        double ab = std::abs(b), ac = std::abs(c);
        if (ab > big && ac > big && std::abs(a) <= std::min(ab, ac))
            next = (b > 0) == (c > 0) ? INFINITY : -INFINITY;
        else
            next = 2.0 * c * b - a;
        a = b;
        b = c;
        c = next;
    }
    return c;
}

OrbitRecord escape_test(double E, double V, long n_max, double escape_radius) {
    if (n_max < 1) throw DomainError("escape_test: n_max must be >= 1");
    if (!(escape_radius > 1.0)) throw DomainError("escape_test: escape_radius must be > 1");
    checked_coupling(V);
    OrbitRecord r;
    r.start = line_point(E, V);
    Point3 p = r.start;
    for (long j = 0;; ++j) {
        if (!is_finite(p)) {
            r.status = OrbitStatus::escaped;
            r.nonfinite = true;
            r.escape_index = j;
            r.steps_used = j;
            return r;
        }
        r.max_norm = std::max(r.max_norm, sup_norm(p));
        double ax = std::abs(p.x);
        if (std::abs(p.y) > 1.0 && ax > 1.0 && ax > escape_radius) {
            r.status = OrbitStatus::escaped;
            r.escape_index = j;
            r.steps_used = j;
            return r;
        }
        if (j == n_max) break;
        p = trace_step_raw(p);
    }
    r.steps_used = n_max;
    return r;
}

}  // namespace fibtrace
