#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fibtrace/error.hpp"
#include "fibtrace/hyperbolicity.hpp"
#include "fibtrace/rng.hpp"

namespace fibtrace {

namespace {

constexpr double kRel = 1e-12;  // slack for comparisons that hold with equality in exact arithmetic

double lam(const RecurrenceParams& p) { return p.lambda > 0.0 ? p.lambda : std::numbers::phi * std::numbers::phi; }

RecurrenceFlags flags_for(const std::vector<double>& x, const std::vector<double>& X, const RecurrenceParams& p) {
    const double l = lam(p), e = p.epsilon, d = p.delta, sd = std::sqrt(d);
    const int N = static_cast<int>(x.size()) - 1;
    const double lm = std::pow(l, 1.0 - e);
    RecurrenceFlags f;
    f.small_tilt = x[N] <= 2.0 * sd * X[N];
    double target = X[0] * std::pow(l, N * (1.0 - e));
    f.growth = X[N] >= target;
    f.floor = target > std::pow(l, 0.5 * N * (1.0 - 4.0 * e));
    f.stepwise_growth = f.stepwise_small = f.dichotomy = true;
    bool separated = false;
    for (int k = 0; k < N; ++k) {
        bool ok = true;
        if (!(X[k + 1] >= lm * X[k])) f.stepwise_growth = ok = false;
        if (!(x[k + 1] <= (1.0 + 2.0 * d + sd) * std::max(x[k], sd * X[k]) * (1.0 + kRel))) f.stepwise_small = ok = false;
        if (!ok && f.first_failure < 0) f.first_failure = k;
    }
    for (int k = 0; k <= N; ++k) {
        bool sep = sd * X[k] > x[k];
        if (separated && !sep) {
            f.dichotomy = false;
            if (f.first_failure < 0) f.first_failure = k;
        }
        separated = separated || sep;
    }
    return f;
}

}  // namespace

RecurrenceParams default_recurrence_params() {
    RecurrenceParams p;
    p.lambda = std::numbers::phi * std::numbers::phi;
    return p;
}

void validate(const RecurrenceParams& p) {
    const double l = lam(p);
    if (!(l > 1.0)) throw DomainError("lambda must be > 1");
    if (!(p.epsilon > 0.0 && p.epsilon < 0.25)) throw DomainError("epsilon must lie in (0, 1/4)");
    if (!(p.delta >= 0.0 && p.delta < l - 1.0)) throw DomainError("delta must lie in [0, lambda - 1)");
    if (!(p.c1 >= 0.0)) throw DomainError("C1 must be >= 0");
    if (!(p.c2 > 0.0)) throw DomainError("C2 must be > 0");
}

RecurrenceRun run_dD(const RecurrenceParams& p, int N, double D0) {
    validate(p);
    if (N < 1) throw DomainError("N must be >= 1");
    const double l = lam(p), d = p.delta;
    RecurrenceRun r;
    r.params = p;
    r.params.lambda = l;
    r.n = N;
    r.kind = RecurrenceKind::dD;
    r.b.resize(N + 1);
    for (int k = 0; k <= N; ++k) r.b[k] = std::pow(l - d, k - N);
    r.small.assign(N + 1, 0.0);
    r.large.assign(N + 1, 0.0);
    r.small[0] = 1.0;
    r.large[0] = D0 > 0.0 ? D0 : p.c2 * std::pow(l + d, -0.5 * N);
    for (int k = 0; k < N; ++k) {
        r.small[k + 1] = (1.0 + 2.0 * d) * r.small[k] + d * r.large[k];
        r.large[k + 1] = (l - d) * r.large[k] - p.c1 * r.b[k] * r.small[k];
    }
    r.flags = flags_for(r.small, r.large, r.params);
    return r;
}

SlackSchedule zero_slack(int N) {
    SlackSchedule s;
    s.small.assign(std::max(N, 0), 0.0);
    s.large.assign(std::max(N, 0), 0.0);
    return s;
}

SlackSchedule random_slack(int N, double max_slack, std::uint64_t seed) {
    if (!(max_slack >= 0.0 && max_slack < 1.0)) throw DomainError("max_slack must lie in [0, 1)");
    Rng r(seed);
    SlackSchedule s = zero_slack(N);
    for (int k = 0; k < N; ++k) {
        s.small[k] = r.uniform(0.0, max_slack);
        s.large[k] = r.uniform(0.0, max_slack);
    }
    s.initial = r.uniform(0.0, max_slack);
    return s;
}

void check_b_sequence(const std::vector<double>& b, const RecurrenceParams& p) {
    const double l = lam(p), d = p.delta;
    if (b.size() < 2) throw DomainError("b sequence must have at least two terms");
    const std::size_t N = b.size() - 1;
    if (!(b[0] > 0.0)) throw DomainError("b sequence violates 0 < b_0");
    for (std::size_t k = 0; k < N; ++k) {
        if (!(b[k] < b[k + 1])) throw DomainError("b sequence is not strictly increasing at k = " + std::to_string(k));
        if (!(b[k + 1] >= (l - d) * b[k] * (1.0 - kRel)))
            throw DomainError("b sequence violates (lambda - delta) b_k <= b_{k+1} at k = " + std::to_string(k));
        if (!(b[k + 1] <= (l + d) * b[k] * (1.0 + kRel)))
            throw DomainError("b sequence violates b_{k+1} <= (lambda + delta) b_k at k = " + std::to_string(k));
    }
    if (!(b[N - 1] < 1.0)) throw DomainError("b sequence violates b_{N-1} < 1");
    if (!(b[N] >= 1.0)) throw DomainError("b sequence violates 1 <= b_N");
}

std::vector<double> b_sequence_min_ratio(const RecurrenceParams& p, int N) {
    std::vector<double> b(N + 1);
    for (int k = 0; k <= N; ++k) b[k] = std::pow(lam(p) - p.delta, k - N);
    return b;
}

std::vector<double> b_sequence_max_ratio(const RecurrenceParams& p, int N, double b_last) {
    std::vector<double> b(N + 1);
    for (int k = 0; k <= N; ++k) b[k] = b_last * std::pow(lam(p) + p.delta, k - N);
    return b;
}

std::vector<double> b_sequence_random(const RecurrenceParams& p, int N, std::uint64_t seed) {
    if (N < 1) throw DomainError("N must be >= 1");
    const double l = lam(p), d = p.delta;
    Rng r(seed);
    std::vector<double> ratio(N);
    for (auto& q : ratio) q = r.uniform(l - d, l + d);
    // b_N <= ratio_{N-1} / (lambda - delta) keeps every b~_k <= (lambda - delta)^{k-N},
    // which the domination step needs and the stated constraints alone do not give
    std::vector<double> b(N + 1);
    b[N] = r.uniform(1.0, ratio[N - 1] / (l - d));
    for (int k = N - 1; k >= 0; --k) b[k] = b[k + 1] / ratio[k];
    return b;
}

RecurrenceRun run_aA(const RecurrenceParams& p, const std::vector<double>& b, const SlackSchedule& s) {
    validate(p);
    check_b_sequence(b, p);
    const int N = static_cast<int>(b.size()) - 1;
    if (static_cast<int>(s.small.size()) < N || static_cast<int>(s.large.size()) < N || s.initial < 0.0)
        throw DomainError("slack schedule too short or negative");
    const double l = lam(p), d = p.delta;
    RecurrenceRun r;
    r.params = p;
    r.params.lambda = l;
    r.n = N;
    r.kind = RecurrenceKind::aA;
    r.b = b;
    r.small.assign(N + 1, 0.0);
    r.large.assign(N + 1, 0.0);
    r.small[0] = 1.0;
    r.large[0] = p.c2 * std::sqrt(b[0]) * (1.0 + s.initial);
    for (int k = 0; k < N; ++k) {
        if (!(s.small[k] >= 0.0 && s.small[k] < 1.0) || !(s.large[k] >= 0.0))
            throw DomainError("slack values out of range at k = " + std::to_string(k));
        r.small[k + 1] = (1.0 - s.small[k]) * ((1.0 + 2.0 * d) * r.small[k] + d * r.large[k]);
        double lower = (l - d) * r.large[k] - p.c1 * b[k] * r.small[k];
        r.large[k + 1] = lower + s.large[k] * std::abs(lower);
    }
    r.flags = flags_for(r.small, r.large, r.params);

    // compare against the d, D recurrence started from the same D_0
    RecurrenceRun ref = run_dD(p, N, r.large[0]);
    for (int k = 0; k <= N; ++k) {
        bool dom = r.large[k] >= ref.large[k] * (1.0 - kRel) - 1e-300;
        bool ratio = r.large[k] * ref.small[k] >= ref.large[k] * r.small[k] * (1.0 - kRel) - 1e-300;
        if (!(dom && ratio)) {
            r.flags.dominated = false;
            if (r.flags.first_failure < 0) r.flags.first_failure = k;
            break;
        }
    }
    return r;
}

PassingPair find_passing_pair(const RecurrenceParams& base, double delta0, int n_ref) {
    if (n_ref < 1) throw DomainError("n_ref must be >= 1");
    auto passes = [&](double delta, int N) {
        RecurrenceParams p = base;
        p.delta = delta;
        return run_dD(p, N).flags.all();
    };
    PassingPair pp;
    pp.delta0 = delta0;
    pp.n_ref = n_ref;
    if (!passes(delta0, n_ref)) throw ConstructionError("no passing pair: delta0 fails at n_ref");
    int n = n_ref;
    while (n > 1 && passes(delta0, n - 1)) --n;
    pp.n0 = n;

    // geometric bisection for the largest delta passing at n_ref
    double lo = delta0, hi = 0.999 * (lam(base) - 1.0);
    if (passes(hi, n_ref)) {
        pp.delta_max_at_ref = hi;
    } else {
        for (int it = 0; it < 60; ++it) {
            double mid = std::sqrt(lo * hi);
            (passes(mid, n_ref) ? lo : hi) = mid;
        }
        pp.delta_max_at_ref = lo;
    }
    return pp;
}

}  // namespace fibtrace
