#include "fibtrace/subshift.hpp"

#include <cmath>
#include <string>

#include "fibtrace/error.hpp"

namespace fibtrace {

namespace {
using IMat = std::array<std::array<std::uint64_t, 6>, 6>;

IMat to_imat(const TransitionMatrix& m) {
    IMat r{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) r[i][j] = static_cast<std::uint64_t>(m[i][j]);
    return r;
}

IMat mul(const IMat& a, const IMat& b) {
    IMat r{};
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < 6; ++k)
            if (a[i][k])
                for (int j = 0; j < 6; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

IMat ipow(int n) {
    IMat r{};
    for (int i = 0; i < 6; ++i) r[i][i] = 1;
    IMat a = to_imat(subshift_matrix());
    for (int k = 0; k < n; ++k) r = mul(r, a);
    return r;
}

void extend(int last, int left, std::uint64_t& count) {
    if (left == 0) {
        ++count;
        return;
    }
    const auto& m = subshift_matrix();
    for (int b = 0; b < 6; ++b)
        if (m[last][b]) extend(b, left - 1, count);
}

void extend_closed(int first, int last, int left, std::uint64_t& count) {
    const auto& m = subshift_matrix();
    if (left == 0) {
        count += m[last][first] ? 1 : 0;
        return;
    }
    for (int b = 0; b < 6; ++b)
        if (m[last][b]) extend_closed(first, b, left - 1, count);
}

// coefficients c[0..6] of det(xI - M) = sum c[i] x^(6-i), Faddeev-LeVerrier in integers
std::array<long long, 7> char_poly() {
    const auto& a = subshift_matrix();
    using LMat = std::array<std::array<long long, 6>, 6>;
    LMat M{};
    std::array<long long, 7> c{};
    c[0] = 1;
    for (int k = 1; k <= 6; ++k) {
        // M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k
        LMat next{};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                long long s = 0;
                for (int l = 0; l < 6; ++l) s += a[i][l] * M[l][j];
                next[i][j] = s + (i == j ? c[k - 1] : 0);
            }
        M = next;
        long long tr = 0;
        for (int i = 0; i < 6; ++i)
            for (int l = 0; l < 6; ++l) tr += a[i][l] * M[l][i];
        c[k] = -tr / k;
    }
    return c;
}
}  // namespace

const TransitionMatrix& subshift_matrix() {
    static const TransitionMatrix m = {{{0, 0, 0, 1, 1, 1},
                                        {0, 0, 1, 0, 1, 1},
                                        {0, 0, 0, 0, 1, 0},
                                        {0, 0, 0, 0, 0, 1},
                                        {1, 0, 0, 0, 0, 0},
                                        {0, 1, 0, 0, 0, 0}}};
    return m;
}

bool subshift_admissible(const std::vector<int>& word) {
    if (word.empty()) throw DomainError("subshift_admissible: empty word");
    for (int s : word)
        if (s < 1 || s > 6) throw DomainError("subshift symbol out of range 1..6: " + std::to_string(s));
    const auto& m = subshift_matrix();
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        if (!m[word[i] - 1][word[i + 1] - 1]) return false;
    return true;
}

SubshiftCounts subshift_counts(int n) {
    if (n < 1 || n > 20) throw DomainError("subshift length n must lie in 1..20");
    IMat p = ipow(n - 1), q = ipow(n);
    SubshiftCounts c;
    c.n = n;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) c.word_count += p[i][j];
        c.periodic_count += q[i][i];
    }
    return c;
}

std::uint64_t enumerate_words(int n) {
    if (n < 1) throw DomainError("enumerate_words: n must be >= 1");
    std::uint64_t count = 0;
    for (int a = 0; a < 6; ++a) extend(a, n - 1, count);
    return count;
}

std::uint64_t enumerate_periodic(int n) {
    if (n < 1) throw DomainError("enumerate_periodic: n must be >= 1");
    std::uint64_t count = 0;
    for (int a = 0; a < 6; ++a) extend_closed(a, a, n - 1, count);
    return count;
}

double subshift_spectral_radius() {
    const auto& m = subshift_matrix();
    std::array<double, 6> x;
    x.fill(1.0);
    double rho = 0.0;
    for (int it = 0; it < 10000; ++it) {
        std::array<double, 6> y{};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) y[i] += m[i][j] * x[j];
        double sx = 0, sy = 0;
        for (int i = 0; i < 6; ++i) {
            sx += x[i];
            sy += y[i];
        }
        double next = sy / sx;
        for (int i = 0; i < 6; ++i) x[i] = y[i] / sy;
        // stop once consecutive estimates agree well below the requested 1e-10
        if (it > 0 && std::abs(next - rho) <= 1e-14 * next) return next;
        rho = next;
    }
    throw NumericError("power iteration did not converge");
}

double subshift_entropy() { return std::log(subshift_spectral_radius()); }

double subshift_char_root() {
    auto c = char_poly();
    auto p = [&](double x) {
        double s = 0;
        for (long long ci : c) s = s * x + static_cast<double>(ci);
        return s;
    };
    // every root has modulus <= max row sum = 3, and p(1) < 0 < p(3)
    double lo = 1.0, hi = 3.0;
    if (!(p(hi) > 0.0) || !(p(lo) < 0.0)) throw NumericError("characteristic root not bracketed");
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (p(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double entropy_from_words(int n) {
    if (n < 2) throw DomainError("entropy_from_words: n must be >= 2");
    return std::log(static_cast<double>(subshift_counts(n).word_count) /
                    static_cast<double>(subshift_counts(n - 1).word_count));
}

}  // namespace fibtrace
