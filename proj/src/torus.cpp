#include "fibtrace/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibtrace/error.hpp"
#include "fibtrace/kernels.hpp"
#include "fibtrace/rng.hpp"

namespace fibtrace {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double a) {
    double f = a - std::floor(a);
    return f >= 1.0 ? 0.0 : f;
}

double norm2(const Vec2& v) { return std::hypot(v[0], v[1]); }
}  // namespace

TorusPoint torus_point(double theta, double phi) { return {frac(theta), frac(phi)}; }

TorusPoint torus_auto(const TorusPoint& t) { return {frac(t.theta + t.phi), frac(t.theta)}; }

TorusPoint torus_auto_inv(const TorusPoint& t) { return {frac(t.phi), frac(t.theta - t.phi)}; }

Point3 semiconj(const TorusPoint& t) {
    return {std::cos(kTwoPi * (t.theta + t.phi)), std::cos(kTwoPi * t.theta), std::cos(kTwoPi * t.phi)};
}

Mat32 df_semiconj(const TorusPoint& t) {
    double s = std::sin(kTwoPi * (t.theta + t.phi));
    double st = std::sin(kTwoPi * t.theta);
    double sp = std::sin(kTwoPi * t.phi);
    return {{{-kTwoPi * s, -kTwoPi * s}, {-kTwoPi * st, 0.0}, {0.0, -kTwoPi * sp}}};
}

double semiconj_defect(const TorusPoint& t) {
    return distance(trace_step_raw(semiconj(t)), semiconj(torus_auto(t)));
}

double check_semiconjugacy(int grid_resolution) {
    if (grid_resolution < 2) throw DomainError("grid_resolution must be >= 2");
    return parallel::semiconj_defect_grid(grid_resolution).max_defect;
}

const EigenData& torus_eigen() {
    static const EigenData e = [] {
        EigenData d;
        d.mu = std::numbers::phi;
        double nu = std::hypot(d.mu, 1.0);
        d.v_u = {d.mu / nu, 1.0 / nu};
        d.v_s = {1.0 / nu, -d.mu / nu};
        return d;
    }();
    return e;
}

Vec2 mat_apply(const Vec2& v) { return {v[0] + v[1], v[0]}; }
Vec2 mat_apply_inv(const Vec2& v) { return {v[1], v[0] - v[1]}; }

Vec2 eigen_coords(const Vec2& v) {
    // v_u, v_s are orthonormal (A is symmetric), so the 2x2 solve is a transpose
    const auto& e = torus_eigen();
    return {e.v_u[0] * v[0] + e.v_u[1] * v[1], e.v_s[0] * v[0] + e.v_s[1] * v[1]};
}

ConeSpec2D make_cone2d(double zeta) {
    if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("zeta must lie in (0, 1)");
    return {zeta};
}

bool cone_member_2d(const Vec2& v, const ConeSpec2D& c, ConeKind which) {
    if (v[0] == 0.0 && v[1] == 0.0) throw DomainError("cone_member_2d: zero vector");
    Vec2 e = eigen_coords(v);
    double cu = std::abs(e[0]), cs = std::abs(e[1]);
    return which == ConeKind::unstable ? cu > cs / c.zeta : cs > cu / c.zeta;
}

static Vec2 random_cone_vector(Rng& r, const ConeSpec2D& c, ConeKind which) {
    const auto& e = torus_eigen();
    // strictly inside: the minor coefficient is below zeta times the major one
    double major = r.sign() * r.uniform(0.1, 10.0);
    double minor = major * c.zeta * r.uniform(-1.0, 1.0) * (1.0 - 1e-12);
    double cu = which == ConeKind::unstable ? major : minor;
    double cs = which == ConeKind::unstable ? minor : major;
    return {cu * e.v_u[0] + cs * e.v_s[0], cu * e.v_u[1] + cs * e.v_s[1]};
}

double cone_expansion_check(const ConeSpec2D& c, int n, int samples, ConeKind which, std::uint64_t seed) {
    if (n < 1) throw DomainError("cone_expansion_check: n must be >= 1");
    const double mun = std::pow(torus_eigen().mu, n);
    Rng r(seed);
    double worst = 1.0;  // attained by the eigenvector itself
    for (int s = 0; s < samples; ++s) {
        Vec2 v = random_cone_vector(r, c, which), w = v;
        for (int k = 0; k < n; ++k) w = which == ConeKind::unstable ? mat_apply(w) : mat_apply_inv(w);
        worst = std::min(worst, norm2(w) / (mun * norm2(v)));
    }
    return worst;
}

double cone_invariance_fraction(const ConeSpec2D& c, int samples, ConeKind which, std::uint64_t seed) {
    Rng r(seed);
    int kept = 0;
    for (int s = 0; s < samples; ++s) {
        Vec2 v = random_cone_vector(r, c, which);
        Vec2 w = which == ConeKind::unstable ? mat_apply(v) : mat_apply_inv(v);
        kept += cone_member_2d(w, c, which);
    }
    return samples > 0 ? static_cast<double>(kept) / samples : 1.0;
}

AngleRatioBounds df_angle_ratio_bounds(double radius, int samples, std::uint64_t seed) {
    if (!(radius > 0.0 && radius <= 0.25)) throw DomainError("neighborhood radius must lie in (0, 0.25]");
    Rng r(seed);
    AngleRatioBounds b{0.0, INFINITY, 0.0};
    for (int s = 0; s < samples; ++s) {
        double th = r.uniform(-radius, radius), ph = r.uniform(-radius, radius);
        if (th == 0.0 && ph == 0.0) continue;
        // signed angles; the Jacobian is periodic so no reduction is needed
        Mat32 d = df_semiconj({th, ph});
        double c1[3] = {d[0][0], d[1][0], d[2][0]};
        double c2[3] = {d[0][1], d[1][1], d[2][1]};
        double dot = 0, n1 = 0, n2 = 0;
        for (int i = 0; i < 3; ++i) {
            dot += c1[i] * c2[i];
            n1 += c1[i] * c1[i];
            n2 += c2[i] * c2[i];
        }
        n1 = std::sqrt(n1);
        n2 = std::sqrt(n2);
        if (n1 == 0.0 || n2 == 0.0) continue;
        b.max_cos_angle = std::max(b.max_cos_angle, std::abs(dot) / (n1 * n2));
        b.ratio_min = std::min(b.ratio_min, n1 / n2);
        b.ratio_max = std::max(b.ratio_max, n1 / n2);
    }
    return b;
}

double df_length_ratio_linear(double t) {
    if (std::isinf(t)) return std::sqrt(2.0);
    return std::sqrt((1.0 + 2.0 * t * t + 2.0 * t) / (2.0 + t * t + 2.0 * t));
}

}  // namespace fibtrace
