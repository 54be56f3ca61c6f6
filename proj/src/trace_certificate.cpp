#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibtrace/error.hpp"
#include "fibtrace/hyperbolicity.hpp"
#include "fibtrace/kernels.hpp"
#include "fibtrace/rng.hpp"

namespace fibtrace {

namespace {

const Eigen::Matrix3d& frame_inverse() {
    static const Eigen::Matrix3d inv = [] {
        const auto& s = singular_eigen();
        Eigen::Matrix3d E;
        for (int c = 0; c < 3; ++c)
            for (int r = 0; r < 3; ++r) E(r, c) = s.eigenvectors[c][r];
        return Eigen::Matrix3d(E.inverse());
    }();
    return inv;
}

const std::array<Point3, 4>& singular_points() {
    static const auto pts = singular_orbit().points;
    return pts;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Newton steps along grad G onto the level set G = level
Point3 project(Point3 q, double level) {
    for (int it = 0; it < 8; ++it) {
        auto g = fricke_gradient(q);
        double gg = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
        if (gg == 0.0) break;
        double s = (fricke(q) - level) / gg;
        q = {q.x - s * g[0], q.y - s * g[1], q.z - s * g[2]};
    }
    return q;
}

Vec3 tangent_part(const Point3& q, Vec3 w) {
    auto g = fricke_gradient(q);
    double gg = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
    if (gg == 0.0) return w;
    double s = (w[0] * g[0] + w[1] * g[1] + w[2] * g[2]) / gg;
    return {w[0] - s * g[0], w[1] - s * g[1], w[2] - s * g[2]};
}

// eigenframe coordinates of q - P_i after undoing the sign symmetry that carries P_1 to P_i
Eigen::Vector3d frame_coords(const Point3& q, const Point3& P) {
    Eigen::Vector3d d(P.x * (q.x - P.x), P.y * (q.y - P.y), P.z * (q.z - P.z));
    return frame_inverse() * d;
}

struct SlotResult {
    long attempts = 0, rej_unbounded = 0, rej_singular = 0;
    bool accepted = false;
    long segments = 0, segments_failed = 0;
    bool inconclusive = false;
    double ratio = 0, log_growth = 0;
    long near_steps = 0, near_in = 0;
    Point3 start;
};

bool bounded(Point3 q, int n, double cap) {
    Point3 f = q, b = q;
    for (int i = 0; i < n; ++i) {
        f = trace_step_raw(f);
        b = trace_step_inv_raw(b);
        if (!(euclid_norm(f) <= cap) || !(euclid_norm(b) <= cap)) return false;
    }
    return true;
}

SlotResult run_slot(const TraceCertParams& p, std::size_t slot) {
    SlotResult res;
    Rng r(p.seed, slot);
    const double level = 0.25 * p.coupling * p.coupling;
    const auto& eig = torus_eigen();
    const double zeta = p.cone2.zeta;
    const int n = p.n_forward;
    Point3 q;
    TorusPoint t;
    for (;;) {
        if (res.attempts >= p.max_attempts) return res;
        ++res.attempts;
        t = {r.uniform(), r.uniform()};
        q = project(semiconj(t), level);
        if (!is_finite(q) || in_singular_neighbourhood(q, p.singular_radius)) {
            ++res.rej_singular;
            continue;
        }
        if (!bounded(q, n, p.norm_cap)) {
            ++res.rej_unbounded;
            continue;
        }
        break;
    }
    res.accepted = true;
    res.start = q;

    // a random unstable-cone vector on the torus, carried to the surface by DF
    double major = r.sign() * r.uniform(1.0, 100.0) / zeta;
    double minor = r.sign();
    Vec2 c{major * eig.v_u[0] + minor * eig.v_s[0], major * eig.v_u[1] + minor * eig.v_s[1]};
    Mat32 D = df_semiconj(t);
    Vec3 w = tangent_part(q, {D[0][0] * c[0] + D[0][1] * c[1], D[1][0] * c[0] + D[1][1] * c[1],
                              D[2][0] * c[0] + D[2][1] * c[1]});
    const double w0 = norm(w);

    bool in_segment = false, entered_cone = false, failed = false;
    int last_state = -1;  // -1 unknown, 0 outside the cone, 1 inside
    Point3 o = q;
    for (int k = 0; k <= n; ++k) {
        if (!is_finite(o) || !std::isfinite(w[0] + w[1] + w[2])) {
            res.inconclusive = true;
            return res;
        }
        if (in_singular_neighbourhood(o, p.singular_radius)) {
            if (in_segment) {
                ++res.segments;
                res.segments_failed += failed;
            }
            in_segment = false;
            ++res.near_steps;
            // nearest singular point, read in the eigenframe: z ~ expanding coordinate
            double best = INFINITY;
            Eigen::Vector3d pc = Eigen::Vector3d::Zero(), vc = Eigen::Vector3d::Zero();
            for (const auto& P : singular_points()) {
                Eigen::Vector3d x = frame_coords(o, P);
                if (x.cwiseAbs().maxCoeff() < best) {
                    best = x.cwiseAbs().maxCoeff();
                    pc = x;
                    Eigen::Vector3d wv(P.x * w[0], P.y * w[1], P.z * w[2]);
                    vc = frame_inverse() * wv;
                }
            }
            Vec3 vn{vc(2), vc(1), vc(0)};
            if (vc.norm() > 0 && cone_member_3d(vn, {pc(2), pc(1), pc(0)}, p.cone3)) ++res.near_in;
        } else {
            if (!in_segment) {
                in_segment = true;
                entered_cone = false;
                failed = false;
            }
            auto cr = cone_ratio_at(o, w);
            if (cr) {
                bool inside = *cr > 1.0 / zeta;
                if (entered_cone && !inside) failed = true;
                entered_cone = entered_cone || inside;
                last_state = inside ? 1 : 0;
            }
        }
        if (k < n) {
            w = mat_vec(dt_matrix(o), w);
            o = trace_step_raw(o);
        }
    }
    if (in_segment) {
        ++res.segments;
        res.segments_failed += failed;
    }
    if (last_state != 1) res.inconclusive = true;
    const double wn = norm(w);
    res.ratio = wn / (w0 * std::pow(std::numbers::phi, n * (1.0 - 4.0 * p.epsilon)));
    res.log_growth = std::log(wn / w0) / n;
    return res;
}

}  // namespace

bool in_singular_neighbourhood(const Point3& q, double radius) {
    for (const auto& P : singular_points())
        if (frame_coords(q, P).cwiseAbs().maxCoeff() <= radius) return true;
    return false;
}

std::optional<double> cone_ratio_at(const Point3& q, const Vec3& w) {
    Point3 s = project(q, 0.0);
    // points on the horns of S_V leave the cube and have no preimage on the torus
    if (!is_finite(s) || sup_norm(s) > 1.0 + 1e-6) return std::nullopt;
    Vec3 wt = tangent_part(s, w);
    double x = std::clamp(s.x, -1.0, 1.0), y = std::clamp(s.y, -1.0, 1.0), z = std::clamp(s.z, -1.0, 1.0);
    // sines of 2 pi theta, 2 pi phi recovered from the coordinates; theta is taken in [0, 1/2]
    double st = std::sqrt(std::max(0.0, 1.0 - y * y));
    double sp = std::copysign(std::sqrt(std::max(0.0, 1.0 - z * z)), y * z - x);
    double sa = st * z + y * sp;
    const double tp = -2.0 * std::numbers::pi;
    Eigen::Matrix<double, 3, 2> D;
    D << tp * sa, tp * sa, tp * st, 0.0, 0.0, tp * sp;
    Eigen::Matrix2d G = D.transpose() * D;
    double scale = G.trace();
    if (!(scale > 0.0) || std::abs(G.determinant()) < 1e-12 * scale * scale) return std::nullopt;
    Eigen::Vector3d wv(wt[0], wt[1], wt[2]);
    Eigen::Vector2d c = G.ldlt().solve(D.transpose() * wv);
    Vec2 e = eigen_coords({c(0), c(1)});
    if (e[1] == 0.0) return INFINITY;
    return std::abs(e[0]) / std::abs(e[1]);
}

TraceCertReport empirical_trace_certificate(const TraceCertParams& p, bool parallel) {
    if (!(p.coupling >= 0.0 && p.coupling <= 0.5)) throw DomainError("coupling must lie in [0, 0.5] for the trace certificate");
    if (p.sample_size < 1) throw DomainError("sample_size must be >= 1");
    if (p.n_forward < 1) throw DomainError("n_forward must be >= 1");
    if (!(p.epsilon > 0.0 && p.epsilon < 0.25)) throw DomainError("epsilon must lie in (0, 1/4)");
    if (!(p.singular_radius > 0.0)) throw DomainError("singular_radius must be > 0");
    if (p.max_attempts < 1) throw DomainError("max_attempts must be >= 1");
    make_cone2d(p.cone2.zeta);
    make_cone3d(p.cone3.c2);

    std::vector<SlotResult> slots(static_cast<std::size_t>(p.sample_size));
    auto body = [&](std::size_t i) { slots[i] = run_slot(p, i); };
    if (parallel)
        parallel::for_each_index(slots.size(), body);
    else
        for (std::size_t i = 0; i < slots.size(); ++i) body(i);

    TraceCertReport rep;
    rep.params = p;
    rep.min_ratio = INFINITY;
    double sum_log = 0;
    for (const auto& s : slots) {
        rep.attempts += s.attempts;
        rep.rejected_unbounded += s.rej_unbounded;
        rep.rejected_singular += s.rej_singular;
        if (!s.accepted) continue;
        ++rep.accepted;
        rep.segments += s.segments;
        rep.segments_failed += s.segments_failed;
        rep.near_singular_steps += s.near_steps;
        rep.near_singular_in_cone += s.near_in;
        if (s.segments_failed && rep.counterexamples.size() < 16) rep.counterexamples.push_back(s.start);
        if (s.inconclusive) {
            ++rep.inconclusive;
            continue;
        }
        rep.min_ratio = std::min(rep.min_ratio, s.ratio);
        sum_log += s.log_growth;
    }
    long conclusive = rep.accepted - rep.inconclusive;
    if (conclusive > 0)
        rep.mean_log_growth = sum_log / conclusive;
    else
        rep.min_ratio = 0.0;
    return rep;
}

}  // namespace fibtrace
