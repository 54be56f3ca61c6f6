#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibtrace/error.hpp"
#include "fibtrace/hyperbolicity.hpp"
#include "fibtrace/kernels.hpp"
#include "fibtrace/rng.hpp"

namespace fibtrace {

Point3 ModelMap::operator()(const Point3& p) const {
    return {p.x / lambda + a[0] * p.z * std::sin(w[0] * p.y + phase[0]),
            p.y + a[1] * p.z * std::cos(w[1] * p.x + phase[1]),
            lambda * p.z + a[2] * p.z * std::sin(w[2] * p.x + phase[2])};
}

Mat3 ModelMap::jacobian(const Point3& p) const {
    double s0 = std::sin(w[0] * p.y + phase[0]), c0 = std::cos(w[0] * p.y + phase[0]);
    double s1 = std::sin(w[1] * p.x + phase[1]), c1_ = std::cos(w[1] * p.x + phase[1]);
    double s2 = std::sin(w[2] * p.x + phase[2]), c2 = std::cos(w[2] * p.x + phase[2]);
    return {{{1.0 / lambda, a[0] * p.z * w[0] * c0, a[0] * s0},
             {-a[1] * p.z * w[1] * s1, 1.0, a[1] * c1_},
             {a[2] * p.z * w[2] * c2, 0.0, lambda + a[2] * s2}}};
}

ModelMap make_model_map(const ModelMapSpec& spec) {
    ModelMap f;
    f.spec = spec;
    f.lambda = spec.lambda > 0.0 ? spec.lambda : std::numbers::phi * std::numbers::phi;
    if (!(f.lambda > 1.0)) throw ConstructionError("model map: lambda must be > 1");
    if (!(spec.delta >= 0.0)) throw ConstructionError("model map: delta must be >= 0");
    if (!(spec.delta < 0.5 * (f.lambda - 1.0))) throw ConstructionError("model map: delta must be below (lambda - 1)/2");
    if (!(spec.xy_box > 0.0)) throw ConstructionError("model map: xy_box must be > 0");
    f.spec.z_max = spec.z_max > 0.0 ? spec.z_max : f.lambda + 1.0;
    const double zm = f.spec.z_max;
    Rng r(spec.seed);
    for (int i = 0; i < 3; ++i) {
        f.w[i] = r.uniform(0.5, 3.0);
        f.phase[i] = r.uniform(0.0, 2.0 * std::numbers::pi);
        // each row of Df - A is bounded by a_i (w_i z_max + 1) <= delta/3, so every
        // entry, row sum, column sum and the Frobenius norm stay below delta
        f.a[i] = spec.delta * r.uniform(0.5, 1.0) / (3.0 * (f.w[i] * zm + 1.0)) * (1.0 - 1e-3);
        f.c1 = std::max(f.c1, f.a[i] * std::max(f.w[i] * f.w[i] * zm, f.w[i]));
    }
    if (f.c1 > spec.c1_cap) throw ConstructionError("model map: second-derivative bound exceeds the C1 cap");
    return f;
}

ModelMapAudit audit_model_map(const ModelMap& f, int samples, std::uint64_t seed) {
    const double L = f.lambda, B = f.spec.xy_box, zm = f.spec.z_max;
    std::vector<ModelMapAudit> part(static_cast<std::size_t>(std::max(samples, 0)));
    parallel::for_each_index(part.size(), [&](std::size_t s) {
        Rng r(seed, s);
        Point3 p{r.uniform(-B, B), r.uniform(-B, B), r.uniform(0.0, zm)};
        Mat3 J = f.jacobian(p);
        const double A[3] = {1.0 / L, 1.0, L};
        ModelMapAudit& a = part[s];
        double col[3] = {0, 0, 0}, frob = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double d = std::abs(J[i][j] - (i == j ? A[i] : 0.0));
                col[j] += d;
                frob += d * d;
                a.max_entry_dev = std::max(a.max_entry_dev, d);
            }
        a.max_dev_l1 = std::max({col[0], col[1], col[2]});
        a.max_dev_frob = std::sqrt(frob);
        // second derivatives by central differences of the Jacobian
        const double h = 1e-5;
        for (int k = 0; k < 3; ++k) {
            Point3 lo = p, hi = p;
            (k == 0 ? lo.x : k == 1 ? lo.y : lo.z) -= h;
            (k == 0 ? hi.x : k == 1 ? hi.y : hi.z) += h;
            Mat3 Jl = f.jacobian(lo), Jh = f.jacobian(hi);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) a.max_second = std::max(a.max_second, std::abs(Jh[i][j] - Jl[i][j]) / (2 * h));
        }
        a.max_plane_z = std::abs(f({p.x, p.y, 0.0}).z);
    });
    ModelMapAudit out;
    for (const auto& a : part) {
        out.max_dev_l1 = std::max(out.max_dev_l1, a.max_dev_l1);
        out.max_dev_frob = std::max(out.max_dev_frob, a.max_dev_frob);
        out.max_entry_dev = std::max(out.max_entry_dev, a.max_entry_dev);
        out.max_second = std::max(out.max_second, a.max_second);
        out.max_plane_z = std::max(out.max_plane_z, a.max_plane_z);
    }
    const double d = f.spec.delta;
    bool dev_ok = d > 0.0 ? out.max_dev_l1 < d && out.max_dev_frob < d : out.max_dev_l1 == 0.0;
    out.ok = dev_ok && out.max_second <= f.c1 * (1.0 + 1e-4) + 1e-9 && out.max_plane_z == 0.0;
    return out;
}

ExpansionReport expansion_certificate(const ModelMap& f, const Point3& p, const Vec3& v, const CertificateParams& c) {
    if (!(p.z > 0.0 && p.z < 1.0)) throw DomainError("expansion_certificate: z_p must lie in (0, 1)");
    if (!cone_member_3d(v, p, c.cone)) throw DomainError("expansion_certificate: vector is not in the cone K_p");
    const double L = f.lambda, e = c.epsilon;
    ExpansionReport r;
    r.start = p;
    r.vector = v;
    const double v0 = l1_norm(v);
    Point3 q = p;
    Vec3 u = v;
    int N = 0;
    for (long k = 1; k <= c.iteration_cap; ++k) {
        u = mat_vec(f.jacobian(q), u);
        q = f(q);
        r.growth.push_back(l1_norm(u) / v0);
        if (q.z > 1.0) {
            N = static_cast<int>(k);
            break;
        }
    }
    if (N == 0) {
        r.status = CertStatus::inconclusive;
        return r;
    }
    r.exit_time = N;
    r.final_tilt = l1_xy(u) / std::abs(u[2]);
    r.expansion_at_exit = r.growth.back() >= std::pow(L, 0.5 * N * (1.0 - 4.0 * e));
    r.small_tilt = l1_xy(u) < 2.0 * std::sqrt(c.delta) * std::abs(u[2]);
    if (std::abs(v[2]) >= c.eta * l1_xy(v)) {
        bool all = true;
        for (int k = 1; k <= N; ++k)
            if (!(r.growth[k - 1] >= 0.5 * c.eta * std::pow(L, 0.5 * k * (1.0 - 4.0 * e)))) all = false;
        r.expansion_all_k = all;
    }
    return r;
}

ModelSweep model_map_sweep(const ModelMap& f, int samples, int n0, const CertificateParams& c, std::uint64_t seed) {
    if (samples < 1 || n0 < 1) throw DomainError("model_map_sweep: samples and n0 must be >= 1");
    std::vector<ExpansionReport> reps(static_cast<std::size_t>(samples));
    std::vector<char> found(reps.size(), 0);
    const double L = f.lambda;
    parallel::for_each_index(reps.size(), [&](std::size_t i) {
        Rng r(seed, i);
        for (int attempt = 0; attempt < 100; ++attempt) {
            double target = r.uniform(n0, n0 + 12.0);
            Point3 p{r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0), std::pow(L, -target)};
            double vx = r.uniform(-1.0, 1.0), vy = r.uniform(-1.0, 1.0);
            double nxy = std::abs(vx) + std::abs(vy);
            if (nxy == 0.0) continue;
            vx /= nxy;
            vy /= nxy;
            // |v_z| from the cone boundary up to well past eta
            double edge = c.cone.c2 * std::sqrt(p.z);
            double vz = r.sign() * edge * std::exp(r.uniform(0.0, std::log(1.0 / edge) + 2.0));
            ExpansionReport rep = expansion_certificate(f, p, {vx, vy, vz}, c);
            if (rep.status == CertStatus::ok && rep.exit_time < n0) continue;
            rep.sample_id = i;
            reps[i] = rep;
            found[i] = 1;
            return;
        }
    });
    ModelSweep s;
    s.requested = samples;
    s.min_exit_time = 1 << 30;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (!found[i]) continue;
        const auto& rep = reps[i];
        ++s.evaluated;
        if (rep.status == CertStatus::inconclusive) {
            ++s.inconclusive;
            continue;
        }
        s.min_exit_time = std::min(s.min_exit_time, rep.exit_time);
        if (rep.pass())
            ++s.passed;
        else if (s.failures.size() < 16)
            s.failures.push_back(rep);
    }
    if (s.min_exit_time == 1 << 30) s.min_exit_time = 0;
    return s;
}

}  // namespace fibtrace
