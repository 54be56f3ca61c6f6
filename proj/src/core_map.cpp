#include "fibtrace/core_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fibtrace/error.hpp"

namespace fibtrace {

bool is_finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

double sup_norm(const Point3& p) {
    return std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)});
}

double euclid_norm(const Point3& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }

double distance(const Point3& a, const Point3& b) {
    return euclid_norm({a.x - b.x, a.y - b.y, a.z - b.z});
}

double checked_coupling(double V) {
    if (!std::isfinite(V) || V < 0.0)
        throw DomainError("coupling must be a finite value >= 0 (got " + std::to_string(V) + ")");
    return V;
}

static void need_finite(const Point3& p, const char* op) {
    if (!is_finite(p)) throw DomainError(std::string(op) + ": non-finite point");
}

Point3 trace_step(const Point3& p) {
    need_finite(p, "trace_step");
    return trace_step_raw(p);
}

Point3 trace_step_inv(const Point3& p) {
    need_finite(p, "trace_step_inv");
    return trace_step_inv_raw(p);
}

double fricke(const Point3& p) {
    return p.x * p.x + p.y * p.y + p.z * p.z - 2.0 * p.x * p.y * p.z - 1.0;
}

std::array<double, 3> fricke_gradient(const Point3& p) {
    return {2.0 * (p.x - p.y * p.z), 2.0 * (p.y - p.x * p.z), 2.0 * (p.z - p.x * p.y)};
}

SurfaceSpec make_surface(double V, double tol) {
    checked_coupling(V);
    if (!(tol > 0.0) || !(tol < 1e-2)) throw DomainError("membership_tolerance must lie in (0, 1e-2)");
    return {V, tol};
}

bool on_surface(const Point3& p, const SurfaceSpec& s) {
    return std::abs(fricke(p) - s.level()) <= s.membership_tolerance;
}

Point3 line_point(double E, double V) { return {0.5 * (E - V), 0.5 * E, 1.0}; }

Point3 per2_point(double x, double band) {
    if (!std::isfinite(x)) throw DomainError("per2_point: non-finite x");
    if (std::abs(x - 0.5) < band)
        throw DomainError("per2_point: x within the exclusion band of the pole x = 1/2");
    return {x, x / (2.0 * x - 1.0), x};
}

SingularOrbit singular_orbit() {
    SingularOrbit s;
    s.points = {Point3{1, 1, 1}, Point3{1, -1, -1}, Point3{-1, 1, -1}, Point3{-1, -1, 1}};
    const auto& P = s.points;
    s.p1_fixed = trace_step(P[0]) == P[0];
    s.three_cycle = trace_step(P[1]) == P[2] && trace_step(P[2]) == P[3] && trace_step(P[3]) == P[1];
    return s;
}

std::size_t SurfaceMesh::empty_count() const {
    return static_cast<std::size_t>(std::count(empty.begin(), empty.end(), 1));
}

static std::vector<double> axis(std::pair<double, double> r, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = r.first + (r.second - r.first) * i / (n - 1);
    return v;
}

SurfaceMesh surface_mesh(const SurfaceSpec& s, std::pair<double, double> x_range,
                         std::pair<double, double> y_range, int resolution) {
    if (resolution < 2) throw DomainError("resolution must be >= 2");
    for (double v : {x_range.first, x_range.second, y_range.first, y_range.second})
        if (!std::isfinite(v)) throw DomainError("mesh ranges must be finite");
    checked_coupling(s.coupling);

    SurfaceMesh m;
    m.coupling = s.coupling;
    m.nx = m.ny = static_cast<std::size_t>(resolution);
    m.xs = axis(x_range, resolution);
    m.ys = axis(y_range, resolution);
    m.empty.assign(m.nx * m.ny, 0);
    const double q = s.level();
    for (std::size_t j = 0; j < m.ny; ++j) {
        for (std::size_t i = 0; i < m.nx; ++i) {
            double x = m.xs[i], y = m.ys[j];
            double disc = (x * x - 1.0) * (y * y - 1.0) + q;
            if (disc < 0.0) {
                m.empty[j * m.nx + i] = 1;
                continue;
            }
            double r = std::sqrt(disc);
            m.points.push_back({i, j, {x, y, x * y + r}, Sheet::upper});
            // a zero discriminant is the cone point of the two sheets
            if (disc > 0.0) m.points.push_back({i, j, {x, y, x * y - r}, Sheet::lower});
        }
    }
    return m;
}

}  // namespace fibtrace
