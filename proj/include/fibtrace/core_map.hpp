#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace fibtrace {

struct Point3 {
    double x = 0, y = 0, z = 0;
    friend bool operator==(const Point3&, const Point3&) = default;
};

bool is_finite(const Point3& p);
double sup_norm(const Point3& p);
double euclid_norm(const Point3& p);
double distance(const Point3& a, const Point3& b);

// throws DomainError("coupling ...") for V < 0 or non-finite V
double checked_coupling(double V);

// T(x,y,z) = (2xy - z, x, y) and its inverse
Point3 trace_step(const Point3& p);
Point3 trace_step_inv(const Point3& p);

// unchecked versions for hot loops
inline Point3 trace_step_raw(const Point3& p) { return {2.0 * p.x * p.y - p.z, p.x, p.y}; }
inline Point3 trace_step_inv_raw(const Point3& p) { return {p.y, p.z, 2.0 * p.y * p.z - p.x}; }

// G = x^2 + y^2 + z^2 - 2xyz - 1
double fricke(const Point3& p);
std::array<double, 3> fricke_gradient(const Point3& p);

struct SurfaceSpec {
    double coupling = 0.0;
    double membership_tolerance = 1e-9;
    double level() const { return 0.25 * coupling * coupling; }
};

SurfaceSpec make_surface(double V, double tol = 1e-9);
bool on_surface(const Point3& p, const SurfaceSpec& s);

// point of the energy line: ((E - V)/2, E/2, 1)
Point3 line_point(double E, double V);

inline constexpr double kPer2Exclusion = 1e-6;

// (x, x/(2x-1), x); rejects |x - 1/2| < band
Point3 per2_point(double x, double band = kPer2Exclusion);

struct SingularOrbit {
    std::array<Point3, 4> points;
    bool p1_fixed = false;
    bool three_cycle = false;
};

SingularOrbit singular_orbit();

enum class Sheet { upper, lower };

struct MeshPoint {
    std::size_t i = 0, j = 0;
    Point3 p;
    Sheet sheet = Sheet::upper;
};

struct SurfaceMesh {
    double coupling = 0.0;
    std::size_t nx = 0, ny = 0;
    std::vector<double> xs, ys;
    std::vector<MeshPoint> points;
    std::vector<unsigned char> empty;  // nx*ny, 1 where the discriminant is negative
    std::size_t empty_count() const;
};

// resolution = nodes per axis
SurfaceMesh surface_mesh(const SurfaceSpec& s, std::pair<double, double> x_range,
                         std::pair<double, double> y_range, int resolution);

}  // namespace fibtrace
