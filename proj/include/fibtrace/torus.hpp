#pragma once

#include <array>
#include <cstdint>

#include "fibtrace/core_map.hpp"

namespace fibtrace {

using Vec2 = std::array<double, 2>;
using Mat32 = std::array<std::array<double, 2>, 3>;

struct TorusPoint {
    double theta = 0, phi = 0;
};

// reduce both angles into [0,1)
TorusPoint torus_point(double theta, double phi);

// (theta + phi, theta) mod 1
TorusPoint torus_auto(const TorusPoint& t);
TorusPoint torus_auto_inv(const TorusPoint& t);

// F(theta, phi) = (cos 2pi(theta+phi), cos 2pi theta, cos 2pi phi)
Point3 semiconj(const TorusPoint& t);
Mat32 df_semiconj(const TorusPoint& t);

// |T(F(t)) - F(A t)|
double semiconj_defect(const TorusPoint& t);
// max defect over an n x n grid of the torus
double check_semiconjugacy(int grid_resolution);

struct EigenData {
    double mu = 0;
    Vec2 v_u{}, v_s{};
};

const EigenData& torus_eigen();

Vec2 mat_apply(const Vec2& v);      // A v with A = [[1,1],[1,0]]
Vec2 mat_apply_inv(const Vec2& v);  // A^{-1} v

// coefficients (c_u, c_s) with v = c_u v_u + c_s v_s
Vec2 eigen_coords(const Vec2& v);

struct ConeSpec2D {
    double zeta = 0.1;
};

ConeSpec2D make_cone2d(double zeta);

enum class ConeKind { stable, unstable };

bool cone_member_2d(const Vec2& v, const ConeSpec2D& c, ConeKind which);

// min of |A^n v| / (mu^n |v|) over random cone vectors (A^{-n} for the stable cone)
double cone_expansion_check(const ConeSpec2D& c, int n, int samples, ConeKind which = ConeKind::unstable,
                            std::uint64_t seed = 1);

// fraction of random cone vectors mapped back into the cone by one step
double cone_invariance_fraction(const ConeSpec2D& c, int samples, ConeKind which, std::uint64_t seed = 1);

struct AngleRatioBounds {
    double max_cos_angle = 0;
    double ratio_min = 0, ratio_max = 0;
};

// sweep of the punctured square |theta|,|phi| <= radius around the origin
AngleRatioBounds df_angle_ratio_bounds(double radius, int samples, std::uint64_t seed = 1);

// length ratio |DF e1| / |DF e2| of the linearised columns, t = theta/phi
double df_length_ratio_linear(double t);

}  // namespace fibtrace
