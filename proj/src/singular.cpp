#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fibtrace/error.hpp"
#include "fibtrace/hyperbolicity.hpp"

namespace fibtrace {

Vec3 mat_vec(const Mat3& m, const Vec3& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2], m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

double l1_norm(const Vec3& v) { return std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]); }
double l1_xy(const Vec3& v) { return std::abs(v[0]) + std::abs(v[1]); }

Mat3 dt_matrix(const Point3& q) { return {{{2.0 * q.y, 2.0 * q.x, -1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}}; }

const SingularEigenData& singular_eigen() {
    static const SingularEigenData d = [] {
        SingularEigenData s;
        s.dt_p1 = dt_matrix({1, 1, 1});
        Eigen::Matrix3d m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = s.dt_p1[i][j];
        Eigen::EigenSolver<Eigen::Matrix3d> es(m);
        std::array<int, 3> order{0, 1, 2};
        auto ev = es.eigenvalues();
        for (int i = 0; i < 3; ++i)
            if (std::abs(ev(i).imag()) > 1e-12) throw NumericError("singular eigenvalues are not real");
        std::sort(order.begin(), order.end(), [&](int a, int b) { return ev(a).real() > ev(b).real(); });
        // descending real order is big, small, mid(-1); reorder to big, mid, small
        int big = order[0], small = order[1], mid = order[2];
        s.lambda_big = ev(big).real();
        s.lambda_mid = ev(mid).real();
        s.lambda_small = ev(small).real();
        int idx[3] = {big, mid, small};
        for (int c = 0; c < 3; ++c) {
            Eigen::Vector3d v = es.eigenvectors().col(idx[c]).real().normalized();
            s.eigenvectors[c] = {v(0), v(1), v(2)};
        }
        return s;
    }();
    return d;
}

ConeSpec3D make_cone3d(double c2) {
    if (!(c2 > 0.0) || !std::isfinite(c2)) throw DomainError("cone constant C2 must be > 0");
    return {c2};
}

bool cone_member_3d(const Vec3& v, const Point3& p, const ConeSpec3D& c) {
    if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0) throw DomainError("cone_member_3d: zero vector");
    return std::abs(v[2]) >= c.c2 * std::sqrt(std::abs(p.z)) * l1_xy(v);
}

}  // namespace fibtrace
