#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fibtrace/core_map.hpp"
#include "fibtrace/torus.hpp"

namespace fibtrace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

Vec3 mat_vec(const Mat3& m, const Vec3& v);
double l1_norm(const Vec3& v);
double l1_xy(const Vec3& v);  // |v_x| + |v_y|

// ---- singular point ----

struct SingularEigenData {
    Mat3 dt_p1{};
    double lambda_big = 0, lambda_mid = 0, lambda_small = 0;
    std::array<Vec3, 3> eigenvectors{};  // matching order, unit length
};

// derivative of T at q: [[2y, 2x, -1], [1, 0, 0], [0, 1, 0]]
Mat3 dt_matrix(const Point3& q);

const SingularEigenData& singular_eigen();

struct ConeSpec3D {
    double c2 = 1.0;
};

ConeSpec3D make_cone3d(double c2);

// |v_z| >= C2 sqrt|z_p| |v_xy|, with the boundary counted as inside
bool cone_member_3d(const Vec3& v, const Point3& p, const ConeSpec3D& c);

// ---- recurrences ----

struct RecurrenceParams {
    double c1 = 1.0, c2 = 1.0;
    double lambda = 0.0;  // 0 selects mu^2
    double epsilon = 0.1;
    double delta = 1e-3;
};

RecurrenceParams default_recurrence_params();
void validate(const RecurrenceParams& p);

enum class RecurrenceKind { dD, aA };

struct RecurrenceFlags {
    bool small_tilt = false;      // x_N <= 2 delta^{1/2} X_N
    bool growth = false;          // X_N >= X_0 lambda^{N(1-eps)}
    bool floor = false;           // X_0 lambda^{N(1-eps)} > lambda^{(N/2)(1-4 eps)}
    bool stepwise_growth = false;  // X_{k+1} >= lambda^{1-eps} X_k for all k
    bool stepwise_small = false;  // x_{k+1} <= (1 + 2 delta + delta^{1/2}) max(x_k, delta^{1/2} X_k)
    bool dichotomy = false;       // once delta^{1/2} X_l > x_l it stays so
    bool dominated = true;        // aA only: A_k >= D_k and A_k/a_k >= D_k/d_k
    int first_failure = -1;       // step of the first stepwise violation, -1 if none

    bool conclusions() const { return small_tilt && growth && floor; }
    bool all() const { return conclusions() && stepwise_growth && stepwise_small && dichotomy && dominated; }
};

struct RecurrenceRun {
    RecurrenceParams params;
    int n = 0;
    RecurrenceKind kind = RecurrenceKind::dD;
    std::vector<double> small;  // d_k or a_k
    std::vector<double> large;  // D_k or A_k
    std::vector<double> b;      // b_k or the supplied b~_k
    RecurrenceFlags flags;
};

// coupled recurrence d, D. D0 <= 0 selects the boundary value C2 (lambda+delta)^{-N/2}.
RecurrenceRun run_dD(const RecurrenceParams& p, int N, double D0 = 0.0);

struct SlackSchedule {
    std::vector<double> small;  // a_{k+1} = (1 - s) [(1+2d) a_k + d A_k], s in [0,1)
    std::vector<double> large;  // A_{k+1} = B + s |B|, B the lower bound, s >= 0
    double initial = 0.0;       // A_0 = C2 sqrt(b~_0) (1 + initial)
};

SlackSchedule zero_slack(int N);
SlackSchedule random_slack(int N, double max_slack, std::uint64_t seed);

// checks 0 < b0 < ... < b_{N-1} < 1 <= b_N and the growth band; throws naming the violated constraint
void check_b_sequence(const std::vector<double>& b, const RecurrenceParams& p);

std::vector<double> b_sequence_min_ratio(const RecurrenceParams& p, int N);  // (lambda - delta)^{k-N}
std::vector<double> b_sequence_max_ratio(const RecurrenceParams& p, int N, double b_last = 1.0);
// random admissible ratios, additionally below the reference (lambda - delta)^{k-N}
std::vector<double> b_sequence_random(const RecurrenceParams& p, int N, std::uint64_t seed);

RecurrenceRun run_aA(const RecurrenceParams& p, const std::vector<double>& b, const SlackSchedule& s);

struct PassingPair {
    double delta0 = 0;
    int n0 = 0;
    int n_ref = 0;
    double delta_max_at_ref = 0;  // largest delta passing at n_ref (bisection)
};

// n0 = least N such that every N' in [N, n_ref] passes all flags at delta0
PassingPair find_passing_pair(const RecurrenceParams& p, double delta0, int n_ref = 200);

// ---- model maps ----

struct ModelMapSpec {
    double lambda = 0.0;  // 0 selects mu^2
    double delta = 1e-3;
    std::uint64_t seed = 1;
    double c1_cap = 1.0;
    double xy_box = 2.0;  // working box |x|, |y| <= xy_box, 0 <= z <= z_max
    double z_max = 0.0;   // 0 selects lambda + 1
};

// f = (x/lambda + a1 z sin(w1 y + p1), y + a2 z cos(w2 x + p2), lambda z + a3 z sin(w3 x + p3))
struct ModelMap {
    ModelMapSpec spec;
    double lambda = 0;
    std::array<double, 3> a{}, w{}, phase{};
    double c1 = 0;  // bound on second derivatives

    Point3 operator()(const Point3& p) const;
    Mat3 jacobian(const Point3& p) const;
    bool linear() const { return a[0] == 0 && a[1] == 0 && a[2] == 0; }
};

ModelMap make_model_map(const ModelMapSpec& spec);

struct ModelMapAudit {
    double max_dev_l1 = 0;     // max column sum of |Df - A|
    double max_dev_frob = 0;   // Frobenius norm of Df - A
    double max_entry_dev = 0;  // largest |entry of Df - A|
    double max_second = 0;     // sampled second derivatives (finite differences)
    double max_plane_z = 0;    // |f_z(x, y, 0)|
    bool ok = false;
};

ModelMapAudit audit_model_map(const ModelMap& f, int samples, std::uint64_t seed);

struct CertificateParams {
    double epsilon = 0.1;
    double delta = 1e-3;  // hypothesis bound used in the tilt conclusion
    double eta = 0.5;
    ConeSpec3D cone{};
    long iteration_cap = 100000;
};

enum class CertStatus { ok, inconclusive };

struct ExpansionReport {
    std::uint64_t sample_id = 0;
    Point3 start;
    Vec3 vector{};
    CertStatus status = CertStatus::ok;
    int exit_time = 0;
    std::vector<double> growth;  // |Df^k v| / |v|, k = 1..N
    double final_tilt = 0;       // |u_xy| / |u_z|
    bool expansion_at_exit = false;
    bool small_tilt = false;
    std::optional<bool> expansion_all_k;  // only when |v_z| >= eta |v_xy|
    bool pass() const { return status == CertStatus::ok && expansion_at_exit && small_tilt && expansion_all_k.value_or(true); }
};

ExpansionReport expansion_certificate(const ModelMap& f, const Point3& p, const Vec3& v, const CertificateParams& c);

struct ModelSweep {
    int requested = 0, evaluated = 0, passed = 0, inconclusive = 0;
    int min_exit_time = 0;
    std::vector<ExpansionReport> failures;  // at most 16 kept
};

// random p with N(p) >= n0 and random v in K_p
ModelSweep model_map_sweep(const ModelMap& f, int samples, int n0, const CertificateParams& c, std::uint64_t seed);

// ---- trace map near V = 0 ----

struct TraceCertParams {
    double coupling = 0.05;
    int sample_size = 1000;
    int n_forward = 30;
    double epsilon = 0.1;
    ConeSpec2D cone2{};
    ConeSpec3D cone3{};
    double singular_radius = 0.05;
    double norm_cap = 10.0;
    std::uint64_t seed = 1;
    int max_attempts = 200;  // draws per sample slot before giving up on it
};

struct TraceCertReport {
    TraceCertParams params;
    long attempts = 0, accepted = 0, rejected_unbounded = 0, rejected_singular = 0;
    long segments = 0, segments_failed = 0;
    long inconclusive = 0;
    double min_ratio = 0;      // min over samples of |DT^n v| / (mu^{n(1-4 eps)} |v|)
    double mean_log_growth = 0;
    // steps inside U, and those where the vector lies in the C2-cone of the eigenframe
    long near_singular_steps = 0, near_singular_in_cone = 0;
    std::vector<Point3> counterexamples;
    bool found_samples() const { return accepted > 0; }
    double invariance_fraction() const { return segments ? 1.0 - double(segments_failed) / segments : 1.0; }
    double inconclusive_rate() const { return accepted ? double(inconclusive) / accepted : 1.0; }
};

// distance-like test for the neighbourhood of the four singular points in the eigenframe
bool in_singular_neighbourhood(const Point3& q, double radius);

// unstable-cone ratio |c_u| / |c_s| of a tangent vector at q, read through the V = 0 factor;
// nullopt where the frame degenerates
std::optional<double> cone_ratio_at(const Point3& q, const Vec3& w);

TraceCertReport empirical_trace_certificate(const TraceCertParams& p, bool parallel = true);

}  // namespace fibtrace
