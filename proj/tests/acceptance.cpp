// Acceptance run: one PASS/FAIL line per criterion. argv[1] is the fibtrace CLI binary,
// used for the determinism check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fibtrace/band_set.hpp"
#include "fibtrace/core_map.hpp"
#include "fibtrace/fractal_dim.hpp"
#include "fibtrace/hyperbolicity.hpp"
#include "fibtrace/kernels.hpp"
#include "fibtrace/spectrum.hpp"
#include "fibtrace/subshift.hpp"
#include "fibtrace/torus.hpp"

using namespace fibtrace;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = limit_s <= 0 || dt < limit_s;
    bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] %2d %s: %s (%.2f s%s)\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt,
                in_time ? "" : ", over the time limit");
    std::fflush(stdout);
}

const double kMu = (1 + std::sqrt(5.0)) / 2;

Outcome fricke_conservation() {
    std::mt19937_64 g(20240601);
    std::uniform_real_distribution<double> u(-10, 10);
    double worst = 0;
    for (int i = 0; i < 100000; ++i) {
        Point3 p{u(g), u(g), u(g)};
        double G = fricke(p);
        worst = std::max(worst, std::abs(fricke(trace_step(p)) - G) / (1 + std::abs(G)));
    }
    return {worst <= 1e-9, "max relative drift " + fmt("%.3g", worst)};
}

Outcome oracle_equivalence() {
    double worst = 0;
    for (double V : {0.0, 0.1, 1.0})
        for (int i = 0; i < 300; ++i) {
            double E = -3 + 6.0 * i / 299;
            TraceSequence s = trace_sequence(E, V, 16);
            for (int k = -1; k <= std::min(16, s.last_index()); ++k) {
                double o = half_trace_oracle(k, E, V);
                worst = std::max(worst, std::abs(s.at(k) - o) / std::max(1.0, std::abs(o)));
            }
        }
    return {worst <= 1e-8, "max relative error " + fmt("%.3g", worst)};
}

Outcome semiconjugacy() {
    DefectGrid g = parallel::semiconj_defect_grid(512);
    return {g.max_defect <= 1e-10, "max defect on 512x512 " + fmt("%.3g", g.max_defect)};
}

Outcome singular_eigendata() {
    const auto& s = singular_eigen();
    const Mat3 printed{{{2, 2, -1}, {1, 0, 0}, {0, 1, 0}}};
    // roots of the characteristic polynomial -(x + 1)(x^2 - 3x + 1)
    double e1 = std::abs(s.lambda_big - (3 + std::sqrt(5.0)) / 2);
    double e2 = std::abs(s.lambda_mid + 1);
    double e3 = std::abs(s.lambda_small - (3 - std::sqrt(5.0)) / 2);
    double e4 = std::abs(s.lambda_big - kMu * kMu);
    double worst = std::max({e1, e2, e3, e4});
    bool ok = s.dt_p1 == printed && dt_matrix({1, 1, 1}) == printed && worst <= 1e-10;
    return {ok, "eigenvalues " + fmt("%.12f", s.lambda_big) + ", " + fmt("%.12f", s.lambda_mid) + ", " +
                    fmt("%.12f", s.lambda_small) + "; max error " + fmt("%.2g", worst)};
}

Outcome per2_and_singular() {
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        double x = -3 + 6.0 * (i + 0.5) / 1000;
        if (std::abs(x - 0.5) < 1e-3) continue;
        Point3 p = per2_point(x);
        Point3 q = trace_step(trace_step(p));
        worst = std::max(worst, distance(q, p) / (1 + sup_norm(p)));
    }
    SingularOrbit s = singular_orbit();
    const auto& P = s.points;
    bool exact = trace_step(P[0]) == P[0] && trace_step(P[1]) == P[2] && trace_step(P[2]) == P[3] &&
                 trace_step(P[3]) == P[1] && s.p1_fixed && s.three_cycle;
    return {worst <= 1e-10 && exact, "period-2 defect " + fmt("%.2g", worst) + (exact ? ", orbit exact" : ", orbit WRONG")};
}

Outcome recurrence_suite() {
    RecurrenceParams p = default_recurrence_params();  // lambda = mu^2, eps = 0.1, C1 = C2 = 1
    const double delta0 = 1e-3;
    p.delta = delta0;
    PassingPair pp = find_passing_pair(p, delta0, 200);
    int bad = 0;
    for (int N = pp.n0; N <= 200; ++N) {
        RecurrenceRun r = run_dD(p, N);
        bool concl = r.small[N] <= 2 * std::sqrt(delta0) * r.large[N] &&
                     r.large[N] >= r.large[0] * std::pow(p.lambda, N * (1 - p.epsilon));
        if (!concl || !r.flags.all()) ++bad;
    }
    int schedules_ok = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        int N = pp.n0 + static_cast<int>(s % 25);
        RecurrenceRun r = run_aA(p, b_sequence_random(p, N, s), random_slack(N, 0.5, 1000 + s));
        schedules_ok += r.flags.all();
    }
    bool equal_case = run_aA(p, b_sequence_min_ratio(p, pp.n0), zero_slack(pp.n0)).flags.all();
    std::string d = "pair (delta0 = 1e-3, N0 = " + std::to_string(pp.n0) + "), dD failures on [N0, 200]: " +
                    std::to_string(bad) + ", aA schedules passing " + std::to_string(schedules_ok) + "/100";
    return {bad == 0 && schedules_ok == 100 && equal_case, d};
}

Outcome model_map_suite() {
    RecurrenceParams rp = default_recurrence_params();
    PassingPair pp = find_passing_pair(rp, 1e-3);
    ModelMapSpec lin;
    lin.delta = 0;
    ModelMap f0 = make_model_map(lin);
    CertificateParams c;
    bool exact = f0.linear();
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-1, 1);
    // the y part of v is untouched, so the tilt conclusion needs N >= N0 as in the nonlinear case
    for (int N = pp.n0; N <= 40 && exact; ++N) {
        double z = 1.5 * std::pow(f0.lambda, -N);
        double vx = u(g), vy = u(g), vz = c.cone.c2 * std::sqrt(z) * (std::abs(vx) + std::abs(vy)) * (1 + std::abs(u(g)));
        auto r = expansion_certificate(f0, {u(g), u(g), z}, {vx, vy, vz}, c);
        double L = f0.lambda;
        double expect = (std::abs(vx) * std::pow(L, -N) + std::abs(vy) + std::abs(vz) * std::pow(L, N)) /
                        (std::abs(vx) + std::abs(vy) + std::abs(vz));
        exact = exact && r.status == CertStatus::ok && r.exit_time == N && r.pass() &&
                std::abs(r.growth.back() - expect) <= 1e-12 * expect;
    }

    ModelMapSpec s;
    s.delta = 1e-3;
    ModelMap f = make_model_map(s);
    ModelMapAudit a = audit_model_map(f, 10000, 2);
    ModelSweep sw = model_map_sweep(f, 1000, pp.n0, c, 11);
    bool ok = exact && a.ok && sw.evaluated == 1000 && sw.passed == 1000 && sw.min_exit_time >= pp.n0;
    return {ok, std::string("linear map ") + (exact ? "exact" : "MISMATCH") + ", hypotheses " + (a.ok ? "ok" : "violated") +
                    ", perturbed sweep " + std::to_string(sw.passed) + "/" + std::to_string(sw.requested) +
                    " (min exit time " + std::to_string(sw.min_exit_time) + ")"};
}

Outcome subshift_check() {
    const int printed[6][6] = {{0, 0, 0, 1, 1, 1}, {0, 0, 1, 0, 1, 1}, {0, 0, 0, 0, 1, 0},
                               {0, 0, 0, 0, 0, 1}, {1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}};
    const auto& M = subshift_matrix();
    bool exact = true;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) exact = exact && M[i][j] == printed[i][j];
    long A2[6][6] = {}, A3[6][6] = {};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int l = 0; l < 6; ++l) A2[i][j] += printed[i][l] * printed[l][j];
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int l = 0; l < 6; ++l) A3[i][j] += A2[i][l] * printed[l][j];
    long t2 = 0, t3 = 0;
    for (int i = 0; i < 6; ++i) {
        t2 += A2[i][i];
        t3 += A3[i][i];
    }
    bool counts = true;
    for (int n = 1; n <= 10; ++n) {
        SubshiftCounts c = subshift_counts(n);
        counts = counts && c.word_count == enumerate_words(n) && c.periodic_count == enumerate_periodic(n);
    }
    bool tr = t2 == 4 && t3 == 0 && subshift_counts(2).periodic_count == 4 && subshift_counts(3).periodic_count == 0;
    return {exact && counts && tr, std::string("matrix ") + (exact ? "exact" : "DIFFERS") + ", counts n <= 10 " +
                                       (counts ? "agree" : "DISAGREE") + ", tr A^2 = " + std::to_string(t2) +
                                       ", tr A^3 = " + std::to_string(t3)};
}

Outcome spectrum_sanity() {
    BandSet free = spectrum_cover(0.0, 10, 1e-3);
    double m0 = band_measure(free);
    const double res = 1e-4;
    std::vector<double> m;
    for (int k = 1; k <= 12; ++k) m.push_back(band_measure(spectrum_cover(1.0, k, res)));
    bool mono = true;
    for (std::size_t i = 1; i < m.size(); ++i) mono = mono && m[i] <= m[i - 1] + 2 * res;
    return {std::abs(m0 - 4) <= 0.05 && mono, "V = 0 measure " + fmt("%.6f", m0) + ", V = 1 measures k = 1..12 from " +
                                                  fmt("%.4f", m.front()) + " to " + fmt("%.4f", m.back()) +
                                                  (mono ? ", non-increasing" : ", INCREASES")};
}

Outcome dimension_oracles() {
    BandSet c3 = cantor_set(1.0 / 3.0, 10);
    BandSet c4 = cantor_set(0.25, 10);
    double d3 = box_dimension(c3, default_eps_grid(c3)).value;
    double d4 = box_dimension(c4, default_eps_grid(c4)).value;
    double t3 = std::log(2.0) / std::log(3.0);
    bool ok = std::abs(d3 - t3) <= 0.02 && std::abs(d4 - 0.5) <= 0.02;
    return {ok, "middle thirds " + fmt("%.4f", d3) + " vs " + fmt("%.4f", t3) + ", ratio 1/4 " + fmt("%.4f", d4)};
}

Outcome large_coupling() {
    auto rows = asymptote_check({16, 32, 64, 128}, 12);
    const double target = asymptote_target();
    bool in_band = true, trend = true;
    std::string vals;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double v = rows[i].dim_log_v;
        in_band = in_band && v > 0.5 && v < 1.3;
        if (i > 0) trend = trend && std::abs(v - target) <= std::abs(rows[i - 1].dim_log_v - target) + 0.1;
        vals += (i ? ", " : "") + fmt("%.4f", v);
    }
    bool closer = std::abs(rows.back().dim_log_v - target) <= std::abs(rows.front().dim_log_v - target) + 0.1;
    return {in_band && trend && closer, "dim log V at V = 16..128: " + vals + " (target " + fmt("%.4f", target) + ")"};
}

Outcome small_coupling() {
    TraceCertParams p;
    p.coupling = 0.05;
    p.sample_size = 1000;
    p.n_forward = 30;
    TraceCertReport r = empirical_trace_certificate(p);
    bool ok = r.accepted == 1000 && r.segments_failed == 0 && r.min_ratio > 0 && r.inconclusive_rate() < 0.05;
    return {ok, std::to_string(r.accepted) + " samples, " + std::to_string(r.segments_failed) + "/" +
                    std::to_string(r.segments) + " segments leave the cone, min ratio " + fmt("%.4g", r.min_ratio) +
                    ", inconclusive " + fmt("%.3f", r.inconclusive_rate())};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli) {
    if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not given"};
    fs::path dir = fs::temp_directory_path() / ("fibtrace_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.ini");
        cfg << "[spectrum]\ncoupling = 1.5\nk = 10\n\n[dimension]\nsource = spectrum\ncoupling = 2\nk = 16\n\n"
               "[certify]\nmode = all\nsamples = 300\n\n[mesh]\ncoupling = 0.3\nresolution = 48\nper2 = true\n\n"
               "[subshift]\nn = 14\n";
    }
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"spectrum", "json"},
        {"spectrum --set spectrum.output=escape spectrum.e_points=400", "csv"},
        {"dimension", "json"},
        {"dimension --set dimension.source=cantor", "csv"},
        {"certify", "json"},
        {"mesh", "csv"},
        {"subshift", "json"},
    };
    int same = 0, idx = 0;
    std::string bad;
    for (const auto& [args, ext] : runs) {
        fs::path out[2];
        bool ran = true;
        for (int rep = 0; rep < 2; ++rep) {
            out[rep] = dir / ("run" + std::to_string(idx) + "_" + std::to_string(rep) + "." + ext);
            // thread count differs between the two runs; results must not depend on it
            std::string cmd = "\"" + cli + "\" " + args + " --config \"" + (dir / "run.ini").string() +
                              "\" --seed 17 --threads " + (rep ? "4" : "1") + " --out \"" + out[rep].string() +
                              "\" 2>/dev/null";
            ran = ran && std::system(cmd.c_str()) == 0;
        }
        std::string a = slurp(out[0]), b = slurp(out[1]);
        if (ran && !a.empty() && a == b)
            ++same;
        else
            bad += " [" + args + "]";
        ++idx;
    }
    fs::remove_all(dir);
    return {same == static_cast<int>(runs.size()),
            std::to_string(same) + "/" + std::to_string(runs.size()) + " commands byte-identical" + bad};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    criterion(1, "Fricke conservation", 1, fricke_conservation);
    criterion(2, "trace recursion vs transfer matrices", 10, oracle_equivalence);
    criterion(3, "semiconjugacy defect", 5, semiconjugacy);
    criterion(4, "singular eigendata", 0, singular_eigendata);
    criterion(5, "period-2 curve and singular orbit", 0, per2_and_singular);
    criterion(6, "d/D and a/A recurrences", 5, recurrence_suite);
    criterion(7, "model-map expansion", 30, model_map_suite);
    criterion(8, "subshift", 1, subshift_check);
    criterion(9, "spectrum sanity", 120, spectrum_sanity);
    criterion(10, "dimension oracles", 10, dimension_oracles);
    criterion(11, "large-coupling trend", 900, large_coupling);
    criterion(12, "small-coupling trace certificate", 300, small_coupling);
    criterion(13, "determinism", 0, [&] { return determinism(cli); });
    std::printf("%d of 13 criteria failed\n", failures);
    return failures ? 1 : 0;
}
