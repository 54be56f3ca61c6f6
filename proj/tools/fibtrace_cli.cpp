#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fibtrace/config.hpp"
#include "fibtrace/core_map.hpp"
#include "fibtrace/error.hpp"
#include "fibtrace/fractal_dim.hpp"
#include "fibtrace/hyperbolicity.hpp"
#include "fibtrace/io.hpp"
#include "fibtrace/kernels.hpp"
#include "fibtrace/rng.hpp"
#include "fibtrace/spectrum.hpp"
#include "fibtrace/subshift.hpp"
#include "fibtrace/torus.hpp"

using namespace fibtrace;
using nlohmann::json;

namespace {

// runtime failures that are not the user's fault
struct RunFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json estimate_json(const DimensionEstimate& d) {
    return {{"value", d.value},   {"residual", d.residual}, {"eps_min", d.eps_min},
            {"eps_max", d.eps_max}, {"poor_fit", d.poor_fit}, {"scales", d.counts.size()}};
}

std::vector<double> eps_from(RunConfig& cfg, const std::string& sec, const BandSet& b) {
    double ratio = cfg.real_in(sec + ".eps_ratio", 0.5, 0.01, 0.5);
    double eps_max = cfg.real(sec + ".eps_max", 0.0);
    long n = cfg.integer(sec + ".eps_count", 0);
    if (eps_max > 0.0 && n > 0) return eps_grid(eps_max, ratio, static_cast<int>(n));
    if (eps_max > 0.0 || n > 0) throw ConfigError("invalid config: " + sec + ".eps_max and " + sec + ".eps_count go together");
    return default_eps_grid(b, ratio);
}

// ---- spectrum ----

Document cmd_spectrum(RunConfig& cfg) {
    Document d;
    const double V = cfg.real_at_least("spectrum.coupling", 1.0, 0.0);
    const std::string out = cfg.text("spectrum.output", "bands");
    if (out == "bands") {
        const int k = static_cast<int>(cfg.integer_in("spectrum.k", 10, 1, 29));
        const double res = cfg.real_in("spectrum.resolution", 1e-4, 0.0, 1.0);
        const std::string which = cfg.text("spectrum.set", "cover");
        BandSet b;
        if (which == "cover") {
            b = spectrum_cover(V, k, res);
        } else if (which == "approximant") {
            BandSearchOptions o;
            o.min_gap = res;
            o.root_tolerance = res > 0.0 ? std::min(1e-12, 0.01 * res) : 1e-12;
            b = approximant_bands(k, V, o);
        } else {
            throw ConfigError("invalid config: spectrum.set must be cover or approximant");
        }
        d.summary = {{"coupling", V},           {"k", k},
                     {"set", which},            {"measure", band_measure(b)},
                     {"band_count", b.size()},  {"lo", b.empty() ? 0.0 : b.lo()},
                     {"hi", b.empty() ? 0.0 : b.hi()}, {"resolution", b.resolution()}};
        d.table.columns = {"lo", "hi"};
        for (const auto& iv : b.intervals()) d.table.add({iv.lo, iv.hi});
    } else if (out == "escape") {
        const double lo = cfg.real("spectrum.e_min", -3.0), hi = cfg.real("spectrum.e_max", 3.0);
        if (!(lo < hi)) throw ConfigError("invalid config: spectrum.e_min must be below spectrum.e_max");
        const long n = cfg.integer_in("spectrum.e_points", 601, 2, 10000000);
        const long n_max = cfg.integer_in("spectrum.n_max", kDefaultNMax, 1, 100000000);
        const double R = cfg.real_at_least("spectrum.escape_radius", kDefaultEscapeRadius, 1.0);
        std::vector<double> E(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) E[i] = lo + (hi - lo) * double(i) / double(n - 1);
        auto recs = parallel::escape_sweep(E, V, n_max, R);
        long bounded = 0;
        d.table.columns = {"E", "status", "escape_index", "steps_used", "max_norm"};
        for (std::size_t i = 0; i < recs.size(); ++i) {
            const auto& r = recs[i];
            bool esc = r.status == OrbitStatus::escaped;
            bounded += !esc;
            d.table.add({E[i], esc ? "escaped" : "bounded_so_far", esc ? json(*r.escape_index) : json(nullptr), r.steps_used,
                         r.max_norm});
        }
        d.summary = {{"coupling", V},       {"points", n},        {"bounded_so_far", bounded},
                     {"escaped", n - bounded}, {"n_max", n_max}, {"escape_radius", R}};
    } else {
        throw ConfigError("invalid config: spectrum.output must be bands or escape");
    }
    return d;
}

// ---- dimension ----

Document cmd_dimension(RunConfig& cfg) {
    Document d;
    const std::string src = cfg.text("dimension.source", "cantor");
    auto single = [&](const BandSet& b) {
        DimensionEstimate e = box_dimension(b, eps_from(cfg, "dimension", b));
        d.summary["estimate"] = estimate_json(e);
        d.table.columns = {"eps", "count"};
        for (const auto& s : e.counts) d.table.add({s.eps, s.count});
    };
    if (src == "cantor") {
        const double r = cfg.real("dimension.ratio", 1.0 / 3.0);
        if (!(r > 0.0 && r < 0.5)) throw ConfigError("invalid config: dimension.ratio must lie in (0, 0.5)");
        const int depth = static_cast<int>(cfg.integer_in("dimension.depth", 10, 1, 24));
        d.summary["exact"] = std::log(2.0) / -std::log(r);
        single(cantor_set(r, depth));
    } else if (src == "spectrum") {
        const double V = cfg.real_at_least("dimension.coupling", 1.0, 0.0);
        const int k = static_cast<int>(cfg.integer_in("dimension.k", 18, 1, 29));
        const double res = cfg.real_in("dimension.resolution", 1e-10, 0.0, 1.0);
        BandSet c = spectrum_cover(V, k, res);
        // the widest band sets the finest usable scale; small couplings need deeper covers
        auto eps = eps_from(cfg, "dimension", c);
        if (std::count_if(eps.begin(), eps.end(), [&](double e) { return e >= 4 * c.resolution(); }) < 5)
            throw ConfigError("invalid config: dimension.k = " + std::to_string(k) + " is too shallow at coupling " +
                              format_real(V) + " (widest band " + format_real(c.resolution()) + "); raise dimension.k");
        single(c);
    } else if (src == "sweep") {
        std::vector<double> Vs = cfg.reals("dimension.couplings", {16, 32, 64, 128});
        for (double V : Vs)
            if (!(V >= 16.0)) throw ConfigError("invalid config: dimension.couplings must all be >= 16");
        const int k = static_cast<int>(cfg.integer_in("dimension.k", 12, 1, 29));
        auto rows = asymptote_check(Vs, k);
        d.summary["target"] = asymptote_target();
        d.table.columns = {"coupling", "dimension", "residual", "dim_log_v", "poor_fit"};
        for (const auto& r : rows) d.table.add({r.V, r.dim.value, r.dim.residual, r.dim_log_v, r.dim.poor_fit});
    } else {
        throw ConfigError("invalid config: dimension.source must be cantor, spectrum or sweep");
    }
    return d;
}

// ---- certify ----

RecurrenceParams recurrence_from(RunConfig& cfg) {
    RecurrenceParams p;
    p.lambda = cfg.real("certify.lambda", std::numbers::phi * std::numbers::phi);
    if (!(p.lambda > 1.0)) throw ConfigError("invalid config: certify.lambda must be > 1");
    p.epsilon = cfg.real("certify.epsilon", 0.1);
    if (!(p.epsilon > 0.0 && p.epsilon < 0.25)) throw ConfigError("invalid config: certify.epsilon must lie in (0, 0.25)");
    p.delta = cfg.real("certify.delta", 1e-3);
    if (!(p.delta >= 0.0 && p.delta < p.lambda - 1.0))
        throw ConfigError("invalid config: certify.delta must lie in [0, lambda - 1)");
    p.c1 = cfg.real_at_least("certify.c1", 1.0, 0.0);
    p.c2 = cfg.real("certify.c2", 1.0);
    if (!(p.c2 > 0.0)) throw ConfigError("invalid config: certify.c2 must be > 0");
    return p;
}

json flags_json(const RecurrenceFlags& f) {
    return {{"small_tilt", f.small_tilt},
            {"growth", f.growth},
            {"floor", f.floor},
            {"stepwise_growth", f.stepwise_growth},
            {"stepwise_small", f.stepwise_small},
            {"dichotomy", f.dichotomy},
            {"dominated", f.dominated},
            {"first_failure", f.first_failure},
            {"pass", f.all()}};
}

json params_json(const RecurrenceParams& p) {
    return {{"lambda", p.lambda}, {"epsilon", p.epsilon}, {"delta", p.delta}, {"c1", p.c1}, {"c2", p.c2}};
}

json certify_dD(RunConfig& cfg, Table* t) {
    RecurrenceParams p = recurrence_from(cfg);
    const int N = static_cast<int>(cfg.integer_in("certify.n", 7, 1, 100000));
    const double D0 = cfg.real_at_least("certify.d0", 0.0, 0.0);
    RecurrenceRun r = run_dD(p, N, D0);
    if (t) {
        t->columns = {"k", "d", "D", "b"};
        for (int k = 0; k <= N; ++k) t->add({k, r.small[k], r.large[k], r.b[k]});
    }
    return {{"params", params_json(r.params)}, {"n", N}, {"d_n", r.small[N]}, {"D_n", r.large[N]}, {"flags", flags_json(r.flags)}};
}

json certify_aA(RunConfig& cfg, std::uint64_t seed, Table* t) {
    RecurrenceParams p = recurrence_from(cfg);
    const int N = static_cast<int>(cfg.integer_in("certify.n", 7, 1, 100000));
    const long runs = cfg.integer_in("certify.schedules", 100, 1, 1000000);
    const double smax = cfg.real_in("certify.slack_max", 0.5, 0.0, 0.999);
    const std::string bk = cfg.text("certify.b_sequence", "random");
    if (bk != "random" && bk != "min_ratio" && bk != "max_ratio")
        throw ConfigError("invalid config: certify.b_sequence must be random, min_ratio or max_ratio");
    long passed = 0;
    if (t) t->columns = {"schedule", "pass", "first_failure", "a_n", "A_n"};
    for (long s = 0; s < runs; ++s) {
        std::uint64_t sd = mix_seed(seed, static_cast<std::uint64_t>(s));
        std::vector<double> b = bk == "min_ratio"   ? b_sequence_min_ratio(p, N)
                                : bk == "max_ratio" ? b_sequence_max_ratio(p, N)
                                                    : b_sequence_random(p, N, sd);
        RecurrenceRun r = run_aA(p, b, random_slack(N, smax, sd ^ 0x5bd1e995ULL));
        passed += r.flags.all();
        if (t) t->add({s, r.flags.all(), r.flags.first_failure, r.small[N], r.large[N]});
    }
    return {{"params", params_json(p)}, {"n", N}, {"schedules", runs}, {"passed", passed}, {"pass", passed == runs}};
}

json certify_model(RunConfig& cfg, std::uint64_t seed, Table* t) {
    RecurrenceParams rp = recurrence_from(cfg);
    const int n_ref = static_cast<int>(cfg.integer_in("certify.n_ref", 200, 1, 100000));
    PassingPair pp = find_passing_pair(rp, rp.delta, n_ref);
    CertificateParams c;
    c.epsilon = rp.epsilon;
    c.delta = rp.delta;
    c.eta = cfg.real_in("certify.eta", 0.5, 1e-12, 1e12);
    c.cone = {rp.c2};
    const long samples = cfg.integer_in("certify.samples", 1000, 1, 100000000);
    ModelMapSpec ms;
    ms.lambda = rp.lambda;
    ms.delta = rp.delta;
    ms.seed = seed;
    ms.c1_cap = rp.c1;
    ModelMap f = make_model_map(ms);
    ModelMapAudit au = audit_model_map(f, static_cast<int>(std::min(samples, 100000L)), seed);
    ModelSweep sw = model_map_sweep(f, static_cast<int>(samples), pp.n0, c, seed);
    if (t) {
        t->columns = {"sample", "x", "y", "z", "exit_time", "final_tilt", "expansion_at_exit", "small_tilt"};
        for (const auto& r : sw.failures)
            t->add({r.sample_id, r.start.x, r.start.y, r.start.z, r.exit_time, r.final_tilt, r.expansion_at_exit, r.small_tilt});
    }
    return {{"params", params_json(rp)},
            {"passing_pair", {{"delta0", pp.delta0}, {"n0", pp.n0}, {"n_ref", pp.n_ref}, {"delta_max_at_ref", pp.delta_max_at_ref}}},
            {"map", {{"a", f.a}, {"w", f.w}, {"phase", f.phase}, {"c1", f.c1}}},
            {"audit",
             {{"max_dev_l1", au.max_dev_l1},
              {"max_dev_frob", au.max_dev_frob},
              {"max_second", au.max_second},
              {"max_plane_z", au.max_plane_z},
              {"ok", au.ok}}},
            {"requested", sw.requested},
            {"evaluated", sw.evaluated},
            {"passed", sw.passed},
            {"inconclusive", sw.inconclusive},
            {"min_exit_time", sw.min_exit_time},
            {"pass", au.ok && sw.evaluated == sw.requested && sw.passed == sw.evaluated}};
}

json certify_trace(RunConfig& cfg, std::uint64_t seed, Table* t) {
    TraceCertParams p;
    p.coupling = cfg.real_in("certify.coupling", 0.05, 0.0, 0.5);
    p.sample_size = static_cast<int>(cfg.integer_in("certify.samples", 1000, 1, 10000000));
    p.n_forward = static_cast<int>(cfg.integer_in("certify.n_forward", 30, 1, 10000));
    p.epsilon = cfg.real("certify.epsilon", 0.1);
    if (!(p.epsilon > 0.0 && p.epsilon < 0.25)) throw ConfigError("invalid config: certify.epsilon must lie in (0, 0.25)");
    p.cone2.zeta = cfg.real_in("certify.zeta", 0.1, 1e-12, 1.0);
    p.cone3.c2 = cfg.real("certify.c2", 1.0);
    if (!(p.cone3.c2 > 0.0)) throw ConfigError("invalid config: certify.c2 must be > 0");
    p.singular_radius = cfg.real_in("certify.singular_radius", 0.05, 1e-9, 1.0);
    p.norm_cap = cfg.real_at_least("certify.norm_cap", 10.0, 2.0);
    p.max_attempts = static_cast<int>(cfg.integer_in("certify.max_attempts", 200, 1, 1000000));
    p.seed = seed;
    TraceCertReport r = empirical_trace_certificate(p);
    if (t) {
        t->columns = {"x", "y", "z"};
        for (const auto& q : r.counterexamples) t->add({q.x, q.y, q.z});
    }
    return {{"coupling", p.coupling},
            {"n_forward", p.n_forward},
            {"epsilon", p.epsilon},
            {"zeta", p.cone2.zeta},
            {"singular_radius", p.singular_radius},
            {"attempts", r.attempts},
            {"accepted", r.accepted},
            {"rejected_unbounded", r.rejected_unbounded},
            {"rejected_singular", r.rejected_singular},
            {"segments", r.segments},
            {"segments_failed", r.segments_failed},
            {"invariance_fraction", r.invariance_fraction()},
            {"inconclusive", r.inconclusive},
            {"inconclusive_rate", r.inconclusive_rate()},
            {"min_ratio", r.min_ratio},
            {"mean_log_growth", r.mean_log_growth},
            {"near_singular_steps", r.near_singular_steps},
            {"near_singular_in_cone", r.near_singular_in_cone},
            {"pass", r.accepted > 0 && r.segments_failed == 0 && r.min_ratio > 0.0 && r.inconclusive_rate() < 0.05}};
}

json certify_semiconj(RunConfig& cfg, Table* t) {
    const int n = static_cast<int>(cfg.integer_in("certify.grid", 64, 1, 8192));
    DefectGrid g = parallel::semiconj_defect_grid(n);
    if (t) {
        t->columns = {"theta", "phi", "defect"};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t->add({double(i) / n, double(j) / n, g.defect[std::size_t(i) * n + j]});
    }
    return {{"grid", n}, {"max_defect", g.max_defect}};
}

Document cmd_certify(RunConfig& cfg) {
    Document d;
    const std::string mode = cfg.text("certify.mode", "dD");
    Table* t = &d.table;
    if (mode == "dD")
        d.summary = certify_dD(cfg, t);
    else if (mode == "aA")
        d.summary = certify_aA(cfg, cfg.seed, t);
    else if (mode == "model")
        d.summary = certify_model(cfg, cfg.seed, t);
    else if (mode == "trace")
        d.summary = certify_trace(cfg, cfg.seed, t);
    else if (mode == "semiconj")
        d.summary = certify_semiconj(cfg, t);
    else if (mode == "all")
        d.summary = {{"dD", certify_dD(cfg, nullptr)},
                     {"aA", certify_aA(cfg, cfg.seed, nullptr)},
                     {"model", certify_model(cfg, cfg.seed, nullptr)},
                     {"trace", certify_trace(cfg, cfg.seed, nullptr)},
                     {"semiconj", certify_semiconj(cfg, nullptr)}};
    else
        throw ConfigError("invalid config: certify.mode must be dD, aA, model, trace, semiconj or all");
    d.summary["seed"] = cfg.seed;
    return d;
}

// ---- mesh ----

Document cmd_mesh(RunConfig& cfg) {
    Document d;
    const double V = cfg.real_at_least("mesh.coupling", 0.01, 0.0);
    const double x0 = cfg.real("mesh.x_min", -2.0), x1 = cfg.real("mesh.x_max", 2.0);
    const double y0 = cfg.real("mesh.y_min", -2.0), y1 = cfg.real("mesh.y_max", 2.0);
    if (!(x0 < x1) || !(y0 < y1)) throw ConfigError("invalid config: mesh window needs x_min < x_max and y_min < y_max");
    const long res = cfg.integer("mesh.resolution", 101);
    if (res < 2 || res > 20000) throw ConfigError("invalid config: mesh.resolution must lie in [2, 20000]");
    SurfaceSpec s = make_surface(V, cfg.real_in("mesh.tolerance", 1e-9, 1e-15, 1e-3));
    SurfaceMesh m = surface_mesh(s, {x0, x1}, {y0, y1}, static_cast<int>(res));
    double worst = 0.0;
    bool all_on = true;
    d.table.columns = {"kind", "i", "j", "x", "y", "z", "sheet"};
    for (const auto& mp : m.points) {
        worst = std::max(worst, std::abs(fricke(mp.p) - s.level()));
        all_on = all_on && on_surface(mp.p, s);
        d.table.add({"surface", mp.i, mp.j, mp.p.x, mp.p.y, mp.p.z, mp.sheet == Sheet::upper ? "upper" : "lower"});
    }
    d.summary = {{"coupling", V},           {"resolution", res},       {"points", m.points.size()},
                 {"empty_nodes", m.empty_count()}, {"max_level_residual", worst}, {"all_on_surface", all_on}};
    if (cfg.flag("mesh.per2", false)) {
        const double a = cfg.real("mesh.per2_x_min", x0), b = cfg.real("mesh.per2_x_max", x1);
        if (!(a < b)) throw ConfigError("invalid config: mesh.per2_x_min must be below mesh.per2_x_max");
        const long n = cfg.integer_in("mesh.per2_points", 1000, 2, 10000000);
        double drift = 0.0;
        long kept = 0;
        for (long i = 0; i < n; ++i) {
            double x = a + (b - a) * double(i) / double(n - 1);
            if (std::abs(x - 0.5) < kPer2Exclusion) continue;
            Point3 p = per2_point(x);
            drift = std::max(drift, distance(trace_step(trace_step(p)), p));
            ++kept;
            d.table.add({"per2", i, 0, p.x, p.y, p.z, ""});
        }
        d.summary["per2_points"] = kept;
        d.summary["per2_max_period_defect"] = drift;
    }
    return d;
}

// ---- subshift ----

Document cmd_subshift(RunConfig& cfg) {
    Document d;
    const int n = static_cast<int>(cfg.integer_in("subshift.n", 10, 1, 20));
    const bool check = cfg.flag("subshift.enumerate", n <= 12);
    const auto& M = subshift_matrix();
    json rows = json::array();
    for (const auto& r : M) rows.push_back(r);
    SubshiftCounts c = subshift_counts(n);
    double rho = subshift_spectral_radius();
    d.summary = {{"n", n},
                 {"word_count", c.word_count},
                 {"periodic_count", c.periodic_count},
                 {"spectral_radius", rho},
                 {"char_root", subshift_char_root()},
                 {"entropy", subshift_entropy()},
                 {"log_spectral_radius", std::log(rho)},
                 {"matrix", rows}};
    d.table.columns = {"n", "word_count", "periodic_count", "growth_entropy"};
    bool agree = true;
    for (int m = 1; m <= n; ++m) {
        SubshiftCounts cm = subshift_counts(m);
        if (check) agree = agree && enumerate_words(m) == cm.word_count && enumerate_periodic(m) == cm.periodic_count;
        d.table.add({m, cm.word_count, cm.periodic_count, m >= 2 ? json(entropy_from_words(m)) : json(nullptr)});
    }
    if (check) d.summary["enumeration_agrees"] = agree;
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fibtrace: Fibonacci trace map dynamics, spectra and hyperbolicity checks"};
    app.set_version_flag("--version", std::string(toolkit_version()));
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "output file (.csv or .json; stdout if omitted)");
    auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides run.seed)");
    app.add_option("--threads", threads, "worker threads (capped by FIBTRACE_MAX_THREADS)")->check(CLI::NonNegativeNumber);
    app.add_option("--set", overrides, "override, section.key=value")->take_all();
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"spectrum", "band covers of the spectrum, or an escape-time sweep"},
        {"dimension", "box-counting dimension of a band set or a coupling sweep"},
        {"certify", "recurrence, model-map and trace-map cone certificates"},
        {"mesh", "points of the invariant surface, optionally the period-2 curve"},
        {"subshift", "word counts, periodic points and entropy of the subshift"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::from_file(config_path);
        for (const auto& o : overrides) cfg.set(o);
        if (*seed_opt) cfg.set("run.seed", std::to_string(seed));
        long s = cfg.integer("run.seed", 1);
        if (s < 0) throw ConfigError("invalid config: run.seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
        cfg.command = cmd;
        configure_threads(threads);

        Document d;
        try {
            if (cmd == "spectrum")
                d = cmd_spectrum(cfg);
            else if (cmd == "dimension")
                d = cmd_dimension(cfg);
            else if (cmd == "certify")
                d = cmd_certify(cfg);
            else if (cmd == "mesh")
                d = cmd_mesh(cfg);
            else
                d = cmd_subshift(cfg);
        } catch (const NumericError& e) {
            throw RunFailure(e.what());
        }
        for (const auto& k : cfg.unused_keys()) std::cerr << "warning: config key " << k << " was not used\n";
        d.command = cmd;
        d.config = cfg.resolved();
        write_document(out_path, d);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: invalid config value: " << e.what() << '\n';
        return 2;
    } catch (const ConstructionError& e) {
        std::cerr << "error: invalid config value: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
