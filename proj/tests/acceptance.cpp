// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria 7 and 8 drive the CLI binary whose path is
// argv[1] (default: ../tools/pskgeo).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psk/runner.hpp"
#include "psk/spectrum.hpp"
#include "psk/tanno.hpp"
#include "psk/variation.hpp"

using namespace psk;
namespace fs = std::filesystem;

namespace {

std::string g_cli = "../tools/pskgeo";
fs::path g_tmp;

struct Criterion {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v)
{
    char buf[40];
    snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::vector<DeformationPotential> random_potentials(int n, int count, uint64_t seed)
{
    Rng rng(seed);
    std::vector<DeformationPotential> pots;
    for (int t = 0; t < count; ++t) {
        ScalarExpr f = expr_constant(0.0);
        if (n == 1) {
            for (int m = 1; m <= 3; ++m) {
                const ScalarExpr arg = expr_constant(static_cast<double>(m)) * expr_var(0);
                f = f + expr_constant(rng.uniform(-1.0, 1.0)) * expr_cos(arg) +
                    expr_constant(rng.uniform(-1.0, 1.0)) * expr_sin(arg);
            }
        } else {
            for (int mu = 0; mu <= 1; ++mu)
                for (int mv = -1; mv <= 1; ++mv) {
                    if (mu == 0 && mv <= 0) continue;
                    const ScalarExpr arg = expr_constant(static_cast<double>(mu)) * expr_var(0) +
                                           expr_constant(static_cast<double>(mv)) * expr_var(1);
                    f = f + expr_constant(rng.uniform(-1.0, 1.0)) * expr_cos(arg) +
                        expr_constant(rng.uniform(-1.0, 1.0)) * expr_sin(arg);
                }
        }
        pots.push_back({f});
    }
    return pots;
}

// ---------------------------------------------------------------------------
// 1. axiom/identity suite on round S^3 and S^5
Criterion criterion1()
{
    Criterion c;
    for (int n : {1, 2}) {
        const auto t0 = std::chrono::steady_clock::now();
        const AmbientStructure S = model_catalog("round-sphere", n);
        Rng rng(101);
        const auto pts = sample_points(S, 24, rng);
        IdentityReport rep = verify_sasakian(S, pts);
        rep.merge(curvature_identity_suite(S, pts));
        const double elapsed = seconds_since(t0);
        c.require(rep.all_pass() && rep.max_residual() < 1e-6,
                  "S^" + std::to_string(2 * n + 1) + " worst residual " + fmt(rep.max_residual()));
        c.require(elapsed < 60.0, "S^" + std::to_string(2 * n + 1) + " took " + fmt(elapsed) + "s");
        if (c.pass)
            c.detail += (n == 1 ? "" : "; ") + std::string("S^") + std::to_string(2 * n + 1) +
                        " residual " + fmt(rep.max_residual()) + " in " + fmt(elapsed) + "s";
    }
    return c;
}

// shared by criteria 2 and 3
struct VariationRuns {
    std::vector<VariationReport> reports;
    double elapsed = 0.0;
};

VariationRuns g_runs;

void run_variations()
{
    const auto t0 = std::chrono::steady_clock::now();
    {
        const AmbientStructure S = model_catalog("round-sphere", 1);
        const InducedGeometry geom = induced_geometry(immersion_catalog("great-circle"), S);
        Rng rng(102);
        const VariationContext ctx(geom, eta_einstein_constants(S, sample_points(S, 16, rng)));
        for (const auto& pot : random_potentials(1, 10, 201))
            g_runs.reports.push_back(second_variation(ctx, pot));
    }
    {
        const AmbientStructure S = model_catalog("round-sphere", 2);
        const InducedGeometry geom = induced_geometry(immersion_catalog("clifford-torus"), S);
        Rng rng(103);
        const VariationContext ctx(geom, eta_einstein_constants(S, sample_points(S, 16, rng)));
        for (const auto& pot : random_potentials(2, 10, 202))
            g_runs.reports.push_back(second_variation(ctx, pot));
    }
    g_runs.elapsed = seconds_since(t0);
}

// 2. second-variation FD oracle with demonstrated convergence order
Criterion criterion2()
{
    Criterion c;
    run_variations();
    double worst = 0.0, worst_order = 99.0;
    for (const auto& vr : g_runs.reports) {
        worst = std::max(worst, vr.resid_closed_vs_fd);
        worst_order = std::min(worst_order, vr.fd_order);
    }
    c.require(worst < 1e-3, "worst |closed-fd|/(1+|fd|) = " + fmt(worst));
    c.require(worst_order >= 1.9, "worst measured order " + fmt(worst_order));
    c.require(g_runs.elapsed < 600.0, "took " + fmt(g_runs.elapsed) + "s");
    if (c.pass)
        c.detail = "20 potentials, worst residual " + fmt(worst) + ", worst order " +
                   fmt(worst_order) + ", " + fmt(g_runs.elapsed) + "s";
    return c;
}

// 3. the two closed forms agree on every run of criterion 2
Criterion criterion3()
{
    Criterion c;
    double worst = 0.0;
    for (const auto& vr : g_runs.reports) worst = std::max(worst, vr.resid_closed_vs_trace);
    c.require(worst < 1e-5, "worst closed-vs-trace = " + fmt(worst));
    if (c.pass) c.detail = "worst closed-vs-trace residual " + fmt(worst);
    return c;
}

// 4. spectrum of the great circle and the eta-Einstein short form
Criterion criterion4()
{
    Criterion c;
    const AmbientStructure S = model_catalog("round-sphere", 1);
    const InducedGeometry geom = induced_geometry(immersion_catalog("great-circle"), S);

    SpectrumOptions opts;
    opts.resolution = {128};
    const SpectrumResult sp = laplace_spectrum(geom, opts);
    const SpectrumResult lat = lattice_spectrum(geom, 4);
    c.require(std::abs(lat.lambda1() - 1.0) < 1e-12, "lattice lambda_1 != 1");
    c.require(std::abs(sp.lambda1() - 1.0) <= 1e-3,
              "grid lambda_1 = " + fmt(sp.lambda1()) + " not within 1e-3 of 1");
    c.require(std::abs(sp.lambda1() - lat.lambda1()) <= 1e-3, "grid vs lattice mismatch");

    Rng rng(104);
    const EtaEinsteinFit fit = eta_einstein_constants(S, sample_points(S, 16, rng));
    const VariationContext ctx(geom, fit);
    const VariationReport vr = second_variation(ctx, {parse_expr("cos(u0)", {"u0"})});
    const double expected = 0.25 * (std::pow(sp.lambda1(), 2) - 4.0 * sp.lambda1()) * std::numbers::pi;
    c.require(vr.second_short.has_value(), "short form missing");
    if (vr.second_short) {
        c.require(std::abs(*vr.second_short - expected) < 2e-3,
                  "short form " + fmt(*vr.second_short) + " vs (1/4)(l^2-4l)||f||^2 = " + fmt(expected));
        c.require(*vr.second_short < 0.0, "short form not negative");
    }
    const StabilityVerdict v = stability_verdict(sp.lambda1(), fit.A, S.eps);
    c.require(!v.stable, "verdict should be unstable (1 < 4)");
    if (c.pass)
        c.detail = "lambda_1 = " + fmt(sp.lambda1()) + ", short form " + fmt(*vr.second_short) +
                   ", verdict unstable";
    return c;
}

// stability-equivalence runs shared by criteria 5 and 6
std::vector<StabilityEquivalence> g_equivalences;

void run_equivalences()
{
    if (!g_equivalences.empty()) return;
    for (int n : {1, 2}) {
        const AmbientStructure S = model_catalog("round-sphere", n);
        const Immersion leg = immersion_catalog(n == 1 ? "great-circle" : "clifford-torus");
        for (double alpha : {0.5, 1.0, 2.0, 3.0})
            g_equivalences.push_back(stability_equivalence_check(leg, deform(S, alpha)));
    }
}

// 5. Tanno transformation laws on round spheres
Criterion criterion5()
{
    Criterion c;
    double worst_suite = 0.0, worst_map = 0.0, worst_conn = 0.0, worst_curv = 0.0, worst_hom = 0.0,
           worst_scale = 0.0;
    run_equivalences();
    size_t se_index = 0;
    for (int n : {1, 2}) {
        const AmbientStructure S = model_catalog("round-sphere", n);
        Rng rng_fit(105);
        const EtaEinsteinFit fit_src = eta_einstein_constants(S, sample_points(S, 16, rng_fit));
        const Immersion leg = immersion_catalog(n == 1 ? "great-circle" : "clifford-torus");
        for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
            const TannoDeformation T = deform(S, alpha);
            Rng rng(106);
            const auto pts = sample_points(T.target, 20, rng);

            IdentityReport suite = verify_sasakian(T.target, pts);
            suite.merge(curvature_identity_suite(T.target, pts));
            if (!suite.all_pass()) c.require(false, "target suite failed at alpha " + fmt(alpha));
            worst_suite = std::max(worst_suite, suite.max_residual());

            const EtaEinsteinFit fit_tgt = eta_einstein_constants(T.target, pts);
            worst_map = std::max(worst_map,
                                 std::abs(fit_tgt.A - einstein_constant_map(fit_src.A, alpha)));

            const IdentityReport conn = connection_difference_check(T, pts);
            worst_conn = std::max(worst_conn, conn.find("connection-difference")->residual);

            const IdentityReport curv = curvature_relation_check(T, pts, rng);
            worst_curv = std::max(worst_curv, curv.max_residual());

            const MinimalityPreservation mp = minimality_preservation_check(leg, T);
            worst_hom = std::max(worst_hom, mp.homothety_residual);

            const StabilityEquivalence& se = g_equivalences.at(se_index++);
            worst_scale = std::max(worst_scale, se.eigenvalue_scaling_residual);
        }
    }
    c.require(worst_suite < 1e-6, "target suite worst " + fmt(worst_suite));
    c.require(worst_map < 1e-5, "constant-map worst " + fmt(worst_map));
    c.require(worst_conn < 1e-5, "connection-difference worst " + fmt(worst_conn));
    c.require(worst_curv < 1e-4, "curvature-relation worst " + fmt(worst_curv));
    c.require(worst_hom < 1e-9, "homothety worst " + fmt(worst_hom));
    c.require(worst_scale < 1e-6, "eigenvalue-scaling worst " + fmt(worst_scale));
    if (c.pass)
        c.detail = "suite " + fmt(worst_suite) + ", A-map " + fmt(worst_map) + ", conn " +
                   fmt(worst_conn) + ", curv " + fmt(worst_curv) + ", homothety " + fmt(worst_hom) +
                   ", scaling " + fmt(worst_scale);
    return c;
}

// 6. stability equivalence for every (catalog Legendrian, alpha) pair
Criterion criterion6()
{
    Criterion c;
    run_equivalences();
    int pairs = 0;
    for (const StabilityEquivalence& se : g_equivalences) {
        c.require(se.agree, "verdict pair " + std::to_string(pairs) + " disagrees");
        ++pairs;
    }
    // the corollary path: Heisenberg targets have A~ + 2 eps~ = 0 <= 0
    const AmbientStructure H = model_catalog("heisenberg", 1);
    for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
        const TannoDeformation T = deform(H, alpha);
        Rng rng(107);
        const EtaEinsteinFit fit = eta_einstein_constants(T.target, sample_points(T.target, 16, rng));
        c.require(fit.A + 2.0 * (-1) <= 1e-6, "heisenberg target threshold positive");
        for (double lambda : {1e-9, 0.5, 10.0}) {
            const StabilityVerdict v = stability_verdict(lambda, fit.A, -1);
            c.require(v.stable && v.corollary_path,
                      "corollary path not taken at alpha " + fmt(alpha));
        }
    }
    if (c.pass) c.detail = std::to_string(pairs) + " verdict pairs agree; corollary path stable";
    return c;
}

// helpers for CLI-driven criteria ------------------------------------------

int run_cli(const std::string& args)
{
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 7. negative controls through the CLI: named failures, nonzero exit
Criterion criterion7()
{
    Criterion c;
    struct Case {
        const char* name;
        const char* command;
        std::string config;
        std::string expect_id; // substring of the failing record id
    };
    const std::vector<Case> cases = {
        {"flip-phi", "verify",
         R"json({"ambient": {"catalog": "round-sphere", "n": 1}, "sabotage": {"flip_phi": true}, "sample_points": 6})json",
         "normality"},
        {"scale-eta", "verify",
         R"json({"ambient": {"catalog": "round-sphere", "n": 1}, "sabotage": {"scale_eta": 2.0}, "sample_points": 6})json",
         "eta"},
        {"non-legendrian", "verify",
         R"json({"ambient": {"catalog": "round-sphere", "n": 1}, "immersion": {"catalog": "reeb-orbit"}, "sample_points": 6})json",
         "legendrian-defect"},
        {"non-l-minimal", "second-variation",
         R"json({"ambient": {"catalog": "round-sphere", "n": 1}, "immersion": {"catalog": "wavy-curve"}, "potentials": ["cos(u0)"], "sample_points": 6})json",
         "l-minimality"},
    };

    for (const auto& k : cases) {
        const fs::path cfg = g_tmp / (std::string(k.name) + ".json");
        const fs::path rep = g_tmp / (std::string(k.name) + ".report.json");
        write_file(cfg, k.config);
        const int code = run_cli(std::string(k.command) + " --config " + cfg.string() + " --out " +
                                 rep.string());
        c.require(code > 0, std::string(k.name) + ": exit code " + std::to_string(code));

        bool named = false;
        double residual = 0.0;
        try {
            const auto doc = nlohmann::json::parse(read_file(rep));
            for (const auto& r : doc.at("records")) {
                if (!r.at("pass").get<bool>() &&
                    r.at("id").get<std::string>().find(k.expect_id) != std::string::npos) {
                    named = true;
                    residual = std::max(residual, r.at("residual").get<double>());
                }
            }
        } catch (...) {
        }
        c.require(named && residual > 1e-2,
                  std::string(k.name) + ": no failing record naming '" + k.expect_id +
                      "' with residual > 1e-2 (got " + fmt(residual) + ")");
    }
    if (c.pass) c.detail = "4 sabotage cases fail with the expected named records";
    return c;
}

// 8. byte-identical reports for identical config + seed
Criterion criterion8()
{
    Criterion c;
    const std::string config =
        R"json({"ambient": {"catalog": "round-sphere", "n": 1}, "immersion": {"catalog": "great-circle"},
            "potentials": ["cos(u0)"], "sample_points": 8, "spectrum_resolution": [64], "seed": 42})json";
    const fs::path cfg = g_tmp / "det.json";
    write_file(cfg, config);
    const fs::path r1 = g_tmp / "det1.json", r2 = g_tmp / "det2.json";
    c.require(run_cli("second-variation --config " + cfg.string() + " --out " + r1.string()) == 0,
              "first run failed");
    c.require(run_cli("second-variation --config " + cfg.string() + " --out " + r2.string()) == 0,
              "second run failed");
    const std::string a = read_file(r1), b = read_file(r2);
    c.require(!a.empty() && a == b, "reports differ");
    if (c.pass) c.detail = "two runs, " + std::to_string(a.size()) + " bytes, identical";
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc > 1) g_cli = argv[1];
    g_tmp = fs::temp_directory_path() / "psk-acceptance";
    fs::create_directories(g_tmp);

    struct Entry {
        const char* label;
        Criterion (*fn)();
    };
    const Entry entries[] = {
        {"1 axiom/identity suite on round S^3 and S^5", criterion1},
        {"2 second-variation FD oracle (20 potentials, order >= 2)", criterion2},
        {"3 dual closed forms agree", criterion3},
        {"4 circle spectrum, short form, verdict", criterion4},
        {"5 Tanno transformation laws", criterion5},
        {"6 stability equivalence and corollary path", criterion6},
        {"7 negative controls (CLI exit codes, named records)", criterion7},
        {"8 deterministic reports", criterion8},
    };

    int failures = 0;
    for (const auto& e : entries) {
        Criterion c;
        try {
            c = e.fn();
        } catch (const std::exception& ex) {
            c.pass = false;
            c.detail = std::string("exception: ") + ex.what();
        }
        std::printf("%s: criterion %s%s%s\n", c.pass ? "PASS" : "FAIL", e.label,
                    c.detail.empty() ? "" : " -- ", c.detail.c_str());
        std::fflush(stdout);
        if (!c.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
