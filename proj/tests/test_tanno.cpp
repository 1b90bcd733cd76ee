#include <doctest.h>

#include <cmath>
#include <numbers>

#include "psk/tanno.hpp"

using namespace psk;

namespace {

std::vector<std::vector<double>> points_for(const AmbientStructure& S, int count, uint64_t seed)
{
    Rng rng(seed);
    return sample_points(S, count, rng);
}

} // namespace

TEST_CASE("deform builds the Lorentzian target and derives beta")
{
    const AmbientStructure S = model_catalog("round-sphere", 1);

    const TannoDeformation T1 = deform(S, 1.0);
    CHECK(T1.beta == doctest::Approx(2.0));
    const TannoDeformation T2 = deform(S, 2.0);
    CHECK(T2.beta == doctest::Approx(6.0));

    const auto pts = points_for(T2.target, 10, 21);
    const IdentityReport inv = tanno_invariants(T2, pts);
    for (const auto& r : inv.records) {
        INFO(r.id, " residual ", r.residual);
        CHECK(r.pass);
    }

    CHECK_THROWS_AS(deform(S, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(deform(S, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(deform(T2.target, 1.0), std::invalid_argument);  // eps = -1 source
    CHECK_THROWS_AS(deform(with_flipped_phi(S), 1.0), std::invalid_argument); // non-Sasakian source
}

TEST_CASE("every catalog source deforms to a passing eps = -1 suite")
{
    for (const auto& [name, n, alpha] :
         std::vector<std::tuple<const char*, int, double>>{{"round-sphere", 1, 0.5},
                                                           {"heisenberg", 1, 2.0},
                                                           {"heisenberg", 2, 1.0}}) {
        const TannoDeformation T = deform(model_catalog(name, n), alpha);
        const auto pts = points_for(T.target, 10, 29);
        IdentityReport suite = verify_sasakian(T.target, pts);
        suite.merge(curvature_identity_suite(T.target, pts));
        for (const auto& r : suite.records) {
            INFO(name, " n=", n, " alpha=", alpha, " ", r.id, " residual ", r.residual);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("connection difference law")
{
    for (double alpha : {1.0, 2.0}) {
        const TannoDeformation T = deform(model_catalog("round-sphere", 1), alpha);
        const auto pts = points_for(T.source, 8, 22);
        const IdentityReport rep = connection_difference_check(T, pts);
        for (const auto& r : rep.records) {
            INFO("alpha ", alpha, " ", r.id, " residual ", r.residual);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("connection difference vanishes on horizontal arguments")
{
    const TannoDeformation T = deform(model_catalog("round-sphere", 1), 2.0);
    ExprMetricSource src(&T.source.metric);
    ExprMetricSource tgt(&T.target.metric);
    Rng rng(23);
    const auto pts = points_for(T.source, 6, 23);
    for (const auto& p : pts) {
        const ConnectionCoefficients g0 = christoffel(src, p);
        const ConnectionCoefficients g1 = christoffel(tgt, p);
        const Eigen::VectorXd eta = T.source.eval_eta(p);
        const Eigen::VectorXd xi = T.source.eval_xi(p);
        const int d = 3;
        for (int trial = 0; trial < 4; ++trial) {
            // X, Y in the contact distribution: nabla~_X Y = nabla_X Y
            const auto dvec = [&](Eigen::VectorXd w) { return (w - eta.dot(w) * xi).eval(); };
            const Eigen::VectorXd X = dvec(rng.vector(d)), Y = dvec(rng.vector(d));
            for (int k = 0; k < d; ++k) {
                double diff = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        diff += (g1.at(k, i, j) - g0.at(k, i, j)) * X(i) * Y(j);
                CHECK(std::abs(diff) < 1e-6);
            }
        }
    }
}

TEST_CASE("curvature relation on the contact distribution")
{
    Rng rng(24);
    for (const auto& [n, alpha] : std::vector<std::pair<int, double>>{{1, 1.0}, {1, 2.0}, {2, 3.0}}) {
        const TannoDeformation T = deform(model_catalog("round-sphere", n), alpha);
        const auto pts = points_for(T.source, n == 1 ? 6 : 3, 24);
        const IdentityReport rep = curvature_relation_check(T, pts, rng);
        for (const auto& r : rep.records) {
            INFO("n ", n, " alpha ", alpha, " residual ", r.residual);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("einstein constant map arithmetic")
{
    CHECK(einstein_constant_map(2.0, 1.0) == doctest::Approx(6.0));
    CHECK(einstein_constant_map(-2.0, 0.7) == doctest::Approx(2.0));
    CHECK(einstein_constant_map(-4.0, 0.5) == doctest::Approx(-2.0));
    CHECK(einstein_constant_map(2.0, 0.5) == doctest::Approx(10.0));
    CHECK(einstein_constant_map(2.0, 2.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(einstein_constant_map(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("fitted target constants match the map")
{
    for (const auto& [name, n] : std::vector<std::pair<const char*, int>>{{"round-sphere", 1},
                                                                          {"heisenberg", 1}}) {
        const AmbientStructure S = model_catalog(name, n);
        const auto pts_s = points_for(S, 12, 25);
        const EtaEinsteinFit fs = eta_einstein_constants(S, pts_s);
        REQUIRE(fs.eta_einstein);
        for (double alpha : {0.5, 2.0}) {
            const TannoDeformation T = deform(S, alpha);
            const auto pts_t = points_for(T.target, 12, 26);
            const EtaEinsteinFit ft = eta_einstein_constants(T.target, pts_t);
            REQUIRE(ft.eta_einstein);
            const double expected = einstein_constant_map(fs.A, alpha);
            INFO(name, " alpha ", alpha, ": fitted ", ft.A, " expected ", expected);
            CHECK(std::abs(ft.A - expected) < 1e-5);
            CHECK(std::abs(ft.B - (2.0 * n + ft.A)) < 1e-5); // B~ = 2n - eps~ A~
            CHECK(ft.relation_ok);
        }
    }
}

TEST_CASE("minimality is preserved, with the exact induced homothety")
{
    const AmbientStructure S3 = model_catalog("round-sphere", 1);
    const AmbientStructure S5 = model_catalog("round-sphere", 2);

    for (double alpha : {0.5, 2.0}) {
        const TannoDeformation T = deform(S3, alpha);
        const MinimalityPreservation mp =
            minimality_preservation_check(immersion_catalog("great-circle"), T);
        CHECK(mp.same_verdict);
        CHECK(mp.source_mean_curvature < 1e-9);
        CHECK(mp.target_mean_curvature < 1e-9);
        CHECK(mp.homothety_residual < 1e-9);
        CHECK(mp.tangential_connection_residual < 1e-6);
        CHECK(mp.source_lmin_defect < 1e-6);
        CHECK(mp.target_lmin_defect < 1e-6);
    }

    const TannoDeformation T5 = deform(S5, 2.0);
    const MinimalityPreservation mp5 =
        minimality_preservation_check(immersion_catalog("clifford-torus"), T5);
    CHECK(mp5.same_verdict);
    CHECK(mp5.target_mean_curvature < 1e-5);
    CHECK(mp5.homothety_residual < 1e-9);

    // non-closed chart: the homothety and mean-curvature checks still run
    const MinimalityPreservation mps2 =
        minimality_preservation_check(immersion_catalog("real-s2"), T5);
    CHECK(mps2.same_verdict);
    CHECK(mps2.target_mean_curvature < 1e-7);
    CHECK(mps2.homothety_residual < 1e-9);

    // non-minimal Legendrian: both sides see it, verdicts still agree
    const TannoDeformation Tw = deform(S3, 2.0);
    const MinimalityPreservation mpw =
        minimality_preservation_check(immersion_catalog("wavy-curve"), Tw);
    CHECK(mpw.same_verdict);
    CHECK(mpw.source_mean_curvature > 1e-2);
    CHECK(mpw.target_mean_curvature > 1e-2);
    CHECK(mpw.homothety_residual < 1e-9);
    CHECK(mpw.source_lmin_defect > 1e-2);
    CHECK(mpw.target_lmin_defect > 1e-2);
}

TEST_CASE("connections do not agree along a non-horizontal submanifold")
{
    // A slanted torus circle with eta(f') != 0 and a nonzero horizontal
    // part, so the correction (beta/alpha)(eta(X) phi Y + eta(Y) phi X)
    // does not collapse. (On a Reeb orbit it would: phi xi = 0.)
    Immersion slant;
    slant.name = "slant-circle";
    slant.n = 1;
    slant.lo = {0.0};
    slant.hi = {2.0 * std::numbers::pi};
    slant.periodic = {true};
    slant.grid_sizes = {48};
    slant.ambient_catalog = "round-sphere";
    slant.ambient_n = 1;
    const ScalarExpr u = expr_var(0);
    const ScalarExpr c = expr_constant(1.0 / std::sqrt(2.0));
    const ScalarExpr den = expr_constant(1.0) - c * expr_sin(u);
    const ScalarExpr two_u = expr_constant(2.0) * u;
    slant.components = {c * expr_cos(two_u) / den, c * expr_sin(two_u) / den, c * expr_cos(u) / den};

    const AmbientStructure S = model_catalog("round-sphere", 1);
    CHECK(legendrian_defect(slant, S) > 1.0); // eta(f') = 1 + cos^2 r

    const TannoDeformation T = deform(S, 2.0);
    const MinimalityPreservation mp = minimality_preservation_check(slant, T);
    CHECK(mp.tangential_connection_residual > 1e-1);
}

TEST_CASE("stability equivalence for the great circle")
{
    const AmbientStructure S = model_catalog("round-sphere", 1);
    for (double alpha : {0.5, 2.0}) {
        const TannoDeformation T = deform(S, alpha);
        const StabilityEquivalence se =
            stability_equivalence_check(immersion_catalog("great-circle"), T);
        INFO("alpha ", alpha, ": lambda1 ", se.lambda1_source, " -> ", se.lambda1_target);
        CHECK(se.agree);
        CHECK_FALSE(se.source.stable); // 1 < 4
        CHECK_FALSE(se.target.stable);
        CHECK(se.eigenvalue_scaling_residual < 1e-6);
        CHECK(se.A_source == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(se.A_target == doctest::Approx(4.0 / alpha + 2.0).epsilon(1e-6));
    }
}

TEST_CASE("heisenberg targets sit exactly on the corollary boundary")
{
    // A = -2 maps to A~ = 2 for every alpha, so A~ + 2 eps~ = 0 and the
    // corollary path applies regardless of lambda_1.
    const AmbientStructure S = model_catalog("heisenberg", 1);
    const auto pts = points_for(S, 12, 27);
    const EtaEinsteinFit fit = eta_einstein_constants(S, pts);
    for (double alpha : {0.5, 1.0, 3.0}) {
        const TannoDeformation T = deform(S, alpha);
        const auto pts_t = points_for(T.target, 12, 28);
        const EtaEinsteinFit ft = eta_einstein_constants(T.target, pts_t);
        CHECK(std::abs(ft.A - 2.0) < 1e-5);
        const StabilityVerdict v = stability_verdict(0.5, ft.A, -1);
        CHECK(v.stable);
        CHECK(v.corollary_path);
        CHECK(std::abs(v.threshold) < 1e-5);
    }
    CHECK(fit.A == doctest::Approx(-2.0).epsilon(1e-7));
}
