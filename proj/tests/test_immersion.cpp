#include <doctest.h>

#include <cmath>
#include <numbers>

#include "psk/immersion.hpp"

using namespace psk;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("legendrian defects of the catalog immersions")
{
    const AmbientStructure S3 = model_catalog("round-sphere", 1);
    const AmbientStructure S5 = model_catalog("round-sphere", 2);

    CHECK(legendrian_defect(immersion_catalog("great-circle"), S3) < 1e-12);
    CHECK(legendrian_defect(immersion_catalog("wavy-curve"), S3) < 1e-12);
    CHECK(legendrian_defect(immersion_catalog("real-s2"), S5) < 1e-12);
    CHECK(legendrian_defect(immersion_catalog("clifford-torus"), S5) < 1e-12);

    // a Reeb orbit is as non-Legendrian as it gets: eta(f') = 1
    CHECK(legendrian_defect(immersion_catalog("reeb-orbit"), S3) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(legendrian_defect(immersion_catalog("clifford-torus"), S3), std::invalid_argument);
    CHECK_THROWS_AS(immersion_catalog("no-such-immersion"), std::invalid_argument);
}

TEST_CASE("great circle: unit-speed geodesic with H = 0")
{
    const AmbientStructure S = model_catalog("round-sphere", 1);
    const InducedGeometry geom = induced_geometry(immersion_catalog("great-circle"), S);

    CHECK(geom.volume == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(geom.max_mean_curvature < 1e-10);
    for (const auto& nd : geom.nodes) {
        CHECK(nd.g_ind(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(nd.density == doctest::Approx(1.0).epsilon(1e-12));
    }

    Rng rng(3);
    const IdentityReport inv = induced_invariants(geom, rng);
    for (const auto& r : inv.records) {
        INFO(r.id, " residual ", r.residual);
        CHECK(r.pass);
    }
}

TEST_CASE("real S^2 in S^5: totally geodesic, area 4 pi")
{
    const AmbientStructure S = model_catalog("round-sphere", 2);
    const InducedGeometry geom = induced_geometry(immersion_catalog("real-s2"), S);

    CHECK(geom.volume == doctest::Approx(4.0 * kPi).epsilon(1e-9));
    CHECK(geom.max_mean_curvature < 1e-8);
    double h_worst = 0.0;
    for (const auto& nd : geom.nodes)
        for (const auto& hv : nd.h) h_worst = std::max(h_worst, hv.cwiseAbs().maxCoeff());
    CHECK(h_worst < 1e-7); // h = 0, not just its trace

    Rng rng(4);
    const IdentityReport inv = induced_invariants(geom, rng);
    for (const auto& r : inv.records) {
        INFO(r.id, " residual ", r.residual);
        CHECK(r.pass);
    }
}

TEST_CASE("clifford torus lift: flat, minimal, known area")
{
    const AmbientStructure S = model_catalog("round-sphere", 2);
    const InducedGeometry geom = induced_geometry(immersion_catalog("clifford-torus"), S);

    // flat torus with metric (1/3) [[2,1],[1,2]]: area (2 pi)^2 / sqrt(3)
    CHECK(geom.volume == doctest::Approx(4.0 * kPi * kPi / std::sqrt(3.0)).epsilon(1e-10));
    CHECK(geom.max_mean_curvature < 1e-9);

    const Eigen::MatrixXd expected = (Eigen::MatrixXd(2, 2) << 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0,
                                      2.0 / 3.0)
                                         .finished();
    for (const auto& nd : geom.nodes)
        CHECK((nd.g_ind - expected).cwiseAbs().maxCoeff() < 1e-12);

    Rng rng(5);
    const IdentityReport inv = induced_invariants(geom, rng);
    for (const auto& r : inv.records) {
        INFO(r.id, " residual ", r.residual);
        CHECK(r.pass);
    }
}

TEST_CASE("wavy curve is Legendrian but not minimal")
{
    const AmbientStructure S = model_catalog("round-sphere", 1);
    const InducedGeometry geom = induced_geometry(immersion_catalog("wavy-curve"), S);
    CHECK(geom.max_mean_curvature > 0.1);

    Rng rng(6);
    const IdentityReport inv = induced_invariants(geom, rng);
    for (const auto& r : inv.records) {
        INFO(r.id, " residual ", r.residual);
        CHECK(r.pass); // the Legendrian h-identities hold even off minimality
    }
}

TEST_CASE("gauss equation on catalog immersions")
{
    const AmbientStructure S3 = model_catalog("round-sphere", 1);
    const AmbientStructure S5 = model_catalog("round-sphere", 2);
    Rng rng(7);

    // curve: both sides degenerate to zero
    const InducedGeometry circle = induced_geometry(immersion_catalog("great-circle"), S3);
    CHECK(gauss_equation_check(circle, rng, 8, 1e-9).all_pass());

    // totally geodesic S^2: ambient restriction equals intrinsic curvature
    const InducedGeometry s2 = induced_geometry(immersion_catalog("real-s2"), S5);
    CHECK(gauss_equation_check(s2, rng, 8, 1e-6).all_pass());

    // flat torus with nonzero h
    const InducedGeometry cl = induced_geometry(immersion_catalog("clifford-torus"), S5);
    CHECK(gauss_equation_check(cl, rng, 8, 1e-5).all_pass());
}

TEST_CASE("curvature trace identities along Legendrians")
{
    const AmbientStructure S3 = model_catalog("round-sphere", 1);
    const AmbientStructure S5 = model_catalog("round-sphere", 2);
    Rng rng(8);

    const InducedGeometry circle = induced_geometry(immersion_catalog("great-circle"), S3);
    const IdentityReport r1 = trace_curvature_check(circle, rng, 8, 1e-7);
    for (const auto& r : r1.records) {
        INFO(r.id, " residual ", r.residual);
        CHECK(r.pass);
    }

    const InducedGeometry cl = induced_geometry(immersion_catalog("clifford-torus"), S5);
    const IdentityReport r2 = trace_curvature_check(cl, rng, 8, 1e-6);
    for (const auto& r : r2.records) {
        INFO(r.id, " residual ", r.residual);
        CHECK(r.pass);
    }

    const InducedGeometry wav = induced_geometry(immersion_catalog("wavy-curve"), S3);
    CHECK(trace_curvature_check(wav, rng, 8, 1e-6).all_pass());
}
