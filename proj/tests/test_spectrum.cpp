#include <doctest.h>

#include <cmath>

#include "psk/spectrum.hpp"
#include "psk/tanno.hpp"

using namespace psk;

TEST_CASE("unit circle spectrum: 0, 1, 1, 4, 4, ...")
{
    const AmbientStructure S = model_catalog("round-sphere", 1);
    const InducedGeometry geom = induced_geometry(immersion_catalog("great-circle"), S);

    SpectrumOptions opts;
    opts.k = 5;
    opts.resolution = {128};
    const SpectrumResult sp = laplace_spectrum(geom, opts);

    CHECK(std::abs(sp.eigenvalues[0]) < 1e-8);
    CHECK(sp.lambda1() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(sp.eigenvalues[2] == doctest::Approx(sp.eigenvalues[1]).epsilon(1e-10)); // multiplicity 2
    CHECK(sp.eigenvalues[3] == doctest::Approx(4.0).epsilon(5e-3));
    for (size_t i = 1; i < sp.eigenvalues.size(); ++i)
        CHECK(sp.eigenvalues[i] >= sp.eigenvalues[i - 1]);

    // the lattice closed form gives exactly 1
    const SpectrumResult lat = lattice_spectrum(geom, 5);
    CHECK(lat.method == "lattice-closed-form");
    CHECK(lat.eigenvalues[0] == 0.0);
    CHECK(lat.lambda1() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(sp.lambda1() - lat.lambda1()) < 1e-3);
}

TEST_CASE("clifford torus spectrum against the dual-lattice oracle")
{
    const AmbientStructure S = model_catalog("round-sphere", 2);
    const InducedGeometry geom = induced_geometry(immersion_catalog("clifford-torus"), S);

    const SpectrumResult lat = lattice_spectrum(geom, 8);
    CHECK(lat.lambda1() == doctest::Approx(2.0).epsilon(1e-12));

    SpectrumOptions opts;
    opts.k = 8;
    opts.resolution = {24, 24};
    const SpectrumResult sp = laplace_spectrum(geom, opts);
    CHECK(std::abs(sp.eigenvalues[0]) < 1e-8);
    CHECK(std::abs(sp.lambda1() - lat.lambda1()) / lat.lambda1() < 1e-2);
}

TEST_CASE("grid refinement settles lambda_1 within one percent")
{
    const AmbientStructure S = model_catalog("round-sphere", 1);
    const InducedGeometry geom = induced_geometry(immersion_catalog("great-circle"), S);
    SpectrumOptions opts;
    opts.resolution = {32};
    const SpectrumResult sp = laplace_spectrum(geom, opts);
    CHECK(sp.resolution[0] >= 64); // at least one refinement happened
    CHECK(sp.estimated_error < 1e-2 * sp.lambda1());
}

TEST_CASE("homothety scaling of the spectrum through a deformation")
{
    // the deformed induced metric is alpha g|_L, so every eigenvalue
    // scales by 1/alpha on the same grid
    const double alpha = 2.0;
    const TannoDeformation T = deform(model_catalog("round-sphere", 1), alpha);
    const InducedGeometry g0 = induced_geometry(immersion_catalog("great-circle"), T.source);
    const InducedGeometry g1 = induced_geometry(immersion_catalog("great-circle"), T.target);

    SpectrumOptions opts;
    opts.resolution = {64};
    const SpectrumResult s0 = laplace_spectrum(g0, opts);
    const SpectrumResult s1 = laplace_spectrum(g1, opts);
    for (size_t i = 1; i < std::min(s0.eigenvalues.size(), s1.eigenvalues.size()); ++i)
        CHECK(std::abs(s1.eigenvalues[i] - s0.eigenvalues[i] / alpha) /
                  (s0.eigenvalues[i] / alpha) <
              1e-6);
}

TEST_CASE("spectrum rejects non-closed parameter domains")
{
    const AmbientStructure S = model_catalog("round-sphere", 2);
    const InducedGeometry geom = induced_geometry(immersion_catalog("real-s2"), S);
    CHECK_THROWS_AS(laplace_spectrum(geom), std::invalid_argument);
    CHECK_THROWS_AS(lattice_spectrum(geom, 4), std::invalid_argument);
}

TEST_CASE("stability verdicts")
{
    // great circle in round S^3: lambda_1 = 1 < A + 2 eps = 4
    const StabilityVerdict unstable = stability_verdict(1.0, 2.0, +1);
    CHECK_FALSE(unstable.stable);
    CHECK_FALSE(unstable.corollary_path);
    CHECK(unstable.threshold == doctest::Approx(4.0));

    // Lorentzian-Sasaki-Einstein regime: A = -2n, eps = -1, threshold <= 0
    for (int n : {1, 2}) {
        const StabilityVerdict v = stability_verdict(0.5, -2.0 * n, -1);
        CHECK(v.stable);
        CHECK(v.corollary_path);
        CHECK(v.threshold == doctest::Approx(-2.0 * n - 2.0));
    }

    // boundary case: lambda_1 equals the threshold -> stable but marginal
    const StabilityVerdict boundary = stability_verdict(4.0, 2.0, +1);
    CHECK(boundary.stable);
    CHECK(boundary.marginal);

    const StabilityVerdict above = stability_verdict(6.0, 2.0, +1);
    CHECK(above.stable);
    CHECK_FALSE(above.marginal);

    CHECK(verdict_string(unstable) == "unstable");
    CHECK(verdict_string(boundary) == "stable (marginal)");
}
