#pragma once

// The alpha-family of deformations sending a Sasakian structure (eps = +1)
// to a Lorentzian-Sasakian one (eps = -1):
//   g~ = alpha g - beta eta (x) eta,  eta~ = alpha eta,  xi~ = xi / alpha,
//   phi~ = phi,  beta = alpha + alpha^2.
// beta is always derived from alpha; only alpha is exposed.

#include "psk/contact.hpp"
#include "psk/immersion.hpp"
#include "psk/spectrum.hpp"

namespace psk {

struct TannoDeformation {
    double alpha = 1.0;
    double beta = 2.0; // alpha + alpha^2, never independent
    AmbientStructure source;
    AmbientStructure target; // eps = -1, signature (2n, 1)
};

// Requires alpha > 0 and a Sasakian source with eps = +1.
TannoDeformation deform(const AmbientStructure& S, double alpha);

// g~(xi~, xi~) = -1, g~(xi, xi) = -alpha^2, and the axioms of the target.
IdentityReport tanno_invariants(const TannoDeformation& T,
                                const std::vector<std::vector<double>>& points,
                                const ContactTolerances& tol = {});

// nabla~_X Y = nabla_X Y - (beta/alpha)(eta(X) phi Y + eta(Y) phi X),
// both connections computed independently from their metrics.
IdentityReport connection_difference_check(const TannoDeformation& T,
                                           const std::vector<std::vector<double>>& points,
                                           const ContactTolerances& tol = {});

// R~(X,Y)Z = R(X,Y)Z + (beta/alpha)(g(phi Y,Z) phi X - g(phi X,Z) phi Y
//            - 2 g(phi X,Y) phi Z) for X,Y,Z in the contact distribution,
// checked on random D-vectors drawn by the caller's rng.
IdentityReport curvature_relation_check(const TannoDeformation& T,
                                        const std::vector<std::vector<double>>& points, Rng& rng,
                                        double tolerance = 1e-4);

// A_alpha = (A+2)/alpha + 2.
double einstein_constant_map(double A, double alpha);

struct MinimalityPreservation {
    double source_mean_curvature = 0.0; // max |H| over nodes
    double target_mean_curvature = 0.0;
    double source_lmin_defect = 0.0; // L2 norm of div(phi H), periodic grids only
    double target_lmin_defect = 0.0;
    double homothety_residual = 0.0; // max |g~|_L - alpha g|_L|
    double tangential_connection_residual = 0.0; // connections agree along L
    bool same_verdict = false;       // both minimal or both not
};

MinimalityPreservation minimality_preservation_check(const Immersion& f, const TannoDeformation& T,
                                                     double minimal_tol = 1e-6);

struct StabilityEquivalence {
    double lambda1_source = 0.0;
    double lambda1_target = 0.0;
    double A_source = 0.0;
    double A_target = 0.0;
    StabilityVerdict source;
    StabilityVerdict target;
    bool agree = false;
    double eigenvalue_scaling_residual = 0.0; // relative defect of lambda~ = lambda/alpha
};

StabilityEquivalence stability_equivalence_check(const Immersion& f, const TannoDeformation& T,
                                                 const SpectrumOptions& opts = {});

} // namespace psk
