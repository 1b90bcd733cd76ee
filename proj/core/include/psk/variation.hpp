#pragma once

// Legendrian deformations of an immersed L and the volume functional.
//
// For a potential f on L, the deformation direction is the normal field
//   V = f xi + (1/2) phi grad f,
// which is the general infinitesimally-Legendrian normal field. Flows
// integrate dF/dt = V[F(t)], re-evaluating V on the current immersion at
// every stage, so the deformation stays Legendrian to integrator accuracy.
//
// The second variation of volume at an L-minimal L is evaluated four ways:
//  (a) the closed form
//      (1/4) int { (Lap f)^2 - 2 eps |grad f|^2 - Ric(phi grad f, phi grad f)
//                  - 2 g(H, h(grad f, grad f)) + g(H, phi grad f)^2 } dv
//  (b) the frame-trace form
//      int { sum_i eps_i [ |nabla^perp_{e_i} V|^2 + Rm(e_i,V,e_i,V) ]
//            - g(A_V, A_V) - (1/4) g(h(grad f, grad f), H) + g(H,V)^2 } dv
//  (c) when the ambient is eta-Einstein with constant A,
//      (1/4) int { (Lap f)^2 - (A + 2 eps) |grad f|^2 } dv
//  (d) central differences of vol(L_t) through the flow, with Richardson
//      extrapolation over steps {h, h/2, h/4} and a measured order.
// (a), (b) and (d) are independent code paths; (c) collapses (a).
//
// The Laplacian has the positive-spectrum convention: Lap f = -div grad f.

#include <optional>

#include "psk/contact.hpp"
#include "psk/immersion.hpp"

namespace psk {

struct PreconditionError : std::runtime_error {
    std::string check;
    double residual;
    PreconditionError(std::string check_, double residual_, const std::string& what_)
        : std::runtime_error(what_), check(std::move(check_)), residual(residual_)
    {
    }
};

struct DeformationPotential {
    ScalarExpr f; // on the parameter domain, variables u0..u{n-1}
};

struct FlowOptions {
    double t_max = 0.05;
    double max_step = 5e-3;
    int min_steps = 4;
};

struct SecondVariationOptions {
    double h_t = 1e-2;       // coarsest FD step
    double lmin_tol = 1e-4;  // L-minimality precondition
    FlowOptions flow;
};

// Per-node values of the potential and its exact parameter derivatives.
struct PotentialOnGrid {
    Eigen::VectorXd values;              // f at nodes
    Eigen::MatrixXd dvalues;             // nodes x n
    std::vector<Eigen::MatrixXd> d2values; // per node, n x n
};

PotentialOnGrid potential_on_grid(const DeformationPotential& pot, const InducedGeometry& geom);

// Ambient curvature cached at the t=0 nodes; shared by the closed forms.
struct VariationContext {
    const InducedGeometry* geom = nullptr;
    std::vector<CurvatureTensor> ambient_curv; // per node
    std::optional<EtaEinsteinFit> eta_fit;

    explicit VariationContext(const InducedGeometry& g,
                              std::optional<EtaEinsteinFit> fit = std::nullopt);
};

// V = f xi + (1/2) phi grad f at every node (rows), with the worst
// tangency defect max |g(V, d_a F)| reported.
struct VariationFieldResult {
    Eigen::MatrixXd field; // nodes x dim
    double normality_residual = 0.0;
};
VariationFieldResult variation_field(const DeformationPotential& pot, const InducedGeometry& geom);

struct FlowResult {
    Eigen::MatrixXd positions; // nodes x dim
    double legendrian_defect = 0.0;
};
FlowResult flow(const InducedGeometry& geom, const DeformationPotential& pot, double t,
                const FlowOptions& opts = {});

// Quadrature of the induced volume density for nodal positions; tangents
// are taken with the grid differentiation matrices.
double volume_of_positions(const InducedGeometry& geom, const Eigen::MatrixXd& positions);

// Quadrature of the t=0 density (exact derivatives).
double volume(const InducedGeometry& geom);

// L2 norm of div(phi H) over L; zero exactly when L is L-minimal.
double l_minimality_defect(const InducedGeometry& geom);

struct FirstVariation {
    double closed_form = 0.0; // -int g(V, H) dv
    double fd_oracle = 0.0;
    double residual = 0.0;
    double order = 0.0;
};
FirstVariation first_variation(const VariationContext& ctx, const DeformationPotential& pot,
                               const SecondVariationOptions& opts = {});

struct VariationReport {
    double vol0 = 0.0;
    FirstVariation first;
    double second_closed = 0.0;             // (a)
    double second_trace = 0.0;              // (b)
    std::optional<double> second_short;     // (c)
    double second_fd = 0.0;                 // (d)
    double fd_order = 0.0;                  // measured, >= 2 expected; 99 = below noise
    double resid_closed_vs_fd = 0.0;        // |a-d| / (1+|d|)
    double resid_closed_vs_trace = 0.0;     // |a-b| / (1+|a|)
    double resid_closed_vs_short = 0.0;     // |a-c| / (1+|a|)
    double lmin_defect = 0.0;
    double flow_defect_max = 0.0;           // worst Legendrian defect over flows
    int stability_sign = 0;                 // sign of (a)
};

// Requires an L-minimal, closed L; throws PreconditionError otherwise.
VariationReport second_variation(const VariationContext& ctx, const DeformationPotential& pot,
                                 const SecondVariationOptions& opts = {});

// Integrated Bochner identity on closed L:
//   int (Lap f)^2 = int ( Ric_ind(grad f, grad f) + |Hess f|^2 ).
double bochner_check(const InducedGeometry& geom, const DeformationPotential& pot);

} // namespace psk
