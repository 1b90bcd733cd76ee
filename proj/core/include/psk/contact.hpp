#pragma once

// Almost contact metric structures (xi, eta, phi, g, eps) on a chart, the
// pseudo-Sasakian axiom and its curvature consequences, eta-Einstein
// constant fitting, and the catalog of model structures.
//
// Identity signs follow the engine's curvature convention (see
// psk/tensor.hpp). One consequence worth recording: with
// R(X,Y)Z = D_X D_Y Z - ..., the normality axiom
// (nabla_X phi)Y = eps*eta(Y)X - g(X,Y)xi forces
//   R(X,Y)xi = eta(Y)X - eta(X)Y,
// which is the sign that vanishes on the round sphere; the identity suite
// checks that form.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "psk/identity.hpp"
#include "psk/rng.hpp"
#include "psk/tensor.hpp"

namespace psk {

struct AmbientStructure {
    std::string name;
    int n = 0;   // chart dimension is 2n+1
    int eps = 1; // g(xi,xi)
    MetricField metric;
    std::vector<ScalarExpr> xi;  // vector components xi^i
    std::vector<ScalarExpr> eta; // covector components eta_i
    std::vector<ScalarExpr> phi; // endomorphism phi^i_j at [i*dim + j]

    // sampling box, chosen away from any chart singularity
    std::vector<double> sample_lo, sample_hi;

    // declared constants for structures known to be eta-Einstein (optional)
    std::optional<std::pair<double, double>> eta_einstein_ab;

    int dim() const { return 2 * n + 1; }
    const ScalarExpr& phi_entry(int i, int j) const { return phi[static_cast<size_t>(i * dim() + j)]; }

    Eigen::VectorXd eval_xi(std::span<const double> p) const;
    Eigen::VectorXd eval_eta(std::span<const double> p) const;
    Eigen::MatrixXd eval_phi(std::span<const double> p) const;
    // dxi(k,i) = d_k xi^i, and likewise for eta / phi entries.
    void eval_xi_jet(std::span<const double> p, Eigen::VectorXd& v, Eigen::MatrixXd& dv) const;
    void eval_eta_jet(std::span<const double> p, Eigen::VectorXd& v, Eigen::MatrixXd& dv) const;
    void eval_phi_jet(std::span<const double> p, Eigen::MatrixXd& m,
                      std::vector<Eigen::MatrixXd>& dm) const;
};

struct ContactTolerances {
    double algebraic = 1e-7; // pointwise, exact-derivative identities
    double curvature = 1e-6; // identities through the differenced connection
    double scale = 1.0;      // global multiplier

    double alg() const { return algebraic * scale; }
    double curv() const { return curvature * scale; }
};

std::vector<std::vector<double>> sample_points(const AmbientStructure& S, int count, Rng& rng);

// Algebraic compatibility of (xi, eta, phi, g, eps), including the contact
// condition d eta = 2 g(phi ., .) and the declared signature.
IdentityReport structure_axioms(const AmbientStructure& S,
                                const std::vector<std::vector<double>>& points,
                                const ContactTolerances& tol = {});

// Axioms plus the normality equation, nabla xi = eps*phi, and xi Killing.
IdentityReport verify_sasakian(const AmbientStructure& S,
                               const std::vector<std::vector<double>>& points,
                               const ContactTolerances& tol = {});

// The curvature consequences of the pseudo-Sasakian axiom.
IdentityReport curvature_identity_suite(const AmbientStructure& S,
                                        const std::vector<std::vector<double>>& points,
                                        const ContactTolerances& tol = {});

struct EtaEinsteinFit {
    double A = 0.0;
    double B = 0.0;
    double residual = 0.0;      // max | Ric - A g - B eta x eta | over samples
    bool eta_einstein = false;  // residual below threshold
    bool relation_ok = false;   // B = 2n - eps*A within 1e-6 (when eta_einstein)
};

EtaEinsteinFit eta_einstein_constants(const AmbientStructure& S,
                                      const std::vector<std::vector<double>>& points,
                                      double residual_threshold = 1e-5);

// Catalog: "round-sphere" (stereographic chart, any point removed is the
// projection pole), "heisenberg" (global chart), and "tanno(<name>,<alpha>)".
// Supported n: 1 and 2.
AmbientStructure model_catalog(const std::string& name, int n);

// Deliberate structure damage, used by negative tests and the CLI sabotage
// hooks. Each returns a modified copy.
AmbientStructure with_scaled_eta(const AmbientStructure& S, double factor);
AmbientStructure with_flipped_phi(const AmbientStructure& S);
AmbientStructure with_scaled_xi(const AmbientStructure& S, double factor);

} // namespace psk
