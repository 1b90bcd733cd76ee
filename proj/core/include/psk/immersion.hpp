#pragma once

// Parametrized immersions f: L -> M, the Legendrian condition, and the
// induced extrinsic geometry: tangent/normal frames, second fundamental
// form, shape operator, mean curvature.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "psk/contact.hpp"
#include "psk/grid.hpp"

namespace psk {

struct Immersion {
    std::string name;
    int n = 1;                          // parameter dimension; ambient is 2n+1
    std::vector<double> lo, hi;         // parameter box
    std::vector<bool> periodic;         // per axis
    std::vector<int> grid_sizes;        // default quadrature resolution
    std::vector<ScalarExpr> components; // 2n+1 chart expressions in u0..u{n-1}

    // catalog immersions know their chart
    std::string ambient_catalog;
    int ambient_n = 0;

    int ambient_dim() const { return 2 * n + 1; }
    bool closed() const
    {
        for (bool p : periodic)
            if (!p) return false;
        return true;
    }

    Grid make_grid() const;
    Grid make_grid(const std::vector<int>& sizes) const;

    Eigen::VectorXd eval(std::span<const double> u) const;
    // dF(i,a) = d_a F^i (columns are coordinate tangents), d2F[i](a,b)
    void eval_jet2(std::span<const double> u, Eigen::VectorXd& F, Eigen::MatrixXd& dF,
                   std::vector<Eigen::MatrixXd>& d2F) const;
};

// "great-circle", "reeb-orbit", "wavy-curve" (ambient round-sphere n=1);
// "clifford-torus", "real-s2" (ambient round-sphere n=2).
Immersion immersion_catalog(const std::string& name);

// max over quadrature nodes and axes of |eta(d_a f)|
double legendrian_defect(const Immersion& f, const AmbientStructure& S);

// The metric induced by f from S, evaluable anywhere on the parameter
// domain with exact first derivatives; signature is declared Riemannian.
class InducedMetricSource final : public MetricSource {
public:
    InducedMetricSource(const Immersion* f, const AmbientStructure* S) : f_(f), S_(S) {}
    int dim() const override { return f_->n; }
    void eval_jet1(std::span<const double> u, Eigen::MatrixXd& g,
                   std::vector<Eigen::MatrixXd>& dg) const override;

private:
    const Immersion* f_;
    const AmbientStructure* S_;
};

struct NodeGeometry {
    std::vector<double> u;
    Eigen::VectorXd F;
    Eigen::MatrixXd dF;                // dim x n
    std::vector<Eigen::MatrixXd> d2F;  // per ambient component: n x n
    Eigen::MatrixXd g_ind, g_ind_inv;  // n x n
    double density = 0.0;              // sqrt(det g_ind)
    Eigen::MatrixXd g_amb;             // ambient metric at F
    std::vector<Eigen::MatrixXd> dg_amb;
    ConnectionCoefficients gamma_amb;  // ambient Christoffels at F
    ConnectionCoefficients gamma_ind;  // induced Christoffels at u
    Eigen::VectorXd xi;
    Eigen::VectorXd eta_vals;          // eta components at F
    Eigen::MatrixXd phi;
    Eigen::MatrixXd frame;             // dim x n, orthonormal e_i (ambient components)
    Eigen::MatrixXd frame_coef;        // n x n, e_i = sum_a frame_coef(a,i) d_a F
    std::vector<double> frame_sign;    // eps_i = g(e_i, e_i)
    Eigen::MatrixXd normal_frame;      // dim x (n+1): nu_0 = xi, nu_i = phi e_i
    std::vector<double> normal_sign;
    std::vector<Eigen::VectorXd> h;    // h(a,b) ambient vector at [a*n+b]
    Eigen::VectorXd H;                 // mean curvature vector

    const Eigen::VectorXd& h_at(int a, int b) const
    {
        return h[static_cast<size_t>(a * g_ind.rows() + b)];
    }
};

struct InducedGeometry {
    Immersion f;
    AmbientStructure S;
    Grid grid;
    std::vector<NodeGeometry> nodes;
    double volume = 0.0;
    double max_mean_curvature = 0.0; // max |H|_g over nodes (Riemannian norm)

    // d/du_a of a nodal field (rows = nodes, cols = components)
    Eigen::MatrixXd field_derivative(const Eigen::MatrixXd& nodal, int axis) const;
};

// Builds all per-node data. Throws if the Jacobian loses rank or (with
// require_spacelike, the default) the induced metric fails to be positive
// definite at a node. With require_spacelike = false the induced metric
// only needs to be nondegenerate and the density uses |det|.
InducedGeometry induced_geometry(const Immersion& f, const AmbientStructure& S,
                                 const std::optional<std::vector<int>>& grid_sizes = std::nullopt,
                                 bool require_spacelike = true);

// Frame orthonormality, normal-frame completeness, h symmetries, the
// Legendrian h-identities, and shape-operator consistency.
IdentityReport induced_invariants(const InducedGeometry& geom, Rng& rng,
                                  const ContactTolerances& tol = {});

// Ambient curvature vs intrinsic curvature plus second-fundamental-form
// terms, on random tangent vectors at a subset of nodes.
IdentityReport gauss_equation_check(const InducedGeometry& geom, Rng& rng, int node_samples = 16,
                                    double tolerance = 1e-5);

// sum_i eps_i Rm(phi e_i, xi, xi, phi e_i) = n and
// sum_i eps_i Rm(phi e_i, xi, phi e_i, V_H) = 0 for V_H in ker eta.
IdentityReport trace_curvature_check(const InducedGeometry& geom, Rng& rng, int node_samples = 16,
                                     double tolerance = 1e-6);

} // namespace psk
