#include "psk/immersion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psk {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Grid Immersion::make_grid() const { return make_grid(grid_sizes); }

Grid Immersion::make_grid(const std::vector<int>& sizes) const
{
    std::vector<Axis> axes;
    axes.reserve(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) {
        const size_t ai = static_cast<size_t>(a);
        if (periodic[ai])
            axes.push_back(make_periodic_axis(lo[ai], hi[ai], sizes[ai]));
        else
            axes.push_back(make_gauss_axis(lo[ai], hi[ai], sizes[ai]));
    }
    return Grid(std::move(axes));
}

Eigen::VectorXd Immersion::eval(std::span<const double> u) const
{
    const int d = ambient_dim();
    Eigen::VectorXd F(d);
    for (int i = 0; i < d; ++i) F(i) = components[static_cast<size_t>(i)].eval(u);
    return F;
}

void Immersion::eval_jet2(std::span<const double> u, Eigen::VectorXd& F, Eigen::MatrixXd& dF,
                          std::vector<Eigen::MatrixXd>& d2F) const
{
    const int d = ambient_dim();
    F.resize(d);
    dF.resize(d, n);
    d2F.assign(static_cast<size_t>(d), Eigen::MatrixXd(n, n));
    for (int i = 0; i < d; ++i) {
        const Jet j = components[static_cast<size_t>(i)].eval_jet(u);
        F(i) = j.v;
        for (int a = 0; a < n; ++a) {
            dF(i, a) = j.grad(a);
            for (int b = 0; b < n; ++b) d2F[static_cast<size_t>(i)](a, b) = j.hess(a, b);
        }
    }
}

double legendrian_defect(const Immersion& f, const AmbientStructure& S)
{
    if (f.ambient_dim() != S.dim())
        throw std::invalid_argument("legendrian_defect: immersion/ambient dimension mismatch");
    const Grid grid = f.make_grid();
    double defect = 0.0;
    Eigen::VectorXd F;
    Eigen::MatrixXd dF;
    std::vector<Eigen::MatrixXd> d2F;
    for (int k = 0; k < grid.size(); ++k) {
        const auto u = grid.point(k);
        f.eval_jet2(u, F, dF, d2F);
        const Eigen::VectorXd eta = S.eval_eta(as_span(F));
        for (int a = 0; a < f.n; ++a) defect = std::max(defect, std::abs(eta.dot(dF.col(a))));
    }
    return defect;
}

void InducedMetricSource::eval_jet1(std::span<const double> u, Eigen::MatrixXd& g,
                                    std::vector<Eigen::MatrixXd>& dg) const
{
    const int n = f_->n;
    const int d = f_->ambient_dim();
    Eigen::VectorXd F;
    Eigen::MatrixXd dF;
    std::vector<Eigen::MatrixXd> d2F;
    f_->eval_jet2(u, F, dF, d2F);

    Eigen::MatrixXd G;
    std::vector<Eigen::MatrixXd> dG;
    S_->metric.eval_jet1(as_span(F), G, dG);

    g = dF.transpose() * G * dF;

    dg.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
    for (int c = 0; c < n; ++c) {
        Eigen::MatrixXd& out = dg[static_cast<size_t>(c)];
        // chain rule through the ambient metric
        Eigen::MatrixXd Gc = Eigen::MatrixXd::Zero(d, d);
        for (int k = 0; k < d; ++k) Gc += dG[static_cast<size_t>(k)] * dF(k, c);
        out = dF.transpose() * Gc * dF;
        // second derivatives of the map
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double acc = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        acc += G(i, j) * (d2F[static_cast<size_t>(i)](c, a) * dF(j, b) +
                                          dF(i, a) * d2F[static_cast<size_t>(j)](c, b));
                out(a, b) += acc;
            }
    }
}

InducedGeometry induced_geometry(const Immersion& f, const AmbientStructure& S,
                                 const std::optional<std::vector<int>>& grid_sizes,
                                 bool require_spacelike)
{
    if (f.ambient_dim() != S.dim())
        throw std::invalid_argument("induced_geometry: immersion/ambient dimension mismatch");

    InducedGeometry geom;
    geom.f = f;
    geom.S = S;
    geom.grid = grid_sizes ? f.make_grid(*grid_sizes) : f.make_grid();

    const int n = f.n;
    const int d = f.ambient_dim();
    geom.nodes.resize(static_cast<size_t>(geom.grid.size()));

    double vol = 0.0;
    for (int k = 0; k < geom.grid.size(); ++k) {
        NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
        nd.u = geom.grid.point(k);
        f.eval_jet2(nd.u, nd.F, nd.dF, nd.d2F);

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(nd.dF);
        if (svd.singularValues()(n - 1) <= 1e-8)
            throw std::runtime_error("induced_geometry: rank-deficient Jacobian at a quadrature node");

        S.metric.eval_jet1(as_span(nd.F), nd.g_amb, nd.dg_amb);
        nd.gamma_amb = christoffel_from(nd.g_amb, nd.dg_amb);
        nd.xi = S.eval_xi(as_span(nd.F));
        nd.eta_vals = S.eval_eta(as_span(nd.F));
        nd.phi = S.eval_phi(as_span(nd.F));

        nd.g_ind = nd.dF.transpose() * nd.g_amb * nd.dF;
        if (require_spacelike) {
            Eigen::LLT<Eigen::MatrixXd> llt(nd.g_ind);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error(
                    "induced_geometry: induced metric not positive definite at a node");
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(nd.g_ind);
        if (!lu.isInvertible())
            throw std::runtime_error("induced_geometry: degenerate induced metric at a node");
        nd.g_ind_inv = lu.inverse();
        nd.density = std::sqrt(std::abs(nd.g_ind.determinant()));

        // induced Christoffels from the exact first derivatives of g_ind
        {
            InducedMetricSource src(&f, &S);
            Eigen::MatrixXd gi;
            std::vector<Eigen::MatrixXd> dgi;
            src.eval_jet1(nd.u, gi, dgi);
            nd.gamma_ind = christoffel_from(gi, dgi);
        }

        // Gram-Schmidt tangent frame in a fixed axis order
        nd.frame.resize(d, n);
        nd.frame_coef = Eigen::MatrixXd::Zero(n, n);
        nd.frame_sign.assign(static_cast<size_t>(n), 1.0);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd v = nd.dF.col(i);
            Eigen::VectorXd coef = Eigen::VectorXd::Unit(n, i);
            for (int j = 0; j < i; ++j) {
                const double sj = nd.frame_sign[static_cast<size_t>(j)];
                const double proj = sj * nd.frame.col(j).dot(nd.g_amb * v);
                v -= proj * nd.frame.col(j);
                coef -= proj * nd.frame_coef.col(j);
            }
            const double q = v.dot(nd.g_amb * v);
            if (std::abs(q) < 1e-12)
                throw std::runtime_error("induced_geometry: degenerate tangent frame at a node");
            const double norm = std::sqrt(std::abs(q));
            nd.frame.col(i) = v / norm;
            nd.frame_coef.col(i) = coef / norm;
            nd.frame_sign[static_cast<size_t>(i)] = q > 0 ? 1.0 : -1.0;
        }

        // h(a,b) = d2F_ab + Gamma_amb(dF_a, dF_b) - Gamma_ind^c_ab dF_c
        nd.h.assign(static_cast<size_t>(n * n), Eigen::VectorXd::Zero(d));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                Eigen::VectorXd v(d);
                for (int kk = 0; kk < d; ++kk) {
                    double acc = nd.d2F[static_cast<size_t>(kk)](a, b);
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) acc += nd.gamma_amb.at(kk, i, j) * nd.dF(i, a) * nd.dF(j, b);
                    for (int c = 0; c < n; ++c) acc -= nd.gamma_ind.at(c, a, b) * nd.dF(kk, c);
                    v(kk) = acc;
                }
                nd.h[static_cast<size_t>(a * n + b)] = v;
            }

        nd.H = Eigen::VectorXd::Zero(d);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) nd.H += nd.g_ind_inv(a, b) * nd.h_at(a, b);

        // normal frame {xi, phi e_i}
        nd.normal_frame.resize(d, n + 1);
        nd.normal_sign.assign(static_cast<size_t>(n + 1), 1.0);
        nd.normal_frame.col(0) = nd.xi;
        nd.normal_sign[0] = static_cast<double>(S.eps);
        for (int i = 0; i < n; ++i) {
            nd.normal_frame.col(i + 1) = nd.phi * nd.frame.col(i);
            nd.normal_sign[static_cast<size_t>(i + 1)] = nd.frame_sign[static_cast<size_t>(i)];
        }

        const double h2 = nd.H.dot(nd.g_amb * nd.H);
        geom.max_mean_curvature = std::max(geom.max_mean_curvature, std::sqrt(std::max(0.0, h2)));
        vol += geom.grid.weight(k) * nd.density;
    }
    geom.volume = vol;
    return geom;
}

Eigen::MatrixXd InducedGeometry::field_derivative(const Eigen::MatrixXd& nodal, int axis) const
{
    Eigen::MatrixXd out(nodal.rows(), nodal.cols());
    for (int c = 0; c < nodal.cols(); ++c) out.col(c) = grid.differentiate(nodal.col(c), axis);
    return out;
}

IdentityReport induced_invariants(const InducedGeometry& geom, Rng& rng, const ContactTolerances& tol)
{
    const int n = geom.f.n;
    const int d = geom.f.ambient_dim();

    double r_frame = 0, r_complete = 0, r_hsym = 0, r_hxi = 0, r_hphi = 0, r_shape = 0;

    for (const NodeGeometry& nd : geom.nodes) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double want = (i == j) ? nd.frame_sign[static_cast<size_t>(i)] : 0.0;
                r_frame = std::max(r_frame,
                                   std::abs(nd.frame.col(i).dot(nd.g_amb * nd.frame.col(j)) - want));
            }

        Eigen::MatrixXd full(d, d);
        full.leftCols(n) = nd.frame;
        full.rightCols(n + 1) = nd.normal_frame;
        const double gram = (full.transpose() * nd.g_amb * full).determinant();
        r_complete = std::max(r_complete, std::abs(std::abs(gram) - 1.0));

        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                r_hsym = std::max(r_hsym, (nd.h_at(a, b) - nd.h_at(b, a)).cwiseAbs().maxCoeff());
                r_hxi = std::max(r_hxi, std::abs(nd.h_at(a, b).dot(nd.g_amb * nd.xi)));
                for (int c = 0; c < n; ++c) {
                    const double s_abc = nd.h_at(a, b).dot(nd.g_amb * (nd.phi * nd.dF.col(c)));
                    const double s_acb = nd.h_at(a, c).dot(nd.g_amb * (nd.phi * nd.dF.col(b)));
                    r_hphi = std::max(r_hphi, std::abs(s_abc - s_acb));
                }
            }
    }

    // Shape operator A_V against h for a few normal fields; V is built from
    // xi and phi of coordinate tangents (no frame normalization, so the
    // field inherits the immersion's own analytic smoothness) and its
    // derivative along L is taken on the grid.
    const int num_nodes = geom.grid.size();
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::VectorXd coef = rng.vector(n + 1);
        Eigen::MatrixXd Vfield(num_nodes, d);
        for (int k = 0; k < num_nodes; ++k) {
            const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
            Eigen::VectorXd V = coef(0) * nd.xi;
            for (int a = 0; a < n; ++a) V += coef(a + 1) * (nd.phi * nd.dF.col(a));
            Vfield.row(k) = V.transpose();
        }

        std::vector<Eigen::MatrixXd> dV(static_cast<size_t>(n));
        for (int a = 0; a < n; ++a) dV[static_cast<size_t>(a)] = geom.field_derivative(Vfield, a);

        for (int k = 0; k < num_nodes; ++k) {
            const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
            const Eigen::VectorXd V = Vfield.row(k).transpose();
            for (int a = 0; a < n; ++a) {
                Eigen::VectorXd cov = dV[static_cast<size_t>(a)].row(k).transpose();
                for (int i = 0; i < d; ++i) {
                    double acc = 0.0;
                    for (int p = 0; p < d; ++p)
                        for (int q = 0; q < d; ++q) acc += nd.gamma_amb.at(i, p, q) * nd.dF(p, a) * V(q);
                    cov(i) += acc;
                }
                // A_V (d_a) = -(nabla_a V)^T ; compare g(A_V d_a, d_b) with g(h(a,b), V)
                for (int b = 0; b < n; ++b) {
                    const double lhs = -cov.dot(nd.g_amb * nd.dF.col(b));
                    const double rhs = nd.h_at(a, b).dot(nd.g_amb * V);
                    r_shape = std::max(r_shape, std::abs(lhs - rhs));
                }
            }
        }
    }

    IdentityReport rep;
    rep.add("frame-orthonormality", "g(e_i, e_j) = eps_i delta_ij", r_frame, 1e-9 * tol.scale);
    rep.add("normal-completeness", "|det Gram(e_i, xi, phi e_i)| = 1", r_complete, tol.alg());
    rep.add("h-symmetry", "h(X,Y) = h(Y,X)", r_hsym, tol.alg());
    rep.add("h-reeb-orthogonality", "g(h(X,Y), xi) = 0", r_hxi, 1e-6 * tol.scale);
    rep.add("h-phi-symmetry", "g(h(X,Y), phi Z) fully symmetric", r_hphi, 1e-6 * tol.scale);
    rep.add("shape-operator", "g(A_V X, Y) = g(h(X,Y), V)", r_shape, 1e-6 * tol.scale);
    return rep;
}

IdentityReport gauss_equation_check(const InducedGeometry& geom, Rng& rng, int node_samples,
                                    double tolerance)
{
    const int n = geom.f.n;
    ExprMetricSource amb(&geom.S.metric);
    InducedMetricSource ind(&geom.f, &geom.S);

    const int num_nodes = geom.grid.size();
    const int stride = std::max(1, num_nodes / node_samples);
    double resid = 0.0;

    for (int k = 0; k < num_nodes; k += stride) {
        const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
        const CurvatureTensor Ramb = riemann(amb, as_span(nd.F));
        const CurvatureTensor Rind = riemann(ind, nd.u);

        for (int trial = 0; trial < 4; ++trial) {
            const Eigen::VectorXd a = rng.vector(n), b = rng.vector(n), c = rng.vector(n),
                                  e = rng.vector(n);
            const Eigen::VectorXd A = nd.dF * a, B = nd.dF * b, C = nd.dF * c, D = nd.dF * e;
            const double lhs = curvature_scalar(Ramb, A, B, C, D);

            const auto hvec = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(geom.f.ambient_dim());
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q) v += x(p) * y(q) * nd.h_at(p, q);
                return v;
            };
            const double rhs = curvature_scalar(Rind, a, b, c, e) -
                               hvec(b, c).dot(nd.g_amb * hvec(a, e)) +
                               hvec(a, c).dot(nd.g_amb * hvec(b, e));
            resid = std::max(resid, std::abs(lhs - rhs));
        }
    }

    IdentityReport rep;
    rep.add("gauss-equation",
            "Rm_amb(A,B,C,D) = Rm_ind(A,B,C,D) - g(h(B,C),h(A,D)) + g(h(A,C),h(B,D))", resid,
            tolerance);
    return rep;
}

IdentityReport trace_curvature_check(const InducedGeometry& geom, Rng& rng, int node_samples,
                                     double tolerance)
{
    const int n = geom.f.n;
    ExprMetricSource amb(&geom.S.metric);

    const int num_nodes = geom.grid.size();
    const int stride = std::max(1, num_nodes / node_samples);
    double r_trace = 0.0, r_mixed = 0.0;

    for (int k = 0; k < num_nodes; k += stride) {
        const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
        const CurvatureTensor Ramb = riemann(amb, as_span(nd.F));

        double trace = 0.0;
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd pe = nd.phi * nd.frame.col(i);
            trace += nd.frame_sign[static_cast<size_t>(i)] * curvature_scalar(Ramb, pe, nd.xi, nd.xi, pe);
        }
        r_trace = std::max(r_trace, std::abs(trace - n));

        Eigen::VectorXd W = rng.vector(geom.f.ambient_dim());
        const Eigen::VectorXd VH = W - nd.eta_vals.dot(W) * nd.xi;
        double mixed = 0.0;
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd pe = nd.phi * nd.frame.col(i);
            mixed += nd.frame_sign[static_cast<size_t>(i)] * curvature_scalar(Ramb, pe, nd.xi, pe, VH);
        }
        r_mixed = std::max(r_mixed, std::abs(mixed));
    }

    IdentityReport rep;
    rep.add("reeb-trace", "sum_i eps_i Rm(phi e_i, xi, xi, phi e_i) = n", r_trace, tolerance);
    rep.add("reeb-trace-mixed", "sum_i eps_i Rm(phi e_i, xi, phi e_i, V_H) = 0", r_mixed, tolerance);
    return rep;
}

// -- catalog ---------------------------------------------------------------

Immersion immersion_catalog(const std::string& name)
{
    const ScalarExpr u = expr_var(0);
    const ScalarExpr zero = expr_constant(0.0);

    Immersion f;
    f.name = name;

    if (name == "great-circle" || name == "reeb-orbit") {
        f.n = 1;
        f.lo = {0.0};
        f.hi = {kTwoPi};
        f.periodic = {true};
        f.grid_sizes = {64};
        f.ambient_catalog = "round-sphere";
        f.ambient_n = 1;
        if (name == "great-circle")
            f.components = {expr_cos(u), zero, expr_sin(u)};
        else
            f.components = {expr_cos(u), expr_sin(u), zero};
        return f;
    }

    if (name == "wavy-curve") {
        // Legendrian but not L-minimal. On torus coordinates
        // (cos r e^{ia}, sin r e^{ib}) the horizontality condition is
        // cos^2 r a' + sin^2 r b' = 0; with b = -t and a' = 2 + 0.3 sin t
        // it forces tan^2 r = a', so r genuinely varies along the curve and
        // div(phi H) does not vanish.
        f.n = 1;
        f.lo = {0.0};
        f.hi = {kTwoPi};
        f.periodic = {true};
        f.grid_sizes = {96};
        f.ambient_catalog = "round-sphere";
        f.ambient_n = 1;
        const ScalarExpr one = expr_constant(1.0);
        const ScalarExpr ap = expr_constant(2.0) + expr_constant(0.3) * expr_sin(u); // a'
        const ScalarExpr a = expr_constant(2.0) * u - expr_constant(0.3) * expr_cos(u);
        const ScalarExpr b = -u;
        const ScalarExpr cr = one / expr_sqrt(one + ap);            // cos r
        const ScalarExpr sr = expr_sqrt(ap / (one + ap));           // sin r
        const ScalarExpr den = one - sr * expr_sin(b);              // 1 - y2
        f.components = {cr * expr_cos(a) / den, cr * expr_sin(a) / den, sr * expr_cos(b) / den};
        return f;
    }

    if (name == "clifford-torus") {
        // Legendrian lift of the flat torus: embedded phases (u, v, -u-v)
        // with radius 3^{-1/2} each, so the pullback of eta is
        // (du + dv + d(-u-v))/3 = 0. Chart components divide by 1 - y3.
        f.n = 2;
        f.lo = {0.0, 0.0};
        f.hi = {kTwoPi, kTwoPi};
        f.periodic = {true, true};
        f.grid_sizes = {48, 48};
        f.ambient_catalog = "round-sphere";
        f.ambient_n = 2;
        const ScalarExpr v = expr_var(1);
        const ScalarExpr c3 = expr_constant(1.0 / std::sqrt(3.0));
        const ScalarExpr w = u + v;
        const ScalarExpr den = expr_constant(1.0) + c3 * expr_sin(w);
        f.components = {c3 * expr_cos(u) / den, c3 * expr_sin(u) / den, c3 * expr_cos(v) / den,
                        c3 * expr_sin(v) / den, c3 * expr_cos(w) / den};
        return f;
    }

    if (name == "real-s2") {
        // Fixed-point set of conjugation: totally geodesic round S^2.
        f.n = 2;
        f.lo = {0.0, 0.0};
        f.hi = {std::numbers::pi, kTwoPi};
        f.periodic = {false, true};
        f.grid_sizes = {24, 32};
        f.ambient_catalog = "round-sphere";
        f.ambient_n = 2;
        const ScalarExpr v = expr_var(1);
        f.components = {expr_sin(u) * expr_cos(v), zero, expr_sin(u) * expr_sin(v), zero, expr_cos(u)};
        return f;
    }

    throw std::invalid_argument("immersion_catalog: unknown immersion '" + name + "'");
}

} // namespace psk
