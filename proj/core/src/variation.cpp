#include "psk/variation.hpp"

#include <cmath>

namespace psk {

PotentialOnGrid potential_on_grid(const DeformationPotential& pot, const InducedGeometry& geom)
{
    const int n = geom.f.n;
    const int N = geom.grid.size();
    PotentialOnGrid out;
    out.values.resize(N);
    out.dvalues.resize(N, n);
    out.d2values.assign(static_cast<size_t>(N), Eigen::MatrixXd(n, n));
    for (int k = 0; k < N; ++k) {
        const Jet j = pot.f.eval_jet(geom.nodes[static_cast<size_t>(k)].u);
        out.values(k) = j.v;
        for (int a = 0; a < n; ++a) {
            out.dvalues(k, a) = j.grad(a);
            for (int b = 0; b < n; ++b) out.d2values[static_cast<size_t>(k)](a, b) = j.hess(a, b);
        }
    }
    return out;
}

VariationContext::VariationContext(const InducedGeometry& g, std::optional<EtaEinsteinFit> fit)
    : geom(&g), eta_fit(std::move(fit))
{
    ExprMetricSource amb(&g.S.metric);
    ambient_curv.reserve(g.nodes.size());
    for (const auto& nd : g.nodes) ambient_curv.push_back(riemann(amb, as_span(nd.F)));
}

VariationFieldResult variation_field(const DeformationPotential& pot, const InducedGeometry& geom)
{
    const int n = geom.f.n;
    const int d = geom.f.ambient_dim();
    const int N = geom.grid.size();
    const PotentialOnGrid pg = potential_on_grid(pot, geom);

    VariationFieldResult out;
    out.field.resize(N, d);
    for (int k = 0; k < N; ++k) {
        const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
        const Eigen::VectorXd grad_coef = nd.g_ind_inv * pg.dvalues.row(k).transpose();
        const Eigen::VectorXd grad = nd.dF * grad_coef;
        const Eigen::VectorXd V = pg.values(k) * nd.xi + 0.5 * (nd.phi * grad);
        out.field.row(k) = V.transpose();
        for (int a = 0; a < n; ++a)
            out.normality_residual =
                std::max(out.normality_residual, std::abs(V.dot(nd.g_amb * nd.dF.col(a))));
    }
    return out;
}

namespace {

// dF/dt at the given nodal positions: the variation field rebuilt on the
// current immersion, with tangents from the grid differentiation matrices.
Eigen::MatrixXd flow_velocity(const InducedGeometry& geom, const PotentialOnGrid& pg,
                              const Eigen::MatrixXd& X)
{
    const int n = geom.f.n;
    const int d = geom.f.ambient_dim();
    const int N = geom.grid.size();

    std::vector<Eigen::MatrixXd> dX(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) dX[static_cast<size_t>(a)] = geom.field_derivative(X, a);

    Eigen::MatrixXd V(N, d);
    Eigen::MatrixXd tangents(d, n), G;
    for (int k = 0; k < N; ++k) {
        const Eigen::VectorXd x = X.row(k).transpose();
        for (int a = 0; a < n; ++a) tangents.col(a) = dX[static_cast<size_t>(a)].row(k).transpose();
        G = geom.S.metric.eval(as_span(x));
        const Eigen::MatrixXd gind = tangents.transpose() * G * tangents;
        const Eigen::VectorXd grad_coef = gind.fullPivLu().solve(pg.dvalues.row(k).transpose());
        const Eigen::VectorXd grad = tangents * grad_coef;
        const Eigen::MatrixXd phi = geom.S.eval_phi(as_span(x));
        const Eigen::VectorXd xi = geom.S.eval_xi(as_span(x));
        V.row(k) = (pg.values(k) * xi + 0.5 * (phi * grad)).transpose();
    }
    return V;
}

double defect_of_positions(const InducedGeometry& geom, const Eigen::MatrixXd& X)
{
    const int n = geom.f.n;
    std::vector<Eigen::MatrixXd> dX(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) dX[static_cast<size_t>(a)] = geom.field_derivative(X, a);
    double defect = 0.0;
    for (int k = 0; k < geom.grid.size(); ++k) {
        const Eigen::VectorXd xrow = X.row(k).transpose();
        const Eigen::VectorXd eta = geom.S.eval_eta(as_span(xrow));
        for (int a = 0; a < n; ++a)
            defect = std::max(defect, std::abs(eta.dot(dX[static_cast<size_t>(a)].row(k).transpose())));
    }
    return defect;
}

} // namespace

FlowResult flow(const InducedGeometry& geom, const DeformationPotential& pot, double t,
                const FlowOptions& opts)
{
    if (!geom.f.closed()) throw std::invalid_argument("flow: L must be closed (all axes periodic)");
    if (std::abs(t) > opts.t_max)
        throw std::invalid_argument("flow: |t| exceeds the configured t_max");

    const int N = geom.grid.size();
    const int d = geom.f.ambient_dim();
    const PotentialOnGrid pg = potential_on_grid(pot, geom);

    Eigen::MatrixXd X(N, d);
    for (int k = 0; k < N; ++k) X.row(k) = geom.nodes[static_cast<size_t>(k)].F.transpose();

    const int steps = std::max(opts.min_steps, static_cast<int>(std::ceil(std::abs(t) / opts.max_step)));
    const double dt = t / steps;
    for (int s = 0; s < steps; ++s) {
        const Eigen::MatrixXd k1 = flow_velocity(geom, pg, X);
        const Eigen::MatrixXd k2 = flow_velocity(geom, pg, X + 0.5 * dt * k1);
        const Eigen::MatrixXd k3 = flow_velocity(geom, pg, X + 0.5 * dt * k2);
        const Eigen::MatrixXd k4 = flow_velocity(geom, pg, X + dt * k3);
        X += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    FlowResult out;
    out.positions = std::move(X);
    out.legendrian_defect = defect_of_positions(geom, out.positions);
    return out;
}

double volume_of_positions(const InducedGeometry& geom, const Eigen::MatrixXd& positions)
{
    const int n = geom.f.n;
    std::vector<Eigen::MatrixXd> dX(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) dX[static_cast<size_t>(a)] = geom.field_derivative(positions, a);

    double vol = 0.0;
    Eigen::MatrixXd tangents(geom.f.ambient_dim(), n);
    for (int k = 0; k < geom.grid.size(); ++k) {
        for (int a = 0; a < n; ++a) tangents.col(a) = dX[static_cast<size_t>(a)].row(k).transpose();
        const Eigen::VectorXd xrow = positions.row(k).transpose();
        const Eigen::MatrixXd G = geom.S.metric.eval(as_span(xrow));
        const Eigen::MatrixXd gind = tangents.transpose() * G * tangents;
        const double det = gind.determinant();
        if (det <= 0.0)
            throw std::runtime_error("volume_of_positions: induced metric lost positivity");
        vol += geom.grid.weight(k) * std::sqrt(det);
    }
    return vol;
}

double volume(const InducedGeometry& geom) { return geom.volume; }

double l_minimality_defect(const InducedGeometry& geom)
{
    if (!geom.f.closed())
        throw std::invalid_argument("l_minimality_defect: L must be closed (all axes periodic)");
    const int n = geom.f.n;
    const int N = geom.grid.size();

    // chart components of the tangent field phi H, premultiplied by density
    Eigen::MatrixXd flux(N, n);
    for (int k = 0; k < N; ++k) {
        const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
        const Eigen::VectorXd phiH = nd.phi * nd.H;
        const Eigen::VectorXd comp = nd.g_ind_inv * (nd.dF.transpose() * (nd.g_amb * phiH));
        flux.row(k) = (nd.density * comp).transpose();
    }

    Eigen::VectorXd div = Eigen::VectorXd::Zero(N);
    for (int a = 0; a < n; ++a) div += geom.grid.differentiate(flux.col(a), a);

    double norm2 = 0.0;
    for (int k = 0; k < N; ++k) {
        const double rho = geom.nodes[static_cast<size_t>(k)].density;
        const double local = div(k) / rho;
        norm2 += geom.grid.weight(k) * rho * local * local;
    }
    return std::sqrt(norm2);
}

namespace {

struct FdSeries {
    double value = 0.0; // Richardson-extrapolated
    double order = 0.0; // measured order of the raw stencil
};

// order from three second-order estimates at h, h/2, h/4
FdSeries richardson(double Dh, double Dh2, double Dh4, double noise_floor)
{
    FdSeries out;
    const double d1 = Dh - Dh2;
    const double d2 = Dh2 - Dh4;
    if (std::abs(d1) < noise_floor || std::abs(d2) < noise_floor) {
        out.order = 99.0; // differences at rounding level: stencil is exact here
        out.value = Dh4;
        return out;
    }
    out.order = std::log2(std::abs(d1) / std::abs(d2));
    const double L1 = (4.0 * Dh2 - Dh) / 3.0;
    const double L1p = (4.0 * Dh4 - Dh2) / 3.0;
    out.value = (16.0 * L1p - L1) / 15.0;
    return out;
}

struct VolumeStencil {
    double v0 = 0.0;
    // vol at +/- h, h/2, h/4
    double vp[3] = {0, 0, 0};
    double vm[3] = {0, 0, 0};
    double max_defect = 0.0;
};

VolumeStencil volume_stencil(const InducedGeometry& geom, const DeformationPotential& pot,
                             double h, const FlowOptions& fopts)
{
    VolumeStencil st;
    // t = 0 through the same positions pipeline, so discretization bias
    // cancels in the differences
    Eigen::MatrixXd X0(geom.grid.size(), geom.f.ambient_dim());
    for (int k = 0; k < geom.grid.size(); ++k) X0.row(k) = geom.nodes[static_cast<size_t>(k)].F.transpose();
    st.v0 = volume_of_positions(geom, X0);

    for (int lev = 0; lev < 3; ++lev) {
        const double t = h / (1 << lev);
        const FlowResult fp = flow(geom, pot, t, fopts);
        const FlowResult fm = flow(geom, pot, -t, fopts);
        st.vp[lev] = volume_of_positions(geom, fp.positions);
        st.vm[lev] = volume_of_positions(geom, fm.positions);
        st.max_defect = std::max({st.max_defect, fp.legendrian_defect, fm.legendrian_defect});
    }
    return st;
}

} // namespace

FirstVariation first_variation(const VariationContext& ctx, const DeformationPotential& pot,
                               const SecondVariationOptions& opts)
{
    const InducedGeometry& geom = *ctx.geom;
    const VariationFieldResult vf = variation_field(pot, geom);

    FirstVariation out;
    Eigen::VectorXd integrand(geom.grid.size());
    for (int k = 0; k < geom.grid.size(); ++k) {
        const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
        integrand(k) = -vf.field.row(k).dot((nd.g_amb * nd.H)) * nd.density;
    }
    out.closed_form = geom.grid.integrate(integrand);

    const VolumeStencil st = volume_stencil(geom, pot, opts.h_t, opts.flow);
    double D[3];
    for (int lev = 0; lev < 3; ++lev) {
        const double t = opts.h_t / (1 << lev);
        D[lev] = (st.vp[lev] - st.vm[lev]) / (2.0 * t);
    }
    const FdSeries fd = richardson(D[0], D[1], D[2], 1e-9 * (1.0 + st.v0));
    out.fd_oracle = fd.value;
    out.order = fd.order;
    out.residual = std::abs(out.closed_form - out.fd_oracle) / (1.0 + std::abs(out.fd_oracle));
    return out;
}

VariationReport second_variation(const VariationContext& ctx, const DeformationPotential& pot,
                                 const SecondVariationOptions& opts)
{
    const InducedGeometry& geom = *ctx.geom;
    const int n = geom.f.n;
    const int d = geom.f.ambient_dim();
    const int N = geom.grid.size();
    const double eps = static_cast<double>(geom.S.eps);

    if (!geom.f.closed())
        throw PreconditionError("closed-domain", 1.0, "second_variation: L must be closed");
    const double lmin = l_minimality_defect(geom);
    if (lmin > opts.lmin_tol)
        throw PreconditionError("l-minimality", lmin,
                                "second_variation: input is not L-minimal (div(phi H) defect " +
                                    std::to_string(lmin) + ")");

    VariationReport rep;
    rep.lmin_defect = lmin;
    rep.vol0 = geom.volume;

    const PotentialOnGrid pg = potential_on_grid(pot, geom);
    const VariationFieldResult vf = variation_field(pot, geom);

    // grid derivatives of V for the trace form
    std::vector<Eigen::MatrixXd> dV(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) dV[static_cast<size_t>(a)] = geom.field_derivative(vf.field, a);

    Eigen::VectorXd integrand_a(N), integrand_b(N), integrand_c(N);
    for (int k = 0; k < N; ++k) {
        const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
        const Eigen::VectorXd V = vf.field.row(k).transpose();

        const Eigen::VectorXd grad_coef = nd.g_ind_inv * pg.dvalues.row(k).transpose();
        const Eigen::VectorXd grad = nd.dF * grad_coef; // ambient push-forward of grad f
        const Eigen::VectorXd phigrad = nd.phi * grad;
        const double grad2 = grad_coef.dot(pg.dvalues.row(k).transpose());

        // Hessian and Laplacian of f in the induced metric
        Eigen::MatrixXd hess = pg.d2values[static_cast<size_t>(k)];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) hess(a, b) -= nd.gamma_ind.at(c, a, b) * pg.dvalues(k, c);
        const double lap = -(nd.g_ind_inv * hess).trace();

        Eigen::VectorXd h_grad = Eigen::VectorXd::Zero(d);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) h_grad += grad_coef(a) * grad_coef(b) * nd.h_at(a, b);

        const CurvatureTensor& Ramb = ctx.ambient_curv[static_cast<size_t>(k)];
        const double ric_phigrad = phigrad.dot(Ramb.ricci * phigrad);
        const double gH_phigrad = nd.H.dot(nd.g_amb * phigrad);
        const double gH_hgrad = nd.H.dot(nd.g_amb * h_grad);

        // (a) closed form
        integrand_a(k) = 0.25 *
                         (lap * lap - 2.0 * eps * grad2 - ric_phigrad - 2.0 * gH_hgrad +
                          gH_phigrad * gH_phigrad) *
                         nd.density;

        // (c) eta-Einstein short form
        if (ctx.eta_fit && ctx.eta_fit->eta_einstein) {
            const double A = ctx.eta_fit->A;
            integrand_c(k) = 0.25 * (lap * lap - (A + 2.0 * eps) * grad2) * nd.density;
        }

        // (b) frame-trace form
        double s1 = 0.0, s3 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            // full ambient covariant derivative of V along e_i
            Eigen::VectorXd cov = Eigen::VectorXd::Zero(d);
            for (int a = 0; a < n; ++a) {
                const double c = nd.frame_coef(a, i);
                if (c == 0.0) continue;
                cov += c * dV[static_cast<size_t>(a)].row(k).transpose();
                for (int ii = 0; ii < d; ++ii) {
                    double acc = 0.0;
                    for (int p = 0; p < d; ++p)
                        for (int q = 0; q < d; ++q) acc += nd.gamma_amb.at(ii, p, q) * nd.dF(p, a) * V(q);
                    cov(ii) += c * acc;
                }
            }
            // tangential and normal split
            Eigen::VectorXd tang = Eigen::VectorXd::Zero(d);
            double norm_t2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double sj = nd.frame_sign[static_cast<size_t>(j)];
                const double cj = cov.dot(nd.g_amb * nd.frame.col(j));
                tang += sj * cj * nd.frame.col(j);
                norm_t2 += sj * cj * cj;
            }
            const Eigen::VectorXd perp = cov - tang;
            const double si = nd.frame_sign[static_cast<size_t>(i)];
            s1 += si * perp.dot(nd.g_amb * perp);
            s3 -= si * norm_t2; // -eps_i |A_V e_i|^2
            s2 += si * curvature_scalar(Ramb, nd.frame.col(i), V, nd.frame.col(i), V);
        }
        const double s4 = -0.25 * gH_hgrad;
        const double gHV = nd.H.dot(nd.g_amb * V);
        integrand_b(k) = (s1 + s2 + s3 + s4 + gHV * gHV) * nd.density;
    }

    rep.second_closed = geom.grid.integrate(integrand_a);
    rep.second_trace = geom.grid.integrate(integrand_b);
    if (ctx.eta_fit && ctx.eta_fit->eta_einstein)
        rep.second_short = geom.grid.integrate(integrand_c);

    // (d) the finite-difference oracle
    const VolumeStencil st = volume_stencil(geom, pot, opts.h_t, opts.flow);
    rep.flow_defect_max = st.max_defect;
    double D[3];
    for (int lev = 0; lev < 3; ++lev) {
        const double t = opts.h_t / (1 << lev);
        D[lev] = (st.vp[lev] - 2.0 * st.v0 + st.vm[lev]) / (t * t);
    }
    const FdSeries fd = richardson(D[0], D[1], D[2], 1e-8 * (1.0 + st.v0));
    rep.second_fd = fd.value;
    rep.fd_order = fd.order;

    rep.resid_closed_vs_fd =
        std::abs(rep.second_closed - rep.second_fd) / (1.0 + std::abs(rep.second_fd));
    rep.resid_closed_vs_trace =
        std::abs(rep.second_closed - rep.second_trace) / (1.0 + std::abs(rep.second_closed));
    if (rep.second_short)
        rep.resid_closed_vs_short =
            std::abs(rep.second_closed - *rep.second_short) / (1.0 + std::abs(rep.second_closed));
    rep.stability_sign = rep.second_closed > 1e-10 ? 1 : (rep.second_closed < -1e-10 ? -1 : 0);

    // first variation reuses the same stencil
    {
        Eigen::VectorXd integrand(N);
        for (int k = 0; k < N; ++k) {
            const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
            integrand(k) = -vf.field.row(k).dot(nd.g_amb * nd.H) * nd.density;
        }
        rep.first.closed_form = geom.grid.integrate(integrand);
        double D1[3];
        for (int lev = 0; lev < 3; ++lev) {
            const double t = opts.h_t / (1 << lev);
            D1[lev] = (st.vp[lev] - st.vm[lev]) / (2.0 * t);
        }
        const FdSeries fd1 = richardson(D1[0], D1[1], D1[2], 1e-9 * (1.0 + st.v0));
        rep.first.fd_oracle = fd1.value;
        rep.first.order = fd1.order;
        rep.first.residual =
            std::abs(rep.first.closed_form - rep.first.fd_oracle) / (1.0 + std::abs(rep.first.fd_oracle));
    }
    return rep;
}

double bochner_check(const InducedGeometry& geom, const DeformationPotential& pot)
{
    if (!geom.f.closed()) throw std::invalid_argument("bochner_check: L must be closed");
    const int n = geom.f.n;
    const int N = geom.grid.size();
    const PotentialOnGrid pg = potential_on_grid(pot, geom);
    InducedMetricSource ind(&geom.f, &geom.S);

    Eigen::VectorXd lhs(N), rhs(N);
    for (int k = 0; k < N; ++k) {
        const NodeGeometry& nd = geom.nodes[static_cast<size_t>(k)];
        Eigen::MatrixXd hess = pg.d2values[static_cast<size_t>(k)];
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) hess(a, b) -= nd.gamma_ind.at(c, a, b) * pg.dvalues(k, c);
        const double lap = -(nd.g_ind_inv * hess).trace();

        const Eigen::VectorXd grad_coef = nd.g_ind_inv * pg.dvalues.row(k).transpose();
        double hess2 = 0.0;
        const Eigen::MatrixXd hu = nd.g_ind_inv * hess * nd.g_ind_inv;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) hess2 += hu(a, b) * hess(a, b);

        double ric_grad = 0.0;
        if (n > 1) {
            const CurvatureTensor Rind = riemann(ind, nd.u);
            ric_grad = grad_coef.dot(Rind.ricci * grad_coef);
        }
        lhs(k) = lap * lap * nd.density;
        rhs(k) = (ric_grad + hess2) * nd.density;
    }
    return std::abs(geom.grid.integrate(lhs) - geom.grid.integrate(rhs));
}

} // namespace psk
