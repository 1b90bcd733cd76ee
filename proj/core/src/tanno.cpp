#include "psk/tanno.hpp"

#include <cmath>

#include "psk/spectrum.hpp"
#include "psk/variation.hpp"

namespace psk {

TannoDeformation deform(const AmbientStructure& S, double alpha)
{
    if (alpha <= 0.0) throw std::invalid_argument("deform: alpha must be positive");
    if (S.eps != 1) throw std::invalid_argument("deform: source must have eps = +1");

    {
        // spot-check the source axioms at a few fixed points
        Rng rng(20240u);
        const auto pts = sample_points(S, 3, rng);
        const IdentityReport rep = verify_sasakian(S, pts);
        if (!rep.all_pass())
            throw std::invalid_argument("deform: source fails the Sasakian checks (worst residual " +
                                        std::to_string(rep.max_residual()) + ")");
    }

    TannoDeformation T;
    T.alpha = alpha;
    T.beta = alpha + alpha * alpha;
    T.source = S;

    const int d = S.dim();
    AmbientStructure& out = T.target;
    out.name = "tanno(" + S.name + "," + std::to_string(alpha) + ")";
    out.n = S.n;
    out.eps = -1;
    out.sample_lo = S.sample_lo;
    out.sample_hi = S.sample_hi;

    std::vector<int> sig(static_cast<size_t>(d), 1);
    sig.back() = -1;
    out.metric = MetricField(d, sig);
    const ScalarExpr ca = expr_constant(alpha);
    const ScalarExpr cb = expr_constant(T.beta);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            out.metric.set(i, j, ca * S.metric.entry(i, j) -
                                     cb * S.eta[static_cast<size_t>(i)] * S.eta[static_cast<size_t>(j)]);

    out.eta.resize(static_cast<size_t>(d));
    out.xi.resize(static_cast<size_t>(d));
    const ScalarExpr inva = expr_constant(1.0 / alpha);
    for (int i = 0; i < d; ++i) {
        out.eta[static_cast<size_t>(i)] = ca * S.eta[static_cast<size_t>(i)];
        out.xi[static_cast<size_t>(i)] = inva * S.xi[static_cast<size_t>(i)];
    }
    out.phi = S.phi;

    if (S.eta_einstein_ab) {
        const double Aa = einstein_constant_map(S.eta_einstein_ab->first, alpha);
        out.eta_einstein_ab = std::make_pair(Aa, 2.0 * S.n + Aa);
    }
    return T;
}

IdentityReport tanno_invariants(const TannoDeformation& T,
                                const std::vector<std::vector<double>>& points,
                                const ContactTolerances& tol)
{
    IdentityReport rep;
    rep.add("beta-relation", "beta = alpha + alpha^2",
            std::abs(T.beta - T.alpha - T.alpha * T.alpha), 0.0);

    double r_unit = 0.0, r_scaled = 0.0;
    for (const auto& p : points) {
        const Eigen::MatrixXd gt = T.target.metric.eval(p);
        const Eigen::VectorXd xt = T.target.eval_xi(p);
        const Eigen::VectorXd xs = T.source.eval_xi(p);
        r_unit = std::max(r_unit, std::abs(xt.dot(gt * xt) + 1.0));
        r_scaled = std::max(r_scaled, std::abs(xs.dot(gt * xs) + T.alpha * T.alpha));
    }
    rep.add("reeb-tilde-norm", "g~(xi~, xi~) = -1", r_unit, 1e-9 * tol.scale);
    rep.add("reeb-scaling", "g~(xi, xi) = -alpha^2", r_scaled, 1e-9 * tol.scale);
    rep.merge(structure_axioms(T.target, points, tol));
    return rep;
}

IdentityReport connection_difference_check(const TannoDeformation& T,
                                           const std::vector<std::vector<double>>& points,
                                           const ContactTolerances& tol)
{
    const int d = T.source.dim();
    const double ba = T.beta / T.alpha;
    ExprMetricSource src(&T.source.metric);
    ExprMetricSource tgt(&T.target.metric);

    double r_all = 0.0, r_reeb = 0.0;
    for (const auto& p : points) {
        const ConnectionCoefficients g0 = christoffel(src, p);
        const ConnectionCoefficients g1 = christoffel(tgt, p);
        const Eigen::VectorXd eta = T.source.eval_eta(p);
        const Eigen::MatrixXd phi = T.source.eval_phi(p);

        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const double corr = ba * (eta(i) * phi(k, j) + eta(j) * phi(k, i));
                    r_all = std::max(r_all, std::abs(g1.at(k, i, j) - g0.at(k, i, j) + corr));
                }

        // nabla~_xi xi = 0 (phi xi = 0 kills the correction term)
        Eigen::VectorXd xi, acc;
        Eigen::MatrixXd dxi;
        T.source.eval_xi_jet(p, xi, dxi);
        acc = Eigen::VectorXd::Zero(d);
        for (int k = 0; k < d; ++k) {
            double v = 0.0;
            for (int i = 0; i < d; ++i) {
                v += xi(i) * dxi(i, k);
                for (int j = 0; j < d; ++j) v += g1.at(k, i, j) * xi(i) * xi(j);
            }
            acc(k) = v;
        }
        r_reeb = std::max(r_reeb, acc.cwiseAbs().maxCoeff());
    }

    IdentityReport rep;
    rep.add("connection-difference",
            "nabla~_X Y = nabla_X Y - (beta/alpha)(eta(X) phi Y + eta(Y) phi X)", r_all,
            1e-5 * tol.scale);
    rep.add("connection-difference-reeb", "nabla~_xi xi = 0", r_reeb, 1e-7 * tol.scale);
    return rep;
}

IdentityReport curvature_relation_check(const TannoDeformation& T,
                                        const std::vector<std::vector<double>>& points, Rng& rng,
                                        double tolerance)
{
    const int d = T.source.dim();
    const double ba = T.beta / T.alpha;
    ExprMetricSource src(&T.source.metric);
    ExprMetricSource tgt(&T.target.metric);

    double resid = 0.0;
    for (const auto& p : points) {
        const CurvatureTensor R0 = riemann(src, p);
        const CurvatureTensor R1 = riemann(tgt, p);
        const Eigen::MatrixXd g0 = T.source.metric.eval(p);
        const Eigen::MatrixXd g0inv = g0.fullPivLu().inverse();
        const Eigen::MatrixXd g1inv = T.target.metric.eval(p).fullPivLu().inverse();
        const Eigen::VectorXd eta = T.source.eval_eta(p);
        const Eigen::VectorXd xi = T.source.eval_xi(p);
        const Eigen::MatrixXd phi = T.source.eval_phi(p);

        for (int trial = 0; trial < 4; ++trial) {
            // random vectors projected into the contact distribution
            const auto dvec = [&](Eigen::VectorXd w) { return (w - eta.dot(w) * xi).eval(); };
            const Eigen::VectorXd X = dvec(rng.vector(d));
            const Eigen::VectorXd Y = dvec(rng.vector(d));
            const Eigen::VectorXd Z = dvec(rng.vector(d));

            const Eigen::VectorXd lhs = curvature_apply(R1, g1inv, X, Y, Z);
            const Eigen::VectorXd base = curvature_apply(R0, g0inv, X, Y, Z);
            const Eigen::VectorXd pX = phi * X, pY = phi * Y, pZ = phi * Z;
            const double gpYZ = pY.dot(g0 * Z);
            const double gpXZ = pX.dot(g0 * Z);
            const double gpXY = pX.dot(g0 * Y);
            const Eigen::VectorXd rhs = base + ba * (gpYZ * pX - gpXZ * pY - 2.0 * gpXY * pZ);
            resid = std::max(resid, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }

    IdentityReport rep;
    rep.add("curvature-relation",
            "R~(X,Y)Z = R(X,Y)Z + (beta/alpha)(g(phi Y,Z)phi X - g(phi X,Z)phi Y - 2g(phi X,Y)phi Z) "
            "on the contact distribution",
            resid, tolerance);
    return rep;
}

double einstein_constant_map(double A, double alpha)
{
    if (alpha <= 0.0) throw std::invalid_argument("einstein_constant_map: alpha must be positive");
    return (A + 2.0) / alpha + 2.0;
}

MinimalityPreservation minimality_preservation_check(const Immersion& f, const TannoDeformation& T,
                                                     double minimal_tol)
{
    MinimalityPreservation out;
    const InducedGeometry gs = induced_geometry(f, T.source);
    // the target restriction is alpha g|_L only on Legendrians; for the
    // negative (non-horizontal) cases it may be indefinite
    const InducedGeometry gt = induced_geometry(f, T.target, std::nullopt, false);

    out.source_mean_curvature = gs.max_mean_curvature;
    out.target_mean_curvature = gt.max_mean_curvature;
    if (f.closed()) {
        out.source_lmin_defect = l_minimality_defect(gs);
        out.target_lmin_defect = l_minimality_defect(gt);
    }

    for (size_t k = 0; k < gs.nodes.size(); ++k) {
        const NodeGeometry& a = gs.nodes[k];
        const NodeGeometry& b = gt.nodes[k];
        out.homothety_residual = std::max(
            out.homothety_residual, (b.g_ind - T.alpha * a.g_ind).cwiseAbs().maxCoeff());

        const int n = f.n;
        const int d = f.ambient_dim();
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                for (int kk = 0; kk < d; ++kk) {
                    double diff = 0.0;
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j)
                            diff += (b.gamma_amb.at(kk, i, j) - a.gamma_amb.at(kk, i, j)) * a.dF(i, p) *
                                    a.dF(j, q);
                    out.tangential_connection_residual =
                        std::max(out.tangential_connection_residual, std::abs(diff));
                }
    }

    const bool src_min = out.source_mean_curvature < minimal_tol;
    const bool tgt_min = out.target_mean_curvature < minimal_tol * std::max(1.0, T.alpha);
    out.same_verdict = (src_min == tgt_min);
    return out;
}

StabilityEquivalence stability_equivalence_check(const Immersion& f, const TannoDeformation& T,
                                                 const SpectrumOptions& opts)
{
    StabilityEquivalence out;

    Rng rng(7u);
    const auto pts_src = sample_points(T.source, 20, rng);
    const auto pts_tgt = sample_points(T.target, 20, rng);
    const EtaEinsteinFit fit_src = eta_einstein_constants(T.source, pts_src);
    const EtaEinsteinFit fit_tgt = eta_einstein_constants(T.target, pts_tgt);
    out.A_source = fit_src.A;
    out.A_target = fit_tgt.A;

    const InducedGeometry gs = induced_geometry(f, T.source);
    const InducedGeometry gt = induced_geometry(f, T.target);
    const SpectrumResult ss = laplace_spectrum(gs, opts);
    const SpectrumResult st = laplace_spectrum(gt, opts);
    out.lambda1_source = ss.lambda1();
    out.lambda1_target = st.lambda1();
    out.eigenvalue_scaling_residual =
        std::abs(out.lambda1_target - out.lambda1_source / T.alpha) / (out.lambda1_source / T.alpha);

    out.source = stability_verdict(out.lambda1_source, out.A_source, +1);
    out.target = stability_verdict(out.lambda1_target, out.A_target, -1);
    out.agree = (out.source.stable == out.target.stable);
    return out;
}

} // namespace psk
