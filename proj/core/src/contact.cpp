#include "psk/contact.hpp"

#include <cmath>
#include <stdexcept>

#include "psk/tanno.hpp"

namespace psk {

Eigen::VectorXd AmbientStructure::eval_xi(std::span<const double> p) const
{
    const int d = dim();
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = xi[static_cast<size_t>(i)].eval(p);
    return v;
}

Eigen::VectorXd AmbientStructure::eval_eta(std::span<const double> p) const
{
    const int d = dim();
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = eta[static_cast<size_t>(i)].eval(p);
    return v;
}

Eigen::MatrixXd AmbientStructure::eval_phi(std::span<const double> p) const
{
    const int d = dim();
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = phi_entry(i, j).eval(p);
    return m;
}

void AmbientStructure::eval_xi_jet(std::span<const double> p, Eigen::VectorXd& v, Eigen::MatrixXd& dv) const
{
    const int d = dim();
    v.resize(d);
    dv.resize(d, d);
    for (int i = 0; i < d; ++i) {
        const Jet j = xi[static_cast<size_t>(i)].eval_jet(p);
        v(i) = j.v;
        for (int k = 0; k < d; ++k) dv(k, i) = j.grad(k);
    }
}

void AmbientStructure::eval_eta_jet(std::span<const double> p, Eigen::VectorXd& v, Eigen::MatrixXd& dv) const
{
    const int d = dim();
    v.resize(d);
    dv.resize(d, d);
    for (int i = 0; i < d; ++i) {
        const Jet j = eta[static_cast<size_t>(i)].eval_jet(p);
        v(i) = j.v;
        for (int k = 0; k < d; ++k) dv(k, i) = j.grad(k);
    }
}

void AmbientStructure::eval_phi_jet(std::span<const double> p, Eigen::MatrixXd& m,
                                    std::vector<Eigen::MatrixXd>& dm) const
{
    const int d = dim();
    m.resize(d, d);
    dm.assign(static_cast<size_t>(d), Eigen::MatrixXd(d, d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const Jet jet = phi_entry(i, j).eval_jet(p);
            m(i, j) = jet.v;
            for (int k = 0; k < d; ++k) dm[static_cast<size_t>(k)](i, j) = jet.grad(k);
        }
}

std::vector<std::vector<double>> sample_points(const AmbientStructure& S, int count, Rng& rng)
{
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) pts.push_back(rng.point(S.sample_lo, S.sample_hi));
    return pts;
}

namespace {

struct PointData {
    Eigen::MatrixXd g;
    std::vector<Eigen::MatrixXd> dg;
    Eigen::MatrixXd ginv;
    Eigen::VectorXd xi;
    Eigen::MatrixXd dxi; // (k,i) = d_k xi^i
    Eigen::VectorXd eta;
    Eigen::MatrixXd deta; // (k,i) = d_k eta_i
    Eigen::MatrixXd phi;
    std::vector<Eigen::MatrixXd> dphi;
};

PointData load_point(const AmbientStructure& S, std::span<const double> p)
{
    PointData d;
    S.metric.eval_jet1(p, d.g, d.dg);
    d.ginv = d.g.fullPivLu().inverse();
    S.eval_xi_jet(p, d.xi, d.dxi);
    S.eval_eta_jet(p, d.eta, d.deta);
    S.eval_phi_jet(p, d.phi, d.dphi);
    return d;
}

} // namespace

IdentityReport structure_axioms(const AmbientStructure& S,
                                const std::vector<std::vector<double>>& points,
                                const ContactTolerances& tol)
{
    const int d = S.dim();
    double r_pair = 0, r_phisq = 0, r_norm = 0, r_dual = 0, r_compat = 0, r_contact = 0;
    bool signature_ok = true;

    for (const auto& p : points) {
        const PointData pd = load_point(S, p);
        signature_ok = signature_ok && S.metric.signature_ok(p);

        r_pair = std::max(r_pair, std::abs(pd.eta.dot(pd.xi) - 1.0));

        const Eigen::MatrixXd phisq = pd.phi * pd.phi + Eigen::MatrixXd::Identity(d, d) -
                                      pd.xi * pd.eta.transpose();
        r_phisq = std::max(r_phisq, phisq.cwiseAbs().maxCoeff());

        r_norm = std::max(r_norm, std::abs(pd.xi.dot(pd.g * pd.xi) - S.eps));

        const Eigen::VectorXd dual = pd.eta - static_cast<double>(S.eps) * (pd.g * pd.xi);
        r_dual = std::max(r_dual, dual.cwiseAbs().maxCoeff());

        const Eigen::MatrixXd compat = pd.phi.transpose() * pd.g * pd.phi -
                                       (pd.g - static_cast<double>(S.eps) * pd.eta * pd.eta.transpose());
        r_compat = std::max(r_compat, compat.cwiseAbs().maxCoeff());

        // d eta (X,Y) = X eta(Y) - Y eta(X) on coordinate fields
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double deta_ij = pd.deta(i, j) - pd.deta(j, i);
                double omega2 = 0.0;
                for (int m = 0; m < d; ++m) omega2 += 2.0 * pd.phi(m, i) * pd.g(m, j);
                r_contact = std::max(r_contact, std::abs(deta_ij - omega2));
            }
    }

    IdentityReport rep;
    rep.add("eta-xi-pairing", "eta(xi) = 1", r_pair, 1e-9 * tol.scale);
    rep.add("phi-square", "phi^2 = -id + eta (x) xi", r_phisq, 1e-8 * tol.scale);
    rep.add("reeb-norm", "g(xi,xi) = eps", r_norm, 1e-8 * tol.scale);
    rep.add("eta-dual", "eta = eps g(xi, .)", r_dual, 1e-8 * tol.scale);
    rep.add("phi-compatibility", "g(phi X, phi Y) = g(X,Y) - eps eta(X)eta(Y)", r_compat,
            1e-8 * tol.scale);
    rep.add("contact-form", "d eta = 2 g(phi ., .)", r_contact, tol.alg());
    rep.add("signature", "metric eigenvalue signs match declared signature",
            signature_ok ? 0.0 : 1.0, 0.5);
    return rep;
}

IdentityReport verify_sasakian(const AmbientStructure& S,
                               const std::vector<std::vector<double>>& points,
                               const ContactTolerances& tol)
{
    const int d = S.dim();
    const double eps = static_cast<double>(S.eps);
    IdentityReport rep = structure_axioms(S, points, tol);

    ExprMetricSource ms(&S.metric);
    double r_normal = 0, r_nxi = 0, r_kill = 0;

    for (const auto& p : points) {
        const PointData pd = load_point(S, p);
        const ConnectionCoefficients gamma = christoffel(ms, p);

        // (nabla_i phi)^k_j - [eps eta_j delta^k_i - g_ij xi^k]
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double nphi = pd.dphi[static_cast<size_t>(i)](k, j);
                    for (int m = 0; m < d; ++m)
                        nphi += gamma.at(k, i, m) * pd.phi(m, j) - pd.phi(k, m) * gamma.at(m, i, j);
                    const double rhs = eps * pd.eta(j) * (k == i ? 1.0 : 0.0) - pd.g(i, j) * pd.xi(k);
                    r_normal = std::max(r_normal, std::abs(nphi - rhs));
                }

        // nabla_i xi^k = eps phi^k_i
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i) {
                double nxi = pd.dxi(i, k);
                for (int m = 0; m < d; ++m) nxi += gamma.at(k, i, m) * pd.xi(m);
                r_nxi = std::max(r_nxi, std::abs(nxi - eps * pd.phi(k, i)));
            }

        // (L_xi g)_ij = xi^m d_m g_ij + g_mj d_i xi^m + g_im d_j xi^m
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double lie = 0.0;
                for (int m = 0; m < d; ++m)
                    lie += pd.xi(m) * pd.dg[static_cast<size_t>(m)](i, j) + pd.g(m, j) * pd.dxi(i, m) +
                           pd.g(i, m) * pd.dxi(j, m);
                r_kill = std::max(r_kill, std::abs(lie));
            }
    }

    rep.add("normality", "(nabla_X phi)Y = eps eta(Y)X - g(X,Y)xi", r_normal, tol.alg());
    rep.add("reeb-parallel", "nabla xi = eps phi", r_nxi, tol.alg());
    rep.add("xi-killing", "L_xi g = 0", r_kill, tol.alg());
    return rep;
}

IdentityReport curvature_identity_suite(const AmbientStructure& S,
                                        const std::vector<std::vector<double>>& points,
                                        const ContactTolerances& tol)
{
    const int d = S.dim();
    const double eps = static_cast<double>(S.eps);
    ExprMetricSource ms(&S.metric);

    double r_anti = 0, r_neta = 0, r_nomega = 0, r_rxi = 0, r_sect = 0, r_ric = 0, r_rphi = 0;

    for (const auto& p : points) {
        const PointData pd = load_point(S, p);
        const ConnectionCoefficients gamma = christoffel(ms, p);

        const Eigen::MatrixXd omega = pd.phi.transpose() * pd.g; // omega_ij = g(phi e_i, e_j)
        r_anti = std::max(r_anti, (omega + omega.transpose()).cwiseAbs().maxCoeff());

        // nabla_i eta_j = omega_ij
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double ne = pd.deta(i, j);
                for (int m = 0; m < d; ++m) ne -= gamma.at(m, i, j) * pd.eta(m);
                r_neta = std::max(r_neta, std::abs(ne - omega(i, j)));
            }

        // (nabla_k omega)_ij = eps (g_kj eta_i - g_ki eta_j)
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double dom = 0.0;
                    for (int m = 0; m < d; ++m)
                        dom += pd.dphi[static_cast<size_t>(k)](m, i) * pd.g(m, j) +
                               pd.phi(m, i) * pd.dg[static_cast<size_t>(k)](m, j);
                    for (int m = 0; m < d; ++m)
                        dom -= gamma.at(m, k, i) * omega(m, j) + gamma.at(m, k, j) * omega(i, m);
                    const double rhs = eps * (pd.g(k, j) * pd.eta(i) - pd.g(k, i) * pd.eta(j));
                    r_nomega = std::max(r_nomega, std::abs(dom - rhs));
                }

        const CurvatureTensor R = riemann(ms, p);

        // R^l_ijk = ginv^{lm} R_ijkm
        std::vector<double> up(static_cast<size_t>(d * d * d * d));
        const auto U = [&](int l, int i, int j, int k) -> double& {
            return up[static_cast<size_t>(((l * d + i) * d + j) * d + k)];
        };
        for (int l = 0; l < d; ++l)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k) {
                        double acc = 0.0;
                        for (int m = 0; m < d; ++m) acc += pd.ginv(l, m) * R.at(i, j, k, m);
                        U(l, i, j, k) = acc;
                    }

        // R(X,Y)xi = eta(Y)X - eta(X)Y
        for (int l = 0; l < d; ++l)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double lhs = 0.0;
                    for (int k = 0; k < d; ++k) lhs += U(l, i, j, k) * pd.xi(k);
                    const double rhs = pd.eta(j) * (l == i ? 1.0 : 0.0) - pd.eta(i) * (l == j ? 1.0 : 0.0);
                    r_rxi = std::max(r_rxi, std::abs(lhs - rhs));
                }

        // Rm(X, xi, xi, Y) = g(X,Y) - eps eta(X) eta(Y)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double lhs = 0.0;
                for (int b = 0; b < d; ++b)
                    for (int c = 0; c < d; ++c) lhs += R.at(i, b, c, j) * pd.xi(b) * pd.xi(c);
                const double rhs = pd.g(i, j) - eps * pd.eta(i) * pd.eta(j);
                r_sect = std::max(r_sect, std::abs(lhs - rhs));
            }

        r_ric = std::max(r_ric, std::abs(pd.xi.dot(R.ricci * pd.xi) - 2.0 * S.n));

        // R(X,Y)(phi Z) = phi R(X,Y)Z
        //   + eps( -g(phi Y,Z)X + g(phi X,Z)Y - g(Y,Z)phi X + g(X,Z)phi Y )
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        double lhs = 0.0, mid = 0.0;
                        for (int m = 0; m < d; ++m) {
                            lhs += U(l, i, j, m) * pd.phi(m, k);
                            mid += pd.phi(l, m) * U(m, i, j, k);
                        }
                        const double corr =
                            eps * (-omega(j, k) * (l == i ? 1.0 : 0.0) + omega(i, k) * (l == j ? 1.0 : 0.0) -
                                   pd.g(j, k) * pd.phi(l, i) + pd.g(i, k) * pd.phi(l, j));
                        r_rphi = std::max(r_rphi, std::abs(lhs - mid - corr));
                    }
    }

    IdentityReport rep;
    rep.add("phi-antisymmetry", "g(phi X, Y) = -g(X, phi Y)", r_anti, tol.alg());
    rep.add("nabla-eta", "(nabla_X eta)Y = g(phi X, Y)", r_neta, tol.alg());
    rep.add("nabla-omega", "(nabla_X omega)(Y,Z) = eps g(X,Z)eta(Y) - eps g(X,Y)eta(Z)", r_nomega,
            tol.alg());
    rep.add("reeb-curvature", "R(X,Y)xi = eta(Y)X - eta(X)Y", r_rxi, tol.curv());
    rep.add("reeb-sectional", "Rm(X,xi,xi,Y) = g(X,Y) - eps eta(X)eta(Y)", r_sect, tol.curv());
    rep.add("ricci-reeb", "Ric(xi,xi) = 2n", r_ric, tol.curv());
    rep.add("phi-curvature",
            "R(X,Y)phi Z = phi R(X,Y)Z + eps(-g(phi Y,Z)X + g(phi X,Z)Y - g(Y,Z)phi X + g(X,Z)phi Y)",
            r_rphi, tol.curv());
    return rep;
}

EtaEinsteinFit eta_einstein_constants(const AmbientStructure& S,
                                      const std::vector<std::vector<double>>& points,
                                      double residual_threshold)
{
    const int d = S.dim();
    ExprMetricSource ms(&S.metric);

    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Vector2d atb = Eigen::Vector2d::Zero();

    struct Sample {
        Eigen::MatrixXd ric, g;
        Eigen::VectorXd eta;
    };
    std::vector<Sample> samples;
    samples.reserve(points.size());

    for (const auto& p : points) {
        const CurvatureTensor R = riemann(ms, p);
        Sample s;
        s.ric = R.ricci;
        s.g = S.metric.eval(p);
        s.eta = S.eval_eta(p);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                const Eigen::Vector2d row(s.g(i, j), s.eta(i) * s.eta(j));
                ata += row * row.transpose();
                atb += row * s.ric(i, j);
            }
        samples.push_back(std::move(s));
    }

    const Eigen::Vector2d ab = ata.fullPivLu().solve(atb);
    EtaEinsteinFit fit;
    fit.A = ab(0);
    fit.B = ab(1);
    for (const auto& s : samples) {
        const Eigen::MatrixXd dev = s.ric - fit.A * s.g - fit.B * s.eta * s.eta.transpose();
        fit.residual = std::max(fit.residual, dev.cwiseAbs().maxCoeff());
    }
    fit.eta_einstein = fit.residual <= residual_threshold;
    fit.relation_ok = fit.eta_einstein &&
                      std::abs(fit.B - (2.0 * S.n - S.eps * fit.A)) <= 1e-6;
    return fit;
}

// -- catalog ---------------------------------------------------------------

namespace {

// Round S^{2n+1} in the stereographic chart. Embedding coordinates are
// ordered (x1, y1, ..., x_{n+1}, y_{n+1}); the projection pole is
// y_{n+1} = 1 and the chart keeps the remaining 2n+1 components, so the
// chart metric is conformally flat: g = s^2 delta with s = 2/(1+|u|^2).
// The Reeb field is the chart image of the Hopf field p -> J p.
AmbientStructure make_round_sphere(int n)
{
    const int d = 2 * n + 1; // chart dimension
    const int e = d;         // embedding index of the pole coordinate

    AmbientStructure S;
    S.name = "round-sphere";
    S.n = n;
    S.eps = 1;
    S.metric = MetricField(d, std::vector<int>(static_cast<size_t>(d), 1));
    S.sample_lo.assign(static_cast<size_t>(d), -1.2);
    S.sample_hi.assign(static_cast<size_t>(d), 1.2);
    S.eta_einstein_ab = std::make_pair(2.0 * n, 0.0);

    std::vector<ScalarExpr> u(static_cast<size_t>(d));
    for (int a = 0; a < d; ++a) u[static_cast<size_t>(a)] = expr_var(a);

    ScalarExpr r2 = expr_constant(0.0);
    for (int a = 0; a < d; ++a) r2 = r2 + u[static_cast<size_t>(a)] * u[static_cast<size_t>(a)];
    const ScalarExpr one = expr_constant(1.0);
    const ScalarExpr s = expr_constant(2.0) / (one + r2);
    const ScalarExpr s2 = s * s;
    const ScalarExpr inv_s = (one + r2) * expr_constant(0.5);

    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) S.metric.set(a, b, a == b ? s2 : expr_constant(0.0));

    // embedded position P and the rotated position J P
    std::vector<ScalarExpr> P(static_cast<size_t>(d + 1)), JP(static_cast<size_t>(d + 1));
    for (int a = 0; a < d; ++a) P[static_cast<size_t>(a)] = s * u[static_cast<size_t>(a)];
    P[static_cast<size_t>(e)] = one - s;
    for (int k = 0; k <= n; ++k) {
        JP[static_cast<size_t>(2 * k)] = -P[static_cast<size_t>(2 * k + 1)];
        JP[static_cast<size_t>(2 * k + 1)] = P[static_cast<size_t>(2 * k)];
    }

    // xi^a = (JP_a + P_a JP_e / s) / s
    S.xi.resize(static_cast<size_t>(d));
    S.eta.resize(static_cast<size_t>(d));
    for (int a = 0; a < d; ++a) {
        S.xi[static_cast<size_t>(a)] =
            JP[static_cast<size_t>(a)] * inv_s + u[static_cast<size_t>(a)] * u[static_cast<size_t>(d - 1)];
        S.eta[static_cast<size_t>(a)] = s2 * S.xi[static_cast<size_t>(a)];
    }

    // phi = A (J + P (JP)^T) B with A the chart differential and B the
    // embedding differential.
    const auto Jmat = [&](int i, int j) -> double {
        if (i % 2 == 0 && j == i + 1) return -1.0;
        if (i % 2 == 1 && j == i - 1) return 1.0;
        return 0.0;
    };
    const auto B = [&](int j, int b) -> ScalarExpr {
        if (j == e) return s2 * u[static_cast<size_t>(b)];
        ScalarExpr t = expr_constant(0.0) - s2 * u[static_cast<size_t>(j)] * u[static_cast<size_t>(b)];
        if (j == b) t = t + s;
        return t;
    };
    const auto A = [&](int a, int i) -> ScalarExpr {
        if (i == e) return u[static_cast<size_t>(a)] * inv_s;
        return (i == a) ? inv_s : expr_constant(0.0);
    };

    S.phi.resize(static_cast<size_t>(d * d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            ScalarExpr acc = expr_constant(0.0);
            for (int i = 0; i <= d; ++i) {
                const ScalarExpr Ai = A(a, i);
                if (Ai.node().kind == ScalarExpr::Kind::Constant && Ai.node().constant == 0.0) continue;
                for (int j = 0; j <= d; ++j) {
                    ScalarExpr Phi_ij = P[static_cast<size_t>(i)] * JP[static_cast<size_t>(j)];
                    const double jm = Jmat(i, j);
                    if (jm != 0.0) Phi_ij = Phi_ij + expr_constant(jm);
                    acc = acc + Ai * Phi_ij * B(j, b);
                }
            }
            S.phi[static_cast<size_t>(a * d + b)] = acc;
        }
    return S;
}

// Heisenberg group R^{2n+1} with coordinates (x_1..x_n, y_1..y_n, z),
// eta = dz - sum y_i dx_i, xi = d/dz, and the compatible metric
// g = (1/2) sum (dx_i^2 + dy_i^2) + eta (x) eta. The 1/2 is the unique
// scaling for which d eta = 2 g(phi ., .).
AmbientStructure make_heisenberg(int n)
{
    const int d = 2 * n + 1;
    AmbientStructure S;
    S.name = "heisenberg";
    S.n = n;
    S.eps = 1;
    S.metric = MetricField(d, std::vector<int>(static_cast<size_t>(d), 1));
    S.sample_lo.assign(static_cast<size_t>(d), -1.0);
    S.sample_hi.assign(static_cast<size_t>(d), 1.0);

    const int zi = 2 * n; // z index; x_i at i, y_i at n+i
    std::vector<ScalarExpr> etac(static_cast<size_t>(d), expr_constant(0.0));
    for (int i = 0; i < n; ++i) etac[static_cast<size_t>(i)] = -expr_var(n + i);
    etac[static_cast<size_t>(zi)] = expr_constant(1.0);
    S.eta = etac;

    S.xi.assign(static_cast<size_t>(d), expr_constant(0.0));
    S.xi[static_cast<size_t>(zi)] = expr_constant(1.0);

    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            ScalarExpr v = etac[static_cast<size_t>(a)] * etac[static_cast<size_t>(b)];
            if (a == b && a != zi) v = v + expr_constant(0.5);
            S.metric.set(a, b, v);
        }

    // phi: dx_i -> dy_i column picture: phi(d/dx_i) = d/dy_i,
    // phi(d/dy_i) = -d/dx_i - y_i d/dz, phi(d/dz) = 0.
    S.phi.assign(static_cast<size_t>(d * d), expr_constant(0.0));
    const auto set_phi = [&](int i, int j, ScalarExpr v) { S.phi[static_cast<size_t>(i * d + j)] = std::move(v); };
    for (int i = 0; i < n; ++i) {
        set_phi(n + i, i, expr_constant(1.0));        // phi^ {y_i}_{x_i} = 1
        set_phi(i, n + i, expr_constant(-1.0));       // phi^ {x_i}_{y_i} = -1
        set_phi(zi, n + i, -expr_var(n + i));         // phi^ z_{y_i} = -y_i
    }
    return S;
}

} // namespace

AmbientStructure model_catalog(const std::string& name, int n)
{
    if (n < 1 || n > 2) throw std::invalid_argument("model_catalog: supported n are 1 and 2");
    if (name == "round-sphere") return make_round_sphere(n);
    if (name == "heisenberg") return make_heisenberg(n);
    if (name.rfind("tanno(", 0) == 0 && name.back() == ')') {
        const std::string inner = name.substr(6, name.size() - 7);
        const size_t comma = inner.rfind(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("model_catalog: expected tanno(<name>,<alpha>)");
        const std::string base = inner.substr(0, comma);
        std::string alpha_str = inner.substr(comma + 1);
        if (alpha_str.rfind("alpha=", 0) == 0) alpha_str = alpha_str.substr(6);
        const double alpha = std::stod(alpha_str);
        return deform(model_catalog(base, n), alpha).target;
    }
    throw std::invalid_argument("model_catalog: unknown structure '" + name + "'");
}

AmbientStructure with_scaled_eta(const AmbientStructure& S, double factor)
{
    AmbientStructure out = S;
    out.name = S.name + "/eta*" + std::to_string(factor);
    for (auto& e : out.eta) e = expr_constant(factor) * e;
    return out;
}

AmbientStructure with_flipped_phi(const AmbientStructure& S)
{
    AmbientStructure out = S;
    out.name = S.name + "/-phi";
    for (auto& e : out.phi) e = -e;
    return out;
}

AmbientStructure with_scaled_xi(const AmbientStructure& S, double factor)
{
    AmbientStructure out = S;
    out.name = S.name + "/xi*" + std::to_string(factor);
    for (auto& e : out.xi) e = expr_constant(factor) * e;
    return out;
}

} // namespace psk
