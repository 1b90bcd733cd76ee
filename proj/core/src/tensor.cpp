#include "psk/tensor.hpp"

#include <stdexcept>

namespace psk {

MetricField::MetricField(int dim, std::vector<int> signature)
    : dim_(dim), signature_(std::move(signature)), entries_(static_cast<size_t>(packed_size(dim)))
{
    if (static_cast<int>(signature_.size()) != dim_)
        throw std::invalid_argument("signature length must equal dimension");
}

void MetricField::set(int i, int j, ScalarExpr e)
{
    entries_[static_cast<size_t>(packed_index(i, j))] = std::move(e);
}

const ScalarExpr& MetricField::entry(int i, int j) const
{
    return entries_[static_cast<size_t>(packed_index(i, j))];
}

Eigen::MatrixXd MetricField::eval(std::span<const double> p) const
{
    Eigen::MatrixXd g(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i <= j; ++i) {
            const double v = entry(i, j).eval(p);
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

void MetricField::eval_jet1(std::span<const double> p, Eigen::MatrixXd& g,
                            std::vector<Eigen::MatrixXd>& dg) const
{
    g.resize(dim_, dim_);
    dg.assign(static_cast<size_t>(dim_), Eigen::MatrixXd(dim_, dim_));
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i <= j; ++i) {
            const Jet jet = entry(i, j).eval_jet(p);
            g(i, j) = jet.v;
            g(j, i) = jet.v;
            for (int k = 0; k < dim_; ++k) {
                dg[static_cast<size_t>(k)](i, j) = jet.grad(k);
                dg[static_cast<size_t>(k)](j, i) = jet.grad(k);
            }
        }
}

bool MetricField::signature_ok(std::span<const double> p) const
{
    const Eigen::MatrixXd g = eval(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    if (es.info() != Eigen::Success) return false;
    int plus = 0, minus = 0;
    for (int i = 0; i < dim_; ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev > 1e-12)
            ++plus;
        else if (ev < -1e-12)
            ++minus;
        else
            return false; // degenerate
    }
    int want_plus = 0, want_minus = 0;
    for (int s : signature_) (s > 0 ? want_plus : want_minus)++;
    return plus == want_plus && minus == want_minus;
}

Eigen::MatrixXd MetricSource::eval(std::span<const double> p) const
{
    Eigen::MatrixXd g;
    std::vector<Eigen::MatrixXd> dg;
    eval_jet1(p, g, dg);
    return g;
}

ConnectionCoefficients christoffel(const MetricSource& m, std::span<const double> p)
{
    Eigen::MatrixXd g;
    std::vector<Eigen::MatrixXd> dg;
    m.eval_jet1(p, g, dg);
    return christoffel_from(g, dg);
}

ConnectionCoefficients christoffel_from(const Eigen::MatrixXd& g, const std::vector<Eigen::MatrixXd>& dg)
{
    const int d = static_cast<int>(g.rows());
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (!lu.isInvertible()) throw std::runtime_error("singular metric at evaluation point");
    const Eigen::MatrixXd ginv = lu.inverse();

    ConnectionCoefficients gamma(d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double acc = 0.0;
                for (int l = 0; l < d; ++l)
                    acc += ginv(k, l) * (dg[static_cast<size_t>(i)](j, l) + dg[static_cast<size_t>(j)](i, l) -
                                         dg[static_cast<size_t>(l)](i, j));
                acc *= 0.5;
                gamma.at(k, i, j) = acc;
                gamma.at(k, j, i) = acc;
            }
    return gamma;
}

void christoffel_derivative(const MetricSource& m, std::span<const double> p,
                            std::vector<ConnectionCoefficients>& dgamma, double h)
{
    const int d = m.dim();
    std::vector<double> q(p.begin(), p.end());
    dgamma.assign(static_cast<size_t>(d), ConnectionCoefficients(d));

    for (int a = 0; a < d; ++a) {
        const double pa = q[static_cast<size_t>(a)];
        const auto gamma_at = [&](double shift) {
            q[static_cast<size_t>(a)] = pa + shift;
            ConnectionCoefficients g = christoffel(m, q);
            q[static_cast<size_t>(a)] = pa;
            return g;
        };
        const ConnectionCoefficients m2 = gamma_at(-2 * h);
        const ConnectionCoefficients m1 = gamma_at(-h);
        const ConnectionCoefficients p1 = gamma_at(h);
        const ConnectionCoefficients p2 = gamma_at(2 * h);
        ConnectionCoefficients& out = dgamma[static_cast<size_t>(a)];
        for (size_t idx = 0; idx < out.c.size(); ++idx)
            out.c[idx] = (m2.c[idx] - 8.0 * m1.c[idx] + 8.0 * p1.c[idx] - p2.c[idx]) / (12.0 * h);
    }
}

CurvatureTensor riemann(const MetricSource& m, std::span<const double> p, double h)
{
    const int d = m.dim();
    const Eigen::MatrixXd g = m.eval(p);
    const ConnectionCoefficients gamma = christoffel(m, p);
    std::vector<ConnectionCoefficients> dgamma;
    christoffel_derivative(m, p, dgamma, h);

    // R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_ia Gamma^a_jk - Gamma^l_ja Gamma^a_ik
    std::vector<double> rup(static_cast<size_t>(d * d * d * d), 0.0);
    const auto up = [&](int l, int i, int j, int k) -> double& {
        return rup[static_cast<size_t>(((l * d + i) * d + j) * d + k)];
    };
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    double acc = dgamma[static_cast<size_t>(i)].at(l, j, k) -
                                 dgamma[static_cast<size_t>(j)].at(l, i, k);
                    for (int a = 0; a < d; ++a)
                        acc += gamma.at(l, i, a) * gamma.at(a, j, k) - gamma.at(l, j, a) * gamma.at(a, i, k);
                    up(l, i, j, k) = acc;
                }

    CurvatureTensor R;
    R.dim = d;
    R.r.assign(static_cast<size_t>(d * d * d * d), 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double acc = 0.0;
                    for (int mm = 0; mm < d; ++mm) acc += g(l, mm) * up(mm, i, j, k);
                    R.at(i, j, k, l) = acc;
                }

    // Ric_jk = R^i_ijk
    R.ricci = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            double acc = 0.0;
            for (int i = 0; i < d; ++i) acc += up(i, i, j, k);
            R.ricci(j, k) = acc;
        }
    return R;
}

Eigen::VectorXd curvature_apply(const CurvatureTensor& R, const Eigen::MatrixXd& g_inv,
                                const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                const Eigen::VectorXd& Z)
{
    const int d = R.dim;
    Eigen::VectorXd low = Eigen::VectorXd::Zero(d);
    for (int l = 0; l < d; ++l) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) acc += R.at(i, j, k, l) * X(i) * Y(j) * Z(k);
        low(l) = acc;
    }
    return g_inv * low;
}

double curvature_scalar(const CurvatureTensor& R, const Eigen::VectorXd& A,
                        const Eigen::VectorXd& B, const Eigen::VectorXd& C,
                        const Eigen::VectorXd& D)
{
    const int d = R.dim;
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
        if (A(i) == 0.0) continue;
        for (int j = 0; j < d; ++j) {
            if (B(j) == 0.0) continue;
            for (int k = 0; k < d; ++k) {
                if (C(k) == 0.0) continue;
                for (int l = 0; l < d; ++l) acc += R.at(i, j, k, l) * A(i) * B(j) * C(k) * D(l);
            }
        }
    }
    return acc;
}

Eigen::VectorXd raise_index(const Eigen::MatrixXd& g, const Eigen::VectorXd& covector)
{
    return g.fullPivLu().solve(covector);
}

Eigen::VectorXd lower_index(const Eigen::MatrixXd& g, const Eigen::VectorXd& vector)
{
    return g * vector;
}

double contract_pair(const Eigen::MatrixXd& a_upper, const Eigen::MatrixXd& b_lower)
{
    return (a_upper * b_lower).trace();
}

} // namespace psk
