#pragma once

// Metric-dependent objects on a chart: inverse metric, Levi-Civita
// connection, Riemann and Ricci curvature, and index gymnastics.
//
// Conventions, pinned operationally by the round unit sphere:
//   R(X,Y)Z   = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z
//   Rm(A,B,C,D) = g(R(A,B)C, D),   R_ijkl = g_lm R^m_ijk
//   Ric(Y,Z)  = tr(X -> R(X,Y)Z),  Ric_jk = R^i_ijk
// so that S^d has sectional curvature +1 and Ric = (d-1) g.
//
// First derivatives of the metric come from exact forward-mode jets.
// Derivatives of the connection coefficients (needed for curvature) come
// from one 4th-order central-difference layer applied to the Christoffel
// field, with a fixed step; this is the single differencing layer in the
// engine and its error budget is covered by the curvature tolerances.

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "psk/expr.hpp"

namespace psk {

inline constexpr double kChristoffelDiffStep = 1e-5;

inline std::span<const double> as_span(const Eigen::VectorXd& v)
{
    return {v.data(), static_cast<size_t>(v.size())};
}

// Symmetric grid of expressions g_ij with a declared signature.
class MetricField {
public:
    MetricField() = default;
    MetricField(int dim, std::vector<int> signature);

    int dim() const { return dim_; }
    const std::vector<int>& signature() const { return signature_; }

    void set(int i, int j, ScalarExpr e);
    const ScalarExpr& entry(int i, int j) const; // same tree for (i,j) and (j,i)

    Eigen::MatrixXd eval(std::span<const double> p) const;
    // g and all coordinate partials d_k g at p (exact jets).
    void eval_jet1(std::span<const double> p, Eigen::MatrixXd& g,
                   std::vector<Eigen::MatrixXd>& dg) const;

    // Eigenvalue signs at p must match the declared signature.
    bool signature_ok(std::span<const double> p) const;

private:
    int dim_ = 0;
    std::vector<int> signature_;
    std::vector<ScalarExpr> entries_; // packed lower triangle
};

// Anything that can evaluate a metric and its first derivatives at a point:
// an expression-backed chart metric, or the metric induced on a submanifold.
class MetricSource {
public:
    virtual ~MetricSource() = default;
    virtual int dim() const = 0;
    virtual void eval_jet1(std::span<const double> p, Eigen::MatrixXd& g,
                           std::vector<Eigen::MatrixXd>& dg) const = 0;
    Eigen::MatrixXd eval(std::span<const double> p) const;
};

class ExprMetricSource final : public MetricSource {
public:
    explicit ExprMetricSource(const MetricField* field) : field_(field) {}
    int dim() const override { return field_->dim(); }
    void eval_jet1(std::span<const double> p, Eigen::MatrixXd& g,
                   std::vector<Eigen::MatrixXd>& dg) const override
    {
        field_->eval_jet1(p, g, dg);
    }

private:
    const MetricField* field_;
};

// Gamma^k_ij at a point, exactly symmetric in (i,j).
struct ConnectionCoefficients {
    int dim = 0;
    std::vector<double> c; // k*dim*dim + i*dim + j

    ConnectionCoefficients() = default;
    explicit ConnectionCoefficients(int d) : dim(d), c(static_cast<size_t>(d * d * d), 0.0) {}
    double& at(int k, int i, int j) { return c[static_cast<size_t>((k * dim + i) * dim + j)]; }
    double at(int k, int i, int j) const { return c[static_cast<size_t>((k * dim + i) * dim + j)]; }
};

// R_ijkl (all indices down) and Ricci at a point.
struct CurvatureTensor {
    int dim = 0;
    std::vector<double> r; // ((i*d + j)*d + k)*d + l
    Eigen::MatrixXd ricci;

    double at(int i, int j, int k, int l) const
    {
        return r[static_cast<size_t>(((i * dim + j) * dim + k) * dim + l)];
    }
    double& at(int i, int j, int k, int l)
    {
        return r[static_cast<size_t>(((i * dim + j) * dim + k) * dim + l)];
    }
};

ConnectionCoefficients christoffel(const MetricSource& m, std::span<const double> p);

// Same, from already-evaluated metric data.
ConnectionCoefficients christoffel_from(const Eigen::MatrixXd& g,
                                        const std::vector<Eigen::MatrixXd>& dg);

// d_m Gamma^k_ij via 4th-order central differences of the Christoffel field.
void christoffel_derivative(const MetricSource& m, std::span<const double> p,
                            std::vector<ConnectionCoefficients>& dgamma,
                            double h = kChristoffelDiffStep);

CurvatureTensor riemann(const MetricSource& m, std::span<const double> p,
                        double h = kChristoffelDiffStep);

// R(X,Y)Z as a vector, contracted from the lowered tensor: the caller
// supplies the inverse metric used for raising the last slot.
Eigen::VectorXd curvature_apply(const CurvatureTensor& R, const Eigen::MatrixXd& g_inv,
                                const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                const Eigen::VectorXd& Z);

// Rm(A,B,C,D) with all slots contracted against the lowered tensor.
double curvature_scalar(const CurvatureTensor& R, const Eigen::VectorXd& A,
                        const Eigen::VectorXd& B, const Eigen::VectorXd& C,
                        const Eigen::VectorXd& D);

// Musical isomorphisms and traces at a point.
Eigen::VectorXd raise_index(const Eigen::MatrixXd& g, const Eigen::VectorXd& covector);
Eigen::VectorXd lower_index(const Eigen::MatrixXd& g, const Eigen::VectorXd& vector);
double contract_pair(const Eigen::MatrixXd& a_upper, const Eigen::MatrixXd& b_lower);

} // namespace psk
