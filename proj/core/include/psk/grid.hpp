#pragma once

// Tensor-product quadrature grids over a parameter box. Periodic axes use
// uniform nodes with trapezoidal weights and a Fourier differentiation
// matrix; non-periodic axes use Gauss-Legendre nodes, weights, and the
// Lagrange differentiation matrix. Both choices are spectrally accurate on
// smooth data.

#include <Eigen/Dense>
#include <vector>

namespace psk {

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
    std::vector<double> nodes;
    std::vector<double> weights;
    Eigen::MatrixXd diff; // derivative of nodal values w.r.t. the coordinate

    int size() const { return static_cast<int>(nodes.size()); }
    double length() const { return hi - lo; }
};

Axis make_periodic_axis(double lo, double hi, int n);
Axis make_gauss_axis(double lo, double hi, int n);

class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<Axis> axes);

    int rank() const { return static_cast<int>(axes_.size()); }
    int size() const { return total_; }
    const Axis& axis(int a) const { return axes_[static_cast<size_t>(a)]; }
    bool all_periodic() const;

    // flat <-> multi-index (axis 0 fastest)
    int flat(const std::vector<int>& multi) const;
    std::vector<int> multi(int flat) const;

    std::vector<double> point(int flat) const;
    double weight(int flat) const;

    // d/du_a of a nodal scalar field, via the per-axis differentiation matrix.
    Eigen::VectorXd differentiate(const Eigen::VectorXd& field, int a) const;

    double integrate(const Eigen::VectorXd& field) const;

private:
    std::vector<Axis> axes_;
    int total_ = 0;
};

} // namespace psk
