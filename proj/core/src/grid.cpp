#include "psk/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psk {

Axis make_periodic_axis(double lo, double hi, int n)
{
    if (n < 4) throw std::invalid_argument("periodic axis needs at least 4 nodes");
    Axis ax;
    ax.lo = lo;
    ax.hi = hi;
    ax.periodic = true;
    const double P = hi - lo;
    const double dx = P / n;
    ax.nodes.resize(static_cast<size_t>(n));
    ax.weights.assign(static_cast<size_t>(n), dx);
    for (int j = 0; j < n; ++j) ax.nodes[static_cast<size_t>(j)] = lo + j * dx;

    // Fourier differentiation matrix, scaled from period 2*pi to period P.
    ax.diff = Eigen::MatrixXd::Zero(n, n);
    const double scale = 2.0 * std::numbers::pi / P;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            const double arg = std::numbers::pi * (j - k) / n;
            double d;
            if (n % 2 == 0)
                d = 0.5 * ((j - k) % 2 == 0 ? 1.0 : -1.0) / std::tan(arg);
            else
                d = 0.5 * ((j - k) % 2 == 0 ? 1.0 : -1.0) / std::sin(arg);
            ax.diff(j, k) = scale * d;
        }
    return ax;
}

Axis make_gauss_axis(double lo, double hi, int n)
{
    if (n < 2) throw std::invalid_argument("gauss axis needs at least 2 nodes");
    Axis ax;
    ax.lo = lo;
    ax.hi = hi;
    ax.periodic = false;

    // Gauss-Legendre nodes on [-1,1] by Newton iteration on P_n.
    std::vector<double> x(static_cast<size_t>(n)), w(static_cast<size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[static_cast<size_t>(i)] = -t;
        x[static_cast<size_t>(n - 1 - i)] = t;
        const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[static_cast<size_t>(i)] = wi;
        w[static_cast<size_t>(n - 1 - i)] = wi;
    }

    const double c = 0.5 * (hi - lo);
    ax.nodes.resize(static_cast<size_t>(n));
    ax.weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        ax.nodes[static_cast<size_t>(i)] = lo + c * (x[static_cast<size_t>(i)] + 1.0);
        ax.weights[static_cast<size_t>(i)] = c * w[static_cast<size_t>(i)];
    }

    // Lagrange differentiation matrix from barycentric weights.
    std::vector<double> bw(static_cast<size_t>(n), 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) bw[static_cast<size_t>(i)] /= (ax.nodes[static_cast<size_t>(i)] - ax.nodes[static_cast<size_t>(j)]);
    ax.diff = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            ax.diff(i, j) = (bw[static_cast<size_t>(j)] / bw[static_cast<size_t>(i)]) /
                            (ax.nodes[static_cast<size_t>(i)] - ax.nodes[static_cast<size_t>(j)]);
            rowsum += ax.diff(i, j);
        }
        ax.diff(i, i) = -rowsum;
    }
    return ax;
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes))
{
    total_ = 1;
    for (const auto& ax : axes_) total_ *= ax.size();
}

bool Grid::all_periodic() const
{
    for (const auto& ax : axes_)
        if (!ax.periodic) return false;
    return true;
}

int Grid::flat(const std::vector<int>& multi) const
{
    int f = 0;
    for (int a = rank() - 1; a >= 0; --a) f = f * axes_[static_cast<size_t>(a)].size() + multi[static_cast<size_t>(a)];
    return f;
}

std::vector<int> Grid::multi(int flat) const
{
    std::vector<int> m(static_cast<size_t>(rank()));
    for (int a = 0; a < rank(); ++a) {
        const int n = axes_[static_cast<size_t>(a)].size();
        m[static_cast<size_t>(a)] = flat % n;
        flat /= n;
    }
    return m;
}

std::vector<double> Grid::point(int flat) const
{
    const auto m = multi(flat);
    std::vector<double> p(static_cast<size_t>(rank()));
    for (int a = 0; a < rank(); ++a)
        p[static_cast<size_t>(a)] = axes_[static_cast<size_t>(a)].nodes[static_cast<size_t>(m[static_cast<size_t>(a)])];
    return p;
}

double Grid::weight(int flat) const
{
    const auto m = multi(flat);
    double w = 1.0;
    for (int a = 0; a < rank(); ++a)
        w *= axes_[static_cast<size_t>(a)].weights[static_cast<size_t>(m[static_cast<size_t>(a)])];
    return w;
}

Eigen::VectorXd Grid::differentiate(const Eigen::VectorXd& field, int a) const
{
    const int n = axes_[static_cast<size_t>(a)].size();
    const Eigen::MatrixXd& D = axes_[static_cast<size_t>(a)].diff;

    int stride = 1;
    for (int b = 0; b < a; ++b) stride *= axes_[static_cast<size_t>(b)].size();
    const int lines = total_ / n;

    Eigen::VectorXd out(total_);
    Eigen::VectorXd line(n), dline(n);
    for (int l = 0; l < lines; ++l) {
        // base offset of this line: the l-th combination of all other axes
        const int block = l / stride;        // index over slower axes
        const int inner = l % stride;        // index over faster axes
        const int base = block * stride * n + inner;
        for (int i = 0; i < n; ++i) line(i) = field(base + i * stride);
        dline.noalias() = D * line;
        for (int i = 0; i < n; ++i) out(base + i * stride) = dline(i);
    }
    return out;
}

double Grid::integrate(const Eigen::VectorXd& field) const
{
    double acc = 0.0;
    for (int f = 0; f < total_; ++f) acc += field(f) * weight(f);
    return acc;
}

} // namespace psk
