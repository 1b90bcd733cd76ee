#include "psk/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psk {

namespace {

// Assemble the divergence-form stiffness and the lumped mass matrix on a
// uniform periodic grid. Diagonal flux terms use forward differences with
// midpoint-averaged coefficients; cross terms use central differences.
void assemble(const Immersion& f, const AmbientStructure& S, const std::vector<int>& sizes,
              Eigen::MatrixXd& K, Eigen::MatrixXd& M)
{
    const int n = f.n;
    const Grid grid = f.make_grid(sizes);
    const int N = grid.size();

    InducedMetricSource src(&f, &S);
    std::vector<Eigen::MatrixXd> ginv(static_cast<size_t>(N));
    std::vector<double> rho(static_cast<size_t>(N));
    Eigen::MatrixXd g;
    std::vector<Eigen::MatrixXd> dg;
    for (int p = 0; p < N; ++p) {
        src.eval_jet1(grid.point(p), g, dg);
        rho[static_cast<size_t>(p)] = std::sqrt(g.determinant());
        ginv[static_cast<size_t>(p)] = g.fullPivLu().inverse();
    }

    // neighbor with multi-index shifted by +/-1 along axis a (periodic)
    const auto shift = [&](int p, int a, int by) {
        auto m = grid.multi(p);
        const int na = grid.axis(a).size();
        m[static_cast<size_t>(a)] = (m[static_cast<size_t>(a)] + by % na + na) % na;
        return grid.flat(m);
    };

    K = Eigen::MatrixXd::Zero(N, N);
    M = Eigen::MatrixXd::Zero(N, N);

    for (int p = 0; p < N; ++p) {
        const double w = grid.weight(p);
        M(p, p) = w * rho[static_cast<size_t>(p)];

        for (int a = 0; a < n; ++a) {
            const double da = grid.axis(a).length() / grid.axis(a).size();
            const int pa = shift(p, a, +1);
            const double caa = 0.5 * (rho[static_cast<size_t>(p)] * ginv[static_cast<size_t>(p)](a, a) +
                                      rho[static_cast<size_t>(pa)] * ginv[static_cast<size_t>(pa)](a, a));
            const double s = w * caa / (da * da);
            K(p, p) += s;
            K(pa, pa) += s;
            K(p, pa) -= s;
            K(pa, p) -= s;

            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                const double db = grid.axis(b).length() / grid.axis(b).size();
                const double cab = rho[static_cast<size_t>(p)] * ginv[static_cast<size_t>(p)](a, b);
                const double s2 = w * cab / (4.0 * da * db);
                const int ap = shift(p, a, +1), am = shift(p, a, -1);
                const int bp = shift(p, b, +1), bm = shift(p, b, -1);
                // (D_a f)(p) (D_b h)(p) with central differences
                const int arows[2] = {ap, am};
                const int brows[2] = {bp, bm};
                const double asgn[2] = {1.0, -1.0};
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) K(arows[i], brows[j]) += s2 * asgn[i] * asgn[j];
            }
        }
    }
    // enforce exact symmetry against rounding in the cross terms
    K = 0.5 * (K + K.transpose()).eval();
}

} // namespace

SpectrumResult laplace_spectrum(const InducedGeometry& geom, const SpectrumOptions& opts)
{
    const Immersion& f = geom.f;
    if (!f.closed())
        throw std::invalid_argument("laplace_spectrum: all parameter axes must be periodic");

    // default start: coarse enough that at least one doubling is affordable
    std::vector<int> sizes = opts.resolution;
    if (sizes.empty()) {
        const int start = f.n == 1 ? 64 : 24;
        for (int s : f.grid_sizes) sizes.push_back(std::min(s, start));
    }
    // 2-d problems get dense at high resolution; cap the doubling there.
    const int cap = f.n == 1 ? opts.max_resolution : std::min(opts.max_resolution, 64);

    Eigen::MatrixXd K, M;
    double prev_l1 = -1.0;
    SpectrumResult out;
    out.method = "grid-fd";

    for (;;) {
        assemble(f, geom.S, sizes, K, M);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
            K, M, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
        if (es.info() != Eigen::Success) throw std::runtime_error("laplace_spectrum: eigensolver failed");

        const int want = std::min<int>(opts.k, static_cast<int>(es.eigenvalues().size()));
        out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + want);
        out.resolution = sizes;

        const double l1 = out.eigenvalues.size() > 1 ? out.eigenvalues[1] : 0.0;
        if (prev_l1 > 0.0) {
            out.estimated_error = std::abs(l1 - prev_l1) / 3.0; // second-order Richardson
            if (std::abs(l1 - prev_l1) <= opts.refine_tol * std::abs(l1)) break;
        }
        prev_l1 = l1;

        bool can_refine = true;
        for (int s : sizes)
            if (2 * s > cap) can_refine = false;
        if (!can_refine) break;
        for (int& s : sizes) s *= 2;
    }
    return out;
}

SpectrumResult lattice_spectrum(const InducedGeometry& geom, int k)
{
    const int n = geom.f.n;
    if (!geom.f.closed())
        throw std::invalid_argument("lattice_spectrum: all parameter axes must be periodic");

    const Eigen::MatrixXd G0 = geom.nodes.front().g_ind;
    for (const auto& nd : geom.nodes)
        if ((nd.g_ind - G0).cwiseAbs().maxCoeff() > 1e-9)
            throw std::invalid_argument("lattice_spectrum: induced metric is not constant");
    const Eigen::MatrixXd Ginv = G0.fullPivLu().inverse();

    std::vector<double> evs{0.0};
    const int kmax = 8;
    std::vector<int> idx(static_cast<size_t>(n), -kmax);
    for (;;) {
        // canonical representative of {k, -k}: first nonzero entry positive
        int first = 0;
        for (int a = n - 1; a >= 0; --a)
            if (idx[static_cast<size_t>(a)] != 0) first = idx[static_cast<size_t>(a)];
        if (first > 0) {
            Eigen::VectorXd w(n);
            for (int a = 0; a < n; ++a)
                w(a) = 2.0 * std::numbers::pi * idx[static_cast<size_t>(a)] / geom.f.make_grid().axis(a).length();
            const double lam = w.dot(Ginv * w);
            evs.push_back(lam); // cos and sin branch
            evs.push_back(lam);
        }
        int a = 0;
        for (; a < n; ++a) {
            if (++idx[static_cast<size_t>(a)] <= kmax) break;
            idx[static_cast<size_t>(a)] = -kmax;
        }
        if (a == n) break;
    }
    std::sort(evs.begin(), evs.end());
    if (static_cast<int>(evs.size()) > k) evs.resize(static_cast<size_t>(k));

    SpectrumResult out;
    out.eigenvalues = std::move(evs);
    out.resolution = {};
    out.method = "lattice-closed-form";
    return out;
}

StabilityVerdict stability_verdict(double lambda1, double A, int eps, double marginal_band)
{
    StabilityVerdict v;
    v.threshold = A + 2.0 * eps;
    if (v.threshold <= 0.0) {
        v.stable = true;
        v.corollary_path = true;
        v.marginal = std::abs(lambda1 - v.threshold) < marginal_band;
        return v;
    }
    if (std::abs(lambda1 - v.threshold) < marginal_band) {
        v.stable = true;
        v.marginal = true;
        return v;
    }
    v.stable = lambda1 >= v.threshold;
    return v;
}

std::string verdict_string(const StabilityVerdict& v)
{
    std::string s = v.stable ? "stable" : "unstable";
    if (v.marginal) s += " (marginal)";
    if (v.corollary_path) s += " (corollary: threshold <= 0)";
    return s;
}

} // namespace psk
