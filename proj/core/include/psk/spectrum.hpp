#pragma once

// Low spectrum of the Laplace-Beltrami operator of the induced metric on a
// closed parameter torus, and the lambda_1 stability verdict. The operator
// uses the positive-spectrum convention (constants have eigenvalue 0 and
// everything else is >= 0).

#include <string>
#include <vector>

#include "psk/immersion.hpp"

namespace psk {

struct SpectrumOptions {
    int k = 8;                    // eigenvalues to report
    std::vector<int> resolution;  // initial per-axis grid; empty = immersion default
    int max_resolution = 512;     // per-axis cap for refinement
    double refine_tol = 0.01;     // accept when lambda_1 moves less than this (relative)
};

struct SpectrumResult {
    std::vector<double> eigenvalues; // ascending, lambda_0 ~ 0 first
    std::vector<int> resolution;     // accepted per-axis resolution
    double estimated_error = 0.0;    // Richardson estimate for lambda_1
    std::string method;              // "grid-fd" or "lattice-closed-form"

    double lambda1() const { return eigenvalues.at(1); }
};

// Divergence-form second-order finite differences on the periodic parameter
// grid; symmetric generalized eigenproblem against the volume-density mass
// matrix; grid doubled until lambda_1 settles.
SpectrumResult laplace_spectrum(const InducedGeometry& geom, const SpectrumOptions& opts = {});

// Closed form for a constant induced metric on a periodic box: eigenvalues
// are w(k)^T G^{-1} w(k) with w(k)_a = 2 pi k_a / P_a over integer k.
// Throws if the induced metric is not constant across nodes.
SpectrumResult lattice_spectrum(const InducedGeometry& geom, int k);

struct StabilityVerdict {
    bool stable = false;
    bool marginal = false;       // |lambda_1 - threshold| below the band
    bool corollary_path = false; // threshold <= 0, stable for any lambda_1
    double threshold = 0.0;      // A + 2 eps
};

StabilityVerdict stability_verdict(double lambda1, double A, int eps, double marginal_band = 1e-3);

std::string verdict_string(const StabilityVerdict& v);

} // namespace psk
