#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace psk {

// Seeded generator with reproducible double extraction (no distribution
// objects, so streams are identical across standard library versions).
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    Eigen::VectorXd vector(int dim, double scale = 1.0)
    {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = scale * (2.0 * unit() - 1.0);
        return v;
    }

    std::vector<double> point(const std::vector<double>& lo, const std::vector<double>& hi)
    {
        std::vector<double> p(lo.size());
        for (size_t i = 0; i < lo.size(); ++i) p[i] = uniform(lo[i], hi[i]);
        return p;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace psk
