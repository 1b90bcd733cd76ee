#pragma once

// Forward-mode second-order jets: value, gradient and symmetric Hessian
// propagated together through arithmetic and elementary functions.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace psk {

inline constexpr int kMaxJetDim = 6;

// Number of packed entries of a symmetric dim x dim matrix.
constexpr int packed_size(int dim) { return dim * (dim + 1) / 2; }

// Packed index of entry (i,j) with i <= j.
constexpr int packed_index(int i, int j)
{
    return (i <= j) ? j * (j + 1) / 2 + i : i * (i + 1) / 2 + j;
}

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A truncated second-order Taylor expansion in `dim` variables.
// The Hessian is stored packed, so it is symmetric by construction.
struct Jet {
    double v = 0.0;
    int dim = 0;
    std::array<double, kMaxJetDim> g{};
    std::array<double, packed_size(kMaxJetDim)> h{};

    Jet() = default;
    explicit Jet(double value, int d) : v(value), dim(d) {}

    static Jet constant(double value, int d) { return Jet(value, d); }

    static Jet variable(double value, int index, int d)
    {
        Jet j(value, d);
        j.g[static_cast<size_t>(index)] = 1.0;
        return j;
    }

    double grad(int i) const { return g[static_cast<size_t>(i)]; }
    double hess(int i, int j) const { return h[static_cast<size_t>(packed_index(i, j))]; }
};

namespace detail {

// w = f(u) with f1 = f'(u.v), f2 = f''(u.v).
inline Jet unary_chain(const Jet& u, double value, double f1, double f2)
{
    Jet w(value, u.dim);
    for (int i = 0; i < u.dim; ++i) w.g[i] = f1 * u.g[i];
    for (int j = 0; j < u.dim; ++j)
        for (int i = 0; i <= j; ++i) {
            const int p = packed_index(i, j);
            w.h[p] = f1 * u.h[p] + f2 * u.g[i] * u.g[j];
        }
    return w;
}

} // namespace detail

inline Jet operator-(const Jet& u)
{
    Jet w(-u.v, u.dim);
    for (int i = 0; i < u.dim; ++i) w.g[i] = -u.g[i];
    for (int p = 0; p < packed_size(u.dim); ++p) w.h[p] = -u.h[p];
    return w;
}

inline Jet operator+(const Jet& a, const Jet& b)
{
    Jet w(a.v + b.v, a.dim);
    for (int i = 0; i < a.dim; ++i) w.g[i] = a.g[i] + b.g[i];
    for (int p = 0; p < packed_size(a.dim); ++p) w.h[p] = a.h[p] + b.h[p];
    return w;
}

inline Jet operator-(const Jet& a, const Jet& b)
{
    Jet w(a.v - b.v, a.dim);
    for (int i = 0; i < a.dim; ++i) w.g[i] = a.g[i] - b.g[i];
    for (int p = 0; p < packed_size(a.dim); ++p) w.h[p] = a.h[p] - b.h[p];
    return w;
}

inline Jet operator*(const Jet& a, const Jet& b)
{
    Jet w(a.v * b.v, a.dim);
    for (int i = 0; i < a.dim; ++i) w.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int j = 0; j < a.dim; ++j)
        for (int i = 0; i <= j; ++i) {
            const int p = packed_index(i, j);
            w.h[p] = a.h[p] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[p];
        }
    return w;
}

inline Jet operator/(const Jet& a, const Jet& b)
{
    if (b.v == 0.0) throw DomainError("division by zero");
    Jet w(a.v / b.v, a.dim);
    const double inv = 1.0 / b.v;
    for (int i = 0; i < a.dim; ++i) w.g[i] = (a.g[i] - w.v * b.g[i]) * inv;
    for (int j = 0; j < a.dim; ++j)
        for (int i = 0; i <= j; ++i) {
            const int p = packed_index(i, j);
            w.h[p] = (a.h[p] - w.g[i] * b.g[j] - w.g[j] * b.g[i] - w.v * b.h[p]) * inv;
        }
    return w;
}

inline Jet sin(const Jet& u) { return detail::unary_chain(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v)); }
inline Jet cos(const Jet& u) { return detail::unary_chain(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v)); }
inline Jet exp(const Jet& u)
{
    const double e = std::exp(u.v);
    return detail::unary_chain(u, e, e, e);
}

inline Jet sqrt(const Jet& u)
{
    if (u.v <= 0.0) throw DomainError("sqrt of nonpositive value");
    const double r = std::sqrt(u.v);
    return detail::unary_chain(u, r, 0.5 / r, -0.25 / (r * u.v));
}

inline Jet log(const Jet& u)
{
    if (u.v <= 0.0) throw DomainError("ln of nonpositive value");
    return detail::unary_chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}

// u^c with constant exponent. Integer exponents keep the sign semantics of
// repeated multiplication (negative bases allowed); real exponents need u > 0.
inline Jet pow(const Jet& u, double c)
{
    const bool is_int = (c == std::nearbyint(c)) && std::abs(c) <= 64.0;
    if (!is_int && u.v <= 0.0) throw DomainError("real power of nonpositive base");
    if (is_int && u.v == 0.0 && c < 2.0) {
        if (c == 0.0) return Jet::constant(1.0, u.dim);
        if (c == 1.0) return u;
        throw DomainError("negative power of zero");
    }
    double f0, f1, f2;
    if (is_int) {
        const auto ipow = [](double x, long n) {
            double r = 1.0;
            const bool neg = n < 0;
            for (long k = 0; k < (neg ? -n : n); ++k) r *= x;
            return neg ? 1.0 / r : r;
        };
        const long n = static_cast<long>(c);
        f0 = ipow(u.v, n);
        f1 = c * ipow(u.v, n - 1);
        f2 = c * (c - 1.0) * ipow(u.v, n - 2);
    } else {
        f0 = std::pow(u.v, c);
        f1 = c * std::pow(u.v, c - 1.0);
        f2 = c * (c - 1.0) * std::pow(u.v, c - 2.0);
    }
    return detail::unary_chain(u, f0, f1, f2);
}

} // namespace psk
