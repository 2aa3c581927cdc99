#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#ifndef SUPPORT_NO_DOCTEST
#include "doctest.h"
#endif

#include "efpcr/alignment.hpp"
#include "efpcr/fpca.hpp"
#include "efpcr/regression.hpp"

namespace support {

using namespace efpcr;

constexpr double pi = std::numbers::pi;

template <class F>
SampledFunction sample(const Grid& grid, F f)
{
    Vector v(grid.size());
    for (Index i = 0; i < grid.size(); ++i)
        v(i) = f(grid[i]);
    return {grid, v};
}

inline double max_abs(const Vector& v)
{
    return v.cwiseAbs().maxCoeff();
}

/// Hand-rolled generators over a seeded stream.
class Gen
{
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::uint64_t seed() { return rng_(); }

    Vector vector(Index n)
    {
        Vector v(n);
        for (Index i = 0; i < n; ++i)
            v(i) = normal();
        return v;
    }

    Matrix matrix(Index rows, Index cols)
    {
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index k = 0; k < cols; ++k)
                m(i, k) = normal();
        return m;
    }

    /// Smooth function from a few random low-frequency Fourier terms.
    SampledFunction smooth(const Grid& grid, int terms = 3)
    {
        std::vector<double> a(static_cast<std::size_t>(terms));
        std::vector<double> b(static_cast<std::size_t>(terms));
        for (int k = 0; k < terms; ++k) {
            a[static_cast<std::size_t>(k)] = normal() / (k + 1);
            b[static_cast<std::size_t>(k)] = normal() / (k + 1);
        }
        const double c = normal();
        return sample(grid, [&](double t) {
            double s = c;
            for (int k = 0; k < terms; ++k)
                s += a[static_cast<std::size_t>(k)] * std::sin(2 * pi * (k + 1) * t)
                     + b[static_cast<std::size_t>(k)] * std::cos(2 * pi * (k + 1) * t);
            return s;
        });
    }

    /// Smooth warp t + a t (1 - t) with |a| < 1.
    WarpingFunction quadratic_warp(const Grid& grid, double max_a = 0.6)
    {
        const double a = uniform(-max_a, max_a);
        return quadratic(grid, a);
    }

    static WarpingFunction quadratic(const Grid& grid, double a)
    {
        return {grid, sample(grid, [a](double t) { return t + a * t * (1.0 - t); }).values};
    }

    /// Random unit-norm tangent vector at psi scaled to `norm`.
    Vector tangent(const PsiFunction& psi, double norm)
    {
        const Grid& grid = psi.grid;
        Vector v = smooth(grid, 4).values;
        v -= inner_product(grid, v, psi.values) * psi.values;
        return norm * v / l2_norm(grid, v);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Gaussian bump family used across the alignment tests.
inline SampledFunction bump(const Grid& grid, double a, double mu, double sigma = 0.075)
{
    return sample(grid, [=](double t) {
        return a / std::sqrt(2 * pi * sigma * sigma) * std::exp(-(t - mu) * (t - mu) / (2 * sigma * sigma));
    });
}

/// Warped bumps: one shared shape under seeded random warps.
inline std::vector<SampledFunction> warped_bumps(const Grid& grid, Index n, std::uint64_t seed, double amplitude = 0.4)
{
    Gen g(seed);
    std::vector<SampledFunction> out;
    for (Index i = 0; i < n; ++i) {
        const double a = 3.0 + 0.3 * g.normal();
        const double mu = 0.45 + 0.05 * g.normal();
        out.push_back(compose(bump(grid, a, mu), random_warp(grid, amplitude, g.seed())));
    }
    return out;
}

/// Two-harmonic function with random coefficients.
struct Harmonic
{
    double c[4];

    explicit Harmonic(Gen& gen)
    {
        for (double& x : c)
            x = gen.normal();
    }

    double operator()(double t) const
    {
        return c[0] * std::sin(2 * pi * t) + c[1] * std::cos(2 * pi * t) + 0.5 * c[2] * std::sin(4 * pi * t)
               + 0.5 * c[3] * std::cos(4 * pi * t);
    }
};

/// f sampled at gamma(t), evaluated analytically.
template <class F>
SampledFunction at_warp(const WarpingFunction& gamma, F f)
{
    Vector v(gamma.grid.size());
    for (Index i = 0; i < v.size(); ++i)
        v(i) = f(gamma.values(i));
    return {gamma.grid, v};
}

/// Smooth warp with a sizeable phase change and slopes inside [0.3, 3].
inline WarpingFunction moderate_warp(Gen& gen, const Grid& g)
{
    if (gen.uniform() < 0.5)
        return Gen::quadratic(g, gen.uniform(0.3, 0.6) * (gen.uniform() < 0.5 ? -1.0 : 1.0));
    const PsiFunction id = identity_psi(g);
    for (;;) {
        const double c1 = gen.normal();
        const double c2 = gen.normal();
        Vector v = sample(g, [&](double t) { return c1 * std::cos(pi * t) + c2 * std::cos(2 * pi * t); }).values;
        v *= gen.uniform(0.15, 0.3) / l2_norm(g, v);
        const WarpingFunction gamma = from_psi(exp_map(id, v));
        const Vector slope = to_psi(gamma).values.array().square();
        if (slope.minCoeff() >= 0.3 && slope.maxCoeff() <= 3.0)
            return gamma;
    }
}

} // namespace support
