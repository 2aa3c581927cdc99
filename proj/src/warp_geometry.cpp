#include "efpcr/warp_geometry.hpp"

#include <numbers>
#include <random>
#include <string>

namespace efpcr {

namespace {

constexpr double boundary_tolerance = 1e-9;

double clamped_cosine(const Grid& grid, const Vector& a, const Vector& b)
{
    return std::clamp(inner_product(grid, a, b), -1.0, 1.0);
}

Vector normalized(const Grid& grid, const Vector& v)
{
    const double n = l2_norm(grid, v);
    return n > 0.0 ? Vector(v / n) : v;
}

} // namespace

WarpingFunction::WarpingFunction(Grid g, Vector v) : grid(std::move(g)), values(std::move(v))
{
    const Index n = values.size();
    if (n != grid.size())
        throw DimensionError("warp has " + std::to_string(n) + " values on a grid of " + std::to_string(grid.size())
                             + " points");
    if (!values.allFinite())
        throw InvalidWarpError("warp values must be finite");
    if (std::abs(values(0)) > boundary_tolerance || std::abs(values(n - 1) - 1.0) > boundary_tolerance)
        throw InvalidWarpError("warp must satisfy gamma(0) = 0 and gamma(1) = 1");
    values(0) = 0.0;
    values(n - 1) = 1.0;
    for (Index i = 1; i < n; ++i)
        if (!(values(i) > values(i - 1)))
            throw InvalidWarpError("warp is not strictly increasing at index " + std::to_string(i));
}

PsiFunction::PsiFunction(Grid g, Vector v) : grid(std::move(g)), values(std::move(v))
{
    if (values.size() != grid.size())
        throw DimensionError("psi size does not match its grid");
    if (!values.allFinite())
        throw ParameterError("psi values must be finite");
}

ShootingVector::ShootingVector(Vector v, PsiFunction b) : values(std::move(v)), base(std::move(b))
{
    if (values.size() != base.grid.size())
        throw DimensionError("shooting vector size does not match its base point");
}

WarpingFunction identity_warp(const Grid& grid)
{
    return WarpingFunction(grid, grid.times());
}

PsiFunction identity_psi(const Grid& grid)
{
    return PsiFunction(grid, Vector::Ones(grid.size()));
}

WarpingFunction invert_warp(const WarpingFunction& gamma)
{
    const Vector& t = gamma.grid.times();
    return WarpingFunction(gamma.grid, interp_linear(gamma.values, t, t));
}

WarpingFunction compose_warps(const WarpingFunction& outer, const WarpingFunction& inner)
{
    require_same_grid(outer.grid, inner.grid);
    return WarpingFunction(outer.grid, interp_linear(outer.grid.times(), outer.values, inner.values));
}

SampledFunction compose(const SampledFunction& f, const WarpingFunction& gamma)
{
    require_same_grid(f.grid, gamma.grid);
    return SampledFunction(f.grid, interp_linear(f.grid.times(), f.values, gamma.values));
}

PsiFunction to_psi(const WarpingFunction& gamma)
{
    const Vector slope = finite_difference(gamma.grid.times(), gamma.values);
    Vector psi = slope.cwiseMax(0.0).cwiseSqrt();
    const double norm = l2_norm(gamma.grid, psi);
    if (std::abs(norm - 1.0) > 1e-8)
        psi /= norm;
    return PsiFunction(gamma.grid, std::move(psi));
}

WarpingFunction from_psi(const PsiFunction& psi)
{
    Vector gamma = cumtrapz(psi.grid.times(), psi.values.cwiseAbs2());
    const double total = gamma(gamma.size() - 1);
    if (!(total > 0.0))
        throw InvalidWarpError("psi has zero norm");
    gamma /= total;
    return WarpingFunction(psi.grid, std::move(gamma));
}

PsiFunction exp_map(const PsiFunction& base, const Vector& v)
{
    const Grid& grid = base.grid;
    if (v.size() != grid.size())
        throw DimensionError("tangent vector size does not match base point");
    const double norm = l2_norm(grid, v);
    if (norm >= std::numbers::pi)
        throw InjectivityRadiusError("tangent vector norm " + std::to_string(norm) + " is not below pi");
    if (std::abs(inner_product(grid, v, base.values)) > 1e-6 * std::max(1.0, norm))
        throw ParameterError("vector is not tangent at the base point");
    if (norm < 1e-14)
        return base;
    Vector out = std::cos(norm) * base.values + (std::sin(norm) / norm) * v;
    return PsiFunction(grid, normalized(grid, out));
}

PsiFunction exp_map(const PsiFunction& base, const ShootingVector& v)
{
    require_same_grid(base.grid, v.grid());
    return exp_map(base, v.values);
}

ShootingVector inv_exp_map(const PsiFunction& base, const PsiFunction& target)
{
    require_same_grid(base.grid, target.grid);
    const double theta = std::acos(clamped_cosine(base.grid, base.values, target.values));
    if (theta < 1e-12)
        return ShootingVector(Vector::Zero(base.grid.size()), base);
    if (std::numbers::pi - theta < 1e-8)
        throw UndefinedLogError("inverse exponential map is undefined between antipodal points");
    Vector v = (theta / std::sin(theta)) * (target.values - std::cos(theta) * base.values);
    return ShootingVector(std::move(v), base);
}

double sphere_distance(const PsiFunction& a, const PsiFunction& b)
{
    require_same_grid(a.grid, b.grid);
    return std::acos(clamped_cosine(a.grid, a.values, b.values));
}

double phase_distance(const WarpingFunction& a, const WarpingFunction& b)
{
    return sphere_distance(to_psi(a), to_psi(b));
}

KarcherMean warp_karcher_mean(const std::vector<WarpingFunction>& warps, const KarcherOptions& options)
{
    if (warps.empty())
        throw ParameterError("Karcher mean of an empty set");
    const Grid& grid = warps.front().grid;
    const Index T = grid.size();
    const auto n = static_cast<double>(warps.size());

    std::vector<PsiFunction> psis;
    psis.reserve(warps.size());
    Vector extrinsic = Vector::Zero(T);
    for (const auto& gamma : warps) {
        require_same_grid(grid, gamma.grid);
        psis.push_back(to_psi(gamma));
        extrinsic += psis.back().values;
    }
    PsiFunction mu(grid, normalized(grid, extrinsic / n));

    for (int iter = 0;; ++iter) {
        std::vector<ShootingVector> shooting;
        shooting.reserve(psis.size());
        Vector mean_v = Vector::Zero(T);
        for (const auto& psi : psis) {
            shooting.push_back(inv_exp_map(mu, psi));
            mean_v += shooting.back().values;
        }
        mean_v /= n;
        if (l2_norm(grid, mean_v) < options.tolerance)
            return KarcherMean{from_psi(mu), mu, std::move(shooting), iter};
        if (iter >= options.max_iterations)
            throw KarcherConvergenceError("Karcher mean did not converge in " + std::to_string(iter) + " iterations",
                                          iter, mu);
        // Remove the residual normal component so the step stays tangent.
        mean_v -= inner_product(grid, mean_v, mu.values) * mu.values;
        mu = exp_map(mu, Vector(options.step_size * mean_v));
    }
}

WarpingFunction random_warp(const Grid& grid, double amplitude, std::uint64_t seed)
{
    if (amplitude < 0.0)
        throw ParameterError("warp amplitude must be non-negative");
    if (amplitude == 0.0)
        return identity_warp(grid);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const Vector& t = grid.times();
    Vector v = Vector::Zero(grid.size());
    for (int k = 1; k <= 4; ++k)
        v += normal(rng) * (k * std::numbers::pi * t).array().sin().matrix();

    // psi_id = 1 has unit norm, so this is the tangent projection.
    v.array() -= inner_product(grid, v, Vector::Ones(grid.size()));
    const double norm = l2_norm(grid, v);
    if (norm == 0.0)
        return identity_warp(grid);
    v *= amplitude * uniform(rng) / norm;
    return from_psi(exp_map(identity_psi(grid), v));
}

} // namespace efpcr
