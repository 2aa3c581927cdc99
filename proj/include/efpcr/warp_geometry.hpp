#pragma once

#include <cstdint>
#include <vector>

#include "efpcr/core_numerics.hpp"

namespace efpcr {

/// Boundary-pinned, strictly increasing map of [0, 1] sampled on a grid.
struct WarpingFunction
{
    /// Validates gamma(0) = 0, gamma(1) = 1 (snapping values within 1e-9)
    /// and strict increase; throws InvalidWarpError otherwise.
    WarpingFunction(Grid grid, Vector values);

    Grid grid;
    Vector values;
};

/// Square-root-derivative representation of a warp, a point on the unit
/// Hilbert sphere.
struct PsiFunction
{
    PsiFunction(Grid grid, Vector values);

    Grid grid;
    Vector values;
};

/// Tangent vector at `base` on the Hilbert sphere.
struct ShootingVector
{
    ShootingVector(Vector values, PsiFunction base);

    const Grid& grid() const noexcept { return base.grid; }

    Vector values;
    PsiFunction base;
};

WarpingFunction identity_warp(const Grid& grid);
PsiFunction identity_psi(const Grid& grid);

/// gamma^{-1}, by swapping abscissa and ordinate and re-interpolating.
WarpingFunction invert_warp(const WarpingFunction& gamma);

/// (outer o inner)(t) = outer(inner(t)).
WarpingFunction compose_warps(const WarpingFunction& outer, const WarpingFunction& inner);

/// f o gamma on f's grid.
SampledFunction compose(const SampledFunction& f, const WarpingFunction& gamma);

PsiFunction to_psi(const WarpingFunction& gamma);
WarpingFunction from_psi(const PsiFunction& psi);

/// Geodesic shooting on the unit sphere. Throws InjectivityRadiusError when
/// |v| >= pi and ParameterError when v is not tangent at `base`.
PsiFunction exp_map(const PsiFunction& base, const Vector& v);
PsiFunction exp_map(const PsiFunction& base, const ShootingVector& v);

/// Tangent vector at `base` pointing at `target` with length equal to the arc
/// distance. Throws UndefinedLogError for antipodal points.
ShootingVector inv_exp_map(const PsiFunction& base, const PsiFunction& target);

/// Arc length between two points of the sphere, in [0, pi].
double sphere_distance(const PsiFunction& a, const PsiFunction& b);
double phase_distance(const WarpingFunction& a, const WarpingFunction& b);

struct KarcherOptions
{
    double step_size = 0.3;
    double tolerance = 1e-6;
    int max_iterations = 50;
};

struct KarcherMean
{
    WarpingFunction mean;
    PsiFunction psi_mean;
    std::vector<ShootingVector> shooting_vectors;
    int iterations = 0;
};

/// Thrown by warp_karcher_mean when the tangent mean does not shrink below the
/// tolerance; carries the last iterate.
class KarcherConvergenceError : public ConvergenceError
{
public:
    KarcherConvergenceError(const std::string& what, int iterations, PsiFunction last)
        : ConvergenceError(what, iterations), last_(std::move(last))
    {}

    const PsiFunction& last_iterate() const noexcept { return last_; }

private:
    PsiFunction last_;
};

/// Intrinsic mean of warps on the sphere of psi functions by gradient steps in
/// the tangent space, started from the normalized extrinsic mean. Returns the
/// mean and every input's shooting vector at it.
KarcherMean warp_karcher_mean(const std::vector<WarpingFunction>& warps, const KarcherOptions& options = {});

/// Smooth random warp: exp_map at psi_id of a tangent vector drawn from the
/// span of sin(k pi t), k = 1..4, with norm uniform in [0, amplitude].
WarpingFunction random_warp(const Grid& grid, double amplitude, std::uint64_t seed);

} // namespace efpcr
