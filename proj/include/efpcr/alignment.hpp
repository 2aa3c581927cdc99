#pragma once

#include <vector>

#include "efpcr/srsf.hpp"
#include "efpcr/warp_geometry.hpp"

namespace efpcr {

struct DpOptions
{
    /// Path segments move (a, b) lattice cells with gcd(a, b) = 1 and
    /// 1 <= a, b <= max_step, so local slopes lie in [1/max_step, max_step].
    int max_step = 8;
};

/// Warp gamma minimizing |q1 - (q2 o gamma) sqrt(gamma')| over piecewise
/// linear paths through the T x T lattice of a uniform grid (T >= 8).
WarpingFunction optimal_warp(const Srsf& q1, const Srsf& q2, const DpOptions& options = {});

/// SRSF-space cost of a given warp, |q1 - warp_srsf(q2, gamma)|.
double warp_cost(const Srsf& q1, const Srsf& q2, const WarpingFunction& gamma);

/// Elastic amplitude distance between two functions on a shared grid.
double amplitude_distance(const SampledFunction& f1, const SampledFunction& f2, const DpOptions& options = {});

struct AlignOptions
{
    DpOptions dp;
    KarcherOptions karcher;
    GradientOptions gradient;
    /// Stop when the relative change in |mu| drops below this.
    double tolerance = 1e-4;
    int max_iterations = 20;
    /// Centering repeats while the warps' Karcher mean is farther than this
    /// phase distance from the identity.
    double centering_tolerance = 1e-4;
    int max_centering_rounds = 10;
};

/// What a new sample needs to be aligned the same way as the training set.
struct AlignmentReference
{
    Srsf mean_srsf;
    PsiFunction psi_mean;
    GradientOptions gradient;
    DpOptions dp;
    /// Uncentered mean that new samples are DP-aligned to.
    Srsf target;
    /// Warp composed onto every DP warp.
    WarpingFunction centering;
};

/// One function decomposed against an alignment reference.
struct SamplePieces
{
    SampledFunction original;
    Srsf aligned_srsf;
    WarpingFunction warp;
    ShootingVector shooting;
};

struct AlignedSet
{
    Srsf mean_srsf;
    std::vector<SampledFunction> originals;
    std::vector<Srsf> aligned_srsfs;
    std::vector<SampledFunction> aligned_functions;
    std::vector<WarpingFunction> warps;
    std::vector<ShootingVector> shooting_vectors;
    PsiFunction psi_mean;
    GradientOptions gradient;
    DpOptions dp;
    Srsf target;
    WarpingFunction centering;
    int iterations = 0;

    Index size() const noexcept { return static_cast<Index>(originals.size()); }
    const Grid& grid() const noexcept { return mean_srsf.grid; }
    AlignmentReference reference() const { return {mean_srsf, psi_mean, gradient, dp, target, centering}; }
    SamplePieces pieces(Index i) const;
};

/// DP-aligns f to the reference target and composes the centering warp, so a
/// training sample reproduces its stored pieces exactly.
SamplePieces align_to_reference(const AlignmentReference& reference, const SampledFunction& f);

/// Groupwise elastic alignment. Alternates DP alignment of every SRSF to the
/// current mean with a mean update, aligns every sample to the converged
/// mean, then centers by composing all warps with the inverse Karcher mean of
/// the warps. mean_srsf is the mean of the centered aligned SRSFs; shooting
/// vectors are taken at the Karcher mean of the centered warps.
AlignedSet align_set(const std::vector<SampledFunction>& fs, const AlignOptions& options = {});

} // namespace efpcr
