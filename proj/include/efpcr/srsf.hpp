#pragma once

#include "efpcr/core_numerics.hpp"
#include "efpcr/warp_geometry.hpp"

namespace efpcr {

/// Square-root slope function q = sign(f') sqrt(|f'|) together with f(0),
/// which q alone does not determine.
struct Srsf
{
    Srsf(Grid grid, Vector values, double f0 = 0.0);

    Grid grid;
    Vector values;
    double f0;
};

Srsf to_srsf(const SampledFunction& f, const GradientOptions& options = {});

/// f(t) = f0 + int_0^t q|q|.
SampledFunction from_srsf(const Srsf& q);

/// Group action (q o gamma) sqrt(gamma'); f0 is carried over unchanged.
Srsf warp_srsf(const Srsf& q, const WarpingFunction& gamma);

/// L2 distance between two SRSFs on the same grid.
double srsf_distance(const Srsf& a, const Srsf& b);

} // namespace efpcr
