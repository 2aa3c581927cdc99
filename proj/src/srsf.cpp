#include "efpcr/srsf.hpp"

namespace efpcr {

Srsf::Srsf(Grid g, Vector v, double initial) : grid(std::move(g)), values(std::move(v)), f0(initial)
{
    if (values.size() != grid.size())
        throw DimensionError("SRSF size does not match its grid");
    if (!values.allFinite() || !std::isfinite(f0))
        throw ParameterError("SRSF values must be finite");
}

Srsf to_srsf(const SampledFunction& f, const GradientOptions& options)
{
    const Vector slope = gradient(f, options).values;
    // sign(0) * sqrt(0) = 0 keeps q continuous through critical points.
    Vector q = slope.unaryExpr([](double d) { return d >= 0.0 ? std::sqrt(d) : -std::sqrt(-d); });
    return Srsf(f.grid, std::move(q), f.values(0));
}

SampledFunction from_srsf(const Srsf& q)
{
    const Vector integrand = q.values.cwiseProduct(q.values.cwiseAbs());
    Vector f = cumtrapz(q.grid.times(), integrand);
    f.array() += q.f0;
    return SampledFunction(q.grid, std::move(f));
}

Srsf warp_srsf(const Srsf& q, const WarpingFunction& gamma)
{
    require_same_grid(q.grid, gamma.grid);
    const Vector& t = q.grid.times();
    const Vector slope = finite_difference(t, gamma.values).cwiseMax(0.0);
    Vector warped = interp_linear(t, q.values, gamma.values).cwiseProduct(slope.cwiseSqrt());
    return Srsf(q.grid, std::move(warped), q.f0);
}

double srsf_distance(const Srsf& a, const Srsf& b)
{
    require_same_grid(a.grid, b.grid);
    return l2_norm(a.grid, Vector(a.values - b.values));
}

} // namespace efpcr
