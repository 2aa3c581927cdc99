#include "efpcr/core_numerics.hpp"

#include <string>

namespace efpcr {

namespace {

constexpr double endpoint_tolerance = 1e-12;

void validate_times(Vector& t)
{
    if (t.size() < 3)
        throw InvalidGridError("grid needs at least 3 points, got " + std::to_string(t.size()));
    if (!t.allFinite())
        throw InvalidGridError("grid contains non-finite times");
    if (std::abs(t(0)) > endpoint_tolerance || std::abs(t(t.size() - 1) - 1.0) > endpoint_tolerance)
        throw InvalidGridError("grid must start at 0 and end at 1");
    t(0) = 0.0;
    t(t.size() - 1) = 1.0;
    for (Index i = 1; i < t.size(); ++i)
        if (!(t(i) > t(i - 1)))
            throw InvalidGridError("grid is not strictly increasing at index " + std::to_string(i));
}

} // namespace

Grid::Grid(Vector times)
{
    validate_times(times);
    Vector w = trapezoid_weights(times);
    data_ = std::make_shared<const Data>(Data{std::move(times), std::move(w)});
}

Grid Grid::uniform(Index size)
{
    if (size < 3)
        throw InvalidGridError("grid needs at least 3 points, got " + std::to_string(size));
    return Grid(Vector::LinSpaced(size, 0.0, 1.0));
}

Grid Grid::normalized(const Vector& raw_times)
{
    if (raw_times.size() < 3)
        throw InvalidGridError("grid needs at least 3 points, got " + std::to_string(raw_times.size()));
    const double lo = raw_times(0);
    const double span = raw_times(raw_times.size() - 1) - lo;
    if (!(span > 0.0) || !std::isfinite(span))
        throw InvalidGridError("raw times do not span a positive finite interval");
    Vector t = (raw_times.array() - lo) / span;
    t(0) = 0.0;
    t(t.size() - 1) = 1.0;
    return Grid(std::move(t));
}

bool Grid::is_uniform(double rel_tol) const
{
    const double h = mean_step();
    const Vector& t = times();
    for (Index i = 1; i < t.size(); ++i)
        if (std::abs((t(i) - t(i - 1)) - h) > rel_tol * h)
            return false;
    return true;
}

bool operator==(const Grid& a, const Grid& b)
{
    if (a.data_ == b.data_)
        return true;
    return a.size() == b.size() && a.times() == b.times();
}

SampledFunction::SampledFunction(Grid g, Vector v) : grid(std::move(g)), values(std::move(v))
{
    if (values.size() != grid.size())
        throw DimensionError("function has " + std::to_string(values.size()) + " values on a grid of "
                             + std::to_string(grid.size()) + " points");
    if (!values.allFinite())
        throw ParameterError("function values must be finite");
}

void require_same_grid(const Grid& a, const Grid& b)
{
    if (a != b)
        throw GridMismatchError();
}

SampledFunction resample(const SampledFunction& f, const Grid& target)
{
    if (f.grid == target)
        return f;
    return SampledFunction(target, interp_linear(f.grid.times(), f.values, target.times()));
}

SampledFunction gradient(const SampledFunction& f, const GradientOptions& options)
{
    if (options.smoothing_half_window > 0) {
        const Vector smoothed = moving_average(f.values, options.smoothing_half_window);
        return SampledFunction(f.grid, finite_difference(f.grid.times(), smoothed));
    }
    return SampledFunction(f.grid, finite_difference(f.grid.times(), f.values));
}

double integrate(const SampledFunction& f)
{
    return f.grid.weights().dot(f.values);
}

double inner_product(const SampledFunction& f, const SampledFunction& g)
{
    require_same_grid(f.grid, g.grid);
    return inner_product(f.grid, f.values, g.values);
}

double l2_norm(const SampledFunction& f)
{
    return l2_norm(f.grid, f.values);
}

SampledFunction cumulative_integral(const SampledFunction& f)
{
    return SampledFunction(f.grid, cumtrapz(f.grid.times(), f.values));
}

} // namespace efpcr
