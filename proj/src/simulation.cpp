#include "efpcr/simulation.hpp"

#include <numbers>
#include <random>
#include <string>

namespace efpcr {

namespace {

Vector gaussian_bump(const Vector& t, double amplitude, double mu, double sigma)
{
    const double scale = amplitude / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
    return scale * (-(t.array() - mu).square() / (2.0 * sigma * sigma)).exp();
}

} // namespace

std::string_view to_string(Variability v)
{
    switch (v) {
    case Variability::combined: return "combined";
    case Variability::vertical: return "vertical";
    case Variability::horizontal: return "horizontal";
    }
    return "unknown";
}

Variability parse_variability(std::string_view name)
{
    if (name == "combined")
        return Variability::combined;
    if (name == "vertical" || name == "amplitude")
        return Variability::vertical;
    if (name == "horizontal" || name == "phase")
        return Variability::horizontal;
    throw ParameterError("unknown scenario '" + std::string(name) + "'");
}

ScenarioSpec default_scenario(Variability kind, Link target, std::uint64_t seed)
{
    ScenarioSpec spec;
    spec.kind = kind;
    spec.target = target;
    spec.seed = seed;
    if (target == Link::logistic) {
        switch (kind) {
        case Variability::combined: spec.mus = {0.35, 0.37}; spec.ds = {4.0, 3.0}; break;
        case Variability::vertical: spec.mus = {0.35, 0.35}; spec.ds = {4.0, 3.7}; break;
        case Variability::horizontal: spec.mus = {0.35, 0.40}; spec.ds = {4.0, 4.0}; break;
        }
    } else {
        switch (kind) {
        case Variability::combined: spec.mus = {0.35, 0.37, 0.40}; spec.ds = {4.0, 3.0, 2.0}; break;
        case Variability::vertical: spec.mus = {0.35, 0.35, 0.35}; spec.ds = {4.0, 3.7, 4.0}; break;
        case Variability::horizontal: spec.mus = {0.35, 0.40, 0.50}; spec.ds = {4.0, 4.0, 4.0}; break;
        }
    }
    return spec;
}

SampledFunction beta_true(const Grid& grid)
{
    const Vector arg = 2.0 * std::numbers::pi * grid.times();
    return SampledFunction(grid, 0.5 * arg.array().sin() + 0.9 * arg.array().cos());
}

Vector linear_response(const std::vector<SampledFunction>& fs, const SampledFunction& beta, double alpha,
                       double noise_sd, std::uint64_t seed)
{
    if (noise_sd < 0.0)
        throw ParameterError("noise standard deviation must be non-negative");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    Vector y(static_cast<Index>(fs.size()));
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const double eps = noise_sd > 0.0 ? noise_sd * noise(rng) : 0.0;
        y(static_cast<Index>(i)) = alpha + inner_product(fs[i], beta) + eps;
    }
    return y;
}

SimulatedData generate(const ScenarioSpec& spec)
{
    if (!(spec.sigma > 0.0))
        throw ParameterError("sigma must be positive");
    if (spec.a_variance < 0.0)
        throw ParameterError("amplitude variance must be non-negative");
    const Index expected = spec.target == Link::logistic ? 2 : 3;
    if (static_cast<Index>(spec.mus.size()) != expected || spec.ds.size() != spec.mus.size())
        throw ParameterError("scenario needs " + std::to_string(expected) + " class means and heights");
    if (spec.n_per_class < 1)
        throw ParameterError("need at least one function per class");

    const Grid grid = Grid::uniform(spec.n_points);
    const Vector& t = grid.times();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double a_sd = std::sqrt(spec.a_variance);

    const Index n = spec.n_per_class * spec.n_classes();
    SimulatedData out{TrainingData{{}, Vector(n)}, {}, {}, {}, Vector(n)};
    out.data.functions.reserve(static_cast<std::size_t>(n));
    Index row = 0;
    for (Index j = 0; j < spec.n_classes(); ++j) {
        const auto cls = static_cast<std::size_t>(j);
        for (Index i = 0; i < spec.n_per_class; ++i, ++row) {
            const double a = spec.ds[cls] + (a_sd > 0.0 ? a_sd * normal(rng) : 0.0);
            const std::uint64_t warp_seed = rng();
            WarpingFunction gamma = random_warp(grid, spec.warp_amplitude, warp_seed);
            out.originals.emplace_back(grid, gaussian_bump(t, a, spec.mus[cls], spec.sigma));
            out.data.functions.emplace_back(grid, gaussian_bump(gamma.values, a, spec.mus[cls], spec.sigma));
            out.warps.push_back(std::move(gamma));
            out.classes.push_back(static_cast<int>(j) + 1);
            out.amplitudes(row) = a;
        }
    }

    switch (spec.target) {
    case Link::linear:
        // Responses use the unwarped functions.
        out.data.responses = linear_response(out.originals, beta_true(grid), 0.0, spec.noise_sd, rng());
        break;
    case Link::logistic:
        for (Index k = 0; k < n; ++k)
            out.data.responses(k) = out.classes[static_cast<std::size_t>(k)] == 1 ? 1.0 : -1.0;
        break;
    case Link::multinomial:
        for (Index k = 0; k < n; ++k)
            out.data.responses(k) = out.classes[static_cast<std::size_t>(k)];
        break;
    }
    return out;
}

} // namespace efpcr
