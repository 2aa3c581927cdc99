#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "efpcr/regression.hpp"

namespace efpcr {

/// Which kind of variability separates the simulated classes.
enum class Variability { combined, vertical, horizontal };

std::string_view to_string(Variability v);
Variability parse_variability(std::string_view name);

/// Gaussian-bump scenario: class j functions are
///   a_i / sqrt(2 pi sigma^2) exp(-(t - mu_j)^2 / (2 sigma^2)),  a_i ~ N(d_j, a_variance),
/// each observed through an independent random warp.
struct ScenarioSpec
{
    Variability kind = Variability::combined;
    Link target = Link::linear;
    Index n_per_class = 20;
    double sigma = 0.075;
    std::vector<double> mus;
    std::vector<double> ds;
    double a_variance = 0.05;
    double warp_amplitude = 0.4;
    /// Standard deviation of the additive response noise (linear target).
    double noise_sd = 0.01;
    Index n_points = 101;
    std::uint64_t seed = 0;

    Index n_classes() const { return static_cast<Index>(mus.size()); }
};

/// Class means/heights for the three variability types: three classes for the
/// linear and multinomial targets, two for the logistic target.
ScenarioSpec default_scenario(Variability kind, Link target, std::uint64_t seed = 0);

struct SimulatedData
{
    TrainingData data;
    std::vector<SampledFunction> originals;
    std::vector<WarpingFunction> warps;
    std::vector<int> classes;
    Vector amplitudes;
};

SimulatedData generate(const ScenarioSpec& spec);

/// beta(t) = 0.5 sin(2 pi t) + 0.9 cos(2 pi t).
SampledFunction beta_true(const Grid& grid);

/// y_i = alpha + <f_i, beta> + eps_i with eps_i ~ N(0, noise_sd^2).
Vector linear_response(const std::vector<SampledFunction>& fs, const SampledFunction& beta, double alpha,
                       double noise_sd, std::uint64_t seed);

} // namespace efpcr
