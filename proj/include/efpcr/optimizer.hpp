#pragma once

#include <functional>

#include "efpcr/core_numerics.hpp"

namespace efpcr {

/// Returns f(theta) and writes the exact gradient into `grad`.
using ObjectiveWithGradient = std::function<double(const Vector& theta, Vector& grad)>;

struct QuasiNewtonOptions
{
    int memory = 10;
    double gradient_tolerance = 1e-6;
    int max_iterations = 500;
    int max_line_search_steps = 40;
    /// Sufficient-increase constant.
    double armijo = 1e-4;
    /// Curvature constant of the strong Wolfe conditions.
    double wolfe = 0.9;
};

struct QuasiNewtonResult
{
    Vector theta;
    double value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Limited-memory BFGS ascent for a concave objective with a strong Wolfe
/// line search. Accepted iterates never decrease the objective; on a line
/// search failure the best iterate is returned with converged = false.
QuasiNewtonResult quasi_newton_maximize(const ObjectiveWithGradient& objective, const Vector& theta0,
                                        const QuasiNewtonOptions& options = {});

} // namespace efpcr
