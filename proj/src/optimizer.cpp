#include "efpcr/optimizer.hpp"

#include <deque>
#include <limits>

namespace efpcr {

namespace {

// Internally we minimize F = -f.
struct Probe
{
    double alpha;
    double value;
    double slope;
    Vector x;
    Vector grad;
};

class Minimizer
{
public:
    Minimizer(const ObjectiveWithGradient& objective, const QuasiNewtonOptions& options)
        : objective_(objective), options_(options)
    {}

    double evaluate(const Vector& x, Vector& grad) const
    {
        grad.resize(x.size());
        const double f = objective_(x, grad);
        grad = -grad;
        return std::isfinite(f) ? -f : std::numeric_limits<double>::infinity();
    }

    Probe probe(const Vector& x, const Vector& d, double alpha) const
    {
        Probe p{alpha, 0.0, 0.0, x + alpha * d, Vector()};
        p.value = evaluate(p.x, p.grad);
        p.slope = std::isfinite(p.value) ? p.grad.dot(d) : 0.0;
        return p;
    }

    // Strong Wolfe line search, Nocedal & Wright algorithms 3.5 / 3.6.
    bool line_search(const Vector& x, double f0, double slope0, const Vector& d, double alpha0, Probe& out) const
    {
        const double c1 = options_.armijo;
        const double c2 = options_.wolfe;
        Probe prev{0.0, f0, slope0, x, Vector()};
        double alpha = alpha0;
        int evals = 0;
        for (bool first = true; evals < options_.max_line_search_steps; first = false) {
            Probe cur = probe(x, d, alpha);
            ++evals;
            if (cur.value > f0 + c1 * alpha * slope0 || (!first && cur.value >= prev.value))
                return zoom(x, f0, slope0, d, prev, cur, evals, out);
            if (std::abs(cur.slope) <= -c2 * slope0) {
                out = std::move(cur);
                return true;
            }
            if (cur.slope >= 0.0)
                return zoom(x, f0, slope0, d, cur, prev, evals, out);
            prev = std::move(cur);
            alpha *= 2.0;
        }
        return false;
    }

    bool zoom(const Vector& x, double f0, double slope0, const Vector& d, Probe lo, Probe hi, int evals,
              Probe& out) const
    {
        const double c1 = options_.armijo;
        const double c2 = options_.wolfe;
        for (; evals < options_.max_line_search_steps; ++evals) {
            const double a = std::min(lo.alpha, hi.alpha);
            const double b = std::max(lo.alpha, hi.alpha);
            double alpha = interpolate(lo, hi);
            const double margin = 0.1 * (b - a);
            if (!std::isfinite(alpha) || alpha < a + margin || alpha > b - margin)
                alpha = 0.5 * (a + b);
            Probe cur = probe(x, d, alpha);
            if (cur.value > f0 + c1 * alpha * slope0 || cur.value >= lo.value) {
                hi = std::move(cur);
            } else {
                if (std::abs(cur.slope) <= -c2 * slope0) {
                    out = std::move(cur);
                    return true;
                }
                if (cur.slope * (hi.alpha - lo.alpha) >= 0.0)
                    hi = std::move(lo);
                lo = std::move(cur);
            }
            if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha))
                break;
        }
        // Fall back to the best sufficient-decrease point seen, if any.
        if (lo.alpha > 0.0 && lo.value <= f0 + c1 * lo.alpha * slope0) {
            out = std::move(lo);
            return true;
        }
        return false;
    }

    // Minimizer of the cubic matching values and slopes at both ends, or of
    // the quadratic through (lo, lo', hi) when hi has no usable slope.
    static double interpolate(const Probe& lo, const Probe& hi)
    {
        if (!std::isfinite(hi.value))
            return 0.5 * (lo.alpha + hi.alpha);
        const double h = hi.alpha - lo.alpha;
        const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (lo.alpha - hi.alpha);
        const double disc = d1 * d1 - lo.slope * hi.slope;
        if (disc < 0.0) {
            const double denom = 2.0 * (hi.value - lo.value - lo.slope * h);
            return denom > 0.0 ? lo.alpha - lo.slope * h * h / denom : 0.5 * (lo.alpha + hi.alpha);
        }
        const double d2 = std::copysign(std::sqrt(disc), h);
        return hi.alpha - h * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
    }

private:
    const ObjectiveWithGradient& objective_;
    const QuasiNewtonOptions& options_;
};

} // namespace

QuasiNewtonResult quasi_newton_maximize(const ObjectiveWithGradient& objective, const Vector& theta0,
                                        const QuasiNewtonOptions& options)
{
    const Minimizer minimizer(objective, options);
    Vector x = theta0;
    Vector grad;
    double value = minimizer.evaluate(x, grad);
    if (!std::isfinite(value))
        throw ParameterError("objective is not finite at the starting point");

    std::deque<Vector> s_hist;
    std::deque<Vector> y_hist;
    std::deque<double> rho_hist;

    QuasiNewtonResult result;
    int iter = 0;
    bool converged = grad.norm() < options.gradient_tolerance;
    while (!converged && iter < options.max_iterations) {
        // Two-loop recursion for d = -H grad.
        Vector d = -grad;
        const std::size_t m = s_hist.size();
        std::vector<double> alpha(m);
        for (std::size_t k = m; k-- > 0;) {
            alpha[k] = rho_hist[k] * s_hist[k].dot(d);
            d -= alpha[k] * y_hist[k];
        }
        if (m > 0)
            d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        for (std::size_t k = 0; k < m; ++k) {
            const double beta = rho_hist[k] * y_hist[k].dot(d);
            d += (alpha[k] - beta) * s_hist[k];
        }

        double slope = grad.dot(d);
        if (!(slope < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            d = -grad;
            slope = grad.dot(d);
        }
        const double step0 = s_hist.empty() ? std::min(1.0, 1.0 / grad.norm()) : 1.0;

        Probe accepted{};
        if (!minimizer.line_search(x, value, slope, d, step0, accepted))
            break;
        ++iter;

        Vector s = accepted.x - x;
        Vector y = accepted.grad - grad;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > options.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = std::move(accepted.x);
        grad = std::move(accepted.grad);
        value = accepted.value;
        converged = grad.norm() < options.gradient_tolerance;
    }

    result.theta = std::move(x);
    result.value = -value;
    result.gradient_norm = grad.norm();
    result.iterations = iter;
    result.converged = converged;
    return result;
}

} // namespace efpcr
