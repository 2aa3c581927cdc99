#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>

#include "efpcr/errors.hpp"

namespace efpcr {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// ---------------------------------------------------------------------------
// Expression-level kernels. These work on any Eigen vector expression and any
// scalar type; the typed wrappers further down use double.
// ---------------------------------------------------------------------------

/// Trapezoidal quadrature weights for the knots t, so that w.dot(y) is the
/// trapezoid-rule integral of y.
template <typename DerivedT>
VectorX<typename DerivedT::Scalar> trapezoid_weights(const Eigen::MatrixBase<DerivedT>& t)
{
    using Scalar = typename DerivedT::Scalar;
    const Index n = t.size();
    VectorX<Scalar> w = VectorX<Scalar>::Zero(n);
    for (Index i = 0; i + 1 < n; ++i) {
        const Scalar half = (t(i + 1) - t(i)) / Scalar(2);
        w(i) += half;
        w(i + 1) += half;
    }
    return w;
}

template <typename DerivedT, typename DerivedY>
typename DerivedY::Scalar trapz(const Eigen::MatrixBase<DerivedT>& t, const Eigen::MatrixBase<DerivedY>& y)
{
    using Scalar = typename DerivedY::Scalar;
    Scalar acc(0);
    for (Index i = 1; i < t.size(); ++i)
        acc += (t(i) - t(i - 1)) * (y(i) + y(i - 1));
    return acc / Scalar(2);
}

/// Running trapezoid integral; first entry is zero.
template <typename DerivedT, typename DerivedY>
VectorX<typename DerivedY::Scalar> cumtrapz(const Eigen::MatrixBase<DerivedT>& t, const Eigen::MatrixBase<DerivedY>& y)
{
    using Scalar = typename DerivedY::Scalar;
    VectorX<Scalar> out(t.size());
    if (t.size() == 0)
        return out;
    out(0) = Scalar(0);
    for (Index i = 1; i < t.size(); ++i)
        out(i) = out(i - 1) + (t(i) - t(i - 1)) * (y(i) + y(i - 1)) / Scalar(2);
    return out;
}

/// Second-order finite differences: centered (non-uniform aware) in the
/// interior, one-sided three-point stencils at both ends. Needs size >= 3.
template <typename DerivedT, typename DerivedY>
VectorX<typename DerivedY::Scalar> finite_difference(const Eigen::MatrixBase<DerivedT>& t,
                                                     const Eigen::MatrixBase<DerivedY>& y)
{
    using Scalar = typename DerivedY::Scalar;
    const Index n = t.size();
    VectorX<Scalar> d(n);
    for (Index i = 1; i + 1 < n; ++i) {
        const Scalar hs = t(i) - t(i - 1);
        const Scalar hd = t(i + 1) - t(i);
        d(i) = (hs * hs * y(i + 1) + (hd * hd - hs * hs) * y(i) - hd * hd * y(i - 1))
               / (hs * hd * (hd + hs));
    }
    {
        const Scalar h1 = t(1) - t(0);
        const Scalar h2 = t(2) - t(1);
        const Scalar a = -(Scalar(2) * h1 + h2) / (h1 * (h1 + h2));
        const Scalar b = (h1 + h2) / (h1 * h2);
        const Scalar c = -h1 / (h2 * (h1 + h2));
        d(0) = a * y(0) + b * y(1) + c * y(2);
    }
    {
        const Scalar h1 = t(n - 2) - t(n - 3);
        const Scalar h2 = t(n - 1) - t(n - 2);
        const Scalar a = h2 / (h1 * (h1 + h2));
        const Scalar b = -(h2 + h1) / (h1 * h2);
        const Scalar c = (Scalar(2) * h2 + h1) / (h2 * (h1 + h2));
        d(n - 1) = a * y(n - 3) + b * y(n - 2) + c * y(n - 1);
    }
    return d;
}

/// Piecewise-linear interpolation of (t, y) at the query points; queries
/// outside [t(0), t(end)] are clamped to the end values.
template <typename DerivedT, typename DerivedY, typename DerivedQ>
VectorX<typename DerivedY::Scalar> interp_linear(const Eigen::MatrixBase<DerivedT>& t,
                                                 const Eigen::MatrixBase<DerivedY>& y,
                                                 const Eigen::MatrixBase<DerivedQ>& query)
{
    using Scalar = typename DerivedY::Scalar;
    const Index n = t.size();
    VectorX<Scalar> out(query.size());
    const auto* begin = t.derived().data();
    for (Index k = 0; k < query.size(); ++k) {
        const Scalar x = query(k);
        if (x <= t(0)) {
            out(k) = y(0);
            continue;
        }
        if (x >= t(n - 1)) {
            out(k) = y(n - 1);
            continue;
        }
        const Index hi = std::upper_bound(begin, begin + n, x) - begin;
        const Index lo = hi - 1;
        const Scalar frac = (x - t(lo)) / (t(hi) - t(lo));
        out(k) = y(lo) + frac * (y(hi) - y(lo));
    }
    return out;
}

/// Centered moving average with half-width `half_window`. Near the ends the
/// window shrinks symmetrically, so endpoints are kept and affine data is
/// reproduced exactly.
template <typename DerivedY>
VectorX<typename DerivedY::Scalar> moving_average(const Eigen::MatrixBase<DerivedY>& y, Index half_window)
{
    using Scalar = typename DerivedY::Scalar;
    const Index n = y.size();
    VectorX<Scalar> out(n);
    for (Index i = 0; i < n; ++i) {
        const Index h = std::min({half_window, i, n - 1 - i});
        out(i) = y.segment(i - h, 2 * h + 1).mean();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Typed domain objects.
// ---------------------------------------------------------------------------

/// Strictly increasing sample times on [0, 1] with t(0) = 0, t(T-1) = 1 and
/// T >= 3. Copies share the underlying storage.
class Grid
{
public:
    explicit Grid(Vector times);

    static Grid uniform(Index size);

    /// Affinely maps arbitrary strictly increasing times onto [0, 1].
    static Grid normalized(const Vector& raw_times);

    const Vector& times() const noexcept { return data_->times; }
    const Vector& weights() const noexcept { return data_->weights; }
    Index size() const noexcept { return data_->times.size(); }
    double operator[](Index i) const { return data_->times(i); }

    bool is_uniform(double rel_tol = 1e-9) const;

    /// Mean cell width, 1 / (T - 1).
    double mean_step() const noexcept { return 1.0 / static_cast<double>(size() - 1); }

    friend bool operator==(const Grid& a, const Grid& b);

private:
    struct Data
    {
        Vector times;
        Vector weights;
    };
    std::shared_ptr<const Data> data_;
};

inline bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

/// Finite real values sampled on a Grid.
struct SampledFunction
{
    SampledFunction(Grid grid, Vector values);

    Grid grid;
    Vector values;
};

struct GradientOptions
{
    /// Half-width of a moving-average pre-smoother; 0 disables smoothing.
    Index smoothing_half_window = 0;
};

void require_same_grid(const Grid& a, const Grid& b);

SampledFunction resample(const SampledFunction& f, const Grid& target);
SampledFunction gradient(const SampledFunction& f, const GradientOptions& options = {});
double integrate(const SampledFunction& f);
double inner_product(const SampledFunction& f, const SampledFunction& g);
double l2_norm(const SampledFunction& f);

/// Running integral of f from 0 to each knot.
SampledFunction cumulative_integral(const SampledFunction& f);

/// Quadrature inner product of two value vectors on a common grid.
inline double inner_product(const Grid& grid, const Vector& a, const Vector& b)
{
    return (grid.weights().array() * (a.array() * b.array())).sum();
}

inline double l2_norm(const Grid& grid, const Vector& a)
{
    return std::sqrt(std::max(0.0, inner_product(grid, a, a)));
}

} // namespace efpcr
