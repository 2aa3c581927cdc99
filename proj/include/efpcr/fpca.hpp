#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "efpcr/alignment.hpp"

namespace efpcr {

enum class FpcaKind { vertical, horizontal, combined, standard };

std::string_view to_string(FpcaKind kind);
FpcaKind parse_fpca_kind(std::string_view name);

/// Fitted principal component model in one of the four representation spaces:
///
///   vertical    h = [q~, f(0)]           length T + 1
///   horizontal  v                        length T
///   combined    g = [q~, C v]            length 2T
///   standard    f (unaligned)            length T
///
/// Inner products are quadrature-weighted: trapezoid weights on every
/// function block, one mean cell width on the f(0) slot. `basis` columns are
/// orthonormal under that weighting and `singular_values` are the matching
/// covariance singular values (component variances).
struct FpcaModel
{
    FpcaKind kind = FpcaKind::standard;
    Grid grid;
    Vector mean{};
    Matrix basis{};
    Vector singular_values{};
    /// Trace of the sample covariance.
    double total_variance = 0.0;
    Vector weights{};
    double C = 1.0;
    Index n_components = 0;

    // Anchors for mapping basis directions back to functions and warps.
    Vector mean_srsf{};
    Vector psi_mean{};
    double f0_mean = 0.0;

    /// Training coefficients, one row per sample.
    Matrix scores{};

    Index dimension() const noexcept { return mean.size(); }
};

/// Length of the representation vector for a kind on a grid of T points.
Index representation_size(FpcaKind kind, Index T);

/// Quadrature weights matching representation_size.
Vector representation_weights(FpcaKind kind, const Grid& grid);

/// Representation vector of one sample. `C` only affects the combined kind.
Vector representation(FpcaKind kind, const SamplePieces& pieces, double C = 1.0);

/// Representation matrix of an aligned set, one column per sample.
Matrix representations(FpcaKind kind, const AlignedSet& aligned, double C = 1.0);

FpcaModel vertical_fpca(const AlignedSet& aligned, Index p);
FpcaModel horizontal_fpca(const AlignedSet& aligned, Index p);
FpcaModel combined_fpca(const AlignedSet& aligned, Index p, double C);
FpcaModel standard_fpca(const std::vector<SampledFunction>& fs, Index p);

/// Dispatch on kind; `C` defaults to estimate_C for the combined kind.
FpcaModel fit_fpca(FpcaKind kind, const AlignedSet& aligned, Index p, std::optional<double> C = std::nullopt);

struct CEstimate
{
    double C = 1.0;
    /// Set when the shooting vectors carry no dispersion; C is then 1.
    bool degenerate_phase = false;
};

/// C = sqrt( sum |q~_i - mean|^2 / sum |v_i|^2 ), balancing the total
/// amplitude and phase dispersion of the combined representation.
CEstimate estimate_C(const AlignedSet& aligned);

/// Scores of representation columns (D x n) against the model basis (n x p).
Matrix project(const FpcaModel& model, const Matrix& columns);
Matrix project(const FpcaModel& model, const AlignedSet& aligned);
Matrix project(const FpcaModel& model, const std::vector<SampledFunction>& fs);
Eigen::RowVectorXd project(const FpcaModel& model, const SamplePieces& pieces);

struct PathPoint
{
    double tau;
    SampledFunction function;
    WarpingFunction warp;
};

/// Points along the j-th principal direction (0-based), mean + tau sd U_j,
/// mapped back to a (function, warp) pair.
std::vector<PathPoint> principal_paths(const FpcaModel& model, Index j, const std::vector<double>& taus);

} // namespace efpcr
