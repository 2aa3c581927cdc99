#include "efpcr/fpca.hpp"

#include <string>

namespace efpcr {

namespace {

void orient_columns(Matrix& basis)
{
    for (Index j = 0; j < basis.cols(); ++j) {
        const double scale = basis.col(j).cwiseAbs().maxCoeff();
        for (Index i = 0; i < basis.rows(); ++i) {
            if (std::abs(basis(i, j)) > 1e-10 * scale) {
                if (basis(i, j) < 0.0)
                    basis.col(j) *= -1.0;
                break;
            }
        }
    }
}

FpcaModel fit_columns(FpcaKind kind, const Grid& grid, const Matrix& X, Vector weights, Index p, bool zero_mean)
{
    const Index n = X.cols();
    const Index D = X.rows();
    if (n < 2)
        throw ParameterError("fPCA needs at least two samples");
    if (p < 1 || p > n - 1 || p > D)
        throw ParameterError("number of components " + std::to_string(p) + " must lie in [1, "
                             + std::to_string(std::min(n - 1, D)) + "]");

    FpcaModel model{.kind = kind, .grid = grid};
    model.n_components = p;
    model.mean = zero_mean ? Vector(Vector::Zero(D)) : Vector(X.rowwise().mean());
    const Matrix centered = X.colwise() - model.mean;

    const Vector sqrt_w = weights.cwiseSqrt();
    const Matrix scaled = sqrt_w.asDiagonal() * centered / std::sqrt(static_cast<double>(n - 1));
    Eigen::JacobiSVD<Matrix> svd(scaled, Eigen::ComputeThinU);

    model.basis = sqrt_w.cwiseInverse().asDiagonal() * svd.matrixU().leftCols(p);
    orient_columns(model.basis);
    model.singular_values = svd.singularValues().head(p).cwiseAbs2();
    model.total_variance = scaled.squaredNorm();
    model.weights = std::move(weights);
    model.scores = centered.transpose() * model.weights.asDiagonal() * model.basis;
    return model;
}

void set_anchors(FpcaModel& model, const AlignedSet& aligned)
{
    model.mean_srsf = aligned.mean_srsf.values;
    model.psi_mean = aligned.psi_mean.values;
    model.f0_mean = aligned.mean_srsf.f0;
}

Vector tangent_part(const Grid& grid, const Vector& v, const Vector& base)
{
    return v - inner_product(grid, v, base) * base;
}

} // namespace

std::string_view to_string(FpcaKind kind)
{
    switch (kind) {
    case FpcaKind::vertical: return "vertical";
    case FpcaKind::horizontal: return "horizontal";
    case FpcaKind::combined: return "combined";
    case FpcaKind::standard: return "standard";
    }
    return "unknown";
}

FpcaKind parse_fpca_kind(std::string_view name)
{
    if (name == "vertical" || name == "elastic_vertical")
        return FpcaKind::vertical;
    if (name == "horizontal" || name == "elastic_horizontal")
        return FpcaKind::horizontal;
    if (name == "combined" || name == "elastic_combined")
        return FpcaKind::combined;
    if (name == "standard")
        return FpcaKind::standard;
    throw ParameterError("unknown fPCA kind '" + std::string(name) + "'");
}

Index representation_size(FpcaKind kind, Index T)
{
    switch (kind) {
    case FpcaKind::vertical: return T + 1;
    case FpcaKind::combined: return 2 * T;
    case FpcaKind::horizontal:
    case FpcaKind::standard: return T;
    }
    return T;
}

Vector representation_weights(FpcaKind kind, const Grid& grid)
{
    const Index T = grid.size();
    Vector w(representation_size(kind, T));
    switch (kind) {
    case FpcaKind::vertical:
        w << grid.weights(), grid.mean_step();
        break;
    case FpcaKind::combined:
        w << grid.weights(), grid.weights();
        break;
    case FpcaKind::horizontal:
    case FpcaKind::standard:
        w = grid.weights();
        break;
    }
    return w;
}

Vector representation(FpcaKind kind, const SamplePieces& pieces, double C)
{
    const Index T = pieces.original.grid.size();
    Vector r(representation_size(kind, T));
    switch (kind) {
    case FpcaKind::vertical:
        r << pieces.aligned_srsf.values, pieces.original.values(0);
        break;
    case FpcaKind::combined:
        r << pieces.aligned_srsf.values, C * pieces.shooting.values;
        break;
    case FpcaKind::horizontal:
        r = pieces.shooting.values;
        break;
    case FpcaKind::standard:
        r = pieces.original.values;
        break;
    }
    return r;
}

Matrix representations(FpcaKind kind, const AlignedSet& aligned, double C)
{
    const Index n = aligned.size();
    Matrix X(representation_size(kind, aligned.grid().size()), n);
    for (Index i = 0; i < n; ++i)
        X.col(i) = representation(kind, aligned.pieces(i), C);
    return X;
}

FpcaModel vertical_fpca(const AlignedSet& aligned, Index p)
{
    const Grid& grid = aligned.grid();
    FpcaModel model = fit_columns(FpcaKind::vertical, grid, representations(FpcaKind::vertical, aligned),
                                  representation_weights(FpcaKind::vertical, grid), p, false);
    set_anchors(model, aligned);
    return model;
}

FpcaModel horizontal_fpca(const AlignedSet& aligned, Index p)
{
    const Grid& grid = aligned.grid();
    // Shooting vectors are taken at their own Karcher mean, so their mean is zero.
    FpcaModel model = fit_columns(FpcaKind::horizontal, grid, representations(FpcaKind::horizontal, aligned),
                                  representation_weights(FpcaKind::horizontal, grid), p, true);
    set_anchors(model, aligned);
    return model;
}

FpcaModel combined_fpca(const AlignedSet& aligned, Index p, double C)
{
    if (!(C > 0.0) || !std::isfinite(C))
        throw ParameterError("combined fPCA needs C > 0");
    const Grid& grid = aligned.grid();
    FpcaModel model = fit_columns(FpcaKind::combined, grid, representations(FpcaKind::combined, aligned, C),
                                  representation_weights(FpcaKind::combined, grid), p, false);
    model.C = C;
    set_anchors(model, aligned);
    return model;
}

FpcaModel standard_fpca(const std::vector<SampledFunction>& fs, Index p)
{
    if (fs.empty())
        throw ParameterError("standard fPCA of an empty set");
    const Grid& grid = fs.front().grid;
    Matrix X(grid.size(), static_cast<Index>(fs.size()));
    for (std::size_t i = 0; i < fs.size(); ++i) {
        require_same_grid(grid, fs[i].grid);
        X.col(static_cast<Index>(i)) = fs[i].values;
    }
    FpcaModel model = fit_columns(FpcaKind::standard, grid, X, representation_weights(FpcaKind::standard, grid), p,
                                  false);
    model.f0_mean = model.mean(0);
    return model;
}

FpcaModel fit_fpca(FpcaKind kind, const AlignedSet& aligned, Index p, std::optional<double> C)
{
    switch (kind) {
    case FpcaKind::vertical: return vertical_fpca(aligned, p);
    case FpcaKind::horizontal: return horizontal_fpca(aligned, p);
    case FpcaKind::combined: return combined_fpca(aligned, p, C ? *C : estimate_C(aligned).C);
    case FpcaKind::standard: return standard_fpca(aligned.originals, p);
    }
    throw ParameterError("unknown fPCA kind");
}

CEstimate estimate_C(const AlignedSet& aligned)
{
    if (aligned.size() < 2)
        throw ParameterError("estimate_C needs at least two samples");
    const Grid& grid = aligned.grid();
    Vector mean_q = Vector::Zero(grid.size());
    for (const auto& q : aligned.aligned_srsfs)
        mean_q += q.values;
    mean_q /= static_cast<double>(aligned.size());

    double amplitude = 0.0;
    double phase = 0.0;
    for (Index i = 0; i < aligned.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        amplitude += inner_product(grid, Vector(aligned.aligned_srsfs[k].values - mean_q),
                                   Vector(aligned.aligned_srsfs[k].values - mean_q));
        phase += inner_product(grid, aligned.shooting_vectors[k].values, aligned.shooting_vectors[k].values);
    }
    if (!(phase > 1e-24) || !(amplitude > 0.0))
        return CEstimate{1.0, true};
    return CEstimate{std::sqrt(amplitude / phase), false};
}

Matrix project(const FpcaModel& model, const Matrix& columns)
{
    if (columns.rows() != model.dimension())
        throw DimensionError("representation has " + std::to_string(columns.rows()) + " rows, model expects "
                             + std::to_string(model.dimension()));
    const Matrix centered = columns.colwise() - model.mean;
    return centered.transpose() * model.weights.asDiagonal() * model.basis;
}

Matrix project(const FpcaModel& model, const AlignedSet& aligned)
{
    if (model.kind == FpcaKind::standard)
        return project(model, aligned.originals);
    return project(model, representations(model.kind, aligned, model.C));
}

Matrix project(const FpcaModel& model, const std::vector<SampledFunction>& fs)
{
    if (model.kind != FpcaKind::standard)
        throw ParameterError("raw functions can only be projected on a standard model");
    Matrix X(model.dimension(), static_cast<Index>(fs.size()));
    for (std::size_t i = 0; i < fs.size(); ++i)
        X.col(static_cast<Index>(i)) = resample(fs[i], model.grid).values;
    return project(model, X);
}

Eigen::RowVectorXd project(const FpcaModel& model, const SamplePieces& pieces)
{
    return project(model, Matrix(representation(model.kind, pieces, model.C))).row(0);
}

std::vector<PathPoint> principal_paths(const FpcaModel& model, Index j, const std::vector<double>& taus)
{
    if (j < 0 || j >= model.n_components)
        throw ParameterError("component index " + std::to_string(j) + " out of range");
    const Grid& grid = model.grid;
    const Index T = grid.size();
    const Vector direction = std::sqrt(model.singular_values(j)) * model.basis.col(j);

    auto warp_from_tangent = [&](const Vector& v) {
        const PsiFunction base(grid, model.psi_mean);
        return from_psi(exp_map(base, tangent_part(grid, v, model.psi_mean)));
    };

    std::vector<PathPoint> out;
    out.reserve(taus.size());
    for (const double tau : taus) {
        const Vector point = model.mean + tau * direction;
        switch (model.kind) {
        case FpcaKind::vertical:
            out.push_back({tau, from_srsf(Srsf(grid, point.head(T), point(T))), identity_warp(grid)});
            break;
        case FpcaKind::horizontal:
            out.push_back({tau, from_srsf(Srsf(grid, model.mean_srsf, model.f0_mean)), warp_from_tangent(point)});
            break;
        case FpcaKind::combined:
            out.push_back({tau, from_srsf(Srsf(grid, point.head(T), model.f0_mean)),
                           warp_from_tangent(Vector(point.tail(T) / model.C))});
            break;
        case FpcaKind::standard:
            out.push_back({tau, SampledFunction(grid, point), identity_warp(grid)});
            break;
        }
    }
    return out;
}

} // namespace efpcr
