#include "efpcr/regression.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace efpcr {

namespace {

// log(phi(s)) = -log(1 + exp(-s)), without overflow.
double log_sigmoid(double s)
{
    return s >= 0.0 ? -std::log1p(std::exp(-s)) : s - std::log1p(std::exp(s));
}

double sigmoid(double s)
{
    if (s >= 0.0)
        return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

// log(1 + sum_k exp(eta_k)).
double log_partition(const Eigen::Ref<const Eigen::RowVectorXd>& eta)
{
    const double top = std::max(0.0, eta.size() > 0 ? eta.maxCoeff() : 0.0);
    return top + std::log(std::exp(-top) + (eta.array() - top).exp().sum());
}

void check_lengths(const TrainingData& data)
{
    if (data.functions.size() != static_cast<std::size_t>(data.responses.size()))
        throw DimensionError("number of functions and responses differ");
    if (data.functions.empty())
        throw ParameterError("training data is empty");
}

void check_binary(const Vector& y)
{
    bool pos = false;
    bool neg = false;
    for (Index i = 0; i < y.size(); ++i) {
        if (y(i) == 1.0)
            pos = true;
        else if (y(i) == -1.0)
            neg = true;
        else
            throw ParameterError("logistic labels must be -1 or +1");
    }
    if (!pos || !neg)
        throw DegenerateLabelsError("logistic regression needs both classes present");
}

Index check_multiclass(const Vector& y)
{
    std::set<int> seen;
    int top = 0;
    for (Index i = 0; i < y.size(); ++i) {
        const double v = y(i);
        if (v < 1.0 || v != std::floor(v))
            throw ParameterError("multinomial labels must be integers 1..m");
        seen.insert(static_cast<int>(v));
        top = std::max(top, static_cast<int>(v));
    }
    if (top < 2 || static_cast<int>(seen.size()) != top)
        throw DegenerateLabelsError("multinomial regression needs every class 1.." + std::to_string(top)
                                    + " present and at least two classes");
    return top;
}

Index class_count(Link link, const Vector& y)
{
    switch (link) {
    case Link::linear:
        if (!y.allFinite())
            throw ParameterError("responses must be finite");
        return 1;
    case Link::logistic: check_binary(y); return 2;
    case Link::multinomial: return check_multiclass(y);
    }
    return 1;
}

std::vector<SampledFunction> on_uniform_grid(const std::vector<SampledFunction>& fs)
{
    const Grid& grid = fs.front().grid;
    for (const auto& f : fs)
        require_same_grid(grid, f.grid);
    if (grid.is_uniform())
        return fs;
    const Grid uniform = Grid::uniform(grid.size());
    std::vector<SampledFunction> out;
    out.reserve(fs.size());
    for (const auto& f : fs)
        out.push_back(resample(f, uniform));
    return out;
}

} // namespace

std::string_view to_string(Link link)
{
    switch (link) {
    case Link::linear: return "linear";
    case Link::logistic: return "logistic";
    case Link::multinomial: return "multinomial";
    }
    return "unknown";
}

Link parse_link(std::string_view name)
{
    if (name == "linear")
        return Link::linear;
    if (name == "logistic")
        return Link::logistic;
    if (name == "multinomial")
        return Link::multinomial;
    throw ParameterError("unknown link '" + std::string(name) + "'");
}

int Prediction::label() const
{
    switch (link) {
    case Link::logistic: return values(0) > 0.5 ? 1 : -1;
    case Link::multinomial: {
        Index best = 0;
        values.maxCoeff(&best);
        return static_cast<int>(best) + 1;
    }
    case Link::linear: break;
    }
    throw ParameterError("linear predictions have no class label");
}

std::pair<double, Vector> logistic_loglik_grad(const Vector& theta, const Matrix& Z, const Vector& y)
{
    if (Z.cols() != theta.size() || Z.rows() != y.size())
        throw DimensionError("logistic likelihood dimensions do not match");
    const Vector margin = y.cwiseProduct(Z * theta);
    double loglik = 0.0;
    Vector weight(margin.size());
    for (Index i = 0; i < margin.size(); ++i) {
        loglik += log_sigmoid(margin(i));
        weight(i) = -y(i) * (sigmoid(margin(i)) - 1.0);
    }
    return {loglik, Z.transpose() * weight};
}

std::pair<double, Matrix> multinomial_loglik_grad(const Matrix& theta, const Matrix& Z, const Matrix& Y)
{
    const Index m = Y.cols();
    if (m < 2 || theta.cols() != m - 1 || theta.rows() != Z.cols() || Y.rows() != Z.rows())
        throw DimensionError("multinomial likelihood dimensions do not match");
    const Matrix eta = Z * theta;
    Matrix residual(Z.rows(), m - 1);
    double loglik = 0.0;
    for (Index i = 0; i < Z.rows(); ++i) {
        const double lse = log_partition(eta.row(i));
        loglik += Y.row(i).head(m - 1).dot(eta.row(i)) - lse;
        residual.row(i) = Y.row(i).head(m - 1).array() - (eta.row(i).array() - lse).exp();
    }
    return {loglik, Z.transpose() * residual};
}

Matrix design_matrix(const Matrix& scores)
{
    Matrix Z(scores.rows(), scores.cols() + 1);
    Z << Vector::Ones(scores.rows()), scores;
    return Z;
}

Matrix one_hot(const Vector& labels, Index n_classes)
{
    Matrix Y = Matrix::Zero(labels.size(), n_classes);
    for (Index i = 0; i < labels.size(); ++i)
        Y(i, static_cast<Index>(labels(i)) - 1) = 1.0;
    return Y;
}

RegressionModel fit_on_features(Link link, FpcaModel fpca, std::optional<AlignmentReference> alignment,
                                const Vector& responses, const QuasiNewtonOptions& optimizer)
{
    const Matrix Z = design_matrix(fpca.scores);
    const Index n = Z.rows();
    const Index p = fpca.n_components;
    if (responses.size() != n)
        throw DimensionError("responses do not match the number of training samples");
    if (n < p + 2)
        throw ParameterError("need at least n_components + 2 samples, got " + std::to_string(n));

    const Index n_classes = class_count(link, responses);
    Matrix coefficients;
    bool converged = true;
    int iterations = 0;

    switch (link) {
    case Link::linear: {
        const Eigen::ColPivHouseholderQR<Matrix> qr(Z);
        if (qr.rank() < Z.cols())
            throw RankError("design matrix has rank " + std::to_string(qr.rank()) + " with "
                                + std::to_string(p) + " components",
                            static_cast<long>(p));
        coefficients = qr.solve(responses);
        break;
    }
    case Link::logistic: {
        const auto objective = [&](const Vector& theta, Vector& grad) {
            auto [value, g] = logistic_loglik_grad(theta, Z, responses);
            grad = std::move(g);
            return value;
        };
        const QuasiNewtonResult r = quasi_newton_maximize(objective, Vector::Zero(p + 1), optimizer);
        coefficients = r.theta;
        converged = r.converged;
        iterations = r.iterations;
        break;
    }
    case Link::multinomial: {
        const Index m = n_classes;
        const Matrix Y = one_hot(responses, m);
        const auto objective = [&](const Vector& theta, Vector& grad) {
            const Eigen::Map<const Matrix> stack(theta.data(), p + 1, m - 1);
            auto [value, g] = multinomial_loglik_grad(stack, Z, Y);
            grad = Eigen::Map<const Vector>(g.data(), g.size());
            return value;
        };
        const QuasiNewtonResult r = quasi_newton_maximize(objective, Vector::Zero((p + 1) * (m - 1)), optimizer);
        coefficients = Eigen::Map<const Matrix>(r.theta.data(), p + 1, m - 1);
        converged = r.converged;
        iterations = r.iterations;
        break;
    }
    }
    return RegressionModel{link,          std::move(coefficients), n_classes, std::move(fpca),
                           std::move(alignment), converged, iterations};
}

RegressionModel fit_aligned(Link link, const AlignedSet& aligned, const Vector& responses, const FitOptions& options)
{
    FpcaModel fpca = fit_fpca(options.kind, aligned, options.n_components, options.C);
    std::optional<AlignmentReference> reference;
    if (options.kind != FpcaKind::standard)
        reference = aligned.reference();
    return fit_on_features(link, std::move(fpca), std::move(reference), responses, options.optimizer);
}

RegressionModel fit(Link link, const TrainingData& data, const FitOptions& options)
{
    check_lengths(data);
    class_count(link, data.responses);
    if (options.kind == FpcaKind::standard)
        return fit_on_features(link, standard_fpca(data.functions, options.n_components), std::nullopt,
                               data.responses, options.optimizer);
    const AlignedSet aligned = align_set(on_uniform_grid(data.functions), options.align);
    return fit_aligned(link, aligned, data.responses, options);
}

RegressionModel fit_linear(const TrainingData& data, const FitOptions& options)
{
    return fit(Link::linear, data, options);
}

RegressionModel fit_logistic(const TrainingData& data, const FitOptions& options)
{
    return fit(Link::logistic, data, options);
}

RegressionModel fit_multinomial(const TrainingData& data, const FitOptions& options)
{
    return fit(Link::multinomial, data, options);
}

Eigen::RowVectorXd features(const RegressionModel& model, const SamplePieces& pieces)
{
    return project(model.fpca, pieces);
}

Eigen::RowVectorXd features(const RegressionModel& model, const SampledFunction& f)
{
    if (!model.alignment)
        return project(model.fpca, std::vector<SampledFunction>{f}).row(0);
    return features(model, align_to_reference(*model.alignment, f));
}

Prediction predict_from_scores(const RegressionModel& model, const Eigen::RowVectorXd& scores)
{
    if (scores.size() != model.fpca.n_components)
        throw DimensionError("score vector does not match the model's component count");
    Eigen::RowVectorXd z(scores.size() + 1);
    z << 1.0, scores;
    const Eigen::RowVectorXd eta = z * model.coefficients;
    Prediction out{model.link, Vector()};
    switch (model.link) {
    case Link::linear: out.values = Vector::Constant(1, eta(0)); break;
    case Link::logistic: out.values = Vector::Constant(1, sigmoid(eta(0))); break;
    case Link::multinomial: {
        const double lse = log_partition(eta);
        out.values.resize(model.n_classes);
        out.values.head(model.n_classes - 1) = (eta.array() - lse).exp().transpose();
        out.values(model.n_classes - 1) = std::exp(-lse);
        break;
    }
    }
    return out;
}

Prediction predict(const RegressionModel& model, const SampledFunction& f)
{
    return predict_from_scores(model, features(model, f));
}

Prediction predict(const RegressionModel& model, const SamplePieces& pieces)
{
    if (!model.alignment)
        return predict(model, pieces.original);
    return predict_from_scores(model, features(model, pieces));
}

} // namespace efpcr
