#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "efpcr/fpca.hpp"
#include "efpcr/optimizer.hpp"

namespace efpcr {

enum class Link { linear, logistic, multinomial };

std::string_view to_string(Link link);
Link parse_link(std::string_view name);

/// Functional predictors with responses: reals (linear), labels in {-1, +1}
/// (logistic) or class indices 1..m (multinomial).
struct TrainingData
{
    std::vector<SampledFunction> functions;
    Vector responses;
};

struct FitOptions
{
    FpcaKind kind = FpcaKind::combined;
    Index n_components = 3;
    /// Combined-kind scale; estimated from the data when absent.
    std::optional<double> C;
    AlignOptions align;
    QuasiNewtonOptions optimizer;
};

struct RegressionModel
{
    Link link = Link::linear;
    /// (p + 1) x K; row 0 holds the intercepts alpha, rows 1..p the
    /// coefficients b. K = 1 for linear/logistic, m - 1 for multinomial
    /// (class m is pinned at zero).
    Matrix coefficients;
    /// 1 for linear, 2 for logistic, m for multinomial.
    Index n_classes = 1;
    FpcaModel fpca;
    /// Absent for the standard (unaligned) kind.
    std::optional<AlignmentReference> alignment;
    bool converged = true;
    int iterations = 0;

    Eigen::RowVectorXd alpha() const { return coefficients.row(0); }
    Matrix b() const { return coefficients.bottomRows(coefficients.rows() - 1); }
};

struct Prediction
{
    Link link;
    /// Linear: the fitted value. Logistic: P(y = +1). Multinomial: the
    /// length-m class distribution.
    Vector values;

    double value() const { return values(0); }
    /// +1/-1 for logistic (threshold 0.5, ties to -1), 1..m for multinomial
    /// (argmax, ties to the lower class).
    int label() const;
};

/// Log-likelihood sum_i log phi(y_i theta^T z_i) and its gradient.
std::pair<double, Vector> logistic_loglik_grad(const Vector& theta, const Matrix& Z, const Vector& y);

/// Multinomial log-likelihood with class m pinned at zero. `theta` is
/// (p + 1) x (m - 1), `Y` is n x m one-hot.
std::pair<double, Matrix> multinomial_loglik_grad(const Matrix& theta, const Matrix& Z, const Matrix& Y);

/// [1 Theta].
Matrix design_matrix(const Matrix& scores);

Matrix one_hot(const Vector& labels, Index n_classes);

RegressionModel fit_linear(const TrainingData& data, const FitOptions& options);
RegressionModel fit_logistic(const TrainingData& data, const FitOptions& options);
RegressionModel fit_multinomial(const TrainingData& data, const FitOptions& options);
RegressionModel fit(Link link, const TrainingData& data, const FitOptions& options);

/// Fit on an alignment computed elsewhere (shared across kinds in CV). For
/// the standard kind only the set's original functions are used.
RegressionModel fit_aligned(Link link, const AlignedSet& aligned, const Vector& responses, const FitOptions& options);

/// Solves the coefficient problem on a ready design matrix.
RegressionModel fit_on_features(Link link, FpcaModel fpca, std::optional<AlignmentReference> alignment,
                                const Vector& responses, const QuasiNewtonOptions& optimizer = {});

/// Principal coefficients of a new function: aligned against the stored
/// training mean (never re-estimated) and projected on the stored basis.
Eigen::RowVectorXd features(const RegressionModel& model, const SampledFunction& f);
Eigen::RowVectorXd features(const RegressionModel& model, const SamplePieces& pieces);

Prediction predict_from_scores(const RegressionModel& model, const Eigen::RowVectorXd& scores);
Prediction predict(const RegressionModel& model, const SampledFunction& f);
Prediction predict(const RegressionModel& model, const SamplePieces& pieces);

} // namespace efpcr
