#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "efpcr/dataset.hpp"

namespace efpcr {

enum class Metric { sse, pc };

std::string_view to_string(Metric metric);
/// "elastic_combined", "elastic_vertical", "elastic_horizontal", "standard".
std::string method_name(FpcaKind kind);

/// SSE for the linear link, fraction correctly classified otherwise.
Metric metric_for(Link link);

struct CvReport
{
    std::string label;
    FpcaKind method = FpcaKind::combined;
    Link link = Link::linear;
    Metric metric = Metric::sse;
    double metric_mean = 0.0;
    /// Sample standard deviation across folds.
    double metric_sd = 0.0;
    std::vector<double> folds;
    Index n_components = 0;
    std::uint64_t seed = 0;
};

/// Held-out index sets of a k-fold split. The folds partition 0..n-1 and
/// their sizes differ by at most one. With `strata`, each class is shuffled
/// and dealt across the folds in turn.
std::vector<std::vector<Index>> make_folds(Index n, Index k, std::uint64_t seed, const Vector* strata = nullptr);

struct CvHooks
{
    /// Called with the training indices and data right before fitting.
    std::function<void(Index fold, const std::vector<Index>& train, const TrainingData& data)> on_fit;
    /// Called for each held-out index as it is predicted.
    std::function<void(Index fold, Index sample)> on_predict;
};

struct CvOptions
{
    Index k = 5;
    Index n_components = 3;
    std::uint64_t seed = 0;
    /// Combined-kind scale; re-estimated per fold when absent.
    std::optional<double> C;
    AlignOptions align;
    QuasiNewtonOptions optimizer;
    CvHooks hooks;
};

/// Refits alignment, fPCA and regression on each training split and scores
/// the held-out split. Classification folds are stratified; a training split
/// missing a class raises StratificationError.
CvReport kfold_cv(const Dataset& d, FpcaKind method, Link link, const CvOptions& options);

/// Same folds for every method; each fold is aligned once and shared by the
/// elastic methods.
std::vector<CvReport> kfold_cv(const Dataset& d, const std::vector<FpcaKind>& methods, Link link,
                               const CvOptions& options);

double sum_squared_error(const Vector& y, const Vector& yhat);
double fraction_correct(const Vector& labels, const Vector& predicted);

} // namespace efpcr
