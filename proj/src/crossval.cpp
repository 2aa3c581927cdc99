#include "efpcr/crossval.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace efpcr {

namespace {

std::vector<SampledFunction> subset(const std::vector<SampledFunction>& fs, const std::vector<Index>& idx)
{
    std::vector<SampledFunction> out;
    out.reserve(idx.size());
    for (Index i : idx)
        out.push_back(fs[static_cast<std::size_t>(i)]);
    return out;
}

Vector subset(const Vector& y, const std::vector<Index>& idx)
{
    Vector out(static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        out(static_cast<Index>(k)) = y(idx[k]);
    return out;
}

std::vector<Index> complement(Index n, const std::vector<Index>& held_out)
{
    std::vector<bool> out(static_cast<std::size_t>(n), false);
    for (Index i : held_out)
        out[static_cast<std::size_t>(i)] = true;
    std::vector<Index> train;
    for (Index i = 0; i < n; ++i)
        if (!out[static_cast<std::size_t>(i)])
            train.push_back(i);
    return train;
}

double sample_sd(const std::vector<double>& xs, double mean)
{
    if (xs.size() < 2)
        return 0.0;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace

std::string_view to_string(Metric metric)
{
    return metric == Metric::sse ? "SSE" : "PC";
}

std::string method_name(FpcaKind kind)
{
    if (kind == FpcaKind::standard)
        return "standard";
    return "elastic_" + std::string(to_string(kind));
}

Metric metric_for(Link link)
{
    return link == Link::linear ? Metric::sse : Metric::pc;
}

double sum_squared_error(const Vector& y, const Vector& yhat)
{
    if (y.size() != yhat.size())
        throw DimensionError("response and prediction lengths differ");
    return (y - yhat).squaredNorm();
}

double fraction_correct(const Vector& labels, const Vector& predicted)
{
    if (labels.size() != predicted.size() || labels.size() == 0)
        throw DimensionError("label and prediction lengths differ or are empty");
    return (labels.array() == predicted.array()).cast<double>().mean();
}

std::vector<std::vector<Index>> make_folds(Index n, Index k, std::uint64_t seed, const Vector* strata)
{
    if (k < 2 || k > n)
        throw ParameterError("number of folds must lie in [2, " + std::to_string(n) + "], got " + std::to_string(k));
    if (strata && strata->size() != n)
        throw DimensionError("strata length does not match the sample count");
    std::mt19937_64 rng(seed);
    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(n));
    if (strata) {
        std::map<double, std::vector<Index>> groups;
        for (Index i = 0; i < n; ++i)
            groups[(*strata)(i)].push_back(i);
        for (auto& [label, members] : groups) {
            std::shuffle(members.begin(), members.end(), rng);
            order.insert(order.end(), members.begin(), members.end());
        }
    } else {
        order.resize(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Index{0});
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < order.size(); ++i)
        folds[i % static_cast<std::size_t>(k)].push_back(order[i]);
    for (auto& fold : folds)
        std::sort(fold.begin(), fold.end());
    return folds;
}

std::vector<CvReport> kfold_cv(const Dataset& d, const std::vector<FpcaKind>& methods, Link link,
                               const CvOptions& options)
{
    if (methods.empty())
        throw ParameterError("no methods to cross-validate");
    const Index n = d.size();
    const EncodedResponses encoded = encode_responses(d.responses, link);
    const Vector& y = encoded.values;
    const bool classify = link != Link::linear;
    const auto folds = make_folds(n, options.k, options.seed, classify ? &y : nullptr);

    const std::vector<SampledFunction> samples = d.samples();
    std::vector<SampledFunction> uniform_samples;
    const bool elastic = std::any_of(methods.begin(), methods.end(), [](FpcaKind m) { return m != FpcaKind::standard; });
    if (elastic && !d.grid.is_uniform()) {
        const Grid uniform = Grid::uniform(d.grid.size());
        for (const auto& f : samples)
            uniform_samples.push_back(resample(f, uniform));
    }
    const auto& elastic_samples = uniform_samples.empty() ? samples : uniform_samples;

    std::vector<CvReport> reports;
    for (FpcaKind m : methods)
        reports.push_back({d.name, m, link, metric_for(link), 0.0, 0.0, {}, options.n_components, options.seed});

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto fold = static_cast<Index>(f);
        const std::vector<Index>& test = folds[f];
        const std::vector<Index> train = complement(n, test);
        const Vector y_train = subset(y, train);
        if (classify) {
            const std::set<double> present(y_train.data(), y_train.data() + y_train.size());
            if (present.size() != encoded.classes.size())
                throw StratificationError("training split of fold " + std::to_string(fold + 1) + " lacks a class");
        }
        const TrainingData train_data{subset(samples, train), y_train};
        if (options.hooks.on_fit)
            options.hooks.on_fit(fold, train, train_data);

        std::optional<AlignedSet> aligned;
        if (elastic)
            aligned = align_set(subset(elastic_samples, train), options.align);

        for (std::size_t r = 0; r < methods.size(); ++r) {
            const FpcaKind method = methods[r];
            const FitOptions fit_options{method, options.n_components, options.C, options.align, options.optimizer};
            const RegressionModel model =
                method == FpcaKind::standard
                    ? fit_on_features(link, standard_fpca(train_data.functions, options.n_components), std::nullopt,
                                      y_train, options.optimizer)
                    : fit_aligned(link, *aligned, y_train, fit_options);

            Vector predicted(static_cast<Index>(test.size()));
            for (std::size_t t = 0; t < test.size(); ++t) {
                const auto i = static_cast<std::size_t>(test[t]);
                if (options.hooks.on_predict)
                    options.hooks.on_predict(fold, test[t]);
                const Prediction p = predict(model, method == FpcaKind::standard ? samples[i] : elastic_samples[i]);
                predicted(static_cast<Index>(t)) = classify ? p.label() : p.value();
            }
            const Vector y_test = subset(y, test);
            reports[r].folds.push_back(classify ? fraction_correct(y_test, predicted)
                                                : sum_squared_error(y_test, predicted));
        }
    }

    for (CvReport& r : reports) {
        r.metric_mean = std::accumulate(r.folds.begin(), r.folds.end(), 0.0) / static_cast<double>(r.folds.size());
        r.metric_sd = sample_sd(r.folds, r.metric_mean);
    }
    return reports;
}

CvReport kfold_cv(const Dataset& d, FpcaKind method, Link link, const CvOptions& options)
{
    return kfold_cv(d, std::vector<FpcaKind>{method}, link, options).front();
}

} // namespace efpcr
