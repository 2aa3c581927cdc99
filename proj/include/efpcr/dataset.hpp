#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "efpcr/regression.hpp"

namespace efpcr {

enum class ResponseKind { real, binary, multiclass };
enum class DatasetFormat { delimited, ucr };

std::string_view to_string(ResponseKind kind);
std::string_view to_string(DatasetFormat format);
DatasetFormat parse_format(std::string_view name);

/// Binary for two distinct integer values, multiclass for more than two
/// integer values, real otherwise.
ResponseKind infer_response_kind(const Vector& responses);

struct Dataset
{
    std::string name;
    Grid grid;
    /// n x T, one sample per row.
    Matrix functions;
    Vector responses;
    ResponseKind response_kind;

    Dataset(std::string name, Grid grid, Matrix functions, Vector responses, ResponseKind kind);
    Dataset(std::string name, const std::vector<SampledFunction>& fs, Vector responses);

    Index size() const noexcept { return functions.rows(); }
    SampledFunction sample(Index i) const { return {grid, functions.row(i).transpose()}; }
    std::vector<SampledFunction> samples() const;
};

/// Responses recoded for a link. Logistic: the smaller of two distinct
/// values becomes -1, the larger +1. Multinomial: sorted distinct values
/// become 1..m. Linear: unchanged. `classes[k]` is the raw value of code k
/// (in code order: -1 then +1, or 1..m).
struct EncodedResponses
{
    Vector values;
    std::vector<double> classes;
};

EncodedResponses encode_responses(const Vector& raw, Link link);
TrainingData to_training(const Dataset& d, Link link);

/// Delimited: header row (placeholder cell, then the T sample times), then
/// one row per sample with the response first. UCR: class label first, then
/// T values on an implicit uniform grid of [0, 1]. Comma, tab and blank
/// separators are detected from the first line.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
void save_dataset(const Dataset& d, const std::filesystem::path& path, DatasetFormat format);

/// Shortest text that parses back to the same double.
std::string format_number(double x);

} // namespace efpcr
