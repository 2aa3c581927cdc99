#pragma once

#include <filesystem>

#include "json.hpp"

#include "efpcr/crossval.hpp"

namespace efpcr {

using Json = nlohmann::json;

Json to_json(const Grid& grid);
Grid grid_from_json(const Json& j);

Json to_json(const FpcaModel& model);
FpcaModel fpca_from_json(const Json& j);

Json to_json(const AlignmentReference& reference);
AlignmentReference alignment_from_json(const Json& j);

Json to_json(const RegressionModel& model);
RegressionModel regression_from_json(const Json& j);

Json to_json(const CvReport& report);
CvReport report_from_json(const Json& j);

/// Malformed documents raise ParseError; unreadable files raise IoError.
Json read_json(const std::filesystem::path& path);
void write_json(const Json& j, const std::filesystem::path& path);

void save_model(const RegressionModel& model, const std::filesystem::path& path);
RegressionModel load_model(const std::filesystem::path& path);

} // namespace efpcr
