#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "efpcr/crossval.hpp"

namespace efpcr {

/// Writes a delimited table with one row per report label and one column per
/// method, cells "mean (sd)", the best cell of each row suffixed with '*'
/// (all tied cells are marked). A JSON copy goes next to it with the
/// extension replaced by ".json".
void emit_report(const std::vector<CvReport>& reports, const std::filesystem::path& path);

/// The table text emit_report writes.
std::string format_report_table(const std::vector<CvReport>& reports);

/// Writes original.csv, aligned.csv and warps.csv into `dir`: a `t` column
/// followed by one column per sample.
void emit_alignment_plotdata(const AlignedSet& aligned, const std::filesystem::path& dir);

/// Writes `text` to `path`, raising IoError naming the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace efpcr
