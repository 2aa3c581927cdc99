#include "efpcr/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "efpcr/serialization.hpp"

namespace efpcr {

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string cell(const CvReport& r)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4f (%.4f)", r.metric_mean, r.metric_sd);
    return buf;
}

bool same(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void write_columns(const std::filesystem::path& path, const Vector& t, const std::vector<const Vector*>& columns)
{
    std::ostringstream out;
    out << 't';
    for (std::size_t k = 0; k < columns.size(); ++k)
        out << ",f" << (k + 1);
    out << '\n';
    for (Index i = 0; i < t.size(); ++i) {
        out << format_number(t(i));
        for (const Vector* c : columns)
            out << ',' << format_number((*c)(i));
        out << '\n';
    }
    write_text(path, out.str());
}

} // namespace

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text) || !file.flush())
        throw IoError("cannot write '" + path.string() + "'");
}

std::string format_report_table(const std::vector<CvReport>& reports)
{
    if (reports.empty())
        throw ParameterError("no reports to emit");
    std::vector<std::string> labels;
    std::vector<FpcaKind> methods;
    std::map<std::pair<std::string, FpcaKind>, const CvReport*> cells;
    for (const CvReport& r : reports) {
        if (std::find(labels.begin(), labels.end(), r.label) == labels.end())
            labels.push_back(r.label);
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
        cells[{r.label, r.method}] = &r;
    }

    std::ostringstream out;
    out << "dataset";
    for (FpcaKind m : methods)
        out << ',' << method_name(m);
    out << '\n';
    for (const std::string& label : labels) {
        const CvReport* best = nullptr;
        for (FpcaKind m : methods) {
            const auto it = cells.find({label, m});
            if (it == cells.end())
                continue;
            const CvReport* r = it->second;
            const bool lower = r->metric == Metric::sse;
            if (!best || (lower ? r->metric_mean < best->metric_mean : r->metric_mean > best->metric_mean))
                best = r;
        }
        out << csv_field(label);
        for (FpcaKind m : methods) {
            out << ',';
            const auto it = cells.find({label, m});
            if (it == cells.end())
                continue;
            out << cell(*it->second);
            if (same(it->second->metric_mean, best->metric_mean))
                out << '*';
        }
        out << '\n';
    }
    return out.str();
}

void emit_report(const std::vector<CvReport>& reports, const std::filesystem::path& path)
{
    write_text(path, format_report_table(reports));
    Json j = Json::array();
    for (const CvReport& r : reports)
        j.push_back(to_json(r));
    std::filesystem::path json_path = path;
    json_path.replace_extension(".json");
    write_json(j, json_path);
}

void emit_alignment_plotdata(const AlignedSet& aligned, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    std::vector<const Vector*> originals;
    std::vector<const Vector*> functions;
    std::vector<const Vector*> warps;
    for (Index i = 0; i < aligned.size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        originals.push_back(&aligned.originals[k].values);
        functions.push_back(&aligned.aligned_functions[k].values);
        warps.push_back(&aligned.warps[k].values);
    }
    const Vector& t = aligned.grid().times();
    write_columns(dir / "original.csv", t, originals);
    write_columns(dir / "aligned.csv", t, functions);
    write_columns(dir / "warps.csv", t, warps);
}

} // namespace efpcr
