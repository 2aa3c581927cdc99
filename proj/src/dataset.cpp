#include "efpcr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace efpcr {

namespace {

struct Cell
{
    std::string_view text;
    Index column;
};

std::vector<Cell> split(std::string_view line, char sep)
{
    std::vector<Cell> cells;
    Index column = 1;
    if (sep == ' ') {
        std::size_t pos = 0;
        while (pos < line.size()) {
            pos = line.find_first_not_of(" \t", pos);
            if (pos == std::string_view::npos)
                break;
            const std::size_t end = std::min(line.find_first_of(" \t", pos), line.size());
            cells.push_back({line.substr(pos, end - pos), column++});
            pos = end;
        }
        return cells;
    }
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(sep, start);
        std::string_view cell = line.substr(start, end == std::string_view::npos ? line.npos : end - start);
        const std::size_t a = cell.find_first_not_of(" \t");
        cell = a == std::string_view::npos ? std::string_view() : cell.substr(a, cell.find_last_not_of(" \t") - a + 1);
        cells.push_back({cell, column++});
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return cells;
}

char detect_separator(std::string_view line)
{
    if (line.find(',') != std::string_view::npos)
        return ',';
    if (line.find('\t') != std::string_view::npos)
        return '\t';
    return ' ';
}

double parse_cell(const std::string& path, Index line, const Cell& cell)
{
    std::string_view s = cell.text;
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size())
        throw ParseError(path, static_cast<std::size_t>(line), static_cast<std::size_t>(cell.column),
                         "non-numeric cell '" + std::string(cell.text) + "'");
    if (!std::isfinite(value))
        throw ParseError(path, static_cast<std::size_t>(line), static_cast<std::size_t>(cell.column), "non-finite value");
    return value;
}

struct Row
{
    Index line;
    std::vector<Cell> cells;
};

std::vector<std::string> read_lines(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

bool is_blank(std::string_view line)
{
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

void check_rows(const std::string& path, const std::vector<Row>& rows, std::size_t width)
{
    for (const Row& row : rows)
        if (row.cells.size() != width)
            throw ParseError(path, static_cast<std::size_t>(row.line),
                             static_cast<std::size_t>(std::min(row.cells.size(), width) + 1),
                             "expected " + std::to_string(width) + " cells, found "
                                 + std::to_string(row.cells.size()));
}

void fill(const std::string& path, const std::vector<Row>& rows, Matrix& X, Vector& y)
{
    const auto n = static_cast<Index>(rows.size());
    const auto T = static_cast<Index>(rows.front().cells.size()) - 1;
    X.resize(n, T);
    y.resize(n);
    for (Index i = 0; i < n; ++i) {
        const Row& row = rows[static_cast<std::size_t>(i)];
        y(i) = parse_cell(path, row.line, row.cells[0]);
        for (Index j = 0; j < T; ++j)
            X(i, j) = parse_cell(path, row.line, row.cells[static_cast<std::size_t>(j + 1)]);
    }
}

void validate_kind(const Vector& y, ResponseKind kind)
{
    if (kind == ResponseKind::real)
        return;
    for (Index i = 0; i < y.size(); ++i)
        if (y(i) != std::round(y(i)))
            throw ParameterError("class labels must be integers");
    const std::set<double> distinct(y.data(), y.data() + y.size());
    if (kind == ResponseKind::binary && distinct.size() > 2)
        throw ParameterError("binary responses carry more than two classes");
}

} // namespace

std::string_view to_string(ResponseKind kind)
{
    switch (kind) {
    case ResponseKind::real: return "real";
    case ResponseKind::binary: return "binary";
    case ResponseKind::multiclass: return "multiclass";
    }
    return "unknown";
}

std::string_view to_string(DatasetFormat format)
{
    return format == DatasetFormat::ucr ? "ucr" : "delimited";
}

DatasetFormat parse_format(std::string_view name)
{
    if (name == "ucr")
        return DatasetFormat::ucr;
    if (name == "delimited" || name == "csv")
        return DatasetFormat::delimited;
    throw ParameterError("unknown dataset format '" + std::string(name) + "'");
}

ResponseKind infer_response_kind(const Vector& responses)
{
    std::set<double> distinct;
    for (Index i = 0; i < responses.size(); ++i) {
        if (responses(i) != std::round(responses(i)))
            return ResponseKind::real;
        distinct.insert(responses(i));
    }
    return distinct.size() <= 2 ? ResponseKind::binary : ResponseKind::multiclass;
}

Dataset::Dataset(std::string name_, Grid grid_, Matrix functions_, Vector responses_, ResponseKind kind)
    : name(std::move(name_)), grid(std::move(grid_)), functions(std::move(functions_)),
      responses(std::move(responses_)), response_kind(kind)
{
    if (functions.cols() != grid.size())
        throw DimensionError("dataset functions have " + std::to_string(functions.cols()) + " columns, grid has "
                             + std::to_string(grid.size()) + " points");
    if (functions.rows() != responses.size())
        throw DimensionError("dataset has " + std::to_string(functions.rows()) + " functions and "
                             + std::to_string(responses.size()) + " responses");
    if (!functions.allFinite() || !responses.allFinite())
        throw ParameterError("dataset values must be finite");
    validate_kind(responses, kind);
}

Dataset::Dataset(std::string name_, const std::vector<SampledFunction>& fs, Vector responses_)
    : Dataset(std::move(name_), fs.empty() ? throw ParameterError("dataset is empty") : fs.front().grid,
              [&] {
                  Matrix X(static_cast<Index>(fs.size()), fs.front().grid.size());
                  for (std::size_t i = 0; i < fs.size(); ++i) {
                      require_same_grid(fs.front().grid, fs[i].grid);
                      X.row(static_cast<Index>(i)) = fs[i].values.transpose();
                  }
                  return X;
              }(),
              responses_, infer_response_kind(responses_))
{}

std::vector<SampledFunction> Dataset::samples() const
{
    std::vector<SampledFunction> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Index i = 0; i < size(); ++i)
        out.push_back(sample(i));
    return out;
}

EncodedResponses encode_responses(const Vector& raw, Link link)
{
    EncodedResponses out{raw, {}};
    if (link == Link::linear)
        return out;
    const std::set<double> distinct(raw.data(), raw.data() + raw.size());
    out.classes.assign(distinct.begin(), distinct.end());
    if (link == Link::logistic && out.classes.size() > 2)
        throw DegenerateLabelsError("logistic link needs two classes, found " + std::to_string(out.classes.size()));
    std::map<double, double> code;
    for (std::size_t k = 0; k < out.classes.size(); ++k)
        code[out.classes[k]] = link == Link::logistic ? (k == 0 ? -1.0 : 1.0) : static_cast<double>(k + 1);
    for (Index i = 0; i < raw.size(); ++i)
        out.values(i) = code[raw(i)];
    return out;
}

TrainingData to_training(const Dataset& d, Link link)
{
    return {d.samples(), encode_responses(d.responses, link).values};
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format)
{
    const std::string where = path.string();
    const std::vector<std::string> lines = read_lines(path);
    std::vector<Row> rows;
    char sep = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_blank(lines[i]))
            continue;
        if (sep == 0)
            sep = detect_separator(lines[i]);
        rows.push_back({static_cast<Index>(i + 1), split(lines[i], sep)});
    }
    if (rows.empty())
        throw ParseError(where, 1, 1, "empty file");

    const std::string name = path.stem().string();
    if (format == DatasetFormat::ucr) {
        const std::size_t width = rows.front().cells.size();
        if (width < 4)
            throw ParseError(where, static_cast<std::size_t>(rows.front().line), 1, "need a label and at least 3 values");
        check_rows(where, rows, width);
        Matrix X;
        Vector y;
        fill(where, rows, X, y);
        ResponseKind kind = infer_response_kind(y);
        if (kind == ResponseKind::real)
            throw ParseError(where, static_cast<std::size_t>(rows.front().line), 1, "UCR class labels must be integers");
        Grid grid = Grid::uniform(X.cols());
        return Dataset(name, std::move(grid), std::move(X), std::move(y), kind);
    }

    const Row& header = rows.front();
    if (rows.size() < 2)
        throw ParseError(where, static_cast<std::size_t>(header.line), 1, "no sample rows after the header");
    const std::size_t width = header.cells.size();
    if (width < 4)
        throw ParseError(where, static_cast<std::size_t>(header.line), 1, "need a response and at least 3 times");
    Vector times(static_cast<Index>(width) - 1);
    for (std::size_t j = 1; j < width; ++j)
        times(static_cast<Index>(j) - 1) = parse_cell(where, header.line, header.cells[j]);
    const std::vector<Row> body(rows.begin() + 1, rows.end());
    check_rows(where, body, width);
    Matrix X;
    Vector y;
    fill(where, body, X, y);
    Grid grid = [&] {
        try {
            return Grid::normalized(times);
        } catch (const Error& e) {
            throw ParseError(where, static_cast<std::size_t>(header.line), 2, e.what());
        }
    }();
    return Dataset(name, std::move(grid), std::move(X), y, infer_response_kind(y));
}

std::string format_number(double x)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

void save_dataset(const Dataset& d, const std::filesystem::path& path, DatasetFormat format)
{
    std::ostringstream out;
    if (format == DatasetFormat::delimited) {
        out << "response";
        for (Index j = 0; j < d.grid.size(); ++j)
            out << ',' << format_number(d.grid[j]);
        out << '\n';
    }
    for (Index i = 0; i < d.size(); ++i) {
        out << format_number(d.responses(i));
        for (Index j = 0; j < d.functions.cols(); ++j)
            out << ',' << format_number(d.functions(i, j));
        out << '\n';
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << out.str()) || !file.flush())
        throw IoError("cannot write '" + path.string() + "'");
}

} // namespace efpcr
