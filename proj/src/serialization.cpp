#include "efpcr/serialization.hpp"

#include <fstream>
#include <sstream>

#include "efpcr/report.hpp"

namespace efpcr {

namespace {

Json vector_json(const Vector& v)
{
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from(const Json& j)
{
    const auto xs = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(xs.data(), static_cast<Index>(xs.size()));
}

Json matrix_json(const Matrix& m)
{
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index k = 0; k < m.cols(); ++k)
            data.push_back(m(i, k));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from(const Json& j)
{
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols)
        throw DimensionError("matrix payload does not match its shape");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index k = 0; k < cols; ++k)
            m(i, k) = data[static_cast<std::size_t>(i * cols + k)];
    return m;
}

template <class F>
auto guarded(const char* what, F&& f)
{
    try {
        return f();
    } catch (const Json::exception& e) {
        throw ParseError(what, 0, 0, e.what());
    }
}

} // namespace

Json to_json(const Grid& grid)
{
    return vector_json(grid.times());
}

Grid grid_from_json(const Json& j)
{
    return Grid(vector_from(j));
}

Json to_json(const FpcaModel& m)
{
    return {{"kind", std::string(to_string(m.kind))},
            {"grid", to_json(m.grid)},
            {"mean", vector_json(m.mean)},
            {"basis", matrix_json(m.basis)},
            {"singular_values", vector_json(m.singular_values)},
            {"total_variance", m.total_variance},
            {"weights", vector_json(m.weights)},
            {"C", m.C},
            {"n_components", m.n_components},
            {"mean_srsf", vector_json(m.mean_srsf)},
            {"psi_mean", vector_json(m.psi_mean)},
            {"f0_mean", m.f0_mean},
            {"scores", matrix_json(m.scores)}};
}

FpcaModel fpca_from_json(const Json& j)
{
    return guarded("fpca model", [&] {
        FpcaModel m{.kind = parse_fpca_kind(j.at("kind").get<std::string>()), .grid = grid_from_json(j.at("grid"))};
        m.mean = vector_from(j.at("mean"));
        m.basis = matrix_from(j.at("basis"));
        m.singular_values = vector_from(j.at("singular_values"));
        m.total_variance = j.at("total_variance").get<double>();
        m.weights = vector_from(j.at("weights"));
        m.C = j.at("C").get<double>();
        m.n_components = j.at("n_components").get<Index>();
        m.mean_srsf = vector_from(j.at("mean_srsf"));
        m.psi_mean = vector_from(j.at("psi_mean"));
        m.f0_mean = j.at("f0_mean").get<double>();
        m.scores = matrix_from(j.at("scores"));
        if (m.basis.rows() != m.mean.size() || m.basis.cols() != m.n_components || m.weights.size() != m.mean.size()
            || m.mean.size() != representation_size(m.kind, m.grid.size()))
            throw DimensionError("fpca model fields have inconsistent sizes");
        return m;
    });
}

Json to_json(const AlignmentReference& r)
{
    return {{"grid", to_json(r.mean_srsf.grid)},
            {"mean_srsf", vector_json(r.mean_srsf.values)},
            {"f0", r.mean_srsf.f0},
            {"psi_mean", vector_json(r.psi_mean.values)},
            {"smoothing_half_window", r.gradient.smoothing_half_window},
            {"max_step", r.dp.max_step},
            {"target_srsf", vector_json(r.target.values)},
            {"centering", vector_json(r.centering.values)}};
}

AlignmentReference alignment_from_json(const Json& j)
{
    return guarded("alignment reference", [&] {
        const Grid grid = grid_from_json(j.at("grid"));
        return AlignmentReference{Srsf(grid, vector_from(j.at("mean_srsf")), j.at("f0").get<double>()),
                                  PsiFunction(grid, vector_from(j.at("psi_mean"))),
                                  GradientOptions{j.at("smoothing_half_window").get<Index>()},
                                  DpOptions{j.at("max_step").get<int>()},
                                  Srsf(grid, vector_from(j.at("target_srsf")), j.at("f0").get<double>()),
                                  WarpingFunction(grid, vector_from(j.at("centering")))};
    });
}

Json to_json(const RegressionModel& m)
{
    Json j{{"link", std::string(to_string(m.link))},
           {"coefficients", matrix_json(m.coefficients)},
           {"n_classes", m.n_classes},
           {"fpca", to_json(m.fpca)},
           {"converged", m.converged},
           {"iterations", m.iterations}};
    j["alignment"] = m.alignment ? to_json(*m.alignment) : Json(nullptr);
    return j;
}

RegressionModel regression_from_json(const Json& j)
{
    return guarded("regression model", [&] {
        std::optional<AlignmentReference> alignment;
        if (!j.at("alignment").is_null())
            alignment = alignment_from_json(j.at("alignment"));
        RegressionModel m{parse_link(j.at("link").get<std::string>()),
                          matrix_from(j.at("coefficients")),
                          j.at("n_classes").get<Index>(),
                          fpca_from_json(j.at("fpca")),
                          std::move(alignment),
                          j.at("converged").get<bool>(),
                          j.at("iterations").get<int>()};
        const Index K = m.link == Link::multinomial ? m.n_classes - 1 : 1;
        if (m.coefficients.rows() != m.fpca.n_components + 1 || m.coefficients.cols() != K)
            throw DimensionError("coefficient matrix does not match the model");
        return m;
    });
}

Json to_json(const CvReport& r)
{
    return {{"label", r.label},
            {"method", method_name(r.method)},
            {"link", std::string(to_string(r.link))},
            {"metric", std::string(to_string(r.metric))},
            {"metric_mean", r.metric_mean},
            {"metric_sd", r.metric_sd},
            {"folds", r.folds},
            {"n_components", r.n_components},
            {"seed", r.seed}};
}

CvReport report_from_json(const Json& j)
{
    return guarded("cv report", [&] {
        CvReport r;
        r.label = j.at("label").get<std::string>();
        r.method = parse_fpca_kind(j.at("method").get<std::string>());
        r.link = parse_link(j.at("link").get<std::string>());
        const auto metric = j.at("metric").get<std::string>();
        if (metric != "SSE" && metric != "PC")
            throw ParameterError("unknown metric '" + metric + "'");
        r.metric = metric == "SSE" ? Metric::sse : Metric::pc;
        r.metric_mean = j.at("metric_mean").get<double>();
        r.metric_sd = j.at("metric_sd").get<double>();
        r.folds = j.at("folds").get<std::vector<double>>();
        r.n_components = j.at("n_components").get<Index>();
        r.seed = j.at("seed").get<std::uint64_t>();
        return r;
    });
}

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string(), 0, e.byte, e.what());
    }
}

void write_json(const Json& j, const std::filesystem::path& path)
{
    write_text(path, j.dump(2) + "\n");
}

void save_model(const RegressionModel& model, const std::filesystem::path& path)
{
    write_json(to_json(model), path);
}

RegressionModel load_model(const std::filesystem::path& path)
{
    return regression_from_json(read_json(path));
}

} // namespace efpcr
