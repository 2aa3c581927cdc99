#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "efpcr/report.hpp"
#include "efpcr/serialization.hpp"
#include "efpcr/simulation.hpp"

using namespace efpcr;

namespace {

struct Common
{
    std::string in;
    std::string format = "delimited";
    std::string out;
    std::string method = "combined";
    std::string link = "linear";
    Index components = 3;
    std::optional<double> C;
    std::uint64_t seed = 0;
};

std::vector<FpcaKind> parse_methods(const std::string& spec)
{
    if (spec == "all")
        return {FpcaKind::combined, FpcaKind::vertical, FpcaKind::horizontal, FpcaKind::standard};
    std::vector<FpcaKind> out;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');)
        out.push_back(parse_fpca_kind(item));
    return out;
}

Dataset load(const Common& c)
{
    return load_dataset(c.in, parse_format(c.format));
}

int run_simulate(const Common& c, const std::string& scenario, Index per_class, Index points, double warp_amplitude,
                 double noise_sd)
{
    ScenarioSpec spec = default_scenario(parse_variability(scenario), parse_link(c.link), c.seed);
    spec.n_per_class = per_class;
    spec.n_points = points;
    spec.warp_amplitude = warp_amplitude;
    spec.noise_sd = noise_sd;
    const SimulatedData sim = generate(spec);
    const Dataset d(scenario, sim.data.functions, sim.data.responses);
    save_dataset(d, c.out, parse_format(c.format));
    return 0;
}

int run_align(const Common& c)
{
    const Dataset d = load(c);
    std::vector<SampledFunction> fs = d.samples();
    if (!d.grid.is_uniform()) {
        const Grid uniform = Grid::uniform(d.grid.size());
        for (auto& f : fs)
            f = resample(f, uniform);
    }
    emit_alignment_plotdata(align_set(fs), c.out);
    return 0;
}

int run_fpca(const Common& c)
{
    const Dataset d = load(c);
    const FpcaKind kind = parse_fpca_kind(c.method);
    if (kind == FpcaKind::standard) {
        write_json(to_json(standard_fpca(d.samples(), c.components)), c.out);
        return 0;
    }
    const TrainingData data = to_training(d, Link::linear);
    FitOptions options;
    options.kind = kind;
    options.n_components = c.components;
    options.C = c.C;
    const RegressionModel model = fit(Link::linear, data, options);
    write_json(to_json(model.fpca), c.out);
    return 0;
}

int run_fit(const Common& c)
{
    const Dataset d = load(c);
    const Link link = parse_link(c.link);
    const EncodedResponses encoded = encode_responses(d.responses, link);
    FitOptions options;
    options.kind = parse_fpca_kind(c.method);
    options.n_components = c.components;
    options.C = c.C;
    const RegressionModel model = fit(link, TrainingData{d.samples(), encoded.values}, options);
    if (!model.converged)
        std::cerr << "warning: optimizer stopped before convergence after " << model.iterations << " iterations\n";
    Json j = to_json(model);
    j["classes"] = encoded.classes;
    write_json(j, c.out);
    return 0;
}

int run_predict(const Common& c, const std::string& model_path)
{
    const Json j = read_json(model_path);
    const RegressionModel model = regression_from_json(j);
    const auto classes = j.value("classes", std::vector<double>{});
    const Dataset d = load(c);
    std::ostringstream out;
    out << "index,value,label\n";
    for (Index i = 0; i < d.size(); ++i) {
        SampledFunction f = d.sample(i);
        if (model.alignment && !(f.grid == model.alignment->mean_srsf.grid))
            f = resample(f, model.alignment->mean_srsf.grid);
        const Prediction p = predict(model, f);
        out << i << ',' << format_number(p.value());
        if (model.link == Link::logistic) {
            const int code = p.label();
            out << ',' << format_number(classes.size() == 2 ? classes[code > 0 ? 1 : 0] : code);
        } else if (model.link == Link::multinomial) {
            const auto code = static_cast<std::size_t>(p.label());
            out << ',' << format_number(classes.size() >= code ? classes[code - 1] : static_cast<double>(code));
        } else {
            out << ',';
        }
        out << '\n';
    }
    if (c.out.empty())
        std::cout << out.str();
    else
        write_text(c.out, out.str());
    return 0;
}

int run_crossval(const Common& c, const std::string& methods, Index folds)
{
    const Dataset d = load(c);
    CvOptions options;
    options.k = folds;
    options.n_components = c.components;
    options.seed = c.seed;
    options.C = c.C;
    const auto reports = kfold_cv(d, parse_methods(methods), parse_link(c.link), options);
    emit_report(reports, c.out);
    std::cout << format_report_table(reports);
    return 0;
}

int run_report(const std::vector<std::string>& inputs, const std::string& out)
{
    std::vector<CvReport> reports;
    for (const auto& path : inputs) {
        const Json j = read_json(path);
        if (j.is_array())
            for (const Json& r : j)
                reports.push_back(report_from_json(r));
        else
            reports.push_back(report_from_json(j));
    }
    emit_report(reports, out);
    std::cout << format_report_table(reports);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Elastic functional principal component regression"};
    app.require_subcommand(1);
    Common c;

    const auto add_data = [&](CLI::App* sub) {
        sub->add_option("--in", c.in, "Input dataset")->required();
        sub->add_option("--format", c.format, "delimited or ucr")->capture_default_str();
    };
    const auto add_model_flags = [&](CLI::App* sub) {
        sub->add_option("--method", c.method, "combined, vertical, horizontal or standard")->capture_default_str();
        sub->add_option("--components", c.components, "Number of principal components")->capture_default_str();
        sub->add_option("--C", c.C, "Phase scale for the combined method");
    };

    std::string scenario = "combined";
    Index per_class = 20;
    Index points = 101;
    double warp_amplitude = 0.4;
    double noise_sd = 0.01;
    auto* simulate = app.add_subcommand("simulate", "Generate a simulated dataset");
    simulate->add_option("--scenario", scenario, "combined, vertical or horizontal")->capture_default_str();
    simulate->add_option("--link", c.link, "linear, logistic or multinomial")->capture_default_str();
    simulate->add_option("--seed", c.seed)->capture_default_str();
    simulate->add_option("--per-class", per_class)->capture_default_str();
    simulate->add_option("--points", points)->capture_default_str();
    simulate->add_option("--warp-amplitude", warp_amplitude)->capture_default_str();
    simulate->add_option("--noise-sd", noise_sd)->capture_default_str();
    simulate->add_option("--format", c.format)->capture_default_str();
    simulate->add_option("--out", c.out)->required();

    auto* align = app.add_subcommand("align", "Align a dataset and write plot data");
    add_data(align);
    align->add_option("--out", c.out, "Output directory")->required();

    auto* fpca = app.add_subcommand("fpca", "Fit principal components");
    add_data(fpca);
    add_model_flags(fpca);
    fpca->add_option("--out", c.out)->required();

    auto* fit_cmd = app.add_subcommand("fit", "Fit a regression model");
    add_data(fit_cmd);
    add_model_flags(fit_cmd);
    fit_cmd->add_option("--link", c.link)->capture_default_str();
    fit_cmd->add_option("--out", c.out)->required();

    std::string model_path;
    auto* predict_cmd = app.add_subcommand("predict", "Predict with a fitted model");
    add_data(predict_cmd);
    predict_cmd->add_option("--model", model_path)->required();
    predict_cmd->add_option("--out", c.out, "Output CSV (stdout when absent)");

    std::string methods = "all";
    Index folds = 5;
    auto* crossval = app.add_subcommand("crossval", "K-fold cross-validation");
    add_data(crossval);
    crossval->add_option("--method", methods, "Comma-separated methods or 'all'")->capture_default_str();
    crossval->add_option("--components", c.components)->capture_default_str();
    crossval->add_option("--C", c.C);
    crossval->add_option("--link", c.link)->capture_default_str();
    crossval->add_option("--folds", folds)->capture_default_str();
    crossval->add_option("--seed", c.seed)->capture_default_str();
    crossval->add_option("--out", c.out, "Report table; a .json copy is written alongside")->required();

    std::vector<std::string> inputs;
    auto* report = app.add_subcommand("report", "Merge cross-validation reports into one table");
    report->add_option("--in", inputs, "Report JSON files")->required();
    report->add_option("--out", c.out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return run_simulate(c, scenario, per_class, points, warp_amplitude, noise_sd);
        if (align->parsed())
            return run_align(c);
        if (fpca->parsed())
            return run_fpca(c);
        if (fit_cmd->parsed())
            return run_fit(c);
        if (predict_cmd->parsed())
            return run_predict(c, model_path);
        if (crossval->parsed())
            return run_crossval(c, methods, folds);
        if (report->parsed())
            return run_report(inputs, c.out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
