#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "natscale/algebra.hpp"
#include "natscale/determinacy.hpp"
#include "natscale/error.hpp"
#include "natscale/indices.hpp"
#include "natscale/io.hpp"
#include "natscale/scales.hpp"
#include "natscale/simulate.hpp"

using namespace natscale;
using natscale::io::json;

namespace {

enum Exit { ok = 0, input_error = 2, data_error = 3, hypothesis_failed = 4 };

struct RunConfig {
    std::vector<std::string> models;
    std::vector<std::string> samples;
    std::optional<double> grid_min, grid_max, grid_ratio;
    double window = kDefaultWindow;
    std::optional<std::uint64_t> seed;
    std::size_t mc_n = 100000;
    std::string out;
    std::vector<std::string> emit{"json"};
    // subcommand specific
    std::string process, transform, scale, form = "diagonal";
    double eps = 0.2;
    std::size_t k_min = kDefaultKMin;
};

// A hazard input: an analytic model or an empirical sample.
struct Input {
    std::string label;
    json description;
    std::optional<TailModel> model;
    std::shared_ptr<const SampleSet> sample;
};

json parse_json_arg(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && arg[first] == '{') {
        try {
            return json::parse(arg);
        } catch (const json::parse_error& e) {
            fail(ErrorKind::input, std::string("invalid inline JSON: ") + e.what());
        }
    }
    return io::read_json_file(arg);
}

std::vector<Input> load_inputs(const RunConfig& cfg) {
    std::vector<Input> out;
    for (const auto& m : cfg.models) {
        Input in;
        in.model = io::model_from_json(parse_json_arg(m));
        in.description = {{"model", io::model_to_json(*in.model)}};
        in.label = in.model->family();
        out.push_back(std::move(in));
    }
    for (const auto& path : cfg.samples) {
        Input in;
        in.sample = std::make_shared<const SampleSet>(io::read_sample_csv(path));
        in.description = {{"sample", std::filesystem::path(path).filename().string()},
                          {"n", in.sample->size()}};
        in.label = std::filesystem::path(path).stem().string();
        out.push_back(std::move(in));
    }
    return out;
}

EvalGrid grid_for(const Input& in, const RunConfig& cfg) {
    const double ratio = cfg.grid_ratio.value_or(kDefaultGridRatio);
    EvalGrid base = in.model ? analytic_grid(*in.model, 1e100, ratio)
                             : default_grid(*in.sample, cfg.k_min, ratio);
    if (!cfg.grid_min && !cfg.grid_max && !cfg.grid_ratio) return base;
    return EvalGrid(cfg.grid_min.value_or(base.x_min()), cfg.grid_max.value_or(base.x_max()), ratio);
}

HazardSource source_for(const Input& in, const EvalGrid& g, const RunConfig& cfg) {
    if (in.model) return HazardSource(*in.model);
    return HazardSource(empirical_hazard(in.sample, g, cfg.k_min));
}

// Hazard as a piecewise-linear table on the grid, anchored at R(0) = 0.
ScaleFunction hazard_table(const HazardSource& src, const EvalGrid& g) {
    std::vector<double> k{0.0}, v{0.0};
    for (double x : g.points()) {
        const auto r = src.at(x);
        if (!r || !std::isfinite(*r) || x <= k.back()) continue;
        k.push_back(x);
        v.push_back(std::max(*r, v.back()));
    }
    require(k.size() >= 3, ErrorKind::insufficient_tail_data, "hazard unavailable on the grid");
    const std::size_t n = k.size();
    return ScaleFunction(k, v, (v[n - 1] - v[n - 2]) / (k[n - 1] - k[n - 2]));
}

bool emits(const RunConfig& cfg, const std::string& what) {
    return std::find(cfg.emit.begin(), cfg.emit.end(), what) != cfg.emit.end();
}

json provenance(const RunConfig& cfg, const std::vector<Input>& inputs,
                const std::optional<EvalGrid>& grid) {
    json inj = json::array();
    for (const auto& in : inputs) inj.push_back(in.description);
    json p{{"inputs", inj}, {"window", cfg.window}, {"k_min", cfg.k_min}};
    if (grid) p["grid"] = io::grid_to_json(*grid);
    if (cfg.seed) {
        p["seed"] = *cfg.seed;
        p["mc_n"] = cfg.mc_n;
    }
    return p;
}

void write_text(const RunConfig& cfg, const std::string& name, const std::string& body) {
    std::filesystem::create_directories(cfg.out);
    std::ofstream f(std::filesystem::path(cfg.out) / name, std::ios::binary);
    if (!f) fail(ErrorKind::input, "cannot write " + name + " in " + cfg.out);
    f << body;
}

void write_report(const RunConfig& cfg, const std::string& command, json prov, json result) {
    json report{{"schema_version", io::kSchemaVersion},
                {"version", NATSCALE_VERSION},
                {"command", command},
                {"provenance", std::move(prov)},
                {"result", std::move(result)}};
    const std::string body = report.dump(2) + "\n";
    if (cfg.out.empty())
        std::cout << body;
    else if (emits(cfg, "json"))
        write_text(cfg, "report.json", body);
}

void write_curve(const RunConfig& cfg, const std::string& stem,
                 const std::vector<std::pair<double, double>>& curve, const std::string& y_name) {
    if (cfg.out.empty()) return;
    if (emits(cfg, "csv")) {
        std::ostringstream ss;
        io::write_curve_csv(ss, curve, "x", y_name);
        write_text(cfg, stem + ".csv", ss.str());
    }
    if (emits(cfg, "svg")) {
        // log-x polyline, y linear
        std::vector<std::pair<double, double>> pts;
        for (const auto& [x, y] : curve)
            if (x > 0.0 && std::isfinite(y)) pts.emplace_back(std::log10(x), y);
        if (pts.size() < 2) return;
        double x0 = pts.front().first, x1 = pts.back().first, y0 = pts[0].second, y1 = y0;
        for (const auto& p : pts) {
            y0 = std::min(y0, p.second);
            y1 = std::max(y1, p.second);
        }
        if (y1 <= y0) y1 = y0 + 1.0;
        const double w = 640, h = 400, m = 50;
        std::ostringstream s;
        s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
          << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
          << "<text x=\"" << m << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << stem
          << ": " << y_name << " vs log10 x</text>\n<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
        for (const auto& [lx, y] : pts)
            s << io::format_number(m + (lx - x0) / (x1 - x0) * (w - 2 * m)) << ','
              << io::format_number(h - m - (y - y0) / (y1 - y0) * (h - 2 * m)) << ' ';
        s << "\"/>\n<text x=\"" << m << "\" y=\"" << h - 15 << "\" font-size=\"11\">"
          << io::format_number(x0) << " .. " << io::format_number(x1) << " (log10 x); y in ["
          << io::format_number(y0) << ", " << io::format_number(y1) << "]</text>\n</svg>\n";
        write_text(cfg, stem + ".svg", s.str());
    }
}

int analyze(const RunConfig& cfg) {
    const auto inputs = load_inputs(cfg);
    require(inputs.size() == 1, ErrorKind::input, "analyze takes exactly one --model or --sample");
    const Input& in = inputs[0];
    const EvalGrid g = grid_for(in, cfg);
    const HazardSource src = source_for(in, g, cfg);

    json result;
    const LiminfEstimate e = exponential_index(src, g, cfg.window);
    result["exponential_index"] = io::to_json(e);
    result["heavy_tailed"] = !e.infinite && e.value <= 0.05;
    try {
        result["moment_index"] = io::to_json(moment_index(src, g, cfg.window));
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::parameter_domain) throw;
        result["moment_index"] = nullptr;
    }
    const NaturalScaleFit fit = natural_scale_fit(hazard_table(src, g), cfg.window);
    result["natural_scale"] = io::to_json(fit);
    const LiminfEstimate order = h_order(src, fit.h, g, cfg.window);
    result["h_order"] = io::to_json(order);
    result["determinacy"] = io::to_json(determinacy_test(fit.h, g, cfg.window));

    write_report(cfg, "analyze", provenance(cfg, inputs, g), result);
    write_curve(cfg, "ratio_curve", order.ratio_curve, "R_over_h");
    write_curve(cfg, "exponential_ratio", e.ratio_curve, "R_over_x");
    return ok;
}

const char* compare_verdict(const LiminfEstimate& xy, const LiminfEstimate& yx) {
    constexpr double tol = 0.05;
    if (xy.infinite || xy.value > 1.0 + tol) return "X-lighter";
    if (yx.infinite || yx.value > 1.0 + tol) return "Y-lighter";
    if (std::abs(xy.value - 1.0) <= tol && std::abs(yx.value - 1.0) <= tol) return "equivalent-order";
    return "inconclusive";
}

int compare(const RunConfig& cfg) {
    const auto inputs = load_inputs(cfg);
    require(inputs.size() == 2, ErrorKind::input, "compare takes exactly two inputs");
    const EvalGrid gx = grid_for(inputs[0], cfg), gy = grid_for(inputs[1], cfg);
    const double lo = std::max(gx.x_min(), gy.x_min()), hi = std::min(gx.x_max(), gy.x_max());
    require(hi > lo, ErrorKind::insufficient_tail_data, "input grids do not overlap");
    const EvalGrid g(lo, hi, cfg.grid_ratio.value_or(kDefaultGridRatio));
    const HazardSource sx = source_for(inputs[0], g, cfg), sy = source_for(inputs[1], g, cfg);
    const LiminfEstimate xy = ratio_liminf(sx, sy, g, cfg.window);
    const LiminfEstimate yx = ratio_liminf(sy, sx, g, cfg.window);
    json result{{"x_over_y", io::to_json(xy)},
                {"y_over_x", io::to_json(yx)},
                {"verdict", compare_verdict(xy, yx)}};
    write_report(cfg, "compare", provenance(cfg, inputs, g), result);
    write_curve(cfg, "x_over_y", xy.ratio_curve, "RX_over_RY");
    return ok;
}

int fit_scale(const RunConfig& cfg) {
    const auto inputs = load_inputs(cfg);
    require(inputs.size() == 1, ErrorKind::input, "fit-scale takes exactly one --model or --sample");
    const EvalGrid g = grid_for(inputs[0], cfg);
    const ScaleFunction r = hazard_table(source_for(inputs[0], g, cfg), g);
    const NaturalScaleFit fit = natural_scale_fit(r, cfg.window);
    json result{{"fit", io::to_json(fit)}, {"concave", check_concave(fit.h).concave}};
    write_report(cfg, "fit-scale", provenance(cfg, inputs, g), result);
    std::vector<std::pair<double, double>> hc;
    for (double x : g.points()) hc.emplace_back(x, fit.h(x));
    write_curve(cfg, "fitted_scale", hc, "h");
    write_curve(cfg, "ratio_curve", fit.ratio_curve, "R_over_h");
    return ok;
}

int simulate(const RunConfig& cfg) {
    require(!cfg.process.empty(), ErrorKind::input, "simulate needs --process");
    const ProcessSpec spec = io::process_from_json(parse_json_arg(cfg.process));
    const SampleSet s = simulate_process(spec, cfg.mc_n, RandomSource(*cfg.seed));
    json result{{"process", io::process_to_json(spec)},
                {"n", s.size()},
                {"clamped", s.clamped()},
                {"sample_provenance", s.provenance()}};
    json q = json::object();
    for (double u : {0.5, 0.9, 0.99, 0.999}) q[io::format_number(u)] = s.quantile(u);
    result["quantiles"] = q;
    json prov = provenance(cfg, {}, std::nullopt);
    write_report(cfg, "simulate", prov, result);
    if (!cfg.out.empty() && emits(cfg, "csv")) {
        std::ostringstream ss;
        io::write_sample_csv(ss, s);
        write_text(cfg, "sample.csv", ss.str());
    }
    return ok;
}

int verify(const RunConfig& cfg) {
    const auto inputs = load_inputs(cfg);
    if (!cfg.transform.empty()) {
        require(inputs.size() == 1 && inputs[0].model, ErrorKind::input,
                "transform verification takes one --model");
        require(cfg.form == "diagonal" || cfg.form == "single_variable", ErrorKind::input,
                "--form must be diagonal or single_variable");
        const TransformSpec t = io::transform_from_json(parse_json_arg(cfg.transform));
        const BoundForm form = cfg.form == "diagonal" ? BoundForm::diagonal : BoundForm::single_variable;
        std::optional<EvalGrid> grid;
        if (cfg.grid_min && cfg.grid_max)
            grid = EvalGrid(*cfg.grid_min, *cfg.grid_max, cfg.grid_ratio.value_or(kDefaultGridRatio));
        const BoundReport r = verify_transform_bound(t, *inputs[0].model, cfg.eps, cfg.mc_n, grid,
                                                     RandomSource(*cfg.seed), form, cfg.k_min);
        json result{{"transform", io::transform_to_json(t)}, {"bound", io::to_json(r)}};
        write_report(cfg, "verify", provenance(cfg, inputs, grid), result);
        std::vector<std::pair<double, double>> margins;
        for (const auto& p : r.points) margins.emplace_back(p.x, p.margin);
        write_curve(cfg, "bound_margin", margins, "rhs_minus_lhs");
        return r.consistent ? ok : hypothesis_failed;
    }
    require(inputs.size() == 2 && inputs[0].model && inputs[1].model, ErrorKind::input,
            "min-rule verification takes two --model inputs and --scale");
    require(!cfg.scale.empty(), ErrorKind::input, "min-rule verification needs --scale");
    const ScaleFunction h = io::scale_from_json(parse_json_arg(cfg.scale));
    MinRuleOptions opt;
    opt.k_min = cfg.k_min;
    const MinRuleReport r = verify_min_rule(*inputs[0].model, *inputs[1].model, h, cfg.mc_n,
                                            std::nullopt, cfg.window, RandomSource(*cfg.seed), opt);
    write_report(cfg, "verify", provenance(cfg, inputs, std::nullopt), {{"min_rule", io::to_json(r)}});
    for (const auto& c : r.checks)
        if (c.verdict != RuleVerdict::agree) return hypothesis_failed;
    return ok;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::input:
        case ErrorKind::parameter_domain:
            return input_error;
        case ErrorKind::not_a_scale_function:
        case ErrorKind::hypothesis_failed:
            return hypothesis_failed;
        default:
            return data_error;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Natural scales for tail analysis"};
    app.set_version_flag("--version", std::string(NATSCALE_VERSION));
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool mc) {
        sub->add_option("--model", cfg.models, "model JSON file or inline JSON");
        sub->add_option("--sample", cfg.samples, "sample CSV file");
        sub->add_option("--grid-min", cfg.grid_min);
        sub->add_option("--grid-max", cfg.grid_max);
        sub->add_option("--grid-ratio", cfg.grid_ratio)->check(CLI::PositiveNumber);
        sub->add_option("--window", cfg.window, "top log-fraction of the grid")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--k-min", cfg.k_min, "minimum exceedances per empirical grid point");
        sub->add_option("--out", cfg.out, "output directory (report to stdout when omitted)");
        sub->add_option("--emit", cfg.emit, "json, csv, svg")
            ->check(CLI::IsMember({"json", "csv", "svg"}))
            ->delimiter(',');
        auto* seed = sub->add_option("--seed", cfg.seed);
        if (mc) {
            seed->required();
            sub->add_option("--mc-n", cfg.mc_n, "Monte Carlo sample size");
        }
    };

    auto* an = app.add_subcommand("analyze", "indices, natural scale and determinacy for one input");
    common(an, false);
    an->add_option("--mc-n", cfg.mc_n);
    auto* cmp = app.add_subcommand("compare", "liminf of the hazard ratio, both directions");
    common(cmp, false);
    auto* fit = app.add_subcommand("fit-scale", "concave natural scale fitted to one input");
    common(fit, false);
    auto* sim = app.add_subcommand("simulate", "simulate a process");
    common(sim, true);
    sim->add_option("--process", cfg.process, "process JSON file or inline JSON")->required();
    auto* ver = app.add_subcommand("verify", "Monte Carlo check of a bound or the min rule");
    common(ver, true);
    ver->add_option("--transform", cfg.transform, "transform JSON; checks the tail bound");
    ver->add_option("--scale", cfg.scale, "scale JSON; checks the min rule for two models");
    ver->add_option("--eps", cfg.eps)->check(CLI::PositiveNumber);
    ver->add_option("--form", cfg.form, "diagonal or single_variable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : input_error;
    }

    try {
        if (an->parsed()) return analyze(cfg);
        if (cmp->parsed()) return compare(cfg);
        if (fit->parsed()) return fit_scale(cfg);
        if (sim->parsed()) return simulate(cfg);
        return verify(cfg);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data_error;
    }
}
