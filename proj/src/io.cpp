#include "natscale/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "natscale/error.hpp"

namespace natscale::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double number(const json& j, const char* key) {
    if (!j.contains(key)) fail(ErrorKind::input, std::string("missing field \"") + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number()) fail(ErrorKind::input, std::string("field \"") + key + "\" must be a number");
    return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

std::size_t count(const json& j, const char* key) {
    const double v = number(j, key);
    if (!(v >= 0.0) || v != std::floor(v))
        fail(ErrorKind::input, std::string("field \"") + key + "\" must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::string text(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string())
        fail(ErrorKind::input, std::string("missing string field \"") + key + "\"");
    return j.at(key).get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        fail(ErrorKind::input, std::string("missing array field \"") + key + "\"");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) fail(ErrorKind::input, std::string("\"") + key + "\" must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

json pairs(const std::vector<std::pair<double, double>>& v) {
    json out = json::array();
    for (const auto& [a, b] : v) out.push_back({a, b});
    return out;
}

json optional_pair(const std::optional<std::pair<double, double>>& p) {
    return p ? json{p->first, p->second} : json(nullptr);
}

template <class T>
json optional_value(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

const char* concavity_name(Concavity c) {
    switch (c) {
        case Concavity::concave: return "concave";
        case Concavity::not_concave: return "not_concave";
        case Concavity::unknown: return "unknown";
    }
    return "unknown";
}

}  // namespace

TailModel model_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorKind::input, "model must be a JSON object");
    const std::string family = text(j, "family");
    if (family == "weibull") return TailModel(Weibull{number(j, "lambda"), number(j, "alpha")});
    if (family == "lognormal_type")
        return TailModel(LogNormalType{number(j, "c"), number(j, "beta"), number(j, "lambda"),
                                       number(j, "gamma")});
    if (family == "pareto") return TailModel(Pareto{number(j, "alpha"), number_or(j, "x_m", 1.0)});
    if (family == "exponential") return TailModel(Exponential{number(j, "lambda")});
    if (family == "point_mass") return TailModel(PointMass{number(j, "value")});
    if (family == "oscillating") {
        if (j.contains("atoms")) {
            OscillatingDiscrete d;
            for (const auto& a : j.at("atoms")) {
                if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                    fail(ErrorKind::input, "atoms must be [location, log_mass] pairs");
                d.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
            }
            return TailModel(std::move(d));
        }
        if (!j.contains("h1") || !j.contains("h2"))
            fail(ErrorKind::input, "oscillating model needs \"atoms\" or \"h1\"/\"h2\"");
        return build_oscillating(scale_from_json(j.at("h1")), scale_from_json(j.at("h2")),
                                 count(j, "n_atoms"));
    }
    fail(ErrorKind::input, "unknown model family \"" + family + "\"");
}

json model_to_json(const TailModel& m) {
    json j = std::visit(
        overloaded{
            [](const Weibull& p) { return json{{"lambda", p.lambda}, {"alpha", p.alpha}}; },
            [](const LogNormalType& p) {
                return json{{"c", p.c}, {"beta", p.beta}, {"lambda", p.lambda}, {"gamma", p.gamma}};
            },
            [](const Pareto& p) { return json{{"alpha", p.alpha}, {"x_m", p.x_m}}; },
            [](const Exponential& p) { return json{{"lambda", p.lambda}}; },
            [](const PointMass& p) { return json{{"value", p.value}}; },
            [](const OscillatingDiscrete& p) {
                json atoms = json::array();
                for (const auto& a : p.atoms) atoms.push_back({a.location, a.log_mass});
                return json{{"atoms", atoms}};
            },
        },
        m.params());
    j["family"] = m.family();
    if (std::holds_alternative<LogNormalType>(m.params())) j["cutoff"] = m.cutoff();
    return j;
}

ScaleFunction scale_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorKind::input, "scale function must be a JSON object");
    if (j.contains("form")) {
        const std::string form = text(j, "form");
        if (form == "identity") return ScaleFunction::identity();
        if (form == "linear") return ScaleFunction::linear(number(j, "slope"));
        const double x_max = number_or(j, "x_max", 1e100);
        const double ratio = number_or(j, "ratio", 1.01);
        const double lambda = number_or(j, "lambda", 1.0);
        auto knots = geometric_knots(number_or(j, "x_min", 1e-6), x_max, ratio);
        if (form == "power") {
            const double alpha = number(j, "alpha");
            return ScaleFunction::tabulate(
                [=](double x) { return lambda * std::pow(x, alpha); }, std::move(knots));
        }
        if (form == "log1p")
            return ScaleFunction::tabulate([=](double x) { return lambda * std::log1p(x); },
                                           std::move(knots));
        if (form == "log_power") {
            const double gamma = number(j, "gamma");
            return ScaleFunction::tabulate(
                [=](double x) { return x <= 1.0 ? 0.0 : lambda * std::pow(std::log(x), gamma); },
                std::move(knots));
        }
        fail(ErrorKind::input, "unknown scale form \"" + form + "\"");
    }
    if (!j.contains("points") || !j.at("points").is_array())
        fail(ErrorKind::input, "scale function needs \"points\" or \"form\"");
    std::vector<double> k, v;
    for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            fail(ErrorKind::input, "scale points must be [knot, value] pairs");
        k.push_back(p[0].get<double>());
        v.push_back(p[1].get<double>());
    }
    std::optional<double> slope;
    if (j.contains("tail_slope")) slope = number(j, "tail_slope");
    return ScaleFunction(std::move(k), std::move(v), slope);
}

json scale_to_json(const ScaleFunction& h) {
    json points = json::array();
    for (std::size_t i = 0; i < h.size(); ++i) points.push_back({h.knots()[i], h.values()[i]});
    return json{{"schema_version", kSchemaVersion},
                {"points", points},
                {"tail_slope", h.tail_slope()},
                {"concavity", concavity_name(h.concavity())},
                {"strictly_increasing", h.is_strictly_increasing()}};
}

TransformSpec transform_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorKind::input, "transform must be a JSON object");
    const std::string kind = text(j, "kind");
    if (kind == "sum") return TransformSpec::sum(count(j, "n"));
    if (kind == "product") return TransformSpec::product(count(j, "n"));
    if (kind == "max") return TransformSpec::max(count(j, "n"));
    if (kind == "power_product") return TransformSpec::power_product(numbers(j, "weights"));
    if (kind == "tabulated") {
        if (!j.contains("phi")) fail(ErrorKind::input, "tabulated transform needs \"phi\"");
        return TransformSpec::tabulated(count(j, "n"), scale_from_json(j.at("phi")));
    }
    fail(ErrorKind::input, "unknown transform kind \"" + kind + "\"");
}

json transform_to_json(const TransformSpec& t) {
    json j{{"kind", to_string(t.kind())}, {"n", t.arity()}};
    if (t.kind() == TransformKind::power_product) j["weights"] = t.weights();
    if (t.kind() == TransformKind::tabulated) j["phi"] = scale_to_json(t.diagonal_function());
    return j;
}

ProcessSpec process_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorKind::input, "process must be a JSON object");
    ProcessSpec p;
    const std::string kind = text(j, "kind");
    if (kind == "iid_sum") p.kind = ProcessKind::iid_sum;
    else if (kind == "iid_product") p.kind = ProcessKind::iid_product;
    else if (kind == "power_product") p.kind = ProcessKind::power_product;
    else if (kind == "discounted_sum") p.kind = ProcessKind::discounted_sum;
    else if (kind == "running_max_discounted") p.kind = ProcessKind::running_max_discounted;
    else fail(ErrorKind::input, "unknown process kind \"" + kind + "\"");
    p.n = count(j, "n");
    if (j.contains("a")) p.a_model = model_from_json(j.at("a"));
    if (j.contains("b")) p.b_model = model_from_json(j.at("b"));
    if (j.contains("weights")) p.weights = numbers(j, "weights");
    try {
        p.validate();
    } catch (const Error& e) {
        fail(ErrorKind::input, e.what());
    }
    return p;
}

json process_to_json(const ProcessSpec& p) {
    json j{{"kind", to_string(p.kind)},
           {"n", p.n},
           {"a", model_to_json(p.a_model)},
           {"b", model_to_json(p.b_model)}};
    if (!p.weights.empty()) j["weights"] = p.weights;
    return j;
}

json grid_to_json(const EvalGrid& g) {
    return json{{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"ratio", g.ratio()},
                {"points", g.size()}};
}

json to_json(const LiminfEstimate& e) {
    json j{{"value", e.value},
           {"infinite", e.infinite},
           {"ratio_cap", kRatioCap},
           {"window", e.window},
           {"stability", e.stability},
           {"argmin", e.argmin},
           {"window_begin", e.window_begin},
           {"ratio_curve", pairs(e.ratio_curve)}};
    if (e.eps) {
        j["eps"] = *e.eps;
        j["x_eps"] = optional_value(e.x_eps);
    }
    return j;
}

json to_json(const MgfInterval& m) {
    json probes = json::array();
    for (const auto& p : m.probes)
        probes.push_back({{"s", p.s}, {"finite", p.finite}, {"spread", p.spread}});
    return json{{"lo", m.lo},           {"hi", m.hi},   {"saturated", m.saturated},
                {"all_divergent", m.all_divergent}, {"mc_n", m.mc_n}, {"seed", m.seed},
                {"probes", probes}};
}

json to_json(const NaturalScaleFit& f) {
    return json{{"scale", scale_to_json(f.h)},
                {"beta", f.beta},
                {"argmin_knot", f.argmin_knot},
                {"window", f.window},
                {"ratio_curve", pairs(f.ratio_curve)}};
}

json to_json(const RuleResult& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"verified", c.verified},
                          {"passed", c.passed},
                          {"detail", c.detail}});
    return json{{"rule", to_string(r.rule)},
                {"applies", r.applies()},
                {"scale", r.scale ? scale_to_json(*r.scale) : json(nullptr)},
                {"c_range", {r.c_lo, r.c_hi}},
                {"order", optional_value(r.order)},
                {"order_infinite", r.order_infinite},
                {"witness", optional_pair(r.witness)},
                {"hypotheses", checks}};
}

json to_json(const MaxRuleReport& r) {
    json ind = json::array();
    for (const auto& e : r.individual) ind.push_back(to_json(e));
    return json{{"direct", to_json(r.direct)},
                {"individual", ind},
                {"min_individual", r.min_individual},
                {"min_infinite", r.min_infinite},
                {"tolerance", r.tolerance},
                {"agree", r.agree}};
}

json to_json(const BoundReport& r) {
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back({{"x", p.x},
                       {"lhs", p.lhs},
                       {"rhs", p.rhs},
                       {"se", p.se},
                       {"margin", p.margin},
                       {"exceedances", p.exceedances},
                       {"in_window", p.in_window},
                       {"inconclusive", p.inconclusive},
                       {"violated", p.violated}});
    return json{{"form", to_string(r.form)},
                {"eps", r.eps},
                {"mc_n", r.mc_n},
                {"seed", r.seed},
                {"clamped", r.clamped},
                {"verdict", r.consistent ? "consistent" : "violated"},
                {"violation", optional_pair(r.violation)},
                {"x_eps", optional_value(r.x_eps)},
                {"points", pts}};
}

json to_json(const MinRuleReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"rule", c.rule},
                          {"verdict", to_string(c.verdict)},
                          {"estimate", c.estimate ? to_json(*c.estimate) : json(nullptr)},
                          {"clamped", c.clamped},
                          {"margin", c.margin},
                          {"witness", optional_pair(c.witness)},
                          {"detail", c.detail}});
    return json{{"order_a", to_json(r.order_a)},
                {"order_b", to_json(r.order_b)},
                {"min_order", r.min_order},
                {"mc_n", r.mc_n},
                {"seed", r.seed},
                {"checks", checks}};
}

json to_json(const DeterminacyVerdict& d) {
    return json{{"verdict", to_string(d.verdict)},
                {"liminf_estimate", to_json(d.liminf_estimate)},
                {"flat", d.flat},
                {"warning", optional_value(d.warning)},
                {"hardy_check", d.hardy_check ? to_json(*d.hardy_check) : json(nullptr)}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::input, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::input, path + ": " + e.what());
    }
}

SampleSet read_sample_csv(std::istream& in, const std::string& name) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t");
        const std::string cell = line.substr(first, last - first + 1);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        const bool parsed = ec == std::errc() && end == cell.data() + cell.size();
        if (!parsed) {
            if (values.empty() && line_no == 1) continue;  // header
            fail(ErrorKind::input, name + ":" + std::to_string(line_no) + ": not a number: \"" +
                                       cell + "\"");
        }
        if (!std::isfinite(v))
            fail(ErrorKind::input,
                 name + ":" + std::to_string(line_no) + ": non-finite value \"" + cell + "\"");
        values.push_back(v);
    }
    if (values.empty()) fail(ErrorKind::input, name + ": no values");
    return SampleSet(std::move(values), "csv=" + name);
}

SampleSet read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::input, "cannot open " + path);
    return read_sample_csv(in, path);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_sample_csv(std::ostream& out, const SampleSet& s) {
    out << "value\n";
    for (double v : s.values()) out << format_number(v) << '\n';
}

void write_curve_csv(std::ostream& out, const std::vector<std::pair<double, double>>& curve,
                     const std::string& x_name, const std::string& y_name) {
    out << x_name << ',' << y_name << '\n';
    for (const auto& [x, y] : curve) out << format_number(x) << ',' << format_number(y) << '\n';
}

}  // namespace natscale::io
