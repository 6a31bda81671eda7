#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "natscale/algebra.hpp"
#include "natscale/determinacy.hpp"
#include "natscale/indices.hpp"
#include "natscale/sample.hpp"
#include "natscale/scale_function.hpp"
#include "natscale/scales.hpp"
#include "natscale/simulate.hpp"
#include "natscale/tail_model.hpp"

namespace natscale::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Model schema: {"family": "weibull", "lambda": 1, "alpha": 0.5}, likewise
// "lognormal_type" (c, beta, lambda, gamma), "pareto" (alpha, x_m),
// "exponential" (lambda), "point_mass" (value), and "oscillating" with either
// "atoms": [[location, log_mass], ...] or "h1", "h2", "n_atoms".
TailModel model_from_json(const json& j);
json model_to_json(const TailModel& m);

// Scale schema: {"points": [[knot, value], ...], "tail_slope": s} or a closed
// form {"form": "identity" | "power" | "log1p" | "log_power", ...} tabulated
// on geometric knots up to "x_max" (default 1e100).
ScaleFunction scale_from_json(const json& j);
json scale_to_json(const ScaleFunction& h);

// Transform schema: {"kind": "sum" | "product" | "max", "n": 3},
// {"kind": "power_product", "weights": [...]}, {"kind": "tabulated", "n": 2, "phi": scale}.
TransformSpec transform_from_json(const json& j);
json transform_to_json(const TransformSpec& t);

// Process schema: {"kind": "discounted_sum", "n": 4, "a": model, "b": model, "weights": [...]}.
ProcessSpec process_from_json(const json& j);
json process_to_json(const ProcessSpec& p);

json grid_to_json(const EvalGrid& g);
json to_json(const LiminfEstimate& e);
json to_json(const MgfInterval& m);
json to_json(const NaturalScaleFit& f);
json to_json(const RuleResult& r);
json to_json(const MaxRuleReport& r);
json to_json(const BoundReport& r);
json to_json(const MinRuleReport& r);
json to_json(const DeterminacyVerdict& d);

json read_json_file(const std::string& path);

// One value per line, optional non-numeric header on the first line, blank
// lines skipped. Errors carry the offending line number.
SampleSet read_sample_csv(std::istream& in, const std::string& name);
SampleSet read_sample_csv(const std::string& path);

void write_sample_csv(std::ostream& out, const SampleSet& s);
void write_curve_csv(std::ostream& out, const std::vector<std::pair<double, double>>& curve,
                     const std::string& x_name, const std::string& y_name);

// Formats a double with 17 significant digits ("inf"/"nan" spelled out).
std::string format_number(double v);

}  // namespace natscale::io
