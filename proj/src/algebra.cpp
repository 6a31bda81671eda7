#include "natscale/algebra.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "natscale/error.hpp"
#include "parallel.hpp"

namespace natscale {

const char* to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::sum: return "sum";
        case TransformKind::product: return "product";
        case TransformKind::max: return "max";
        case TransformKind::power_product: return "power_product";
        case TransformKind::tabulated: return "tabulated";
    }
    return "?";
}

const char* to_string(RuleTag tag) {
    switch (tag) {
        case RuleTag::sum_heavier_dominates: return "sum_heavier_dominates";
        case RuleTag::sum_min_rule: return "sum_min_rule";
        case RuleTag::product_min_rule: return "product_min_rule";
        case RuleTag::transform_diagonal: return "transform_diagonal";
        case RuleTag::hypothesis_failed: return "hypothesis_failed";
    }
    return "?";
}

const char* to_string(BoundForm form) {
    return form == BoundForm::diagonal ? "diagonal" : "single_variable";
}

TransformSpec TransformSpec::sum(std::size_t n) {
    require(n >= 2, ErrorKind::parameter_domain, "transform arity must be at least 2");
    return TransformSpec(TransformKind::sum, n);
}

TransformSpec TransformSpec::product(std::size_t n) {
    require(n >= 2, ErrorKind::parameter_domain, "transform arity must be at least 2");
    return TransformSpec(TransformKind::product, n);
}

TransformSpec TransformSpec::max(std::size_t n) {
    require(n >= 2, ErrorKind::parameter_domain, "transform arity must be at least 2");
    return TransformSpec(TransformKind::max, n);
}

TransformSpec TransformSpec::power_product(std::vector<double> weights) {
    require(weights.size() >= 2, ErrorKind::parameter_domain, "transform arity must be at least 2");
    double total = 0.0;
    for (double a : weights) {
        require(a >= 0.0 && std::isfinite(a), ErrorKind::parameter_domain,
                "power-product weights must be non-negative");
        total += a;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::parameter_domain,
            "power-product weights must sum to 1");
    TransformSpec t(TransformKind::power_product, weights.size());
    t.weights_ = std::move(weights);
    return t;
}

TransformSpec TransformSpec::tabulated(std::size_t n, ScaleFunction phi) {
    require(n >= 2, ErrorKind::parameter_domain, "transform arity must be at least 2");
    require(phi.is_strictly_increasing() && phi.is_scale_function(), ErrorKind::not_invertible,
            "tabulated diagonal must be strictly increasing and unbounded");
    TransformSpec t(TransformKind::tabulated, n);
    t.phi_ = std::move(phi);
    return t;
}

double TransformSpec::apply(std::span<const double> xs) const {
    require(xs.size() == n_, ErrorKind::parameter_domain, "wrong number of arguments");
    switch (kind_) {
        case TransformKind::sum: return std::accumulate(xs.begin(), xs.end(), 0.0);
        case TransformKind::product:
            return std::accumulate(xs.begin(), xs.end(), 1.0, std::multiplies<>());
        case TransformKind::max: return *std::max_element(xs.begin(), xs.end());
        case TransformKind::power_product: {
            double g = 1.0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (weights_[i] == 0.0) continue;
                g *= weights_[i] == 1.0 ? xs[i] : std::pow(xs[i], weights_[i]);
            }
            return g;
        }
        case TransformKind::tabulated:
            return (*phi_)(std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n_));
    }
    return 0.0;
}

double TransformSpec::diagonal(double x) const {
    switch (kind_) {
        case TransformKind::sum: return static_cast<double>(n_) * x;
        case TransformKind::product: return std::pow(x, static_cast<double>(n_));
        case TransformKind::max:
        case TransformKind::power_product: return x;
        case TransformKind::tabulated: return (*phi_)(x);
    }
    return x;
}

double TransformSpec::diagonal_inverse(double y) const {
    switch (kind_) {
        case TransformKind::sum: return y / static_cast<double>(n_);
        case TransformKind::product: return std::pow(y, 1.0 / static_cast<double>(n_));
        case TransformKind::max:
        case TransformKind::power_product: return y;
        case TransformKind::tabulated: return phi_->inverse(y);
    }
    return y;
}

ScaleFunction TransformSpec::diagonal_function(std::span<const double> extra_knots) const {
    switch (kind_) {
        case TransformKind::sum: return ScaleFunction::linear(static_cast<double>(n_));
        case TransformKind::max:
        case TransformKind::power_product: return ScaleFunction::identity();
        case TransformKind::tabulated: return *phi_;
        case TransformKind::product: break;
    }
    // x^n up to the largest x whose image stays finite.
    const double hi = std::pow(10.0, 300.0 / static_cast<double>(n_));
    std::vector<double> knots = geometric_knots(1e-6, hi, 1.01);
    for (double k : extra_knots)
        if (k > 0.0 && k < hi) knots.push_back(k);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    return ScaleFunction::tabulate([this](double x) { return diagonal(x); }, std::move(knots));
}

EvalGrid comparison_grid(const ScaleFunction& a, const ScaleFunction& b) {
    const double lo = std::max(a.knots()[1], b.knots()[1]);
    const double hi = std::max({a.last_knot(), b.last_knot(), lo * 1e6});
    return EvalGrid(lo, hi, kDefaultGridRatio);
}

bool ratio_diverges(const ScaleFunction& a, const ScaleFunction& b, const EvalGrid& grid,
                    double window) {
    const LiminfEstimate est = h_order(HazardSource(a), b, grid, window);
    if (!est.infinite) return false;
    const auto& curve = est.ratio_curve;
    const std::size_t mid = est.window_begin + (curve.size() - est.window_begin) / 2;
    return curve.back().second > curve[mid].second;
}

namespace {

bool canonical_less(const ScaleFunction& a, const ScaleFunction& b) {
    const auto ka = a.knots(), kb = b.knots(), va = a.values(), vb = b.values();
    if (!std::ranges::equal(ka, kb))
        return std::ranges::lexicographical_compare(ka, kb);
    if (!std::ranges::equal(va, vb))
        return std::ranges::lexicographical_compare(va, vb);
    return a.tail_slope() < b.tail_slope();
}

HypothesisCheck subadditivity_check(const std::string& name, const SubadditivityVerdict& v) {
    std::string detail = std::to_string(v.probes) + " probes";
    if (v.witness)
        detail += ", witness (" + std::to_string(v.witness->first) + ", " +
                  std::to_string(v.witness->second) + ") excess " + std::to_string(v.excess);
    return {name, true, v.holds, detail};
}

// min of the windowed orders liminf a/h and liminf b/h.
std::pair<double, bool> min_order(const ScaleFunction& a, const ScaleFunction& b,
                                  const ScaleFunction& h) {
    const EvalGrid grid = comparison_grid(a, b);
    const LiminfEstimate ea = h_order(HazardSource(a), h, grid);
    const LiminfEstimate eb = h_order(HazardSource(b), h, grid);
    return {std::min(ea.value, eb.value), ea.infinite && eb.infinite};
}

}  // namespace

RuleResult scale_of_sum(const ScaleFunction& hx, const ScaleFunction& hy) {
    const bool x_first = !canonical_less(hy, hx);
    const ScaleFunction& first = x_first ? hx : hy;
    const ScaleFunction& second = x_first ? hy : hx;

    RuleResult out;
    const bool scales_ok = first.is_scale_function() && second.is_scale_function();
    out.checks.push_back({"scale functions", true, scales_ok, "positive final slopes"});
    if (!scales_ok) return out;

    const EvalGrid grid = comparison_grid(first, second);
    const bool first_lighter = ratio_diverges(first, second, grid);
    const bool second_lighter = !first_lighter && ratio_diverges(second, first, grid);
    out.checks.push_back({"scale ratio diverges", true, first_lighter || second_lighter,
                          "cap 1e6 on the window, increasing over its top half"});

    if (first_lighter || second_lighter) {
        const ScaleFunction& heavy = first_lighter ? second : first;
        const SubadditivityVerdict v = check_subadditive_sum(heavy);
        out.checks.push_back(subadditivity_check("subadditive sum (heavier scale)", v));
        const bool anchored = heavy.front() == 0.0;
        out.checks.push_back({"heavier scale vanishes at 0", true, anchored, ""});
        if (!v.holds || !anchored) {
            out.witness = v.witness;
            return out;
        }
        out.rule = RuleTag::sum_heavier_dominates;
        out.scale = heavy;
        out.c_lo = 0.5;
        out.c_hi = 1.0;
        return out;
    }

    const SubadditivityVerdict v = check_subadditive_sum(first);
    out.checks.push_back(subadditivity_check("subadditive sum (shared scale)", v));
    if (!v.holds) {
        out.witness = v.witness;
        return out;
    }
    const auto [order, infinite] = min_order(first, second, first);
    out.rule = RuleTag::sum_min_rule;
    out.order = order;
    out.order_infinite = infinite;
    out.scale = first.scaled(order);
    return out;
}

RuleResult scale_of_product(const ScaleFunction& hx, const ScaleFunction& hy,
                            const ScaleFunction& h_test) {
    RuleResult out;
    out.checks.push_back({"positive variables", false, true, "asserted by the caller"});
    const SubadditivityVerdict v = check_subadditive_product(h_test);
    out.checks.push_back(subadditivity_check("subadditive product", v));
    if (!v.holds) {
        out.witness = v.witness;
        return out;
    }
    const auto [order, infinite] = min_order(hx, hy, h_test);
    out.rule = RuleTag::product_min_rule;
    out.order = order;
    out.order_infinite = infinite;
    if (!infinite) out.scale = h_test.scaled(order);
    return out;
}

MaxRuleReport scale_of_max(const std::vector<HazardSource>& sources, const ScaleFunction& h,
                           const EvalGrid& grid, double window) {
    require(sources.size() >= 2, ErrorKind::parameter_domain, "max rule needs two sources");
    MaxRuleReport out;
    out.direct = h_order(HazardSource::max_of(sources), h, grid, window);
    double stab = out.direct.stability;
    out.min_individual = INFINITY;
    out.min_infinite = true;
    for (const auto& s : sources) {
        out.individual.push_back(h_order(s, h, grid, window));
        const auto& e = out.individual.back();
        out.min_individual = std::min(out.min_individual, e.value);
        out.min_infinite = out.min_infinite && e.infinite;
        stab = std::max(stab, e.stability);
    }
    out.tolerance = 2.0 * stab;
    if (out.direct.infinite && out.min_infinite)
        out.agree = true;
    else
        out.agree = std::abs(out.direct.value - out.min_individual) <=
                    std::max(out.tolerance, 1e-9 * std::max(1.0, out.min_individual));
    return out;
}

RuleResult transform_scale(const TransformSpec& t, const ScaleFunction& base_hazard) {
    RuleResult out;
    out.checks.push_back({"components increasing and unbounded", false, true,
                          std::string("built-in form ") + to_string(t.kind())});
    out.checks.push_back({"IID positive continuous base", false, true, "asserted by the caller"});
    const ScaleFunction gd = t.diagonal_function(base_hazard.knots());
    out.checks.push_back({"diagonal invertible", true, gd.is_strictly_increasing(), ""});
    if (!gd.is_strictly_increasing()) return out;
    out.rule = RuleTag::transform_diagonal;
    out.scale = compose_with_inverse_diagonal(base_hazard, gd);
    out.c_lo = 1.0;
    out.c_hi = static_cast<double>(t.arity());
    return out;
}

SampleSet sample_transform(const TransformSpec& t, const TailModel& model, std::size_t mc_n,
                           const RandomSource& src) {
    require(mc_n >= 1, ErrorKind::parameter_domain, "mc_n must be positive");
    std::vector<double> values;
    detail::parallel_fill(values, mc_n, src, [&](RandomSource& rng) {
        double xs[64];
        std::vector<double> big;
        double* buf = xs;
        if (t.arity() > 64) {
            big.resize(t.arity());
            buf = big.data();
        }
        for (std::size_t i = 0; i < t.arity(); ++i) buf[i] = model.draw(rng);
        const double g = t.apply(std::span<const double>(buf, t.arity()));
        return std::isfinite(g) ? g : DBL_MAX;
    });
    const auto clamped = static_cast<std::size_t>(std::count(values.begin(), values.end(), DBL_MAX));
    return SampleSet(std::move(values),
                     std::string("transform=") + to_string(t.kind()) + " n=" +
                         std::to_string(t.arity()) + " model=" + model.family() +
                         " seed=" + std::to_string(src.seed()) + " mc_n=" + std::to_string(mc_n),
                     clamped);
}

BoundReport verify_transform_bound(const TransformSpec& t, const TailModel& model, double eps,
                                   std::size_t mc_n, const std::optional<EvalGrid>& grid,
                                   const RandomSource& src, BoundForm form, std::size_t k_min) {
    require(eps > 0.0 && eps < 1.0, ErrorKind::parameter_domain, "eps must lie in (0,1)");
    require(mc_n >= 100000, ErrorKind::parameter_domain, "bound verification needs mc_n >= 1e5");
    require(k_min >= 10, ErrorKind::parameter_domain, "k_min must be at least 10");

    const SampleSet sample = sample_transform(t, model, mc_n, src);
    const EvalGrid g = grid ? *grid : default_grid(sample, k_min);
    const double n = static_cast<double>(mc_n);

    BoundReport out;
    out.form = form;
    out.eps = eps;
    out.mc_n = mc_n;
    out.seed = src.seed();
    out.clamped = sample.clamped();

    std::vector<double> conclusive;
    for (double x : g.points()) {
        BoundPoint p{};
        p.x = x;
        p.exceedances = sample.exceedances(x);
        p.lhs = static_cast<double>(p.exceedances) / n;
        const double arg = form == BoundForm::diagonal ? t.diagonal_inverse(x) : x;
        double r;
        try {
            r = model.hazard(arg);
        } catch (const SaturationError&) {
            r = INFINITY;
        }
        p.rhs = std::exp(-(1.0 - eps) * r);
        p.se = std::sqrt(p.rhs * (1.0 - p.rhs) / n);
        p.margin = p.rhs - p.lhs;
        p.inconclusive = p.exceedances < k_min;
        if (!p.inconclusive) conclusive.push_back(x);
        out.points.push_back(p);
    }
    if (conclusive.empty())
        fail(ErrorKind::insufficient_tail_data, "no grid point has enough exceedances");

    const double window_start = conclusive[log_window_begin(conclusive, kDefaultWindow)];
    for (auto& p : out.points) {
        p.in_window = !p.inconclusive && p.x >= window_start;
        p.violated = p.in_window && p.lhs > p.rhs + 3.0 * p.se;
        if (p.violated && out.consistent) {
            out.consistent = false;
            out.violation = std::make_pair(p.x, p.margin);
        }
    }
    for (std::size_t i = out.points.size(); i-- > 0;) {
        const auto& p = out.points[i];
        if (!p.in_window) continue;
        if (!(p.margin > 3.0 * p.se)) break;
        out.x_eps = p.x;
    }
    return out;
}

ScaleFunction discounted_scale(const ScaleFunction& hA, std::size_t n) {
    require(n >= 3, ErrorKind::parameter_domain, "discounted scale needs n >= 3");
    require(hA.is_scale_function(), ErrorKind::not_a_scale_function,
            "discounted scale needs an unbounded scale");
    const double p = static_cast<double>(n - 1);
    std::vector<double> knots;
    for (double k : hA.knots()) {
        const double y = std::pow(k, p);
        if (y > 0.0 && std::isfinite(y)) knots.push_back(y);
    }
    const double lo = knots.empty() ? 1.0 : knots.front();
    const double hi = std::max(knots.empty() ? 1.0 : knots.back(), 1e6);
    for (double y : geometric_knots(std::min(lo, 1e-3), hi, 1.02)) knots.push_back(y);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    // Drop near-duplicates so consecutive knots stay strictly increasing.
    std::vector<double> kept;
    for (double y : knots)
        if (kept.empty() || y > kept.back() * (1.0 + 1e-12)) kept.push_back(y);
    const double inv = 1.0 / p;
    return ScaleFunction::tabulate([&](double y) { return hA(std::pow(y, inv)); },
                                   std::move(kept));
}

}  // namespace natscale
