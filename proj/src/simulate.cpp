#include "natscale/simulate.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <memory>

#include "natscale/error.hpp"
#include "natscale/scales.hpp"
#include "parallel.hpp"

namespace natscale {

const char* to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::iid_sum: return "iid_sum";
        case ProcessKind::iid_product: return "iid_product";
        case ProcessKind::power_product: return "power_product";
        case ProcessKind::discounted_sum: return "discounted_sum";
        case ProcessKind::running_max_discounted: return "running_max_discounted";
    }
    return "?";
}

const char* to_string(RuleVerdict v) {
    switch (v) {
        case RuleVerdict::agree: return "agree";
        case RuleVerdict::disagree: return "disagree";
        case RuleVerdict::refused: return "refused";
    }
    return "?";
}

void ProcessSpec::validate() const {
    require(n >= 1, ErrorKind::parameter_domain, "process horizon must be at least 1");
    if (kind == ProcessKind::power_product) {
        require(weights.size() == n, ErrorKind::parameter_domain,
                "power product needs one weight per factor");
        double total = 0.0;
        for (double w : weights) {
            require(w >= 0.0 && std::isfinite(w), ErrorKind::parameter_domain,
                    "power-product weights must be non-negative");
            total += w;
        }
        require(std::abs(total - 1.0) <= 1e-12, ErrorKind::parameter_domain,
                "power-product weights must sum to 1");
    }
}

namespace {

double clamp(double v) { return std::isfinite(v) ? v : DBL_MAX; }

double draw_terminal(const ProcessSpec& s, RandomSource& rng) {
    switch (s.kind) {
        case ProcessKind::iid_sum: {
            double acc = 0.0;
            for (std::size_t i = 0; i < s.n; ++i) acc += s.b_model.draw(rng);
            return acc;
        }
        case ProcessKind::iid_product: {
            double acc = 1.0;
            for (std::size_t i = 0; i < s.n; ++i) acc *= s.b_model.draw(rng);
            return acc;
        }
        case ProcessKind::power_product: {
            double acc = 1.0;
            for (std::size_t i = 0; i < s.n; ++i) {
                const double x = s.b_model.draw(rng);
                const double w = s.weights[i];
                if (w != 0.0) acc *= w == 1.0 ? x : std::pow(x, w);
            }
            return acc;
        }
        case ProcessKind::discounted_sum: {
            double y = 0.0, discount = 1.0;
            for (std::size_t k = 0; k < s.n; ++k) {
                const double b = s.b_model.draw(rng);
                const double a = s.a_model.draw(rng);
                y += discount * b;
                discount *= a;
            }
            return y;
        }
        case ProcessKind::running_max_discounted: {
            double u = 0.0;
            for (std::size_t k = 0; k < s.n; ++k) {
                const double b = s.b_model.draw(rng);
                const double a = s.a_model.draw(rng);
                u = b + a * u;
            }
            return u;
        }
    }
    return 0.0;
}

std::string provenance(const ProcessSpec& s, std::size_t mc_n, const RandomSource& src) {
    return std::string("process=") + to_string(s.kind) + " n=" + std::to_string(s.n) +
           " a=" + s.a_model.family() + " b=" + s.b_model.family() +
           " seed=" + std::to_string(src.seed()) + " mc_n=" + std::to_string(mc_n);
}

SampleSet finish(std::vector<double> values, std::string prov) {
    const auto clamped = static_cast<std::size_t>(std::count(values.begin(), values.end(), DBL_MAX));
    return SampleSet(std::move(values), std::move(prov), clamped);
}

}  // namespace

SampleSet simulate_process(const ProcessSpec& spec, std::size_t mc_n, const RandomSource& src) {
    spec.validate();
    require(mc_n >= 1000, ErrorKind::parameter_domain, "simulation needs mc_n >= 1000");
    std::vector<double> values;
    detail::parallel_fill(values, mc_n, src,
                          [&](RandomSource& rng) { return clamp(draw_terminal(spec, rng)); });
    return finish(std::move(values), provenance(spec, mc_n, src));
}

SampleSet simulate_running_max_direct(const ProcessSpec& spec, std::size_t mc_n,
                                      const RandomSource& src) {
    spec.validate();
    require(mc_n >= 1000, ErrorKind::parameter_domain, "simulation needs mc_n >= 1000");
    std::vector<double> values;
    detail::parallel_fill(values, mc_n, src, [&](RandomSource& rng) {
        double y = 0.0, discount = 1.0, best = 0.0;
        for (std::size_t k = 0; k < spec.n; ++k) {
            const double b = spec.b_model.draw(rng);
            const double a = spec.a_model.draw(rng);
            y += discount * b;
            discount *= a;
            best = std::max(best, y);
        }
        return clamp(best);
    });
    return finish(std::move(values), provenance(spec, mc_n, src) + " direct");
}

MinRuleReport verify_min_rule(const TailModel& a, const TailModel& b, const ScaleFunction& h,
                              std::size_t mc_n, const std::optional<EvalGrid>& grid,
                              double window, const RandomSource& src,
                              const MinRuleOptions& options) {
    require(mc_n >= 1000, ErrorKind::parameter_domain, "simulation needs mc_n >= 1000");
    require(h.is_scale_function(), ErrorKind::not_a_scale_function,
            "min rule needs an unbounded scale function");

    MinRuleReport out;
    out.mc_n = mc_n;
    out.seed = src.seed();
    out.order_a = h_order(HazardSource(a), h, analytic_grid(a), window);
    out.order_b = h_order(HazardSource(b), h, analytic_grid(b), window);
    out.min_order = std::min(out.order_a.value, out.order_b.value);

    std::optional<SubadditivityVerdict> sum_gate, product_gate;
    auto gate_sum = [&]() -> const SubadditivityVerdict& {
        if (!sum_gate) sum_gate = check_subadditive_sum(h);
        return *sum_gate;
    };
    auto gate_product = [&]() -> const SubadditivityVerdict& {
        if (!product_gate) product_gate = check_subadditive_product(h);
        return *product_gate;
    };

    using Sampler = std::function<SampleSet(const RandomSource&)>;
    auto run = [&](const std::string& rule, const Sampler& sampler,
                   std::vector<const SubadditivityVerdict*> gates, std::uint64_t stream) {
        MinRuleCheck c;
        c.rule = rule;
        for (const auto* g : gates) {
            if (!g->holds) {
                c.verdict = RuleVerdict::refused;
                c.witness = g->witness;
                c.detail = "subadditivity gate failed";
                out.checks.push_back(c);
                return;
            }
        }
        // Each rule draws from its own seed block so enabling one rule does
        // not shift the streams of the others.
        const RandomSource rule_src(src.seed() + 1000 * stream);
        auto sample = std::make_shared<const SampleSet>(sampler(rule_src));
        c.clamped = sample->clamped();
        const EvalGrid g = grid ? *grid : default_grid(*sample, options.k_min);
        const EmpiricalHazard eh(sample, g, options.k_min);
        c.estimate = h_order(HazardSource(eh), h, g, window);
        c.margin = std::abs(c.estimate->value - out.min_order);
        c.verdict = c.margin <= options.tolerance ? RuleVerdict::agree : RuleVerdict::disagree;
        c.detail = sample->provenance();
        out.checks.push_back(std::move(c));
    };

    auto pairwise = [&](const char* name, auto op) {
        return [&, name, op](const RandomSource& rs) {
            std::vector<double> values;
            detail::parallel_fill(values, mc_n, rs, [&](RandomSource& rng) {
                const double x = a.draw(rng);
                return clamp(op(x, b.draw(rng)));
            });
            return finish(std::move(values), std::string(name) + " a=" + a.family() +
                                                 " b=" + b.family() +
                                                 " seed=" + std::to_string(rs.seed()) +
                                                 " mc_n=" + std::to_string(mc_n));
        };
    };

    if (options.sum)
        run("sum", pairwise("sum", std::plus<>()), {&gate_sum()}, 1);
    if (options.product)
        run("product", pairwise("product", std::multiplies<>()), {&gate_product()}, 2);
    if (options.running_max) {
        const ProcessSpec spec{ProcessKind::running_max_discounted, options.horizon, a, b, {}};
        run("running_max", [&](const RandomSource& rs) { return simulate_process(spec, mc_n, rs); },
            {&gate_sum(), &gate_product()}, 3);
    }
    return out;
}

}  // namespace natscale
