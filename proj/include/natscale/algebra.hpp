#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "natscale/empirical.hpp"
#include "natscale/indices.hpp"
#include "natscale/random.hpp"
#include "natscale/scale_function.hpp"
#include "natscale/scales.hpp"
#include "natscale/tail_model.hpp"

namespace natscale {

enum class TransformKind { sum, product, max, power_product, tabulated };

const char* to_string(TransformKind kind);

// Componentwise increasing g : R^n -> R with invertible diagonal
// g_d(x) = g(x, ..., x). The tabulated form is g(x) = phi(mean(x)) for a
// strictly increasing phi, so its diagonal is phi itself.
class TransformSpec {
public:
    static TransformSpec sum(std::size_t n);
    static TransformSpec product(std::size_t n);
    static TransformSpec max(std::size_t n);
    // Weights a_i >= 0 with sum 1.
    static TransformSpec power_product(std::vector<double> weights);
    static TransformSpec tabulated(std::size_t n, ScaleFunction phi);

    TransformKind kind() const { return kind_; }
    std::size_t arity() const { return n_; }
    const std::vector<double>& weights() const { return weights_; }

    double apply(std::span<const double> xs) const;
    double diagonal(double x) const;
    double diagonal_inverse(double y) const;
    // g_d tabulated on a geometric grid plus `extra_knots` (exact at knots).
    ScaleFunction diagonal_function(std::span<const double> extra_knots = {}) const;

private:
    TransformSpec(TransformKind kind, std::size_t n) : kind_(kind), n_(n) {}

    TransformKind kind_;
    std::size_t n_;
    std::vector<double> weights_;
    std::optional<ScaleFunction> phi_;
};

enum class RuleTag {
    sum_heavier_dominates,
    sum_min_rule,
    product_min_rule,
    transform_diagonal,
    hypothesis_failed,
};

const char* to_string(RuleTag tag);

struct HypothesisCheck {
    std::string name;
    bool verified;  // false: assumed from the caller
    bool passed;
    std::string detail;

    bool operator==(const HypothesisCheck&) const = default;
};

struct RuleResult {
    RuleTag rule = RuleTag::hypothesis_failed;
    std::optional<ScaleFunction> scale;
    double c_lo = 1.0;
    double c_hi = 1.0;
    // Min-rule results: the common h and min of the two windowed orders.
    std::optional<double> order;
    bool order_infinite = false;
    std::optional<std::pair<double, double>> witness;
    std::vector<HypothesisCheck> checks;

    bool applies() const { return rule != RuleTag::hypothesis_failed; }
    bool operator==(const RuleResult&) const = default;
};

// Grid used to compare two scale functions: from the larger first positive
// knot to max(last knots, 1e6 times that), ratio 1.05.
EvalGrid comparison_grid(const ScaleFunction& a, const ScaleFunction& b);

// "a / b -> infinity": the windowed ratio exceeds kRatioCap everywhere on
// the window and still increases across its top half.
bool ratio_diverges(const ScaleFunction& a, const ScaleFunction& b, const EvalGrid& grid,
                    double window = kDefaultWindow);

RuleResult scale_of_sum(const ScaleFunction& hx, const ScaleFunction& hy);
RuleResult scale_of_product(const ScaleFunction& hx, const ScaleFunction& hy,
                            const ScaleFunction& h_test);

struct MaxRuleReport {
    LiminfEstimate direct;
    std::vector<LiminfEstimate> individual;
    double min_individual = 0.0;
    bool min_infinite = false;
    double tolerance = 0.0;  // 2 x the larger stability
    bool agree = false;
};

MaxRuleReport scale_of_max(const std::vector<HazardSource>& sources, const ScaleFunction& h,
                           const EvalGrid& grid, double window = kDefaultWindow);

RuleResult transform_scale(const TransformSpec& t, const ScaleFunction& base_hazard);

// mc_n realizations of g(X_1, ..., X_n) for IID X_i ~ model. Realizations
// that overflow are clamped to the largest double and counted.
SampleSet sample_transform(const TransformSpec& t, const TailModel& model, std::size_t mc_n,
                           const RandomSource& src);

enum class BoundForm {
    diagonal,         // P(X_1 > g_d^{-1}(x))^{1 - eps}
    single_variable,  // P(X_1 > x)^{1 - eps}
};

struct BoundPoint {
    double x;
    double lhs;  // empirical P(g > x)
    double rhs;
    double se;  // binomial standard error under the bound
    double margin;  // rhs - lhs
    std::size_t exceedances;
    bool in_window;
    bool inconclusive;  // fewer than k_min exceedances
    bool violated;      // lhs > rhs + 3 se
};

struct BoundReport {
    BoundForm form = BoundForm::diagonal;
    double eps = 0.0;
    std::size_t mc_n = 0;
    std::uint64_t seed = 0;
    std::size_t clamped = 0;
    std::vector<BoundPoint> points;
    // Smallest grid point from which rhs - lhs > 3 se at every later window point.
    std::optional<double> x_eps;
    bool consistent = true;
    std::optional<std::pair<double, double>> violation;  // (x, margin)
};

const char* to_string(BoundForm form);

BoundReport verify_transform_bound(const TransformSpec& t, const TailModel& model, double eps,
                                   std::size_t mc_n, const std::optional<EvalGrid>& grid,
                                   const RandomSource& src,
                                   BoundForm form = BoundForm::diagonal,
                                   std::size_t k_min = kDefaultKMin);

// x -> hA(x^{1/(n-1)}), n >= 3.
ScaleFunction discounted_scale(const ScaleFunction& hA, std::size_t n);

}  // namespace natscale
