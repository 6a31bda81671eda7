#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace natscale {

enum class Concavity { unknown, concave, not_concave };

// Monotone piecewise-linear function on [0, inf). Knots start at 0 and are
// strictly increasing; beyond the final knot the function continues linearly
// with `tail_slope`. This is the common carrier for hazards, natural scales,
// envelopes and diagonal transforms.
class ScaleFunction {
public:
    ScaleFunction() = default;

    // Validates knots/values. When `tail_slope` is absent the slope of the
    // final chord is used.
    ScaleFunction(std::vector<double> knots, std::vector<double> values,
                  std::optional<double> tail_slope = std::nullopt);

    static ScaleFunction identity();
    static ScaleFunction linear(double slope);

    // Samples `fn` at `knots` (which must start at 0).
    static ScaleFunction tabulate(const std::function<double(double)>& fn,
                                  std::vector<double> knots,
                                  std::optional<double> tail_slope = std::nullopt);

    std::span<const double> knots() const { return knots_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return knots_.size(); }
    double tail_slope() const { return tail_slope_; }
    double front() const { return values_.front(); }
    double last_knot() const { return knots_.back(); }

    Concavity concavity() const { return concavity_; }
    bool is_strictly_increasing() const { return strictly_increasing_; }
    // Unbounded: the final slope is positive.
    bool is_scale_function() const { return tail_slope_ > 0.0; }

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;

    // Unique x with eval(x) == y. Requires a strictly increasing function.
    double inverse(double y) const;

    // min{x : eval(x) >= y} for a non-decreasing function; nullopt when y is
    // never reached.
    std::optional<double> first_reach(double y) const;

    ScaleFunction scaled(double factor) const;
    ScaleFunction shifted(double offset) const;

    bool operator==(const ScaleFunction& other) const;

private:
    std::vector<double> knots_{0.0, 1.0};
    std::vector<double> values_{0.0, 1.0};
    double tail_slope_ = 1.0;
    Concavity concavity_ = Concavity::concave;
    bool strictly_increasing_ = true;
};

// {0} followed by lo * ratio^i up to and including hi.
std::vector<double> geometric_knots(double lo, double hi, double ratio);

}  // namespace natscale
