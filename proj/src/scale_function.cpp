#include "natscale/scale_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "natscale/error.hpp"

namespace natscale {

namespace {

constexpr double kSlopeTol = 1e-10;

Concavity compute_concavity(const std::vector<double>& k, const std::vector<double>& v,
                            double tail_slope) {
    double prev = INFINITY;
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double s = (v[i] - v[i - 1]) / (k[i] - k[i - 1]);
        if (s > prev + kSlopeTol) return Concavity::not_concave;
        prev = s;
    }
    return tail_slope > prev + kSlopeTol ? Concavity::not_concave : Concavity::concave;
}

}  // namespace

ScaleFunction::ScaleFunction(std::vector<double> knots, std::vector<double> values,
                             std::optional<double> tail_slope)
    : knots_(std::move(knots)), values_(std::move(values)) {
    require(knots_.size() >= 2, ErrorKind::parameter_domain,
            "scale function needs at least two knots");
    require(knots_.size() == values_.size(), ErrorKind::parameter_domain,
            "knot/value length mismatch");
    require(knots_.front() == 0.0, ErrorKind::parameter_domain,
            "scale function knots must start at 0");
    strictly_increasing_ = true;
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        require(std::isfinite(knots_[i]) && std::isfinite(values_[i]),
                ErrorKind::parameter_domain, "non-finite knot or value");
        if (i == 0) continue;
        require(knots_[i] > knots_[i - 1], ErrorKind::parameter_domain,
                "knots must be strictly increasing (index " + std::to_string(i) + ")");
        require(values_[i] >= values_[i - 1], ErrorKind::parameter_domain,
                "values must be non-decreasing (index " + std::to_string(i) + ")");
        if (!(values_[i] > values_[i - 1])) strictly_increasing_ = false;
    }
    const std::size_t n = knots_.size();
    tail_slope_ = tail_slope.value_or((values_[n - 1] - values_[n - 2]) /
                                      (knots_[n - 1] - knots_[n - 2]));
    require(std::isfinite(tail_slope_) && tail_slope_ >= 0.0, ErrorKind::parameter_domain,
            "tail slope must be finite and non-negative");
    if (tail_slope_ <= 0.0) strictly_increasing_ = false;
    concavity_ = compute_concavity(knots_, values_, tail_slope_);
}

ScaleFunction ScaleFunction::identity() { return linear(1.0); }

ScaleFunction ScaleFunction::linear(double slope) {
    require(slope > 0.0, ErrorKind::parameter_domain, "linear scale needs a positive slope");
    return ScaleFunction({0.0, 1.0}, {0.0, slope}, slope);
}

ScaleFunction ScaleFunction::tabulate(const std::function<double(double)>& fn,
                                      std::vector<double> knots,
                                      std::optional<double> tail_slope) {
    std::vector<double> values(knots.size());
    std::transform(knots.begin(), knots.end(), values.begin(), fn);
    return ScaleFunction(std::move(knots), std::move(values), tail_slope);
}

double ScaleFunction::eval(double x) const {
    require(x >= 0.0, ErrorKind::parameter_domain, "scale function evaluated at x < 0");
    if (x >= knots_.back()) return values_.back() + tail_slope_ * (x - knots_.back());
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    const double x0 = knots_[i - 1], x1 = knots_[i];
    if (x == x0) return values_[i - 1];
    const double t = (x - x0) / (x1 - x0);
    return std::fma(t, values_[i], std::fma(-t, values_[i - 1], values_[i - 1]));
}

double ScaleFunction::inverse(double y) const {
    require(strictly_increasing_, ErrorKind::not_invertible,
            "scale function is not strictly increasing");
    require(y >= values_.front(), ErrorKind::range, "value below h(0) has no preimage");
    const auto x = first_reach(y);
    require(x.has_value(), ErrorKind::range, "value outside the achieved range");
    return *x;
}

std::optional<double> ScaleFunction::first_reach(double y) const {
    if (y <= values_.front()) return 0.0;
    if (y > values_.back()) {
        if (tail_slope_ <= 0.0) return std::nullopt;
        const double x = knots_.back() + (y - values_.back()) / tail_slope_;
        if (!std::isfinite(x)) return std::nullopt;
        return x;
    }
    const auto it = std::lower_bound(values_.begin(), values_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - values_.begin());
    if (values_[i] == y) return knots_[i];
    const double t = (y - values_[i - 1]) / (values_[i] - values_[i - 1]);
    return knots_[i - 1] + t * (knots_[i] - knots_[i - 1]);
}

ScaleFunction ScaleFunction::scaled(double factor) const {
    require(factor > 0.0 && std::isfinite(factor), ErrorKind::parameter_domain,
            "scale factor must be positive");
    std::vector<double> v(values_);
    for (double& y : v) y *= factor;
    return ScaleFunction(knots_, std::move(v), tail_slope_ * factor);
}

ScaleFunction ScaleFunction::shifted(double offset) const {
    std::vector<double> v(values_);
    for (double& y : v) y += offset;
    return ScaleFunction(knots_, std::move(v), tail_slope_);
}

bool ScaleFunction::operator==(const ScaleFunction& other) const {
    return knots_ == other.knots_ && values_ == other.values_ &&
           tail_slope_ == other.tail_slope_;
}

std::vector<double> geometric_knots(double lo, double hi, double ratio) {
    require(lo > 0.0 && hi > lo && ratio > 1.0, ErrorKind::parameter_domain,
            "geometric knots need 0 < lo < hi and ratio > 1");
    std::vector<double> k{0.0};
    for (std::size_t i = 0;; ++i) {
        const double x = lo * std::pow(ratio, static_cast<double>(i));
        if (x > hi * (1.0 + 1e-12)) break;
        k.push_back(x);
    }
    if (k.back() < hi * (1.0 - 1e-9)) {
        k.push_back(hi);
    } else {
        k.back() = hi;
    }
    return k;
}

}  // namespace natscale
