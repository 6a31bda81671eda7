#include "natscale/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "natscale/error.hpp"

namespace natscale {

EvalGrid::EvalGrid(double x_min, double x_max, double ratio)
    : x_min_(x_min), x_max_(x_max), ratio_(ratio) {
    require(x_min > 0.0 && std::isfinite(x_max) && x_max > x_min, ErrorKind::parameter_domain,
            "grid needs 0 < x_min < x_max");
    require(ratio > 1.0, ErrorKind::parameter_domain, "grid ratio must exceed 1");
    for (std::size_t i = 0;; ++i) {
        const double x = x_min * std::pow(ratio, static_cast<double>(i));
        if (x > x_max * (1.0 + 1e-12)) break;
        points_.push_back(x);
    }
    require(points_.size() >= kMinPoints, ErrorKind::parameter_domain,
            "grid has fewer than 8 points (" + std::to_string(points_.size()) + ")");
}

EvalGrid EvalGrid::from_points(std::vector<double> points) {
    require(points.size() >= kMinPoints, ErrorKind::parameter_domain,
            "grid has fewer than 8 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        require(points[i] > 0.0 && std::isfinite(points[i]), ErrorKind::parameter_domain,
                "grid points must be positive and finite");
        require(i == 0 || points[i] > points[i - 1], ErrorKind::parameter_domain,
                "grid points must be strictly increasing");
    }
    EvalGrid g;
    g.x_min_ = points.front();
    g.x_max_ = points.back();
    g.ratio_ = std::exp(std::log(g.x_max_ / g.x_min_) / static_cast<double>(points.size() - 1));
    g.points_ = std::move(points);
    return g;
}

std::size_t EvalGrid::window_begin(double window) const { return log_window_begin(points_, window); }

std::size_t log_window_begin(std::span<const double> xs, double window) {
    require(window > 0.0 && window <= 1.0, ErrorKind::parameter_domain,
            "window must lie in (0,1]");
    require(!xs.empty() && xs.front() > 0.0, ErrorKind::parameter_domain,
            "window needs positive points");
    const double lo = std::log(xs.front()), hi = std::log(xs.back());
    const double cut = lo + (1.0 - window) * (hi - lo);
    const double slack = 1e-12 * std::max(1.0, std::abs(cut));
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::log(xs[i]) >= cut - slack) return i;
    return xs.size() - 1;
}

double empirical_tail(const SampleSet& s, double x) {
    return static_cast<double>(s.exceedances(x)) / static_cast<double>(s.size());
}

EmpiricalHazard::EmpiricalHazard(std::shared_ptr<const SampleSet> sample, EvalGrid grid,
                                 std::size_t k_min)
    : sample_(std::move(sample)), grid_(std::move(grid)), k_min_(k_min) {
    require(sample_ != nullptr, ErrorKind::input, "no sample");
    require(k_min_ >= 10, ErrorKind::parameter_domain, "k_min must be at least 10");
    bool any = false;
    for (double x : grid_.points()) {
        const auto v = at(x);
        values_.push_back(v);
        if (v) {
            any = true;
            effective_max_ = x;
        }
    }
    require(any, ErrorKind::insufficient_tail_data,
            "no grid point has " + std::to_string(k_min_) + " sample exceedances");
}

std::optional<double> EmpiricalHazard::at(double x) const {
    const std::size_t k = sample_->exceedances(x);
    if (k < k_min_) return std::nullopt;
    return -std::log(static_cast<double>(k) / static_cast<double>(sample_->size()));
}

EmpiricalHazard empirical_hazard(std::shared_ptr<const SampleSet> s, const EvalGrid& grid,
                                 std::size_t k_min) {
    return EmpiricalHazard(std::move(s), grid, k_min);
}

EvalGrid default_grid(const SampleSet& s, std::size_t k_min, double ratio) {
    const std::size_t n = s.size();
    require(n > k_min, ErrorKind::insufficient_tail_data,
            "sample smaller than the exceedance floor");
    const double x_min = s.quantile(0.90);
    // Largest sample value with at least k_min strictly larger values.
    std::size_t i = n - k_min - 1;
    while (s.exceedances(s[i]) < k_min) {
        require(i > 0, ErrorKind::insufficient_tail_data, "no value has enough exceedances");
        --i;
    }
    const double x_max = s[i];
    require(x_min > 0.0 && x_max > x_min, ErrorKind::insufficient_tail_data,
            "tail region between the 0.9-quantile and the exceedance floor is empty");
    const double fitted = std::exp(std::log(x_max / x_min) / static_cast<double>(EvalGrid::kMinPoints - 1));
    if (std::pow(ratio, static_cast<double>(EvalGrid::kMinPoints - 1)) * x_min > x_max * (1.0 + 1e-12)) {
        return EvalGrid(x_min, x_max, fitted);
    }
    return EvalGrid(x_min, x_max, ratio);
}

}  // namespace natscale
