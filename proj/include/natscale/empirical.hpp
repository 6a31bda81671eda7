#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "natscale/sample.hpp"

namespace natscale {

// Geometric evaluation grid x_min * ratio^i, truncated at x_max.
class EvalGrid {
public:
    static constexpr std::size_t kMinPoints = 8;

    EvalGrid(double x_min, double x_max, double ratio);
    // Arbitrary strictly increasing positive points (policy fields are
    // filled from the first/last point and the mean log step).
    static EvalGrid from_points(std::vector<double> points);

    std::span<const double> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double ratio() const { return ratio_; }

    // First index of the top `window` fraction of the grid in log-x.
    std::size_t window_begin(double window) const;

private:
    EvalGrid() = default;

    std::vector<double> points_;
    double x_min_ = 0.0;
    double x_max_ = 0.0;
    double ratio_ = 0.0;
};

// First index of the top `window` fraction (in log-x) of increasing positive xs.
std::size_t log_window_begin(std::span<const double> xs, double window);

class EmpiricalHazard {
public:
    EmpiricalHazard(std::shared_ptr<const SampleSet> sample, EvalGrid grid, std::size_t k_min);

    const EvalGrid& grid() const { return grid_; }
    const SampleSet& sample() const { return *sample_; }
    std::size_t k_min() const { return k_min_; }
    // Grid hazards; nullopt beyond effective_max.
    std::span<const std::optional<double>> hazard_values() const { return values_; }
    double effective_max() const { return effective_max_; }

    // Plug-in hazard at any x with at least k_min exceedances.
    std::optional<double> at(double x) const;

private:
    std::shared_ptr<const SampleSet> sample_;
    EvalGrid grid_;
    std::size_t k_min_;
    std::vector<std::optional<double>> values_;
    double effective_max_ = 0.0;
};

inline constexpr std::size_t kDefaultKMin = 20;
inline constexpr double kDefaultGridRatio = 1.05;

double empirical_tail(const SampleSet& s, double x);

EmpiricalHazard empirical_hazard(std::shared_ptr<const SampleSet> s, const EvalGrid& grid,
                                 std::size_t k_min = kDefaultKMin);

// x_min = 0.90-quantile, x_max = largest value with k_min exceedances,
// ratio 1.05. If fewer than eight points fit, the ratio is reduced so that
// exactly eight do.
EvalGrid default_grid(const SampleSet& s, std::size_t k_min = kDefaultKMin,
                      double ratio = kDefaultGridRatio);

}  // namespace natscale
