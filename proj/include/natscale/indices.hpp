#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natscale/empirical.hpp"
#include "natscale/random.hpp"
#include "natscale/scale_function.hpp"
#include "natscale/tail_model.hpp"

namespace natscale {

inline constexpr double kRatioCap = 1e6;
inline constexpr double kDefaultWindow = 0.5;

// Uniform hazard view over an analytic model, an empirical hazard, a
// tabulated hazard, or the maximum of independent sources.
class HazardSource {
public:
    HazardSource(TailModel model);
    HazardSource(EmpiricalHazard hazard);
    HazardSource(ScaleFunction hazard);

    // Hazard of max(X_1, ..., X_n) for independent X_i.
    static HazardSource max_of(std::vector<HazardSource> sources);

    // nullopt where the hazard is not available (empirical, below k_min
    // exceedances). +inf where the tail is exactly zero.
    std::optional<double> at(double x) const;

    bool is_empirical() const;
    std::string describe() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

struct LiminfEstimate {
    double value = 0.0;
    bool infinite = false;  // every windowed ratio exceeds kRatioCap
    double window = kDefaultWindow;
    double stability = 0.0;
    double argmin = 0.0;
    std::size_t window_begin = 0;  // index into ratio_curve
    std::vector<std::pair<double, double>> ratio_curve;
    // ratio_liminf only: first grid point from which R_X >= (value - eps) R_Y
    // holds at every later point.
    std::optional<double> eps;
    std::optional<double> x_eps;
};

// Analytic grid for a model: from the 0.9 quantile to x_max.
EvalGrid analytic_grid(const TailModel& model, double x_max = 1e100,
                       double ratio = kDefaultGridRatio);

LiminfEstimate h_order(const HazardSource& src, const ScaleFunction& h, const EvalGrid& grid,
                       double window = kDefaultWindow);
LiminfEstimate h_order(const HazardSource& src, const std::function<double(double)>& h,
                       const EvalGrid& grid, double window = kDefaultWindow);

LiminfEstimate exponential_index(const HazardSource& src, const EvalGrid& grid,
                                 double window = kDefaultWindow);

// R(x) / log x on the grid points above 1.
LiminfEstimate moment_index(const HazardSource& src, const EvalGrid& grid,
                            double window = kDefaultWindow);

LiminfEstimate ratio_liminf(const HazardSource& src_x, const HazardSource& src_y,
                            const EvalGrid& grid, double window = kDefaultWindow,
                            double eps = 0.1);

struct MgfProbe {
    double s;
    bool finite;
    double spread;  // max - min of the batch log-means
};

struct MgfInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool saturated = false;      // finite at s_max
    bool all_divergent = false;  // divergent at every probed s > 0
    std::size_t mc_n = 0;
    std::uint64_t seed = 0;
    std::vector<MgfProbe> probes;

    bool contains(double s) const { return lo <= s && s <= hi; }
};

inline constexpr std::size_t kMgfBatches = 8;

// Bracket for sup{s >= 0 : E e^{s h(X)} < inf}.
MgfInterval mgf_sup_order(const TailModel& model, const std::function<double(double)>& h,
                          double s_max, std::size_t mc_n, const RandomSource& src);
MgfInterval mgf_sup_order(const TailModel& model, const ScaleFunction& h, double s_max,
                          std::size_t mc_n, const RandomSource& src);

}  // namespace natscale
