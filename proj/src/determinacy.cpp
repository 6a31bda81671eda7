#include "natscale/determinacy.hpp"

#include <algorithm>
#include <cmath>

#include "natscale/error.hpp"

namespace natscale {

const char* to_string(Determinacy d) {
    return d == Determinacy::determined ? "determined" : "inconclusive";
}

DeterminacyVerdict determinacy_test(const ScaleFunction& h, const EvalGrid& grid, double window,
                                    double threshold) {
    require(threshold > 0.0, ErrorKind::parameter_domain, "threshold must be positive");
    DeterminacyVerdict out;
    out.liminf_estimate = h_order(HazardSource(h), [](double x) { return std::sqrt(x); }, grid,
                                  window);
    const auto& est = out.liminf_estimate;
    const auto& curve = est.ratio_curve;

    // Running infimum from the window start; compare its value where the top
    // quarter of the window begins with its final value.
    const std::size_t n_win = curve.size() - est.window_begin;
    const std::size_t quarter = est.window_begin + (3 * n_win) / 4;
    double run = INFINITY, at_quarter = INFINITY;
    for (std::size_t i = est.window_begin; i < curve.size(); ++i) {
        run = std::min(run, curve[i].second);
        if (i < quarter) at_quarter = run;
    }
    if (!std::isfinite(at_quarter)) at_quarter = run;
    out.flat = est.infinite || (at_quarter > 0.0 && (at_quarter - run) / at_quarter <= kFlatnessTolerance);

    const bool positive = est.infinite || est.value > threshold;
    if (positive && out.flat) {
        out.verdict = Determinacy::determined;
    } else {
        out.verdict = Determinacy::inconclusive;
        if (positive)
            out.warning = "ratio above threshold but still falling over the top quarter of the window";
        else if (est.value > 0.1 * threshold)
            out.warning = "ratio near the threshold";
    }
    return out;
}

MgfInterval hardy_check(const TailModel& model, const std::vector<double>& c_grid,
                        std::size_t mc_n, const RandomSource& src) {
    require(!c_grid.empty(), ErrorKind::parameter_domain, "c_grid must not be empty");
    for (double c : c_grid)
        require(c > 0.0 && std::isfinite(c), ErrorKind::parameter_domain,
                "c_grid entries must be positive");
    const double s_max = *std::max_element(c_grid.begin(), c_grid.end());
    return mgf_sup_order(model, [](double x) { return std::sqrt(x); }, s_max, mc_n, src);
}

}  // namespace natscale
