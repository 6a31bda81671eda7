#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "natscale/scale_function.hpp"

namespace natscale {

inline constexpr double kSlopeTolerance = 1e-10;
inline constexpr double kBandTolerance = 1e-9;

struct ConcavityVerdict {
    bool concave = true;
    // x-positions of three points whose chord slopes increase.
    std::optional<std::array<double, 3>> witness;
};

struct SubadditivityVerdict {
    bool holds = true;
    std::size_t probes = 0;
    std::optional<std::pair<double, double>> witness;
    double excess = 0.0;  // h(a op b) - h(a) - h(b) at the witness
};

ConcavityVerdict check_concave(const ScaleFunction& h);

// h(a + b) <= h(a) + h(b) on a deterministic low-discrepancy probe set.
SubadditivityVerdict check_subadditive_sum(const ScaleFunction& h, std::size_t probe_pairs = 1000);

// h(a * b) <= h(a) + h(b) for a, b >= 1 with a * b inside the probe range.
SubadditivityVerdict check_subadditive_product(const ScaleFunction& h,
                                               std::size_t probe_pairs = 1000);

// Least concave majorant of the knot set of f. Knots of the result are the
// upper-hull vertices.
ScaleFunction concave_majorant(const ScaleFunction& f);

// Strictly increasing h_eta with h <= h_eta <= h + eta. Between consecutive
// level crossings y_k (h(y_k) = k eta) it is the least concave majorant of h
// pinned to (y_k, k eta) and (y_{k+1}, (k+1) eta).
ScaleFunction strict_envelope(const ScaleFunction& h, double eta);

// g with g(0) = 0, g(x_n) = sqrt(n - 1) at x_n = min{x : R(x) >= n}, linear
// in between. g grows strictly slower than R.
ScaleFunction little_o_of_hazard(const ScaleFunction& hazard, std::size_t n_levels);

struct NaturalScaleFit {
    ScaleFunction h;
    double beta = 0.0;
    double argmin_knot = 0.0;
    double window = 0.5;
    // (knot, R / h) over the window.
    std::vector<std::pair<double, double>> ratio_curve;
};

// Concave natural scale h = beta * (H - H(0)), H the least concave majorant
// of R and beta the windowed minimum of R / (H - H(0)). The windowed
// minimum of R / h is exactly 1.
NaturalScaleFit natural_scale_fit(const ScaleFunction& hazard, double window = 0.5);

// x -> R(g_d^{-1}(x)) tabulated on the images of both knot sets.
ScaleFunction compose_with_inverse_diagonal(const ScaleFunction& hazard,
                                            const ScaleFunction& diagonal);

}  // namespace natscale
