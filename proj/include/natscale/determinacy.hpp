#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "natscale/empirical.hpp"
#include "natscale/indices.hpp"
#include "natscale/random.hpp"
#include "natscale/scale_function.hpp"
#include "natscale/tail_model.hpp"

namespace natscale {

inline constexpr double kDeterminacyThreshold = 1e-3;
// Largest relative drop of the running infimum over the top quarter of the
// window that still counts as flat.
inline constexpr double kFlatnessTolerance = 0.05;

enum class Determinacy { determined, inconclusive };

const char* to_string(Determinacy d);

struct DeterminacyVerdict {
    Determinacy verdict = Determinacy::inconclusive;
    LiminfEstimate liminf_estimate;  // of h(x) / sqrt(x)
    bool flat = false;
    std::optional<std::string> warning;
    std::optional<MgfInterval> hardy_check;
};

// Sufficient test: liminf h(x)/sqrt(x) > 0 implies moment determinacy. An
// inconclusive verdict never asserts indeterminacy.
DeterminacyVerdict determinacy_test(const ScaleFunction& h, const EvalGrid& grid,
                                    double window = kDefaultWindow,
                                    double threshold = kDeterminacyThreshold);

// Bracket for sup{c : E e^{c sqrt(X)} < inf}. c_grid supplies the search
// range: s_max = max(c_grid).
MgfInterval hardy_check(const TailModel& model, const std::vector<double>& c_grid,
                        std::size_t mc_n, const RandomSource& src);

}  // namespace natscale
