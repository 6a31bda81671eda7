#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natscale/empirical.hpp"
#include "natscale/indices.hpp"
#include "natscale/random.hpp"
#include "natscale/sample.hpp"
#include "natscale/scale_function.hpp"
#include "natscale/tail_model.hpp"

namespace natscale {

enum class ProcessKind { iid_sum, iid_product, power_product, discounted_sum, running_max_discounted };

const char* to_string(ProcessKind kind);

// Terminal variable of one of the composite processes. For the IID kinds the
// summands/factors are drawn from b_model; the discounted kinds use
//   Y_n = B_1 + A_1 B_2 + ... + A_1 ... A_{n-1} B_n
// and its running maximum, simulated through U_{k+1} = B_{k+1} + A_{k+1} U_k.
struct ProcessSpec {
    ProcessKind kind = ProcessKind::iid_sum;
    std::size_t n = 1;
    TailModel a_model{PointMass{0.0}};
    TailModel b_model{PointMass{1.0}};
    std::vector<double> weights;  // power_product only; non-negative, sum 1

    void validate() const;
};

SampleSet simulate_process(const ProcessSpec& spec, std::size_t mc_n, const RandomSource& src);

// sup_{k <= n} Y_k computed along each forward path; used to check the
// distributional identity with the U recursion.
SampleSet simulate_running_max_direct(const ProcessSpec& spec, std::size_t mc_n,
                                      const RandomSource& src);

enum class RuleVerdict { agree, disagree, refused };

const char* to_string(RuleVerdict v);

struct MinRuleCheck {
    std::string rule;  // "sum", "product" or "running_max"
    RuleVerdict verdict = RuleVerdict::refused;
    std::optional<LiminfEstimate> estimate;  // empirical h-order of the composite
    std::size_t clamped = 0;
    double margin = 0.0;  // |estimate - min order|
    std::optional<std::pair<double, double>> witness;
    std::string detail;
};

struct MinRuleOptions {
    bool sum = true;
    bool product = true;
    bool running_max = false;
    std::size_t horizon = 3;  // n for the running maximum
    double tolerance = 0.3;
    std::size_t k_min = kDefaultKMin;
};

struct MinRuleReport {
    LiminfEstimate order_a;
    LiminfEstimate order_b;
    double min_order = 0.0;
    std::size_t mc_n = 0;
    std::uint64_t seed = 0;
    std::vector<MinRuleCheck> checks;
};

// Estimates the h-order of A + B, A B and the running maximum by simulation
// and compares each with min(I_h(A), I_h(B)). A rule whose subadditivity gate
// fails is refused and not simulated.
MinRuleReport verify_min_rule(const TailModel& a, const TailModel& b, const ScaleFunction& h,
                              std::size_t mc_n, const std::optional<EvalGrid>& grid,
                              double window, const RandomSource& src,
                              const MinRuleOptions& options = {});

}  // namespace natscale
