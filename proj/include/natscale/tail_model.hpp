#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "natscale/random.hpp"
#include "natscale/scale_function.hpp"

namespace natscale {

class SampleSet;

// Tail e^{-lambda x^alpha}, alpha in (0, 1).
struct Weibull {
    double lambda;
    double alpha;
};

// Tail c x^beta e^{-lambda (log x)^gamma} from the cutoff x0 on, 1 below it.
struct LogNormalType {
    double c;
    double beta;
    double lambda;
    double gamma;
};

// Tail (x_m / x)^alpha for x >= x_m.
struct Pareto {
    double alpha;
    double x_m;
};

struct Exponential {
    double lambda;
};

// Degenerate law concentrated on `value`.
struct PointMass {
    double value;
};

struct Atom {
    double location;
    double log_mass;  // masses are kept in log space; far atoms underflow otherwise
};

struct OscillatingDiscrete {
    std::vector<Atom> atoms;
};

using ModelParams =
    std::variant<Weibull, LogNormalType, Pareto, Exponential, PointMass, OscillatingDiscrete>;

// Immutable analytic distribution with exact tail, hazard, quantile and an
// inverse-transform sampler. Hazards are evaluated in closed form (log space)
// so they remain finite far beyond the point where the tail underflows.
class TailModel {
public:
    explicit TailModel(ModelParams params);

    const ModelParams& params() const { return params_; }
    std::string family() const;
    bool is_continuous() const;

    // Log-normal-type cutoff below which the tail is 1 (0 for other families).
    double cutoff() const { return cutoff_; }

    double tail(double x) const;
    double hazard(double x) const;
    double log_tail(double x) const { return -hazard(x); }

    // inf{x : F(x) >= u}.
    double quantile(double u) const;
    // inf{x : tail(x) <= v}; the sampler draws v uniformly, which keeps full
    // relative precision deep in the tail.
    double tail_quantile(double v) const;

    double draw(RandomSource& src) const { return tail_quantile(src.uniform()); }

    // Oscillating models only: P(X > x) just below each atom, in log space.
    const std::vector<double>& log_tail_from() const { return log_tail_from_; }

private:
    ModelParams params_;
    double cutoff_ = 0.0;
    std::vector<double> log_tail_from_;  // log P(X >= atom_i)
};

double tail_value(const TailModel& model, double x);
double hazard_value(const TailModel& model, double x);
double quantile(const TailModel& model, double u);
SampleSet sample_n(const TailModel& model, std::size_t n, RandomSource& src);

// Discrete law whose hazard oscillates between two scales: atoms
// x_{k+1} = h2^{-1}(h1(x_k)), x_0 = 1, with P(X = x_k) = e^{-h2(x_k)} - e^{-h1(x_k)}.
// The residual e^{-h2(x_n)} sits on a final atom at x_n and the mass
// 1 - e^{-h2(x_0)} on a base atom at x_0 / 2, so the masses sum to one and the
// hazard equals h2 just below every constructed atom and h1 at it.
TailModel build_oscillating(const ScaleFunction& h1, const ScaleFunction& h2,
                            std::size_t n_atoms);

}  // namespace natscale
