#include "natscale/tail_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "natscale/error.hpp"
#include "natscale/sample.hpp"

namespace natscale {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double log_add_exp(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// log(1 - e^{-d}) for d > 0.
double log1m_exp_neg(double d) {
    return d > 0.6931471805599453 ? std::log1p(-std::exp(-d)) : std::log(-std::expm1(-d));
}

double ln_log_tail(const LogNormalType& p, double t) {
    return std::log(p.c) + p.beta * t - p.lambda * std::pow(t, p.gamma);
}

// Smallest t >= lo with f(t) <= target, for f non-increasing on [lo, inf).
template <class F>
double solve_decreasing(F f, double lo, double target) {
    if (f(lo) <= target) return lo;
    double step = 1.0, hi = lo + step;
    while (f(hi) > target) {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        require(std::isfinite(hi), ErrorKind::range, "log-normal-type inversion diverged");
    }
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) <= target ? hi : lo) = mid;
    }
    return hi;
}

void validate(const ModelParams& params) {
    std::visit(
        overloaded{
            [](const Weibull& p) {
                require(p.lambda > 0.0 && std::isfinite(p.lambda), ErrorKind::parameter_domain,
                        "weibull lambda must be positive");
                require(p.alpha > 0.0 && p.alpha < 1.0, ErrorKind::parameter_domain,
                        "weibull alpha must lie in (0,1)");
            },
            [](const LogNormalType& p) {
                require(p.c > 0.0 && std::isfinite(p.c), ErrorKind::parameter_domain,
                        "log-normal-type c must be positive");
                require(std::isfinite(p.beta), ErrorKind::parameter_domain,
                        "log-normal-type beta must be finite");
                require(p.lambda > 0.0 && std::isfinite(p.lambda), ErrorKind::parameter_domain,
                        "log-normal-type lambda must be positive");
                require(p.gamma > 1.0 && std::isfinite(p.gamma), ErrorKind::parameter_domain,
                        "log-normal-type gamma must exceed 1");
            },
            [](const Pareto& p) {
                require(p.alpha > 0.0 && std::isfinite(p.alpha), ErrorKind::parameter_domain,
                        "pareto alpha must be positive");
                require(p.x_m > 0.0 && std::isfinite(p.x_m), ErrorKind::parameter_domain,
                        "pareto x_m must be positive");
            },
            [](const Exponential& p) {
                require(p.lambda > 0.0 && std::isfinite(p.lambda), ErrorKind::parameter_domain,
                        "exponential lambda must be positive");
            },
            [](const PointMass& p) {
                require(p.value >= 0.0 && std::isfinite(p.value), ErrorKind::parameter_domain,
                        "point mass location must be finite and non-negative");
            },
            [](const OscillatingDiscrete& p) {
                require(!p.atoms.empty(), ErrorKind::parameter_domain, "no atoms");
                double log_total = -INFINITY;
                for (std::size_t i = 0; i < p.atoms.size(); ++i) {
                    const Atom& a = p.atoms[i];
                    require(a.location > 0.0 && std::isfinite(a.location),
                            ErrorKind::parameter_domain, "atom locations must be positive");
                    require(std::isfinite(a.log_mass), ErrorKind::parameter_domain,
                            "atom masses must be positive");
                    require(i == 0 || a.location > p.atoms[i - 1].location,
                            ErrorKind::parameter_domain,
                            "atom locations must be strictly increasing");
                    log_total = log_add_exp(log_total, a.log_mass);
                }
                require(std::abs(std::expm1(log_total)) <= 1e-12, ErrorKind::parameter_domain,
                        "atom masses must sum to 1");
            },
        },
        params);
}

}  // namespace

TailModel::TailModel(ModelParams params) : params_(std::move(params)) {
    validate(params_);
    if (const auto* p = std::get_if<LogNormalType>(&params_)) {
        // phi(t) = log tail at x = e^t is concave in t; past its maximum it
        // stays decreasing, so the cutoff is the first t beyond the maximum
        // where the formula drops to 1 or below.
        const double t_peak =
            p->beta > 0.0 ? std::pow(p->beta / (p->lambda * p->gamma), 1.0 / (p->gamma - 1.0))
                          : 0.0;
        const double t0 = solve_decreasing([&](double t) { return ln_log_tail(*p, t); }, t_peak, 0.0);
        cutoff_ = std::exp(t0);
    } else if (const auto* p = std::get_if<OscillatingDiscrete>(&params_)) {
        const auto n = p->atoms.size();
        log_tail_from_.assign(n, -INFINITY);
        double acc = -INFINITY;
        for (std::size_t i = n; i-- > 0;) {
            acc = log_add_exp(acc, p->atoms[i].log_mass);
            log_tail_from_[i] = acc;
        }
    }
}

std::string TailModel::family() const {
    return std::visit(overloaded{
                          [](const Weibull&) { return std::string("weibull"); },
                          [](const LogNormalType&) { return std::string("lognormal_type"); },
                          [](const Pareto&) { return std::string("pareto"); },
                          [](const Exponential&) { return std::string("exponential"); },
                          [](const PointMass&) { return std::string("point_mass"); },
                          [](const OscillatingDiscrete&) { return std::string("oscillating"); },
                      },
                      params_);
}

bool TailModel::is_continuous() const {
    return !std::holds_alternative<PointMass>(params_) &&
           !std::holds_alternative<OscillatingDiscrete>(params_);
}

double TailModel::hazard(double x) const {
    require(x >= 0.0, ErrorKind::parameter_domain, "hazard evaluated at x < 0");
    return std::visit(
        overloaded{
            [&](const Weibull& p) { return p.lambda * std::pow(x, p.alpha); },
            [&](const LogNormalType& p) {
                if (x < cutoff_) return 0.0;
                return std::max(0.0, -ln_log_tail(p, std::log(x)));
            },
            [&](const Pareto& p) { return x < p.x_m ? 0.0 : p.alpha * std::log(x / p.x_m); },
            [&](const Exponential& p) { return p.lambda * x; },
            [&](const PointMass& p) -> double {
                if (x < p.value) return 0.0;
                throw SaturationError("point mass: tail is zero at and beyond its atom", 0.0);
            },
            [&](const OscillatingDiscrete& p) -> double {
                const auto it = std::upper_bound(
                    p.atoms.begin(), p.atoms.end(), x,
                    [](double v, const Atom& a) { return v < a.location; });
                const auto i = static_cast<std::size_t>(it - p.atoms.begin());
                if (i == p.atoms.size())
                    throw SaturationError("oscillating model: tail is zero beyond the last atom",
                                          -log_tail_from_.back());
                return -log_tail_from_[i];
            },
        },
        params_);
}

double TailModel::tail(double x) const {
    try {
        return std::exp(-hazard(x));
    } catch (const SaturationError&) {
        return 0.0;
    }
}

double TailModel::tail_quantile(double v) const {
    require(v > 0.0 && v < 1.0, ErrorKind::parameter_domain, "tail level must lie in (0,1)");
    const double lv = std::log(v);
    return std::visit(
        overloaded{
            [&](const Weibull& p) { return std::pow(-lv / p.lambda, 1.0 / p.alpha); },
            [&](const LogNormalType& p) {
                const double t0 = std::log(cutoff_);
                if (lv >= ln_log_tail(p, t0)) return cutoff_;
                return std::exp(
                    solve_decreasing([&](double t) { return ln_log_tail(p, t); }, t0, lv));
            },
            [&](const Pareto& p) { return p.x_m * std::exp(-lv / p.alpha); },
            [&](const Exponential& p) { return -lv / p.lambda; },
            [&](const PointMass& p) { return p.value; },
            [&](const OscillatingDiscrete& p) {
                // First atom whose strict tail P(X > x_i) is at most v.
                for (std::size_t i = 0; i + 1 < p.atoms.size(); ++i)
                    if (log_tail_from_[i + 1] <= lv) return p.atoms[i].location;
                return p.atoms.back().location;
            },
        },
        params_);
}

double TailModel::quantile(double u) const {
    require(u > 0.0 && u < 1.0, ErrorKind::parameter_domain, "quantile level must lie in (0,1)");
    return tail_quantile(1.0 - u);
}

double tail_value(const TailModel& model, double x) { return model.tail(x); }
double hazard_value(const TailModel& model, double x) { return model.hazard(x); }
double quantile(const TailModel& model, double u) { return model.quantile(u); }

SampleSet sample_n(const TailModel& model, std::size_t n, RandomSource& src) {
    require(n >= 1, ErrorKind::parameter_domain, "sample size must be at least 1");
    std::vector<double> v(n);
    for (double& x : v) x = model.draw(src);
    std::ostringstream prov;
    prov << "model=" << model.family() << " seed=" << src.seed() << " n=" << n;
    return SampleSet(std::move(v), prov.str());
}

TailModel build_oscillating(const ScaleFunction& h1, const ScaleFunction& h2,
                            std::size_t n_atoms) {
    require(n_atoms >= 2, ErrorKind::parameter_domain, "need at least two atoms");
    require(h1.is_strictly_increasing() && h2.is_strictly_increasing(),
            ErrorKind::parameter_domain, "h1 and h2 must be strictly increasing");
    require(h2.is_scale_function(), ErrorKind::not_a_scale_function, "h2 must be unbounded");
    for (const auto* f : {&h1, &h2})
        for (double x : f->knots())
            if (x > 0.0)
                require(h2(x) < h1(x), ErrorKind::parameter_domain,
                        "h2 must lie strictly below h1 on the grid");

    std::vector<double> xs{1.0};
    for (std::size_t k = 0; k < n_atoms; ++k) {
        const double level = h1(xs[k]);
        const auto next = std::isfinite(level) ? h2.first_reach(level) : std::nullopt;
        if (!next || !std::isfinite(*next) || *next <= xs[k])
            throw RangeExhaustedError("oscillating recursion left the representable range after atom " +
                                          std::to_string(k),
                                      static_cast<long>(k));
        xs.push_back(*next);
    }

    std::vector<Atom> atoms;
    const double h2_first = h2(xs[0]);
    if (h2_first > 0.0) atoms.push_back({0.5 * xs[0], log1m_exp_neg(h2_first)});
    for (std::size_t k = 0; k < n_atoms; ++k) {
        // h2(x_{k+1}) equals h1(x_k) up to rounding; using it makes the
        // partial sums telescope exactly.
        const double lo = h2(xs[k]);
        atoms.push_back({xs[k], -lo + log1m_exp_neg(h2(xs[k + 1]) - lo)});
    }
    atoms.push_back({xs[n_atoms], -h2(xs[n_atoms])});
    return TailModel(OscillatingDiscrete{std::move(atoms)});
}

}  // namespace natscale
