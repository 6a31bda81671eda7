#include "natscale/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "natscale/error.hpp"
#include "parallel.hpp"

namespace natscale {

namespace {

// log(1 - e^{-d}) for d > 0.
double log1m_exp_neg(double d) {
    return d > 0.6931471805599453 ? std::log1p(-std::exp(-d)) : std::log(-std::expm1(-d));
}

double logsumexp(const double* v, std::size_t n) {
    double hi = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) hi = std::max(hi, v[i]);
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::exp(v[i] - hi);
    return hi + std::log(acc);
}

}  // namespace

struct HazardSource::Impl {
    std::variant<TailModel, EmpiricalHazard, ScaleFunction, std::vector<HazardSource>> src;
};

HazardSource::HazardSource(TailModel model)
    : impl_(std::make_shared<Impl>(Impl{std::move(model)})) {}
HazardSource::HazardSource(EmpiricalHazard hazard)
    : impl_(std::make_shared<Impl>(Impl{std::move(hazard)})) {}
HazardSource::HazardSource(ScaleFunction hazard)
    : impl_(std::make_shared<Impl>(Impl{std::move(hazard)})) {}

HazardSource HazardSource::max_of(std::vector<HazardSource> sources) {
    require(sources.size() >= 2, ErrorKind::parameter_domain, "max needs at least two sources");
    HazardSource out(ScaleFunction{});
    out.impl_ = std::make_shared<Impl>(Impl{std::move(sources)});
    return out;
}

std::optional<double> HazardSource::at(double x) const {
    const auto& s = impl_->src;
    if (const auto* m = std::get_if<TailModel>(&s)) {
        try {
            return m->hazard(x);
        } catch (const SaturationError&) {
            return INFINITY;
        }
    }
    if (const auto* e = std::get_if<EmpiricalHazard>(&s)) return e->at(x);
    if (const auto* f = std::get_if<ScaleFunction>(&s)) return f->eval(x);

    // P(max > x) = 1 - prod(1 - e^{-R_i}).
    const auto& parts = std::get<std::vector<HazardSource>>(s);
    std::vector<double> r;
    r.reserve(parts.size());
    for (const auto& p : parts) {
        const auto v = p.at(x);
        if (!v) return std::nullopt;
        r.push_back(*v);
    }
    const double r_min = *std::min_element(r.begin(), r.end());
    if (r_min == INFINITY) return INFINITY;
    if (r_min > 30.0) {
        for (double& v : r) v = -v;
        return -logsumexp(r.data(), r.size());
    }
    double log_cdf = 0.0;
    for (double v : r) {
        if (v == 0.0) return 0.0;
        log_cdf += log1m_exp_neg(v);
    }
    return -std::log(-std::expm1(log_cdf));
}

bool HazardSource::is_empirical() const {
    const auto& s = impl_->src;
    if (std::holds_alternative<EmpiricalHazard>(s)) return true;
    if (const auto* parts = std::get_if<std::vector<HazardSource>>(&s))
        return std::any_of(parts->begin(), parts->end(),
                           [](const HazardSource& p) { return p.is_empirical(); });
    return false;
}

std::string HazardSource::describe() const {
    const auto& s = impl_->src;
    if (const auto* m = std::get_if<TailModel>(&s)) return "model:" + m->family();
    if (const auto* e = std::get_if<EmpiricalHazard>(&s)) return "sample:" + e->sample().provenance();
    if (std::holds_alternative<ScaleFunction>(s)) return "tabulated";
    std::string out = "max(";
    const auto& parts = std::get<std::vector<HazardSource>>(s);
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i].describe();
    return out + ")";
}

EvalGrid analytic_grid(const TailModel& model, double x_max, double ratio) {
    double lo = model.quantile(0.9);
    if (const auto* osc = std::get_if<OscillatingDiscrete>(&model.params()))
        x_max = std::min(x_max, osc->atoms.back().location);
    lo = std::max(lo, 1e-300);
    return EvalGrid(lo, x_max, ratio);
}

namespace {

// Windowed minimum of num(x) / den(x) over the points where both are
// available and den > 0.
LiminfEstimate windowed_ratio(const std::function<std::optional<double>(double)>& num,
                              const std::function<double(double)>& den,
                              std::span<const double> points, double window) {
    require(!points.empty(), ErrorKind::parameter_domain, "empty grid");
    const std::size_t begin = log_window_begin(points, window);

    LiminfEstimate est;
    est.window = window;
    std::size_t first_in_window = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double x = points[i];
        const auto r = num(x);
        if (!r) continue;
        const double d = den(x);
        if (!(d > 0.0)) {
            if (i >= begin)
                fail(ErrorKind::not_a_scale_function, "scale is not positive on the window");
            continue;
        }
        if (i >= begin && first_in_window == std::numeric_limits<std::size_t>::max())
            first_in_window = est.ratio_curve.size();
        est.ratio_curve.emplace_back(x, *r / d);
    }
    if (first_in_window == std::numeric_limits<std::size_t>::max())
        fail(ErrorKind::insufficient_tail_data, "no hazard values available on the window");

    est.window_begin = first_in_window;
    est.value = INFINITY;
    bool all_above = true;
    for (std::size_t i = first_in_window; i < est.ratio_curve.size(); ++i) {
        const auto [x, r] = est.ratio_curve[i];
        if (r < est.value) {
            est.value = r;
            est.argmin = x;
        }
        if (!(r > kRatioCap)) all_above = false;
    }
    est.infinite = all_above;
    // The running infimum from the right rises from the window minimum to
    // the last ratio.
    const double last = est.ratio_curve.back().second;
    est.stability = std::isfinite(last) && std::isfinite(est.value) ? last - est.value : 0.0;
    if (est.infinite && !std::isfinite(est.value)) est.value = kRatioCap;
    return est;
}

std::function<std::optional<double>(double)> hazard_of(const HazardSource& src) {
    return [&src](double x) { return src.at(x); };
}

}  // namespace

LiminfEstimate h_order(const HazardSource& src, const ScaleFunction& h, const EvalGrid& grid,
                       double window) {
    require(h.is_scale_function(), ErrorKind::not_a_scale_function,
            "h-order needs an unbounded scale function");
    return windowed_ratio(hazard_of(src), [&h](double x) { return h(x); }, grid.points(), window);
}

LiminfEstimate h_order(const HazardSource& src, const std::function<double(double)>& h,
                       const EvalGrid& grid, double window) {
    return windowed_ratio(hazard_of(src), h, grid.points(), window);
}

LiminfEstimate exponential_index(const HazardSource& src, const EvalGrid& grid, double window) {
    return h_order(src, ScaleFunction::identity(), grid, window);
}

LiminfEstimate moment_index(const HazardSource& src, const EvalGrid& grid, double window) {
    const auto pts = grid.points();
    const auto first = std::upper_bound(pts.begin(), pts.end(), 1.0);
    require(first != pts.end(), ErrorKind::parameter_domain, "moment index needs grid points above 1");
    const std::span<const double> above(first, pts.end());
    return windowed_ratio(hazard_of(src), [](double x) { return std::log(x); }, above, window);
}

LiminfEstimate ratio_liminf(const HazardSource& src_x, const HazardSource& src_y,
                            const EvalGrid& grid, double window, double eps) {
    require(eps > 0.0, ErrorKind::parameter_domain, "eps must be positive");
    // Points where R_Y is unavailable are dropped by reporting nullopt for R_X.
    auto num = [&](double x) -> std::optional<double> {
        if (!src_y.at(x)) return std::nullopt;
        return src_x.at(x);
    };
    auto den = [&](double x) {
        const auto v = src_y.at(x);
        return v ? *v : 0.0;
    };
    LiminfEstimate est = windowed_ratio(num, den, grid.points(), window);
    est.eps = eps;
    const double a = est.value - eps;
    // Scan from the right for the start of the final run where the bound holds.
    std::optional<double> x_eps;
    for (std::size_t i = est.ratio_curve.size(); i-- > 0;) {
        const auto [x, r] = est.ratio_curve[i];
        if (a > 0.0 && r < a) break;
        x_eps = x;
    }
    est.x_eps = x_eps;
    return est;
}

MgfInterval mgf_sup_order(const TailModel& model, const std::function<double(double)>& h,
                          double s_max, std::size_t mc_n, const RandomSource& src) {
    require(s_max > 0.0 && std::isfinite(s_max), ErrorKind::parameter_domain,
            "s_max must be positive");
    require(mc_n >= 100000, ErrorKind::parameter_domain, "mgf estimate needs mc_n >= 1e5");

    // Common random numbers: every s is judged on the same h(X_i).
    std::vector<double> hx;
    detail::parallel_fill(hx, mc_n, src, [&](RandomSource& rng) { return h(model.draw(rng)); });

    // Disjoint batches of sizes n0, 2 n0, ..., 128 n0.
    const std::size_t n0 = mc_n / ((std::size_t{1} << kMgfBatches) - 1);
    std::vector<double> scratch;
    auto probe = [&](double s) {
        double lo = INFINITY, hi = -INFINITY;
        std::size_t offset = 0;
        for (std::size_t b = 0; b < kMgfBatches; ++b) {
            const std::size_t len = n0 << b;
            scratch.resize(len);
            for (std::size_t i = 0; i < len; ++i) scratch[i] = s * hx[offset + i];
            const double lm = logsumexp(scratch.data(), len) - std::log(static_cast<double>(len));
            lo = std::min(lo, lm);
            hi = std::max(hi, lm);
            offset += len;
        }
        const double spread = hi - lo;
        return MgfProbe{s, spread < std::log(2.0), spread};
    };

    MgfInterval out;
    out.mc_n = mc_n;
    out.seed = src.seed();
    const MgfProbe top = probe(s_max);
    out.probes.push_back(top);
    if (top.finite) {
        out.lo = out.hi = s_max;
        out.saturated = true;
        return out;
    }
    double lo = 0.0, hi = s_max;
    bool any_finite = false;
    while (hi - lo > s_max / 64.0 * (1.0 + 1e-12)) {
        const double mid = 0.5 * (lo + hi);
        const MgfProbe p = probe(mid);
        out.probes.push_back(p);
        if (p.finite) {
            lo = mid;
            any_finite = true;
        } else {
            hi = mid;
        }
    }
    if (!any_finite) {
        out.all_divergent = true;
        out.lo = out.hi = 0.0;
        return out;
    }
    out.lo = lo;
    out.hi = hi;
    return out;
}

MgfInterval mgf_sup_order(const TailModel& model, const ScaleFunction& h, double s_max,
                          std::size_t mc_n, const RandomSource& src) {
    require(h.is_scale_function(), ErrorKind::not_a_scale_function,
            "mgf order needs an unbounded scale function");
    return mgf_sup_order(model, [&h](double x) { return h(x); }, s_max, mc_n, src);
}

}  // namespace natscale
