#include "natscale/scales.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "natscale/empirical.hpp"
#include "natscale/error.hpp"

namespace natscale {

namespace {

struct Point {
    double x;
    double y;
};

// True when b lies on or below the chord from a to c.
bool not_above_chord(const Point& a, const Point& b, const Point& c) {
    const long double cross =
        static_cast<long double>(b.x - a.x) * static_cast<long double>(c.y - a.y) -
        static_cast<long double>(b.y - a.y) * static_cast<long double>(c.x - a.x);
    return cross >= 0.0L;
}

// Upper hull of points sorted by x (monotone chain).
std::vector<Point> upper_hull(const std::vector<Point>& pts) {
    std::vector<Point> hull;
    hull.reserve(pts.size());
    for (const Point& p : pts) {
        while (hull.size() >= 2 && not_above_chord(hull[hull.size() - 2], hull.back(), p))
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

// R2 low-discrepancy sequence in the unit square.
std::pair<double, double> r2_point(std::size_t i) {
    constexpr double g = 1.32471795724474602596;
    constexpr double a1 = 1.0 / g, a2 = 1.0 / (g * g);
    const double k = static_cast<double>(i + 1);
    double u = 0.5 + a1 * k, v = 0.5 + a2 * k;
    return {u - std::floor(u), v - std::floor(v)};
}

double band(double a, double b) { return kBandTolerance * std::max(1.0, std::abs(a) + std::abs(b)); }

// Probe range for the subadditivity checks. Functions with a short knot range
// (e.g. a two-knot linear function) are probed out to 1e3 through their
// linear extension.
std::pair<double, double> probe_range(const ScaleFunction& h) {
    const auto k = h.knots();
    const double lo = k[1];
    const double hi = std::max({k.back(), 1e3, lo * 1e3});
    return {lo, hi};
}

// Nearest knot (in log distance) for x strictly inside the knot range, so the
// right-hand sides use encoded values rather than chords.
double snap(std::span<const double> k, double x) {
    if (x <= k.front() || x >= k.back()) return x;
    const auto it = std::upper_bound(k.begin(), k.end(), x);
    const double hi = *it, lo = *(it - 1);
    if (lo <= 0.0) return hi;
    return std::log(x / lo) <= std::log(hi / x) ? lo : hi;
}

template <class Check>
SubadditivityVerdict run_probes(std::size_t probe_pairs, Check&& check) {
    require(probe_pairs >= 100, ErrorKind::parameter_domain, "need at least 100 probe pairs");
    SubadditivityVerdict verdict;
    verdict.probes = probe_pairs;
    for (std::size_t i = 0; i < probe_pairs; ++i) {
        const auto [u, v] = r2_point(i);
        const auto r = check(u, v);
        if (r && r->second > verdict.excess) {
            verdict.holds = false;
            verdict.witness = r->first;
            verdict.excess = r->second;
        }
    }
    return verdict;
}

}  // namespace

ConcavityVerdict check_concave(const ScaleFunction& h) {
    const auto k = h.knots();
    const auto v = h.values();
    ConcavityVerdict verdict;
    double prev = INFINITY;
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double s = (v[i] - v[i - 1]) / (k[i] - k[i - 1]);
        if (s > prev + kSlopeTolerance) {
            verdict.concave = false;
            verdict.witness = std::array<double, 3>{k[i - 2], k[i - 1], k[i]};
            return verdict;
        }
        prev = s;
    }
    if (h.tail_slope() > prev + kSlopeTolerance) {
        const std::size_t n = k.size();
        verdict.concave = false;
        verdict.witness = std::array<double, 3>{k[n - 2], k[n - 1], k[n - 1] + (k[n - 1] - k[n - 2])};
    }
    return verdict;
}

SubadditivityVerdict check_subadditive_sum(const ScaleFunction& h, std::size_t probe_pairs) {
    const auto [lo, hi] = probe_range(h);
    const double span = std::log(hi / lo);
    // Even probes are log-uniform, odd probes uniform on [0, hi].
    std::size_t idx = 0;
    return run_probes(probe_pairs, [&, lo = lo, hi = hi](double u, double v)
                                       -> std::optional<std::pair<std::pair<double, double>, double>> {
        const bool log_scale = (idx++ % 2) == 0;
        const double a = snap(h.knots(), log_scale ? lo * std::exp(u * span) : u * hi);
        const double b = snap(h.knots(), log_scale ? lo * std::exp(v * span) : v * hi);
        const double ha = h(a), hb = h(b);
        const double excess = h(a + b) - ha - hb;
        if (excess > band(ha, hb)) return std::make_pair(std::make_pair(a, b), excess);
        return std::nullopt;
    });
}

SubadditivityVerdict check_subadditive_product(const ScaleFunction& h, std::size_t probe_pairs) {
    const auto [lo, hi] = probe_range(h);
    const double floor = std::max(1.0, lo);
    const double span = std::log(hi / floor);
    return run_probes(probe_pairs, [&, floor = floor](double u, double v)
                                       -> std::optional<std::pair<std::pair<double, double>, double>> {
        const double la = u * span;
        const double a = snap(h.knots(), floor * std::exp(la));
        const double b = snap(h.knots(), floor * std::exp(v * (span - la)));
        const double ha = h(a), hb = h(b);
        const double excess = h(a * b) - ha - hb;
        if (excess > band(ha, hb)) return std::make_pair(std::make_pair(a, b), excess);
        return std::nullopt;
    });
}

ScaleFunction concave_majorant(const ScaleFunction& f) {
    const auto k = f.knots();
    const auto v = f.values();
    std::vector<Point> pts(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) pts[i] = {k[i], v[i]};
    const auto hull = upper_hull(pts);
    std::vector<double> hx, hy;
    hx.reserve(hull.size());
    hy.reserve(hull.size());
    for (const Point& p : hull) {
        hx.push_back(p.x);
        hy.push_back(p.y);
    }
    const std::size_t n = hull.size();
    const double last_slope = (hy[n - 1] - hy[n - 2]) / (hx[n - 1] - hx[n - 2]);
    return ScaleFunction(std::move(hx), std::move(hy), std::min(f.tail_slope(), last_slope));
}

ScaleFunction strict_envelope(const ScaleFunction& h, double eta) {
    require(eta > 0.0 && std::isfinite(eta), ErrorKind::parameter_domain, "eta must be positive");
    if (!h.is_scale_function())
        fail(ErrorKind::not_a_scale_function, "strict envelope needs an unbounded function");

    const auto k = h.knots();
    const auto v = h.values();
    const double top = v.back();
    const double k_first = std::ceil(h.front() / eta);
    const double k_last = std::ceil(top / eta) + 1.0;
    require(k_last - k_first < 5e7, ErrorKind::parameter_domain,
            "eta too small for the range of h");

    // Anchors: (0, h(0)) then every level crossing up to one past the last knot.
    std::vector<Point> anchors{{0.0, h.front()}};
    for (double lvl = k_first; lvl <= k_last; lvl += 1.0) {
        const double y = lvl * eta;
        double x = *h.first_reach(y);
        if (x <= anchors.back().x) {
            if (y == anchors.back().y) continue;
            x = std::nextafter(anchors.back().x, INFINITY);
        }
        anchors.push_back({x, y});
    }

    std::vector<double> out_x{anchors.front().x}, out_y{anchors.front().y};
    std::size_t ki = 1;
    std::vector<Point> seg;
    for (std::size_t a = 1; a < anchors.size(); ++a) {
        seg.clear();
        seg.push_back(anchors[a - 1]);
        while (ki < k.size() && k[ki] <= anchors[a - 1].x) ++ki;
        for (std::size_t j = ki; j < k.size() && k[j] < anchors[a].x; ++j) seg.push_back({k[j], v[j]});
        seg.push_back(anchors[a]);
        const auto hull = upper_hull(seg);
        for (std::size_t j = 1; j < hull.size(); ++j) {
            out_x.push_back(hull[j].x);
            out_y.push_back(hull[j].y);
        }
    }
    return ScaleFunction(std::move(out_x), std::move(out_y), h.tail_slope());
}

ScaleFunction little_o_of_hazard(const ScaleFunction& hazard, std::size_t n_levels) {
    require(n_levels >= 3, ErrorKind::parameter_domain, "need at least three levels");
    std::vector<double> kx{0.0}, ky{0.0};
    for (std::size_t n = 1; n <= n_levels; ++n) {
        const auto xn = hazard.first_reach(static_cast<double>(n));
        if (!xn)
            throw RangeExhaustedError("hazard never reaches level " + std::to_string(n),
                                      static_cast<long>(n) - 1);
        const double g = std::sqrt(static_cast<double>(n - 1));
        if (*xn <= kx.back()) {
            // R(0) >= n: the level sits on the origin, where g is already 0.
            require(g == ky.back(), ErrorKind::degenerate_hazard,
                    "hazard levels collapse onto one point");
            continue;
        }
        kx.push_back(*xn);
        ky.push_back(g);
    }
    return ScaleFunction(std::move(kx), std::move(ky));
}

NaturalScaleFit natural_scale_fit(const ScaleFunction& hazard, double window) {
    require(window > 0.0 && window < 1.0, ErrorKind::parameter_domain, "window must lie in (0,1)");
    const ScaleFunction hull = concave_majorant(hazard);
    const double base = hull.front();

    const auto knots = hazard.knots();
    const auto values = hazard.values();
    const std::span<const double> positive = knots.subspan(1);
    const std::size_t begin = 1 + log_window_begin(positive, window);

    NaturalScaleFit fit;
    fit.window = window;
    double best = INFINITY;
    std::vector<std::pair<double, double>> raw;
    for (std::size_t i = begin; i < knots.size(); ++i) {
        const double denom = hull(knots[i]) - base;
        if (!(denom > 0.0)) continue;
        const double r = values[i] / denom;
        raw.emplace_back(knots[i], r);
        if (r < best) {
            best = r;
            fit.argmin_knot = knots[i];
        }
    }
    if (raw.empty()) fail(ErrorKind::degenerate_hazard, "concave majorant is flat on the window");
    if (!(best > 0.0)) fail(ErrorKind::degenerate_hazard, "hazard vanishes on the window");

    fit.beta = best;
    fit.h = hull.shifted(-base).scaled(best);
    for (const auto& [x, r] : raw) fit.ratio_curve.emplace_back(x, r / best);
    return fit;
}

ScaleFunction compose_with_inverse_diagonal(const ScaleFunction& hazard,
                                            const ScaleFunction& diagonal) {
    require(diagonal.is_strictly_increasing(), ErrorKind::not_invertible,
            "diagonal function must be strictly increasing");
    const double y0 = diagonal.front();
    std::vector<double> ys;
    for (double y : diagonal.values()) ys.push_back(y);
    for (double x : hazard.knots()) {
        const double y = diagonal(x);
        if (std::isfinite(y)) ys.push_back(y);
    }
    std::sort(ys.begin(), ys.end());
    std::vector<double> kx{0.0}, ky{hazard(0.0)};
    for (double y : ys) {
        if (y < y0 || y <= kx.back() * (1.0 + 1e-14)) continue;
        kx.push_back(y);
        ky.push_back(std::max(ky.back(), hazard(diagonal.inverse(y))));
    }
    require(kx.size() >= 2, ErrorKind::range, "composition has an empty image range");
    return ScaleFunction(std::move(kx), std::move(ky), hazard.tail_slope() / diagonal.tail_slope());
}

}  // namespace natscale
