#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "natscale/error.hpp"
#include "natscale/indices.hpp"
#include "natscale/scales.hpp"
#include "natscale/tail_model.hpp"
#include "support.hpp"

using namespace natscale;

namespace {

ScaleFunction square_scale() {
    return ScaleFunction::tabulate([](double x) { return x * x; }, geometric_knots(1e-3, 1e3, 1.1));
}

ScaleFunction sqrt_scale() { return support::power_scale(1.0, 0.5, 1e6); }

// Unit staircase smoothed into steep ramps, with flat plateaus.
ScaleFunction staircase(std::size_t steps) {
    std::vector<double> k{0.0}, v{0.0};
    for (std::size_t i = 0; i < steps; ++i) {
        const double x = static_cast<double>(i + 1);
        k.push_back(x - 0.01);
        v.push_back(static_cast<double>(i));
        k.push_back(x);
        v.push_back(static_cast<double>(i + 1));
    }
    return ScaleFunction(std::move(k), std::move(v), 1.0);
}

ScaleFunction hazard_table(const TailModel& m, double lo, double hi) {
    return ScaleFunction::tabulate([&](double x) { return m.hazard(x); },
                                   geometric_knots(lo, hi, 1.02));
}

std::vector<double> probes(const ScaleFunction& h, std::size_t n) {
    std::vector<double> out;
    const double hi = h.last_knot() * 1.5;
    for (std::size_t i = 0; i < n; ++i) out.push_back(hi * (static_cast<double>(i) + 0.5) / n);
    return out;
}

}  // namespace

TEST_CASE("eval interpolates and extrapolates") {
    const ScaleFunction id = ScaleFunction::identity();
    CHECK(id(0.5) == 0.5);
    CHECK(id(2.0) == 2.0);
    const ScaleFunction w = support::power_scale(2.0, 0.5, 1e4);
    for (double k : w.knots()) CHECK(w(k) == doctest::Approx(2.0 * std::sqrt(k)).epsilon(1e-15));
    CHECK_THROWS_AS(id(-1.0), Error);
}

TEST_CASE("inverse") {
    CHECK(ScaleFunction::identity().inverse(7.0) == 7.0);
    CHECK(ScaleFunction::linear(2.0).inverse(5.0) == doctest::Approx(2.5).epsilon(1e-12));
    const ScaleFunction lg = support::log1p_scale(1e4, 1.01);
    CHECK(std::abs(lg.inverse(1.0) - (std::numbers::e - 1.0)) <= 1e-3);
    const ScaleFunction flat({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0}, 1.0);
    try {
        flat.inverse(0.5);
        FAIL("expected not-invertible");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::not_invertible);
    }
    const ScaleFunction shifted = ScaleFunction::identity().shifted(1.0);
    try {
        shifted.inverse(0.5);
        FAIL("expected range error");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::range);
    }
}

TEST_CASE("check_concave") {
    CHECK(check_concave(sqrt_scale()).concave);
    const auto v = check_concave(square_scale());
    CHECK_FALSE(v.concave);
    REQUIRE(v.witness);
    const auto [a, b, c] = *v.witness;
    const ScaleFunction sq = square_scale();
    CHECK((sq(c) - sq(b)) / (c - b) > (sq(b) - sq(a)) / (b - a));
}

TEST_CASE("check_subadditive_sum") {
    CHECK(check_subadditive_sum(sqrt_scale()).holds);
    CHECK(check_subadditive_sum(support::log1p_scale()).holds);
    CHECK(check_subadditive_sum(support::power_scale(3.0, 0.7)).holds);
    const auto v = check_subadditive_sum(square_scale());
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness);
    const auto [a, b] = *v.witness;
    const ScaleFunction sq = square_scale();
    CHECK(sq(a + b) > sq(a) + sq(b));
    CHECK_THROWS_AS(check_subadditive_sum(sqrt_scale(), 50), Error);
}

TEST_CASE("check_subadditive_product") {
    CHECK(check_subadditive_product(support::log1p_scale()).holds);

    const auto w = check_subadditive_product(sqrt_scale());
    CHECK_FALSE(w.holds);
    REQUIRE(w.witness);
    CHECK(std::sqrt(w.witness->first * w.witness->second) >
          std::sqrt(w.witness->first) + std::sqrt(w.witness->second));
    // the hand witness a = b = 100: 100 > 20
    CHECK(sqrt_scale()(1e4) > 2.0 * sqrt_scale()(100.0));

    const auto id = check_subadditive_product(ScaleFunction::identity());
    CHECK_FALSE(id.holds);
    CHECK(10.0 * 10.0 > 10.0 + 10.0);
}

TEST_CASE("lambda (log x)^gamma is not product-subadditive for gamma > 1") {
    // Brute force at a = b = e: (log e^2)^gamma = 2^gamma > 2.
    const double gamma = 2.0;
    const ScaleFunction h = support::log_power_scale(1.0, gamma);
    const double a = std::numbers::e;
    CHECK(std::pow(std::log(a * a), gamma) > 2.0 * std::pow(std::log(a), gamma));
    const auto v = check_subadditive_product(h);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness);
    CHECK(h(v.witness->first * v.witness->second) > h(v.witness->first) + h(v.witness->second));
}

TEST_CASE("concave_majorant") {
    const ScaleFunction c = sqrt_scale();
    const ScaleFunction m = concave_majorant(c);
    for (double k : c.knots()) CHECK(m(k) == doctest::Approx(c(k)).epsilon(1e-12));

    const ScaleFunction kink({0.0, 1.0, 3.0}, {0.0, 0.0, 2.0});
    const ScaleFunction chord = concave_majorant(kink);
    CHECK(chord.size() == 2);
    CHECK(chord(1.5) == doctest::Approx(1.0));
    CHECK(chord(3.0) == 2.0);
}

TEST_CASE("concave_majorant agrees with a brute-force hull") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> step(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> k{0.0}, v{0.0};
        for (int i = 1; i < 60; ++i) {
            k.push_back(k.back() + 0.1 + step(rng));
            v.push_back(v.back() + (step(rng) < 0.5 ? 0.0 : step(rng)));
        }
        const ScaleFunction f(k, v, 0.5);
        const ScaleFunction m = concave_majorant(f);
        CHECK(check_concave(m).concave);
        std::size_t touching = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            double best = v[i];
            for (std::size_t a = 0; a <= i; ++a)
                for (std::size_t b = i; b < k.size(); ++b) {
                    if (a == b) continue;
                    const double t = (k[i] - k[a]) / (k[b] - k[a]);
                    best = std::max(best, v[a] + t * (v[b] - v[a]));
                }
            CHECK(m(k[i]) == doctest::Approx(best).epsilon(1e-9));
            CHECK(m(k[i]) >= v[i] - 1e-12);
            if (std::abs(m(k[i]) - v[i]) <= 1e-12) ++touching;
        }
        CHECK(touching >= 2);
        CHECK(concave_majorant(m) == m);
    }
}

TEST_CASE("strict_envelope band and monotonicity") {
    const std::vector<ScaleFunction> fixtures{
        sqrt_scale(),
        support::log1p_scale(1e4),
        ScaleFunction({0.0, 1.0, 3.0, 4.0, 8.0}, {0.0, 2.0, 2.0, 3.0, 3.0}, 0.5),  // plateaus
        staircase(6),
        square_scale(),
    };
    for (const auto& h : fixtures) {
        for (double eta : {0.5, 0.1}) {
            const ScaleFunction he = strict_envelope(h, eta);
            CHECK(he.is_strictly_increasing());
            for (double x : probes(h, 1000)) {
                CHECK(he(x) >= h(x) - 1e-9);
                CHECK(he(x) <= h(x) + eta + 1e-9);
            }
            const auto v = he.values();
            for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
        }
    }
}

TEST_CASE("strict_envelope anchors on the staircase") {
    const ScaleFunction h = staircase(5);
    const double eta = 0.5;
    const ScaleFunction he = strict_envelope(h, eta);
    for (int k = 1; k <= 10; ++k) {
        const double y_k = *h.first_reach(k * eta);
        CHECK(he(y_k) == doctest::Approx(k * eta).epsilon(1e-12));
    }
}

TEST_CASE("strict_envelope needs an unbounded function") {
    const ScaleFunction bounded({0.0, 1.0}, {0.0, 1.0}, 0.0);
    try {
        strict_envelope(bounded, 0.5);
        FAIL("expected not-a-scale-function");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::not_a_scale_function);
    }
}

TEST_CASE("little_o_of_hazard") {
    const ScaleFunction g = little_o_of_hazard(ScaleFunction::identity(), 10);
    for (int n = 1; n <= 10; ++n) CHECK(g(n) == doctest::Approx(std::sqrt(n - 1.0)));
    CHECK(g(4.0) / 4.0 == doctest::Approx(std::sqrt(3.0) / 4.0));
    CHECK(g.front() == 0.0);

    const ScaleFunction g2 = little_o_of_hazard(ScaleFunction::linear(2.0), 6);
    for (int n = 1; n <= 6; ++n) CHECK(g2(n / 2.0) == doctest::Approx(std::sqrt(n - 1.0)));

    for (const ScaleFunction& r : {support::log1p_scale(), sqrt_scale(), staircase(60)}) {
        const ScaleFunction go = little_o_of_hazard(r, 50);
        for (int n = 2; n <= 50; ++n) {
            const double xn = *r.first_reach(n);
            CHECK(go(xn) / r(xn) <= 1.0 / std::sqrt(n - 1.0) + 1e-12);
        }
    }

    const ScaleFunction bounded({0.0, 1.0}, {0.0, 3.0}, 0.0);
    CHECK_THROWS_AS(little_o_of_hazard(bounded, 10), RangeExhaustedError);
}

TEST_CASE("natural_scale_fit on a Weibull hazard") {
    const ScaleFunction r = support::power_scale(1.5, 0.5);
    const NaturalScaleFit fit = natural_scale_fit(r);
    CHECK(fit.beta == doctest::Approx(1.0).epsilon(1e-9));
    for (double k : r.knots())
        if (k > 1.0) CHECK(fit.h(k) == doctest::Approx(r(k)).epsilon(1e-6));
}

TEST_CASE("natural_scale_fit on a lognormal-type hazard") {
    const TailModel m(LogNormalType{2.0, 1.0, 1.0, 4.0});
    const ScaleFunction r = hazard_table(m, m.cutoff(), 1e12);
    const NaturalScaleFit fit = natural_scale_fit(r);
    const LiminfEstimate est = h_order(HazardSource(m), fit.h, analytic_grid(m, 1e12));
    CHECK(est.value >= 0.95);
    CHECK(est.value <= 1.05);
}

TEST_CASE("natural_scale_fit on the oscillating hazard") {
    const ScaleFunction h2 = support::log1p_scale(1e3);
    const TailModel m = build_oscillating(ScaleFunction::identity(), h2, 12);
    const auto& atoms = std::get<OscillatingDiscrete>(m.params()).atoms;
    // Hazard as a continuous table: h2 just below each atom, h1 at it.
    std::vector<double> k{0.0}, v{m.hazard(0.0)};
    for (std::size_t i = 1; i + 1 < atoms.size(); ++i) {
        const double x = atoms[i].location;
        k.push_back(x * (1.0 - 1e-9));
        v.push_back(m.hazard(std::nextafter(x, 0.0)));
        k.push_back(x);
        v.push_back(m.hazard(x));
    }
    const ScaleFunction r(k, v);
    const NaturalScaleFit fit = natural_scale_fit(r);
    CHECK(check_concave(fit.h).concave);
    CHECK(fit.h.front() == 0.0);
    CHECK(r(fit.argmin_knot) / fit.h(fit.argmin_knot) == doctest::Approx(1.0).epsilon(1e-12));
    // The binding knot is a lower corner, where R equals h2.
    CHECK(r(fit.argmin_knot) == doctest::Approx(h2(fit.argmin_knot)).epsilon(1e-6));
}

TEST_CASE("natural_scale_fit properties on catalogue hazards") {
    const std::vector<TailModel> models{TailModel(Weibull{1.0, 0.5}),
                                        TailModel(LogNormalType{2.0, 1.0, 1.0, 4.0}),
                                        TailModel(Pareto{2.0, 1.0}), TailModel(Exponential{1.0})};
    for (const auto& m : models) {
        const ScaleFunction r = hazard_table(m, 1e-3, 1e12);
        const NaturalScaleFit fit = natural_scale_fit(r);
        CHECK(check_concave(fit.h).concave);
        CHECK(fit.h.front() == 0.0);
        CHECK(fit.beta >= 1.0 - 1e-9);
        CHECK(r(fit.argmin_knot) / fit.h(fit.argmin_knot) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(check_subadditive_sum(fit.h).holds);
        for (double y = 0.1; y < 0.95; y += 0.1)
            for (double x : r.knots())
                if (x > 0.0) CHECK(fit.h(y * x) >= y * fit.h(x) - 1e-9 * fit.h(x));
    }
}

TEST_CASE("natural_scale_fit rejects a flat hazard") {
    const ScaleFunction flat({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}, 0.0);
    try {
        natural_scale_fit(flat);
        FAIL("expected degenerate hazard");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::degenerate_hazard);
    }
}

TEST_CASE("compose_with_inverse_diagonal") {
    const ScaleFunction sq = ScaleFunction::tabulate([](double x) { return x * x; },
                                                     geometric_knots(1e-4, 1e4, 1.01));
    const ScaleFunction root = compose_with_inverse_diagonal(ScaleFunction::identity(), sq);
    for (double y : {0.5, 2.0, 9.0, 100.0, 1e6}) CHECK(root(y) == doctest::Approx(std::sqrt(y)).epsilon(1e-3));

    const ScaleFunction w = support::power_scale(2.0, 0.5, 1e4);
    const ScaleFunction half = compose_with_inverse_diagonal(w, sq);
    for (double y : {4.0, 100.0, 1e4, 1e7}) CHECK(half(y) == doctest::Approx(2.0 * std::pow(y, 0.25)).epsilon(1e-3));

    const ScaleFunction same = compose_with_inverse_diagonal(w, ScaleFunction::identity());
    for (double x : w.knots()) CHECK(same(x) == doctest::Approx(w(x)).epsilon(1e-12));

    const ScaleFunction flat({0.0, 1.0, 2.0}, {0.0, 1.0, 1.0}, 1.0);
    CHECK_THROWS_AS(compose_with_inverse_diagonal(w, flat), Error);
}
