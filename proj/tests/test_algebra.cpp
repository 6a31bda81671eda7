#include <doctest.h>

#include <cmath>

#include "natscale/algebra.hpp"
#include "natscale/error.hpp"
#include "support.hpp"

using namespace natscale;

namespace {

const TailModel weibull(Weibull{1.0, 0.5});
const TailModel pareto2(Pareto{2.0, 1.0});
const TailModel pareto3(Pareto{3.0, 1.0});
const TailModel expo(Exponential{1.0});

ScaleFunction log_squared() {
    // Concave majorant of (log(1+x))^2, which is convex near 0.
    return concave_majorant(ScaleFunction::tabulate(
        [](double x) { return std::pow(std::log1p(x), 2.0); }, geometric_knots(1e-6, 1e100, 1.01)));
}

}  // namespace

TEST_CASE("scale_of_sum: heavier summand dominates") {
    const ScaleFunction hx = support::power_scale(1.0, 0.8);
    const ScaleFunction hy = log_squared();
    const RuleResult r = scale_of_sum(hx, hy);
    CHECK(r.rule == RuleTag::sum_heavier_dominates);
    REQUIRE(r.scale);
    CHECK(*r.scale == hy);
    CHECK(r.c_lo == 0.5);
    CHECK(r.c_hi == 1.0);
}

TEST_CASE("scale_of_sum: shared concave scale") {
    const ScaleFunction h = support::power_scale(1.0, 0.5);
    const RuleResult r = scale_of_sum(h, h);
    CHECK(r.rule == RuleTag::sum_min_rule);
    REQUIRE(r.scale);
    CHECK(*r.scale == h);
    CHECK(*r.order == 1.0);
}

TEST_CASE("scale_of_sum: non-subadditive scale is refused") {
    const ScaleFunction sq = ScaleFunction::tabulate([](double x) { return x * x; },
                                                     geometric_knots(1e-3, 1e6, 1.05));
    const RuleResult r = scale_of_sum(sq, sq);
    CHECK(r.rule == RuleTag::hypothesis_failed);
    CHECK_FALSE(r.scale);
    CHECK(r.witness.has_value());
}

TEST_CASE("scale_of_sum is symmetric") {
    const std::vector<ScaleFunction> hs{support::power_scale(1.0, 0.8), log_squared(),
                                        support::power_scale(2.0, 0.5), support::log1p_scale(),
                                        support::power_scale(1.0, 0.5)};
    for (const auto& a : hs)
        for (const auto& b : hs) CHECK(scale_of_sum(a, b) == scale_of_sum(b, a));
}

TEST_CASE("scale_of_product gates") {
    const ScaleFunction lg = support::log1p_scale();
    const RuleResult ok = scale_of_product(lg.scaled(2.0), lg.scaled(3.0), lg);
    CHECK(ok.rule == RuleTag::product_min_rule);
    CHECK(*ok.order == doctest::Approx(2.0).epsilon(1e-9));

    const ScaleFunction w = support::power_scale(1.0, 0.5);
    const RuleResult weib = scale_of_product(w, w, w);
    CHECK(weib.rule == RuleTag::hypothesis_failed);
    CHECK(weib.witness.has_value());

    const RuleResult id = scale_of_product(ScaleFunction::identity(), ScaleFunction::identity(),
                                           ScaleFunction::identity());
    CHECK(id.rule == RuleTag::hypothesis_failed);
    REQUIRE(id.witness);
    CHECK(id.witness->first * id.witness->second > id.witness->first + id.witness->second);
}

TEST_CASE("scale_of_max") {
    const ScaleFunction lg = ScaleFunction::tabulate(
        [](double x) { return x <= 1.0 ? 0.0 : std::log(x); }, geometric_knots(1e-6, 1e100, 1.01));
    const EvalGrid g(10.0, 1e100, 1.05);

    const MaxRuleReport p = scale_of_max({HazardSource(pareto2), HazardSource(pareto3)}, lg, g);
    CHECK(std::abs(p.direct.value - 2.0) <= 0.05);
    CHECK(std::abs(p.min_individual - 2.0) <= 0.05);
    CHECK(p.agree);

    const MaxRuleReport same = scale_of_max({HazardSource(weibull), HazardSource(weibull)},
                                            support::power_scale(1.0, 0.5), g);
    CHECK(same.min_individual == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(same.agree);

    const MaxRuleReport we = scale_of_max({HazardSource(weibull), HazardSource(expo)},
                                          support::power_scale(1.0, 0.5), g);
    CHECK(we.direct.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(we.agree);
}

TEST_CASE("transform_scale") {
    const ScaleFunction w = support::power_scale(1.0, 0.5, 1e50);
    const RuleResult prod = transform_scale(TransformSpec::product(2), w);
    REQUIRE(prod.scale);
    CHECK(prod.c_lo == 1.0);
    CHECK(prod.c_hi == 2.0);
    for (double x : {10.0, 1e4, 1e10, 1e30})
        CHECK((*prod.scale)(x) == doctest::Approx(std::pow(x, 0.25)).epsilon(1e-3));

    const RuleResult cd = transform_scale(TransformSpec::power_product({1.0 / 3, 1.0 / 3, 1.0 / 3}), w);
    REQUIRE(cd.scale);
    CHECK(cd.c_hi == 3.0);
    for (double x : w.knots()) CHECK((*cd.scale)(x) == doctest::Approx(w(x)).epsilon(1e-12));

    const RuleResult sum = transform_scale(TransformSpec::sum(3), w);
    REQUIRE(sum.scale);
    for (double x : {3.0, 300.0, 3e8}) CHECK((*sum.scale)(x) == doctest::Approx(std::sqrt(x / 3.0)).epsilon(1e-3));
}

TEST_CASE("transform spec validation") {
    CHECK_THROWS_AS(TransformSpec::sum(1), Error);
    CHECK_THROWS_AS(TransformSpec::power_product({0.5, 0.6}), Error);
    CHECK_THROWS_AS(TransformSpec::power_product({-0.5, 1.5}), Error);
    const TransformSpec p = TransformSpec::power_product({1.0, 0.0, 0.0});
    const double xs[] = {3.7, 100.0, 0.2};
    CHECK(p.apply(xs) == 3.7);
    CHECK(TransformSpec::product(3).diagonal_inverse(8.0) == doctest::Approx(2.0));
}

TEST_CASE("verify_transform_bound") {
    const RandomSource src(5);
    const BoundReport s3 = verify_transform_bound(TransformSpec::sum(3), weibull, 0.2, 200000,
                                                  std::nullopt, src);
    CHECK(s3.consistent);
    CHECK(s3.x_eps.has_value());
    std::size_t in_window = 0;
    for (const auto& p : s3.points) in_window += p.in_window;
    CHECK(in_window >= 5);

    const BoundReport prod = verify_transform_bound(TransformSpec::product(2), weibull, 0.5,
                                                    200000, std::nullopt, src);
    CHECK(prod.consistent);
    for (const auto& p : prod.points)
        if (p.in_window) CHECK(p.margin > 0.0);
}

TEST_CASE("verify_transform_bound flags an impossible bound") {
    // A sum of three exponentials has tail ~ x^2 e^{-x}/2; with eps tiny and
    // the single-variable form the bound e^{-(1-eps) x} fails.
    const BoundReport r = verify_transform_bound(TransformSpec::sum(3), expo, 1e-6, 200000,
                                                 std::nullopt, RandomSource(6),
                                                 BoundForm::single_variable);
    CHECK_FALSE(r.consistent);
    REQUIRE(r.violation);
    CHECK(r.violation->second < 0.0);
}

TEST_CASE("discounted_scale") {
    const ScaleFunction w = support::power_scale(2.0, 0.5, 1e30);
    const ScaleFunction d = discounted_scale(w, 3);
    for (double x : {4.0, 1e4, 1e12, 1e40}) CHECK(d(x) == doctest::Approx(2.0 * std::pow(x, 0.25)).epsilon(1e-3));

    const ScaleFunction lg = support::log1p_scale(1e30);
    const ScaleFunction d4 = discounted_scale(lg, 4);
    for (double k : d4.knots()) CHECK(d4(k) == doctest::Approx(lg(std::cbrt(k))).epsilon(1e-9));

    CHECK_THROWS_AS(discounted_scale(w, 2), Error);
}
