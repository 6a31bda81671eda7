#include <doctest.h>

#include <cmath>
#include <memory>

#include "natscale/empirical.hpp"
#include "natscale/error.hpp"
#include "natscale/tail_model.hpp"

using namespace natscale;

TEST_CASE("empirical_tail counts exceedances") {
    const SampleSet s({3.0, 1.0, 2.0}, "fixture");
    CHECK(empirical_tail(s, 2.0) == doctest::Approx(1.0 / 3.0));
    CHECK(empirical_tail(s, 0.0) == 1.0);
    CHECK(empirical_tail(s, 3.0) == 0.0);
}

TEST_CASE("sample set validation") {
    CHECK_THROWS_AS(SampleSet({}, "empty"), Error);
    CHECK_THROWS_AS(SampleSet({1.0, NAN}, "nan"), Error);
    const SampleSet s({3.0, 1.0, 2.0}, "fixture");
    CHECK(s[0] == 1.0);
    CHECK(s.quantile(0.5) == 2.0);
}

TEST_CASE("empirical tail of Weibull draws at its 0.99 quantile") {
    const TailModel m(Weibull{1.0, 0.5});
    RandomSource src(11);
    const SampleSet s = sample_n(m, 100000, src);
    const double p = empirical_tail(s, m.quantile(0.99));
    CHECK(std::abs(p - 0.01) <= 3.0 * std::sqrt(0.01 * 0.99 / 1e5));
}

TEST_CASE("empirical hazard of exponential draws tracks the identity") {
    RandomSource src(3);
    auto s = std::make_shared<const SampleSet>(sample_n(TailModel(Exponential{1.0}), 1000000, src));
    const EmpiricalHazard eh = empirical_hazard(s, EvalGrid(1.0, 10.0, 1.05));
    const auto pts = eh.grid().points();
    const auto vals = eh.hazard_values();
    std::size_t available = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] > eh.effective_max()) {
            CHECK_FALSE(vals[i].has_value());
            continue;
        }
        REQUIRE(vals[i].has_value());
        CHECK(std::abs(*vals[i] - pts[i]) <= 0.15);
        ++available;
    }
    CHECK(available >= 40);
}

TEST_CASE("all-equal sample has no tail data above its value") {
    auto s = std::make_shared<const SampleSet>(std::vector<double>(100, 1.0), "const");
    CHECK_THROWS_WITH_AS(empirical_hazard(s, EvalGrid(1.5, 10.0, 1.05)),
                         doctest::Contains("exceedances"), Error);
    try {
        empirical_hazard(s, EvalGrid(1.5, 10.0, 1.05));
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::insufficient_tail_data);
    }
}

TEST_CASE("empirical hazard is non-decreasing") {
    RandomSource src(8);
    auto s = std::make_shared<const SampleSet>(sample_n(TailModel(Pareto{1.5, 1.0}), 20000, src));
    const EmpiricalHazard eh = empirical_hazard(s, default_grid(*s));
    double prev = 0.0;
    for (const auto& v : eh.hazard_values()) {
        if (!v) break;
        CHECK(*v >= prev);
        prev = *v;
    }
}

TEST_CASE("plug-in hazard within the delta-method band") {
    std::uint64_t seed = 40;
    for (const TailModel& m : {TailModel(Weibull{1.0, 0.5}), TailModel(Pareto{2.0, 1.0}),
                               TailModel(Exponential{1.0})}) {
        RandomSource src(seed++);
        auto s = std::make_shared<const SampleSet>(sample_n(m, 1000000, src));
        const EmpiricalHazard eh = empirical_hazard(s, default_grid(*s));
        const auto pts = eh.grid().points();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto v = eh.hazard_values()[i];
            if (!v) continue;
            const double r = m.hazard(pts[i]);
            const double t = std::exp(-r);
            CHECK(std::abs(*v - r) <= 3.0 * std::exp(r) * std::sqrt(t * (1.0 - t) / 1e6));
        }
    }
}

TEST_CASE("default grid policy") {
    RandomSource src(9);
    const SampleSet s = sample_n(TailModel(Exponential{1.0}), 100000, src);
    const EvalGrid g = default_grid(s);
    CHECK(g.x_min() == doctest::Approx(s.quantile(0.9)));
    CHECK(g.size() >= EvalGrid::kMinPoints);
    CHECK(s.exceedances(g.points().back()) >= kDefaultKMin);
    CHECK(g.ratio() == doctest::Approx(1.05));
}

TEST_CASE("grid window") {
    const EvalGrid g(1.0, 1e8, 10.0);
    REQUIRE(g.size() == 9);
    CHECK(g.window_begin(0.5) == 4);
    CHECK(g.window_begin(1.0) == 0);
    CHECK_THROWS_AS(EvalGrid(1.0, 10.0, 2.0), Error);
}
