#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "natscale/sample.hpp"
#include "natscale/scale_function.hpp"
#include "natscale/tail_model.hpp"

namespace support {

inline natscale::ScaleFunction power_scale(double lambda, double alpha, double x_max = 1e100) {
    return natscale::ScaleFunction::tabulate(
        [=](double x) { return lambda * std::pow(x, alpha); },
        natscale::geometric_knots(1e-6, x_max, 1.01));
}

inline natscale::ScaleFunction log1p_scale(double x_max = 1e100, double ratio = 1.01) {
    return natscale::ScaleFunction::tabulate([](double x) { return std::log1p(x); },
                                             natscale::geometric_knots(1e-6, x_max, ratio));
}

// lambda (log x)^gamma above 1, zero below.
inline natscale::ScaleFunction log_power_scale(double lambda, double gamma,
                                               double x_max = 1e100) {
    return natscale::ScaleFunction::tabulate(
        [=](double x) { return x <= 1.0 ? 0.0 : lambda * std::pow(std::log(x), gamma); },
        natscale::geometric_knots(1e-6, x_max, 1.01));
}

// sup_x |F_n(x) - F(x)| for a continuous model.
inline double ks_distance(const natscale::SampleSet& s, const natscale::TailModel& m) {
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = 1.0 - m.tail(s[i]);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f),
                      std::abs(f - static_cast<double>(i) / n)});
    }
    return d;
}

// Two-sample KS statistic.
inline double ks_two_sample(const natscale::SampleSet& a, const natscale::SampleSet& b) {
    const auto va = a.values(), vb = b.values();
    const double na = static_cast<double>(va.size()), nb = static_cast<double>(vb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < va.size() && j < vb.size()) {
        const double x = std::min(va[i], vb[j]);
        while (i < va.size() && va[i] <= x) ++i;
        while (j < vb.size() && vb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

}  // namespace support
