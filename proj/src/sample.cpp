#include "natscale/sample.hpp"

#include <algorithm>
#include <cmath>

#include "natscale/error.hpp"

namespace natscale {

SampleSet::SampleSet(std::vector<double> values, std::string provenance, std::size_t clamped)
    : values_(std::move(values)), provenance_(std::move(provenance)), clamped_(clamped) {
    require(!values_.empty(), ErrorKind::input, "sample set is empty");
    for (double v : values_)
        require(std::isfinite(v), ErrorKind::input, "sample contains a non-finite value");
    if (!std::is_sorted(values_.begin(), values_.end())) std::sort(values_.begin(), values_.end());
}

std::size_t SampleSet::exceedances(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<std::size_t>(values_.end() - it);
}

double SampleSet::quantile(double p) const {
    require(p >= 0.0 && p <= 1.0, ErrorKind::parameter_domain, "quantile level outside [0,1]");
    const auto n = values_.size();
    auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    idx = idx == 0 ? 0 : idx - 1;
    return values_[std::min(idx, n - 1)];
}

}  // namespace natscale
