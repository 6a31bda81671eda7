#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace natscale {

// Sorted finite sample.
class SampleSet {
public:
    SampleSet(std::vector<double> values, std::string provenance,
              std::size_t clamped = 0);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    const std::string& provenance() const { return provenance_; }
    // Realizations that overflowed and were clamped to the largest double.
    std::size_t clamped() const { return clamped_; }

    double operator[](std::size_t i) const { return values_[i]; }

    // #{i : value_i > x}.
    std::size_t exceedances(double x) const;
    // Lower empirical quantile, p in [0, 1].
    double quantile(double p) const;

private:
    std::vector<double> values_;
    std::string provenance_;
    std::size_t clamped_;
};

}  // namespace natscale
