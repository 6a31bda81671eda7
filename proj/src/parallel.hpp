#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <vector>

#include "natscale/random.hpp"

namespace natscale::detail {

inline constexpr std::size_t kWorkers = 8;

// Fills out[0..n) in kWorkers contiguous chunks; chunk w draws from
// src.worker(w). The chunking does not depend on the machine, so results are
// reproducible everywhere.
template <class Fill>
void parallel_fill(std::vector<double>& out, std::size_t n, const RandomSource& src, Fill fill) {
    out.resize(n);
    const std::size_t chunk = (n + kWorkers - 1) / kWorkers;
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < kWorkers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        if (begin == end) continue;
        jobs.push_back(std::async(std::launch::async, [&, w, begin, end] {
            RandomSource rng = src.worker(w);
            for (std::size_t i = begin; i < end; ++i) out[i] = fill(rng);
        }));
    }
    for (auto& j : jobs) j.get();
}

}  // namespace natscale::detail
