// Copyright 2026 The qcoop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCOOP_STATS_HPP_
#define QCOOP_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace qcoop {

struct BatchStatistics {
    std::size_t n_runs = 0;
    double mean = 0.0;
    double std_dev = 0.0;  ///< sample, n - 1 denominator; 0 for a single run
    double min = 0.0;
    double max = 0.0;
};

/// Two-pass mean / sample standard deviation, summed in input order.
inline BatchStatistics summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: no values");
    BatchStatistics s;
    s.n_runs = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    // Rounding can put a constant sample's mean one ulp outside [min, max].
    s.mean = std::clamp(sum / double(values.size()), s.min, s.max);
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(ss / double(values.size() - 1));
    }
    return s;
}

/// Standard error of the mean.
inline double standard_error(const BatchStatistics& s) {
    return s.n_runs > 0 ? s.std_dev / std::sqrt(double(s.n_runs)) : 0.0;
}

}  // namespace qcoop

#endif  // QCOOP_STATS_HPP_
