// Copyright 2026 The fpcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpcool/maxent.hpp"

namespace fpcool {

/// Interval [lo, hi] standing for a finitely precise estimate.
struct Patch {
    double lo = 0.0;
    double hi = 0.0;
    std::string label;
};

enum class Comparison { Decreased, Increased, Indeterminate };

const char* to_string(Comparison c);

/// Decreased iff every initial value exceeds every final value, and
/// Increased for the mirror case.
Comparison compare_patches(const Patch& initial, const Patch& final_patch);

/// [Q_i, Q_{100-i}] for i in 1..49.
Patch percentile_patch(const PercentileTable& table, int i);

struct CoolingReport {
    PercentileTable initial_percentiles;
    PercentileTable final_percentiles;
    std::vector<double> magnitudes;  // index i-1 holds Delta T_i, i = 1..49
    std::optional<int> first_cooling_percentile;
    bool cooled = false;
    bool magnitudes_monotone = false;  // strictly increasing over the cooling range

    double magnitude(int i) const { return magnitudes.at(static_cast<std::size_t>(i - 1)); }
};

/// Delta T_i = Q_i(initial) - Q_{100-i}(final); cooling is first detected at
/// the smallest i with Delta T_i > 0.
CoolingReport cooling_report(const PercentileTable& initial, const PercentileTable& final_table);

}  // namespace fpcool
