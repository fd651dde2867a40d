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

#include "fpcool/compare.hpp"

#include "fpcool/error.hpp"

namespace fpcool {

const char* to_string(Comparison c)
{
    switch (c) {
    case Comparison::Decreased:
        return "decreased";
    case Comparison::Increased:
        return "increased";
    case Comparison::Indeterminate:
        break;
    }
    return "indeterminate";
}

Comparison compare_patches(const Patch& initial, const Patch& final_patch)
{
    if (initial.lo > initial.hi || final_patch.lo > final_patch.hi) {
        throw InvalidArgument("compare_patches: patch with lo > hi");
    }
    if (initial.lo > final_patch.hi) {
        return Comparison::Decreased;
    }
    if (initial.hi < final_patch.lo) {
        return Comparison::Increased;
    }
    return Comparison::Indeterminate;
}

Patch percentile_patch(const PercentileTable& table, int i)
{
    if (i < 1 || i > 49) {
        throw InvalidArgument("percentile_patch: i must be in 1..49, got " + std::to_string(i));
    }
    return {table.at(i), table.at(100 - i), "P" + std::to_string(i) + "-P" + std::to_string(100 - i)};
}

CoolingReport cooling_report(const PercentileTable& initial, const PercentileTable& final_table)
{
    CoolingReport r;
    r.initial_percentiles = initial;
    r.final_percentiles = final_table;
    r.magnitudes.reserve(49);
    for (int i = 1; i <= 49; ++i) {
        const double delta = initial.at(i) - final_table.at(100 - i);
        r.magnitudes.push_back(delta);
        if (delta > 0.0 && !r.first_cooling_percentile) {
            r.first_cooling_percentile = i;
        }
    }
    r.cooled = r.first_cooling_percentile.has_value();
    r.magnitudes_monotone = r.cooled;
    if (r.cooled) {
        for (int i = *r.first_cooling_percentile; i < 49; ++i) {
            if (r.magnitude(i + 1) <= r.magnitude(i)) {
                r.magnitudes_monotone = false;
                break;
            }
        }
    }
    return r;
}

}  // namespace fpcool
