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

#include <array>
#include <string>
#include <vector>

#include "fpcool/error.hpp"
#include "fpcool/thermometry.hpp"

namespace fpcool {

/// Uniformly spaced support for the discretized maximum-entropy problem.
struct SupportGrid {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> points;

    static SupportGrid uniform(double lo, double hi, int n_points);

    int size() const { return static_cast<int>(points.size()); }
    double spacing() const { return (hi - lo) / (size() - 1); }
};

struct MaxEntOptions {
    int max_iterations = 200;
    double residual_tol = 1e-10;
};

/// Maximum-entropy weights on a grid matching the first M raw moments.
///
/// The weights have the exponential-family form
///   w_k = exp(-log_partition - sum_n multipliers[n-1] * z_k^n),
/// with z = (x - center) / scale the standardized grid coordinate.
struct MaxEntFit {
    SupportGrid grid;
    std::vector<double> weights;
    std::vector<double> multipliers;
    double log_partition = 0.0;
    double center = 0.0;
    double scale = 1.0;
    double entropy = 0.0;  // Shannon entropy in bits
    std::vector<double> moment_residuals;
    int iterations = 0;

    /// Cell-centred discrete CDF: C_k = sum_{j<k} w_j + w_k / 2.
    std::vector<double> cdf() const;
};

/// Q_1 ... Q_99; index with at(i) for the i-th percentile.
struct PercentileTable {
    std::array<double, 99> values{};

    double at(int i) const { return values.at(static_cast<std::size_t>(i - 1)); }
    double& at(int i) { return values.at(static_cast<std::size_t>(i - 1)); }
};

/// Newton iteration failed to match the moments; carries the last residuals.
class MaxEntError : public NumericalError {
public:
    MaxEntError(const std::string& what, std::vector<double> residuals)
        : NumericalError(what), residuals_(std::move(residuals))
    {
    }
    const std::vector<double>& residuals() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// mean ± k sigma with `n_points` uniform points.
SupportGrid default_support(const MomentVector& moments, double k_sigma = 6.0, int n_points = 4001);

MaxEntFit maxent_fit(const MomentVector& moments, const SupportGrid& grid,
                     const MaxEntOptions& options = {});

PercentileTable percentiles(const MaxEntFit& fit);

struct PercentileOptions {
    double k_sigma = 6.0;
    int n_points = 4001;
    double tol = 0.01;
    int M_start = 2;
    int M_max = 8;
    int repetitions = 1;
};

struct ConvergedPercentiles {
    PercentileTable table;
    int M_used = 0;
    std::vector<double> max_differences;  // between consecutive orders
};

/// Raised when successive tables never agree within tolerance. The highest
/// order that could be fitted is kept so callers can still report it.
class PercentileConvergenceError : public NumericalError {
public:
    PercentileConvergenceError(const std::string& what, std::vector<double> differences,
                               PercentileTable last_table, int last_order)
        : NumericalError(what),
          differences_(std::move(differences)),
          last_table_(last_table),
          last_order_(last_order)
    {
    }
    const std::vector<double>& differences() const { return differences_; }
    const PercentileTable& last_table() const { return last_table_; }
    int last_order() const { return last_order_; }

private:
    std::vector<double> differences_;
    PercentileTable last_table_;
    int last_order_;
};

double max_abs_difference(const PercentileTable& a, const PercentileTable& b);

/// Percentile table of the estimator's MaxEnt distribution from M moments.
PercentileTable estimator_percentiles(const EstimatorModel& model, int order,
                                      const PercentileOptions& options = {});

ConvergedPercentiles converged_percentiles(const EstimatorModel& model,
                                           const PercentileOptions& options = {});

}  // namespace fpcool
