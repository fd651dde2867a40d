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

#include <span>
#include <vector>

#include "fpcool/qstate.hpp"

namespace fpcool {

/// Single-shot energy measurement on a thermal qubit together with the
/// minimum-variance unbiased temperature estimator built at temperature T.
struct EstimatorModel {
    double T = 0.0;
    double E = 0.0;
    std::vector<double> outcomes;    // {-E/2, +E/2}
    std::vector<double> probs;       // {r, 1 - r}
    std::vector<double> est_values;  // estimator value for each outcome
    double qfi = 0.0;
    double mean_energy = 0.0;
};

/// Raw moments m_1 ... m_M.
struct MomentVector {
    std::vector<double> values;

    int order() const { return static_cast<int>(values.size()); }
    double mean() const { return values.at(0); }
    double variance() const { return values.at(1) - values.at(0) * values.at(0); }
};

/// Symmetric logarithmic derivative from d rho/dT, built in the eigenbasis
/// of rho. Entries with lambda_i + lambda_j below `support_tol` are zero.
ComplexMatrix sld_operator(const ComplexMatrix& rho, const ComplexMatrix& drho_dT,
                           double support_tol = 1e-14);

/// Tr(rho L^2).
double quantum_fisher_information(const ComplexMatrix& rho, const ComplexMatrix& sld);

/// dr/dT of the Gibbs ground population.
double ground_population_derivative(double E, double T);

/// Closed-form QFI of a thermal qubit: E^2 r (1 - r) / T^4.
double qfi_thermal(double E, double T);

/// Classical Fisher information sum_k (dp_k)^2 / p_k.
double cfi(std::span<const double> probs, std::span<const double> dprobs_dT);

/// Cramér–Rao bound 1 / (N F).
double crb(double fisher, int repetitions = 1);

EstimatorModel mvu_estimator(double E, double T);

/// Raw moments of the estimator. With repetitions > 1 the moments are those of
/// the N-shot sample mean (exact binomial enumeration).
MomentVector moments(const EstimatorModel& model, int order, int repetitions = 1);

}  // namespace fpcool
