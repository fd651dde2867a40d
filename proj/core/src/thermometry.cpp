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

#include "fpcool/thermometry.hpp"

#include <cmath>
#include <string>

#include "fpcool/dynamics.hpp"
#include "fpcool/error.hpp"

namespace fpcool {

namespace {

// 1 - r evaluated without cancellation; r rounds to 1 once E/T exceeds ~37.
double excited_population(double E, double T)
{
    if (!(E > 0.0) || !(T > 0.0)) {
        throw InvalidArgument("excited population requires E > 0 and T > 0");
    }
    return 1.0 / (1.0 + std::exp(E / T));
}

}  // namespace

ComplexMatrix sld_operator(const ComplexMatrix& rho, const ComplexMatrix& drho_dT, double support_tol)
{
    if (rho.rows() != drho_dT.rows() || rho.cols() != drho_dT.cols()) {
        throw InvalidArgument("sld_operator: rho and drho/dT differ in shape");
    }
    if ((drho_dT - drho_dT.adjoint()).norm() > 1e-10) {
        throw InvalidArgument("sld_operator: derivative is not Hermitian");
    }
    if (std::abs(drho_dT.trace()) > 1e-10) {
        throw InvalidArgument("sld_operator: derivative is not traceless (trace " +
                              std::to_string(std::abs(drho_dT.trace())) + ")");
    }
    const HermitianEigen eig = eig_hermitian(rho);
    const ComplexMatrix& v = eig.vectors;
    const ComplexMatrix d = v.adjoint() * drho_dT * v;
    const Eigen::Index n = rho.rows();
    ComplexMatrix sld_eig = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double denom = eig.values(i) + eig.values(j);
            if (std::abs(denom) > support_tol) {
                sld_eig(i, j) = 2.0 * d(i, j) / denom;
            }
        }
    }
    return v * sld_eig * v.adjoint();
}

double quantum_fisher_information(const ComplexMatrix& rho, const ComplexMatrix& sld)
{
    return (rho * sld * sld).trace().real();
}

double ground_population_derivative(double E, double T)
{
    const double r = ground_population(E, T);
    return -r * excited_population(E, T) * E / (T * T);
}

double qfi_thermal(double E, double T)
{
    const double r = ground_population(E, T);
    const double t2 = T * T;
    return E * E * r * excited_population(E, T) / (t2 * t2);
}

double cfi(std::span<const double> probs, std::span<const double> dprobs_dT)
{
    if (probs.size() != dprobs_dT.size()) {
        throw InvalidArgument("cfi: probability and derivative lists differ in length");
    }
    double psum = 0.0;
    double dsum = 0.0;
    double f = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        psum += probs[k];
        dsum += dprobs_dT[k];
        if (probs[k] < 0.0) {
            throw InvalidArgument("cfi: negative probability");
        }
        if (probs[k] == 0.0) {
            if (dprobs_dT[k] != 0.0) {
                throw InvalidArgument("cfi: zero-probability outcome with nonzero derivative");
            }
            continue;
        }
        f += dprobs_dT[k] * dprobs_dT[k] / probs[k];
    }
    if (std::abs(psum - 1.0) > 1e-12) {
        throw InvalidArgument("cfi: probabilities do not sum to 1");
    }
    if (std::abs(dsum) > 1e-12) {
        throw InvalidArgument("cfi: probability derivatives do not sum to 0");
    }
    return f;
}

double crb(double fisher, int repetitions)
{
    if (!(fisher > 0.0)) {
        throw InvalidArgument("crb: Fisher information must be positive");
    }
    if (repetitions < 1) {
        throw InvalidArgument("crb: repetitions must be positive");
    }
    return 1.0 / (static_cast<double>(repetitions) * fisher);
}

EstimatorModel mvu_estimator(double E, double T)
{
    EstimatorModel m;
    m.T = T;
    m.E = E;
    const double r = ground_population(E, T);
    const double p = excited_population(E, T);
    m.outcomes = {-0.5 * E, 0.5 * E};
    m.probs = {r, p};
    m.qfi = qfi_thermal(E, T);
    m.mean_energy = 0.5 * E * (p - r);
    // outcome minus mean energy is -E p and +E r; written out to avoid
    // cancellation when p is tiny
    const double scale = 1.0 / (m.qfi * T * T);
    m.est_values = {T - E * p * scale, T + E * r * scale};
    return m;
}

MomentVector moments(const EstimatorModel& model, int order, int repetitions)
{
    if (order < 2) {
        throw InvalidArgument("moments: order must be at least 2");
    }
    if (repetitions < 1) {
        throw InvalidArgument("moments: repetitions must be positive");
    }
    if (model.probs.size() != 2 || model.est_values.size() != 2) {
        throw InvalidArgument("moments: expected a two-outcome estimator model");
    }
    // support points and weights of the (sample-mean) estimator
    std::vector<double> values;
    std::vector<double> weights;
    if (repetitions == 1) {
        values = model.est_values;
        weights = model.probs;
    } else {
        const int n = repetitions;
        const double p = model.probs[1];
        const double lp = std::log(p);
        const double lq = std::log1p(-p);
        for (int k = 0; k <= n; ++k) {
            const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
            weights.push_back(std::exp(log_binom + k * lp + (n - k) * lq));
            values.push_back((model.est_values[0] * (n - k) + model.est_values[1] * k) / n);
        }
    }
    MomentVector mv;
    mv.values.assign(static_cast<std::size_t>(order), 0.0);
    for (std::size_t k = 0; k < values.size(); ++k) {
        double power = 1.0;
        for (int q = 0; q < order; ++q) {
            power *= values[k];
            mv.values[static_cast<std::size_t>(q)] += weights[k] * power;
        }
    }
    return mv;
}

}  // namespace fpcool
