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
#include <cstddef>
#include <string>
#include <vector>

#include "fpcool/qstate.hpp"

namespace fpcool {

enum class Regime { Strong, Weak };

const char* to_string(Regime regime);
Regime regime_from_string(const std::string& name);

/// Three-qubit self-contained absorption refrigerator: cold (1), work (2)
/// and hot (3) qubits, each coupled to its own Ohmic bath.
struct RefrigeratorParams {
    std::array<double, 3> energy{1.0, 10.0, 9.0};
    double g = 0.8;
    std::array<double, 3> temperature{0.9, 0.9, 100.0};
    std::array<double, 3> alpha{1e-4, 1e-4, 1e-2};
    std::array<double, 3> cutoff{1e4, 1e4, 1e4};
    Regime regime = Regime::Strong;

    /// Throws InvalidArgument on hard violations; returns advisory warnings.
    std::vector<std::string> validate() const;

    double beta(int bath) const { return 1.0 / temperature[static_cast<std::size_t>(bath)]; }

    static RefrigeratorParams strong_preset();
    static RefrigeratorParams weak_preset();
};

/// One dissipative channel gamma * D[jump].
struct LindbladTerm {
    double rate = 0.0;
    ComplexMatrix jump;
    int bath = 0;        // 0-based bath index
    double omega = 0.0;  // signed transition frequency; negative for absorption
    std::string label;
};

/// Sampled solution of the master equation.
struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<double> cold_temps;
    std::vector<double> residuals;   // ||L rho(t)||_F at each sample
    double max_correction = 0.0;     // largest per-step renormalization applied
    std::size_t steps = 0;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
};

ComplexMatrix build_hamiltonian(const RefrigeratorParams& p);

/// Gibbs ground-state population of a qubit with gap E at temperature T.
double ground_population(double E, double T);

DensityMatrix thermal_qubit(double E, double T);

/// T = E / ln(r / (1 - r)); requires 0.5 < r < 1.
double temperature_from_population(double r, double E);

/// Like temperature_from_population but returns NaN outside (0.5, 1).
double temperature_or_nan(double r, double E);

double bose_occupation(double omega, double beta);
double ohmic_density(double omega, double alpha, double cutoff);

/// Emission branch for omega > 0, absorption branch for omega < 0.
double transition_rate(double omega, double alpha, double cutoff, double beta);

std::vector<LindbladTerm> lindblad_terms_strong(const RefrigeratorParams& p);
std::vector<LindbladTerm> lindblad_terms_weak(const RefrigeratorParams& p);
std::vector<LindbladTerm> lindblad_terms(const RefrigeratorParams& p);

/// Superoperator acting on the column-stacked density matrix.
ComplexMatrix build_liouvillian(const ComplexMatrix& hamiltonian,
                                const std::vector<LindbladTerm>& terms);
ComplexMatrix liouvillian(const RefrigeratorParams& p);

ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim);

/// ||L vec(rho)||_F.
double generator_residual(const ComplexMatrix& liouv, const ComplexMatrix& rho);

/// tau_1 ⊗ tau_2 ⊗ tau_3 at the bath temperatures.
DensityMatrix initial_state(const RefrigeratorParams& p);

/// Reduced state temperature of `qubit` (1-based).
double local_temperature(const ComplexMatrix& rho, int qubit, double E);

/// Number of steps between stored samples so that at most `max_samples`
/// states are kept.
std::size_t default_sample_every(double t_end, double dt, std::size_t max_samples = 20000);

/// Fixed-step RK4 integration of d rho/dt = L rho from initial_state(p).
/// Samples are stored every `sample_every` steps, plus the final state.
Trajectory evolve(const RefrigeratorParams& p, double t_end, double dt, std::size_t sample_every);

/// Same integrator started from `rho0` at `t_start`, running to `t_end`.
Trajectory evolve(const RefrigeratorParams& p, const DensityMatrix& rho0, double t_start, double t_end,
                  double dt, std::size_t sample_every);

/// Earliest sample time after which ||L rho||_F <= tol holds for every
/// remaining sample. Throws NumericalError if the last sample still fails.
double detect_steady_time(const Trajectory& traj, const RefrigeratorParams& p, double tol);
double detect_steady_time(const Trajectory& traj, double tol);

/// Kernel of the Liouvillian, Hermitized and normalized to unit trace.
DensityMatrix steady_state_direct(const RefrigeratorParams& p);

}  // namespace fpcool
