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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "fpcool/dynamics.hpp"
#include "fpcool/error.hpp"

using namespace fpcool;

namespace {

RefrigeratorParams uncoupled_weak()
{
    RefrigeratorParams p = RefrigeratorParams::weak_preset();
    p.g = 0.0;
    return p;
}

ComplexMatrix product_gibbs(const RefrigeratorParams& p)
{
    return tensor_product({thermal_qubit(p.energy[0], p.temperature[0]).matrix(),
                           thermal_qubit(p.energy[1], p.temperature[1]).matrix(),
                           thermal_qubit(p.energy[2], p.temperature[2]).matrix()});
}

double max_offdiagonal(const ComplexMatrix& m)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j) {
                worst = std::max(worst, std::abs(m(i, j)));
            }
        }
    }
    return worst;
}

}  // namespace

TEST(Params, PresetsValidate)
{
    EXPECT_TRUE(RefrigeratorParams::strong_preset().validate().empty());
    EXPECT_TRUE(RefrigeratorParams::weak_preset().validate().empty());
}

TEST(Params, RejectsInvalid)
{
    RefrigeratorParams p = RefrigeratorParams::strong_preset();
    p.energy[2] = 9.5;
    EXPECT_THROW(p.validate(), InvalidArgument);

    p = RefrigeratorParams::strong_preset();
    p.temperature[0] = 1.0;  // T1 > T2
    EXPECT_THROW(p.validate(), InvalidArgument);

    p = RefrigeratorParams::strong_preset();
    p.alpha[1] = 0.0;
    EXPECT_THROW(p.validate(), InvalidArgument);

    p = RefrigeratorParams::strong_preset();
    p.g = -0.1;
    EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Params, WarningsAreAdvisory)
{
    RefrigeratorParams p = RefrigeratorParams::weak_preset();
    p.g = 0.5;
    EXPECT_EQ(p.validate().size(), 1u);
    p = RefrigeratorParams::weak_preset();
    p.temperature = {0.9, 0.9, 0.9};
    EXPECT_EQ(p.validate().size(), 1u);
}

TEST(Regime, RoundTripsNames)
{
    EXPECT_EQ(regime_from_string(to_string(Regime::Strong)), Regime::Strong);
    EXPECT_EQ(regime_from_string("WEAK"), Regime::Weak);
    EXPECT_THROW(regime_from_string("medium"), InvalidArgument);
}

TEST(Hamiltonian, UncoupledIsDiagonalWithHalfGapSums)
{
    RefrigeratorParams p = RefrigeratorParams::strong_preset();
    p.g = 0.0;
    const ComplexMatrix h = build_hamiltonian(p);
    EXPECT_EQ(max_offdiagonal(h), 0.0);
    EXPECT_DOUBLE_EQ(h(0, 0).real(), -10.0);  // |000>
    EXPECT_DOUBLE_EQ(h(7, 7).real(), 10.0);   // |111>
    EXPECT_DOUBLE_EQ(h(1, 1).real(), -1.0);   // |001>: -1/2 - 5 + 9/2
    EXPECT_DOUBLE_EQ(h(4, 4).real(), -9.0);   // |100>
}

TEST(Hamiltonian, CouplingElement)
{
    const ComplexMatrix h = build_hamiltonian(RefrigeratorParams::strong_preset());
    const Complex elem = (basis_ket("010").adjoint() * h * basis_ket("101"))(0, 0);
    EXPECT_DOUBLE_EQ(elem.real(), 0.8);
    EXPECT_EQ(elem.imag(), 0.0);
    EXPECT_LT((h - h.adjoint()).norm(), 1e-15);
}

TEST(Hamiltonian, LocalAndInteractionCommute)
{
    RefrigeratorParams p = RefrigeratorParams::strong_preset();
    const ComplexMatrix h = build_hamiltonian(p);
    p.g = 0.0;
    const ComplexMatrix h_loc = build_hamiltonian(p);
    const ComplexMatrix h_int = h - h_loc;
    EXPECT_LT((h_loc * h_int - h_int * h_loc).norm(), 1e-14);
    EXPECT_DOUBLE_EQ(h_loc(2, 2).real(), h_loc(5, 5).real());
}

TEST(ThermalQubit, Populations)
{
    EXPECT_NEAR(ground_population(1.0, 0.9), 0.752336, 1e-6);
    EXPECT_NEAR(ground_population(1.0, 0.9), 1.0 / (1.0 + std::exp(-1.0 / 0.9)), 1e-15);
    EXPECT_NEAR(ground_population(9.0, 100.0), 0.522485, 1e-6);
    const DensityMatrix hot = thermal_qubit(1.0, 1e12);
    EXPECT_NEAR(hot.population(0), 0.5, 1e-9);
    EXPECT_NEAR(hot.population(1), 0.5, 1e-9);
    EXPECT_THROW(thermal_qubit(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(thermal_qubit(1.0, -1.0), InvalidArgument);
}

TEST(TemperatureFromPopulation, InvertsGibbsWeight)
{
    const double e = std::exp(1.0);
    EXPECT_NEAR(temperature_from_population(e / (e + 1.0), 1.0), 1.0, 1e-14);
    EXPECT_NEAR(temperature_from_population(ground_population(1.0, 0.9), 1.0), 0.9, 1e-13);
    const double cold = temperature_from_population(1.0 - 1e-12, 1.0);
    EXPECT_GT(cold, 0.0);
    EXPECT_LT(cold, 0.04);
    EXPECT_THROW(temperature_from_population(0.5, 1.0), InvalidArgument);
    EXPECT_THROW(temperature_from_population(0.3, 1.0), InvalidArgument);
    EXPECT_THROW(temperature_from_population(1.0, 1.0), InvalidArgument);
    EXPECT_TRUE(std::isnan(temperature_or_nan(0.4, 1.0)));
}

TEST(BoseOccupation, Values)
{
    EXPECT_NEAR(bose_occupation(std::log(2.0), 1.0), 1.0, 1e-14);
    EXPECT_NEAR(bose_occupation(1.0, 1.0 / 0.9), 0.4907417, 1e-6);
    EXPECT_EQ(bose_occupation(700.0, 1.0), 0.0);
    EXPECT_EQ(bose_occupation(1.0, 1e6), 0.0);
    EXPECT_THROW(bose_occupation(0.0, 1.0), InvalidArgument);
}

TEST(OhmicDensity, Values)
{
    EXPECT_NEAR(ohmic_density(5.0, 0.3, 5.0), 0.3 * 5.0 / std::exp(1.0), 1e-15);
    EXPECT_NEAR(ohmic_density(1.0, 1e-4, 1e4), 9.99900005e-5, 1e-13);
    EXPECT_EQ(ohmic_density(1.0, 0.0, 1e4), 0.0);
}

TEST(TransitionRate, EmissionAndAbsorption)
{
    const double beta = 1.0 / 0.9;
    EXPECT_NEAR(transition_rate(1.0, 1e-4, 1e4, beta),
                ohmic_density(1.0, 1e-4, 1e4) * (1.0 + bose_occupation(1.0, beta)), 1e-18);
    EXPECT_EQ(transition_rate(-1.0, 1e-4, 1e4, 1e9), 0.0);
    EXPECT_THROW(transition_rate(0.0, 1e-4, 1e4, beta), InvalidArgument);
}

TEST(LindbladStrong, CountRatesAndAdjointPairs)
{
    const auto terms = lindblad_terms_strong(RefrigeratorParams::strong_preset());
    ASSERT_EQ(terms.size(), 18u);
    for (std::size_t k = 0; k < terms.size(); k += 2) {
        EXPECT_GT(terms[k].rate, 0.0) << terms[k].label;
        EXPECT_GT(terms[k + 1].rate, 0.0) << terms[k + 1].label;
        EXPECT_EQ(terms[k + 1].omega, -terms[k].omega);
        EXPECT_EQ(terms[k + 1].bath, terms[k].bath);
        EXPECT_EQ((terms[k + 1].jump - terms[k].jump.adjoint()).norm(), 0.0);
        EXPECT_EQ(terms[k].bath, static_cast<int>(k / 6));
    }
}

TEST(LindbladStrong, FirstOperatorLowersColdQubit)
{
    const auto terms = lindblad_terms_strong(RefrigeratorParams::strong_preset());
    const ComplexMatrix& l1 = terms[0].jump;
    EXPECT_DOUBLE_EQ(terms[0].omega, 1.0);
    EXPECT_LT((l1 * basis_ket("111") - basis_ket("011")).norm(), 1e-15);
    EXPECT_LT((l1 * basis_ket("100") - basis_ket("000")).norm(), 1e-15);
    EXPECT_LT((l1 * basis_ket("000")).norm(), 1e-15);
}

TEST(LindbladStrong, DetailedBalancePerBath)
{
    const RefrigeratorParams p = RefrigeratorParams::strong_preset();
    for (const LindbladTerm& t : lindblad_terms_strong(p)) {
        if (t.omega < 0.0) {
            continue;
        }
        const double up = transition_rate(-t.omega, p.alpha[t.bath], p.cutoff[t.bath], p.beta(t.bath));
        EXPECT_NEAR(up / t.rate, std::exp(-t.omega * p.beta(t.bath)), 1e-10 * std::exp(-t.omega * p.beta(t.bath)))
            << t.label;
    }
}

TEST(LindbladStrong, DegenerateTransitionRefused)
{
    RefrigeratorParams p = RefrigeratorParams::strong_preset();
    p.g = 1.0;  // omega = E1 - g = 0
    EXPECT_THROW(lindblad_terms_strong(p), InvalidArgument);
}

TEST(LindbladWeak, SixLocalTerms)
{
    const RefrigeratorParams p = RefrigeratorParams::weak_preset();
    const auto terms = lindblad_terms_weak(p);
    ASSERT_EQ(terms.size(), 6u);
    ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    EXPECT_EQ((terms[0].jump - embed_single_qubit(lower, 1)).norm(), 0.0);
    EXPECT_NEAR(terms[5].rate / terms[4].rate, std::exp(-9.0 / 100.0), 1e-12);
    EXPECT_THROW(lindblad_terms_weak(RefrigeratorParams::strong_preset()), InvalidArgument);
    EXPECT_THROW(lindblad_terms_strong(p), InvalidArgument);
}

TEST(Liouvillian, TracePreserving)
{
    for (const RefrigeratorParams& p : {RefrigeratorParams::strong_preset(), RefrigeratorParams::weak_preset()}) {
        const ComplexMatrix l = liouvillian(p);
        ASSERT_EQ(l.rows(), 64);
        const ComplexVector trace_row = vectorize(ComplexMatrix::Identity(8, 8));
        EXPECT_LT((trace_row.adjoint() * l).norm(), 1e-12);
    }
}

TEST(Liouvillian, MatchesCommutatorAndDissipator)
{
    const RefrigeratorParams p = RefrigeratorParams::weak_preset();
    const ComplexMatrix h = build_hamiltonian(p);
    const auto terms = lindblad_terms(p);
    ComplexMatrix rho = ComplexMatrix::Random(8, 8);
    rho = rho * rho.adjoint();
    ComplexMatrix expect = Complex(0.0, -1.0) * (h * rho - rho * h);
    for (const LindbladTerm& t : terms) {
        const ComplexMatrix ld = t.jump.adjoint() * t.jump;
        expect += t.rate * (t.jump * rho * t.jump.adjoint() - 0.5 * (ld * rho + rho * ld));
    }
    const ComplexMatrix got = unvectorize(liouvillian(p) * vectorize(rho), 8);
    EXPECT_LT((got - expect).norm(), 1e-12 * (1.0 + expect.norm()));
}

TEST(Liouvillian, UncoupledKernelIsProductOfGibbsStates)
{
    RefrigeratorParams p = uncoupled_weak();
    p.alpha = {1e-3, 1e-3, 1e-3};
    EXPECT_LT(generator_residual(liouvillian(p), product_gibbs(p)), 1e-15);
}

TEST(Liouvillian, StrongSpectrumHasSingleZeroMode)
{
    Eigen::ComplexEigenSolver<ComplexMatrix> es(liouvillian(RefrigeratorParams::strong_preset()));
    ASSERT_EQ(es.info(), Eigen::Success);
    int zeros = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const Complex lam = es.eigenvalues()(k);
        EXPECT_LE(lam.real(), 1e-12);
        if (std::abs(lam) < 1e-9) {
            ++zeros;
        } else {
            gap = std::min(gap, -lam.real());
        }
    }
    EXPECT_EQ(zeros, 1);
    EXPECT_GT(gap, 1e-5);
}

TEST(Evolve, ZeroHorizonKeepsInitialState)
{
    const RefrigeratorParams p = RefrigeratorParams::strong_preset();
    const Trajectory traj = evolve(p, 0.0, 0.005, 1);
    ASSERT_EQ(traj.size(), 1u);
    EXPECT_EQ(traj.times[0], 0.0);
    EXPECT_NEAR(traj.cold_temps[0], 0.9, 1e-14);
    EXPECT_LT(frobenius_distance(traj.states[0].matrix(), initial_state(p).matrix()), 1e-15);
}

TEST(Evolve, RejectsBadArguments)
{
    const RefrigeratorParams p = RefrigeratorParams::strong_preset();
    EXPECT_THROW(evolve(p, 1.0, 0.0, 1), InvalidArgument);
    EXPECT_THROW(evolve(p, -1.0, 0.005, 1), InvalidArgument);
    EXPECT_THROW(evolve(p, 1.0, 0.005, 0), InvalidArgument);
    EXPECT_THROW(evolve(p, 1.0, 0.05, 1), InvalidArgument);  // too coarse for |E| ~ 10
}

TEST(Evolve, SamplingAndFinalStep)
{
    const Trajectory traj = evolve(RefrigeratorParams::weak_preset(), 1.005, 0.01, 25);
    // steps 25, 50, 75, 100 plus the shortened 101st
    ASSERT_EQ(traj.size(), 6u);
    EXPECT_NEAR(traj.times[1], 0.25, 1e-15);
    EXPECT_EQ(traj.times.back(), 1.005);
    EXPECT_EQ(traj.steps, 101u);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        EXPECT_GT(traj.times[k], traj.times[k - 1]);
    }
}

TEST(Evolve, RestartReproducesSingleRun)
{
    const RefrigeratorParams p = RefrigeratorParams::strong_preset();
    const Trajectory whole = evolve(p, 2.0, 0.005, 200);
    const Trajectory first = evolve(p, 1.0, 0.005, 200);
    const Trajectory second = evolve(p, first.states.back(), 1.0, 2.0, 0.005, 200);
    EXPECT_DOUBLE_EQ(second.times.back(), 2.0);
    EXPECT_LT(frobenius_distance(second.states.back().matrix(), whole.states.back().matrix()), 1e-13);
}

TEST(Evolve, WeakStatesStayPhysical)
{
    const Trajectory traj = evolve(RefrigeratorParams::weak_preset(), 200.0, 0.01, 500);
    for (const DensityMatrix& s : traj.states) {
        const StateDiagnostics d = diagnose_state(s.matrix());
        EXPECT_LE(d.trace_error, 1e-12);
        EXPECT_GE(d.min_eigenvalue, -1e-12);
        for (int q = 1; q <= 3; ++q) {
            EXPECT_LE(max_offdiagonal(partial_trace(s.matrix(), q)), 1e-8);
        }
    }
    EXPECT_LE(traj.max_correction, 1e-10);
    EXPECT_LT(traj.cold_temps.back(), 0.9);
}

TEST(Evolve, UncoupledWeakStaysAtFixedPoint)
{
    RefrigeratorParams p = uncoupled_weak();
    const Trajectory traj = evolve(p, 10.0, 0.01, 1000);
    EXPECT_LT(frobenius_distance(traj.states.back().matrix(), product_gibbs(p)), 1e-13);
}

TEST(SteadyTime, StationaryInputFiresAtFirstSample)
{
    const RefrigeratorParams p = RefrigeratorParams::weak_preset();
    const DensityMatrix ss = steady_state_direct(p);
    Trajectory traj;
    for (int k = 0; k < 4; ++k) {
        traj.times.push_back(5.0 + k);
        traj.states.push_back(ss);
        traj.cold_temps.push_back(local_temperature(ss.matrix(), 1, 1.0));
    }
    EXPECT_EQ(detect_steady_time(traj, p, 1e-9), 5.0);
}

TEST(SteadyTime, LastViolationDecides)
{
    Trajectory traj;
    traj.times = {0.0, 1.0, 2.0, 3.0, 4.0};
    traj.residuals = {1.0, 1e-12, 1e-6, 1e-12, 1e-12};
    EXPECT_EQ(detect_steady_time(traj, 1e-9), 3.0);
    traj.residuals.back() = 1e-3;
    EXPECT_THROW(detect_steady_time(traj, 1e-9), NumericalError);
    EXPECT_THROW(detect_steady_time(traj, 0.0), InvalidArgument);
}

TEST(SteadyStateDirect, UncoupledWeakIsProductState)
{
    const RefrigeratorParams p = uncoupled_weak();
    EXPECT_LT(frobenius_distance(steady_state_direct(p).matrix(), product_gibbs(p)), 1e-10);
}

TEST(SteadyStateDirect, StrongColdTemperature)
{
    const DensityMatrix ss = steady_state_direct(RefrigeratorParams::strong_preset());
    const double t1 = local_temperature(ss.matrix(), 1, 1.0);
    EXPECT_NEAR(t1, 0.33, 0.01);
    EXPECT_NEAR(t1, 0.3301196, 1e-6);
}

TEST(SteadyStateDirect, WeakColdTemperature)
{
    const DensityMatrix ss = steady_state_direct(RefrigeratorParams::weak_preset());
    EXPECT_NEAR(local_temperature(ss.matrix(), 1, 1.0), 0.3649947, 1e-6);
}

TEST(DefaultSampleEvery, CapsSampleCount)
{
    EXPECT_EQ(default_sample_every(30000.0, 0.005, 20000), 301u);
    EXPECT_EQ(default_sample_every(1.0, 0.01, 20000), 1u);
    EXPECT_EQ(default_sample_every(0.0, 0.01), 1u);
}
