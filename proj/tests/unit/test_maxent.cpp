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
#include <random>

#include <Eigen/Dense>

#include "fpcool/error.hpp"
#include "fpcool/maxent.hpp"
#include "fpcool/thermometry.hpp"

using namespace fpcool;

namespace {

MomentVector standard_normal() { return MomentVector{{0.0, 1.0}}; }

double entropy_bits(const Eigen::VectorXd& w)
{
    double h = 0.0;
    for (double x : w) {
        if (x > 0.0) {
            h -= x * std::log2(x);
        }
    }
    return h;
}

// Perturbations w_k (1 + s g_k), with g weighted-orthogonal to 1, z, ..., z^M,
// keep normalization and the first M moments.
void check_maximality(const MaxEntFit& fit, int order, unsigned seed)
{
    const auto n = static_cast<Eigen::Index>(fit.weights.size());
    const Eigen::Map<const Eigen::VectorXd> w(fit.weights.data(), n);
    Eigen::VectorXd z(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        z(k) = (fit.grid.points[static_cast<std::size_t>(k)] - fit.center) / fit.scale;
    }
    Eigen::MatrixXd basis(n, order + 1);
    basis.col(0).setOnes();
    for (int q = 1; q <= order; ++q) {
        basis.col(q) = basis.col(q - 1).cwiseProduct(z);
    }
    const Eigen::MatrixXd gram = basis.transpose() * w.asDiagonal() * basis;
    const double h0 = entropy_bits(w);
    EXPECT_NEAR(fit.entropy, h0, 1e-9);

    std::mt19937 rng(seed);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd f(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            f(k) = normal(rng);
        }
        const Eigen::VectorXd g = f - basis * gram.ldlt().solve(basis.transpose() * w.cwiseProduct(f));
        const double s = 0.5 / g.cwiseAbs().maxCoeff();
        const Eigen::VectorXd perturbed = w.cwiseProduct(Eigen::VectorXd::Ones(n) + s * g);
        EXPECT_NEAR(perturbed.sum(), 1.0, 1e-12);
        EXPECT_LT(entropy_bits(perturbed), h0) << "trial " << trial;
    }
}

}  // namespace

TEST(SupportGrid, UniformEndpointsAndValidation)
{
    const SupportGrid g = SupportGrid::uniform(-1.0, 3.0, 401);
    EXPECT_EQ(g.size(), 401);
    EXPECT_EQ(g.points.front(), -1.0);
    EXPECT_EQ(g.points.back(), 3.0);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.01);
    EXPECT_THROW(SupportGrid::uniform(1.0, 1.0, 401), InvalidArgument);
    EXPECT_THROW(SupportGrid::uniform(0.0, 1.0, 100), InvalidArgument);
}

TEST(DefaultSupport, SpansKSigma)
{
    const SupportGrid unit = default_support(standard_normal(), 6.0);
    EXPECT_DOUBLE_EQ(unit.lo, -6.0);
    EXPECT_DOUBLE_EQ(unit.hi, 6.0);
    EXPECT_EQ(unit.size(), 4001);

    const SupportGrid est = default_support(MomentVector{{0.9, 0.81 + 3.5217}}, 6.0);
    EXPECT_NEAR(est.lo, -10.36, 0.01);
    EXPECT_NEAR(est.hi, 12.16, 0.01);
}

TEST(DefaultSupport, RejectsDegenerateInput)
{
    EXPECT_THROW(default_support(MomentVector{{2.0, 4.0}}), InvalidArgument);
    EXPECT_THROW(default_support(MomentVector{{0.0}}), InvalidArgument);
    EXPECT_THROW(default_support(standard_normal(), 0.0), InvalidArgument);
}

TEST(MaxEntFit, TwoMomentsGiveDiscreteGaussian)
{
    const MaxEntFit fit = maxent_fit(standard_normal(), SupportGrid::uniform(-10.0, 10.0, 4001));
    const std::size_t mid = 2000;
    for (std::size_t k = 0; k < fit.weights.size(); ++k) {
        const double x = fit.grid.points[k];
        if (std::abs(x) > 6.0) {
            continue;
        }
        const double expect = fit.weights[mid] * std::exp(-0.5 * x * x);
        EXPECT_NEAR(fit.weights[k] / expect, 1.0, 1e-6) << "x=" << x;
    }
    EXPECT_NEAR(fit.multipliers[0], 0.0, 1e-10);
    EXPECT_NEAR(fit.multipliers[1], 0.5, 1e-10);
}

TEST(MaxEntFit, GaussianClosureOfThirdMoment)
{
    for (const auto& [m1, sigma] : {std::pair{0.7, 1.3}, std::pair{-2.0, 0.4}, std::pair{0.9, 1.8765}}) {
        const MomentVector mv{{m1, m1 * m1 + sigma * sigma}};
        const MaxEntFit fit = maxent_fit(mv, default_support(mv, 8.0, 8001));
        double m3 = 0.0;
        for (std::size_t k = 0; k < fit.weights.size(); ++k) {
            m3 += fit.weights[k] * std::pow(fit.grid.points[k], 3);
        }
        EXPECT_NEAR(m3, m1 * m1 * m1 + 3.0 * m1 * sigma * sigma, 1e-6 * (1.0 + std::abs(m3)));
    }
}

TEST(MaxEntFit, MeanAtMidpointGivesUniformWeights)
{
    const MaxEntFit fit = maxent_fit(MomentVector{{0.5}}, SupportGrid::uniform(0.0, 1.0, 101));
    for (double w : fit.weights) {
        EXPECT_NEAR(w, 1.0 / 101.0, 1e-14);
    }
    EXPECT_NEAR(fit.entropy, std::log2(101.0), 1e-12);
}

TEST(MaxEntFit, MomentFidelity)
{
    for (double T : {0.33, 0.53, 0.73, 0.9}) {
        for (int order : {2, 3}) {
            const MomentVector mv = moments(mvu_estimator(1.0, T), order);
            const MaxEntFit fit = maxent_fit(mv, default_support(mv));
            for (double r : fit.moment_residuals) {
                EXPECT_LE(std::abs(r), 1e-6) << "T=" << T << " M=" << order;
            }
        }
    }
}

TEST(MaxEntFit, EntropyIsMaximalUnderMomentPreservingPerturbations)
{
    check_maximality(maxent_fit(standard_normal(), SupportGrid::uniform(-10.0, 10.0, 4001)), 2, 7u);
    const MomentVector mv = moments(mvu_estimator(1.0, 0.5), 3);
    check_maximality(maxent_fit(mv, default_support(mv)), 3, 11u);
}

TEST(MaxEntFit, InfeasibleMomentsReportResiduals)
{
    try {
        maxent_fit(MomentVector{{5.0, 26.0}}, SupportGrid::uniform(-1.0, 1.0, 201));
        FAIL() << "expected MaxEntError";
    } catch (const MaxEntError& e) {
        ASSERT_EQ(e.residuals().size(), 2u);
        EXPECT_GT(std::abs(e.residuals()[0]), 1.0);
    }
    EXPECT_THROW(maxent_fit(MomentVector{{0.0, -1.0}}, SupportGrid::uniform(-1.0, 1.0, 201)), InvalidArgument);
    // four moments of a two-point law sit on the boundary of the moment cone
    const MomentVector two_point = moments(mvu_estimator(1.0, 0.9), 4);
    EXPECT_THROW(maxent_fit(two_point, default_support(two_point)), MaxEntError);
}

TEST(Percentiles, GaussianQuantiles)
{
    const PercentileTable t = percentiles(maxent_fit(standard_normal(), SupportGrid::uniform(-10.0, 10.0, 4001)));
    EXPECT_NEAR(t.at(50), 0.0, 1e-6);
    EXPECT_NEAR(t.at(25), -0.6745, 1e-2);
    EXPECT_NEAR(t.at(75), 0.6745, 1e-2);
    EXPECT_NEAR(t.at(25), -0.674490, 1e-5);
    EXPECT_NEAR(t.at(1), -2.326348, 5e-5);
    for (int i = 1; i <= 49; ++i) {
        EXPECT_NEAR(t.at(i), -t.at(100 - i), 1e-9);
    }
}

TEST(Percentiles, NondecreasingAndCdfBounded)
{
    const MomentVector mv = moments(mvu_estimator(1.0, 0.6), 3);
    const MaxEntFit fit = maxent_fit(mv, default_support(mv));
    const std::vector<double> c = fit.cdf();
    EXPECT_GE(c.front(), -1e-12);
    EXPECT_LE(c.back(), 1.0 + 1e-12);
    EXPECT_NEAR(c.back() + 0.5 * fit.weights.back(), 1.0, 1e-12);
    for (std::size_t k = 1; k < c.size(); ++k) {
        EXPECT_GE(c[k], c[k - 1] - 1e-12);
    }
    const PercentileTable t = percentiles(fit);
    for (int i = 2; i <= 99; ++i) {
        EXPECT_GE(t.at(i), t.at(i - 1));
    }
}

TEST(Percentiles, TranslationEquivariance)
{
    const double c = 1.75;
    const MomentVector base{{0.2, 0.2 * 0.2 + 0.8}};
    const MomentVector shifted{{0.2 + c, (0.2 + c) * (0.2 + c) + 0.8}};
    const PercentileTable a = percentiles(maxent_fit(base, default_support(base)));
    const PercentileTable b = percentiles(maxent_fit(shifted, default_support(shifted)));
    for (int i = 1; i <= 99; ++i) {
        EXPECT_NEAR(b.at(i) - a.at(i), c, 1e-8) << "i=" << i;
    }
}

TEST(Percentiles, GridRefinementIsStable)
{
    for (double T : {0.33, 0.53, 0.73, 0.9}) {
        for (int order : {2, 3}) {
            PercentileOptions coarse;
            PercentileOptions fine;
            fine.n_points = 2 * coarse.n_points - 1;
            const EstimatorModel m = mvu_estimator(1.0, T);
            const double d =
                max_abs_difference(estimator_percentiles(m, order, coarse), estimator_percentiles(m, order, fine));
            EXPECT_LE(d, 1e-3) << "T=" << T << " M=" << order;
        }
    }
}

TEST(ConvergedPercentiles, VacuousToleranceStopsAtFirstComparison)
{
    PercentileOptions o;
    o.tol = std::numeric_limits<double>::infinity();
    const ConvergedPercentiles c = converged_percentiles(mvu_estimator(1.0, 0.9), o);
    EXPECT_EQ(c.M_used, 3);
    ASSERT_EQ(c.max_differences.size(), 1u);
}

TEST(ConvergedPercentiles, SymmetricTwoPointModelConvergesAtOnce)
{
    EstimatorModel sym;
    sym.T = 0.0;
    sym.E = 1.0;
    sym.probs = {0.5, 0.5};
    sym.est_values = {-1.3, 1.3};
    PercentileOptions o;
    o.tol = 1e-8;
    const ConvergedPercentiles c = converged_percentiles(sym, o);
    EXPECT_EQ(c.M_used, 3);
    EXPECT_LE(c.max_differences.at(0), 1e-8);
}

TEST(ConvergedPercentiles, ReportsDifferencesWhenNotConverged)
{
    try {
        converged_percentiles(mvu_estimator(1.0, 0.9));
        FAIL() << "expected PercentileConvergenceError";
    } catch (const PercentileConvergenceError& e) {
        ASSERT_FALSE(e.differences().empty());
        EXPECT_GT(e.differences()[0], 0.01);
        EXPECT_EQ(e.last_order(), 3);
        EXPECT_GT(e.last_table().at(99), e.last_table().at(1));
    }
}

TEST(ConvergedPercentiles, ManyShotsConverge)
{
    PercentileOptions o;
    o.repetitions = 400;
    const ConvergedPercentiles c = converged_percentiles(mvu_estimator(1.0, 0.9), o);
    EXPECT_EQ(c.M_used, 3);
    EXPECT_LE(c.max_differences.at(0), 0.01);
}

TEST(ConvergedPercentiles, RejectsBadOrders)
{
    PercentileOptions o;
    o.M_start = 1;
    EXPECT_THROW(converged_percentiles(mvu_estimator(1.0, 0.9), o), InvalidArgument);
    o.M_start = 3;
    o.M_max = 3;
    EXPECT_THROW(converged_percentiles(mvu_estimator(1.0, 0.9), o), InvalidArgument);
}
