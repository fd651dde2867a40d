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

#include "fpcool/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace fpcool {

namespace {

double binomial(int n, int k)
{
    double b = 1.0;
    for (int j = 1; j <= k; ++j) {
        b = b * (n - k + j) / j;
    }
    return b;
}

// E[((x - c) / s)^q] for q = 1..M from raw moments m_1..m_M.
Eigen::VectorXd standardized_moments(const std::vector<double>& raw, double c, double s)
{
    const int order = static_cast<int>(raw.size());
    Eigen::VectorXd out(order);
    for (int q = 1; q <= order; ++q) {
        double acc = 0.0;
        for (int j = 0; j <= q; ++j) {
            const double mj = j == 0 ? 1.0 : raw[static_cast<std::size_t>(j - 1)];
            acc += binomial(q, j) * mj * std::pow(-c, q - j);
        }
        out(q - 1) = acc / std::pow(s, q);
    }
    return out;
}

// The dual is evaluated in extended precision: with |z| up to k_sigma the
// cubic and higher columns otherwise put a rounding floor near 1e-10 on the
// moment residuals.
using Real = long double;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

struct DualState {
    Vec weights;
    Real log_partition = 0.0;
    Real value = 0.0;  // psi(lambda)
};

// psi(lambda) = log sum_k exp(-lambda . z_k) + lambda . mu
DualState evaluate_dual(const Mat& powers, const Vec& lambda, const Vec& target)
{
    DualState s;
    Vec a = -(powers * lambda);
    const Real shift = a.maxCoeff();
    s.weights = (a.array() - shift).exp().matrix();
    const Real z = s.weights.sum();
    s.weights /= z;
    s.log_partition = shift + std::log(z);
    s.value = s.log_partition + lambda.dot(target);
    return s;
}

std::string describe(const std::vector<double>& v)
{
    std::ostringstream os;
    os.precision(3);
    os << '[';
    for (std::size_t k = 0; k < v.size(); ++k) {
        os << (k ? ", " : "") << v[k];
    }
    os << ']';
    return os.str();
}

}  // namespace

SupportGrid SupportGrid::uniform(double lo, double hi, int n_points)
{
    if (!(lo < hi)) {
        throw InvalidArgument("support grid requires lo < hi");
    }
    if (n_points < 101) {
        throw InvalidArgument("support grid needs at least 101 points");
    }
    SupportGrid g;
    g.lo = lo;
    g.hi = hi;
    g.points.resize(static_cast<std::size_t>(n_points));
    const double h = (hi - lo) / (n_points - 1);
    for (int k = 0; k < n_points; ++k) {
        g.points[static_cast<std::size_t>(k)] = lo + k * h;
    }
    g.points.back() = hi;
    return g;
}

std::vector<double> MaxEntFit::cdf() const
{
    std::vector<double> c(weights.size());
    double below = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        c[k] = below + 0.5 * weights[k];
        below += weights[k];
    }
    return c;
}

SupportGrid default_support(const MomentVector& moments, double k_sigma, int n_points)
{
    if (moments.order() < 2) {
        throw InvalidArgument("default_support needs the first two moments");
    }
    if (!(k_sigma > 0.0)) {
        throw InvalidArgument("default_support: k_sigma must be positive");
    }
    const double var = moments.variance();
    if (var <= 1e-14) {
        throw InvalidArgument("default_support: degenerate variance gives a zero-width support");
    }
    const double sigma = std::sqrt(var);
    return SupportGrid::uniform(moments.mean() - k_sigma * sigma, moments.mean() + k_sigma * sigma,
                                n_points);
}

MaxEntFit maxent_fit(const MomentVector& moments, const SupportGrid& grid, const MaxEntOptions& options)
{
    const int order = moments.order();
    if (order < 1) {
        throw InvalidArgument("maxent_fit needs at least one moment");
    }
    if (grid.size() < 2) {
        throw InvalidArgument("maxent_fit: empty support grid");
    }
    if (order >= 2 && moments.variance() < 0.0) {
        throw InvalidArgument("maxent_fit: m2 < m1^2");
    }

    MaxEntFit fit;
    fit.grid = grid;
    // Standardize by mean and standard deviation when both are available;
    // with the mean alone use the grid midpoint and half-width.
    const bool by_moments = order >= 2 && moments.variance() > 0.0;
    if (by_moments) {
        fit.center = moments.mean();
        fit.scale = std::sqrt(moments.variance());
    } else {
        fit.center = 0.5 * (grid.lo + grid.hi);
        fit.scale = 0.5 * (grid.hi - grid.lo);
    }

    const Eigen::Index n = grid.size();
    Mat powers(n, order);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Real z = (static_cast<Real>(grid.points[static_cast<std::size_t>(k)]) - fit.center) / fit.scale;
        Real p = 1.0;
        for (int q = 0; q < order; ++q) {
            p *= z;
            powers(k, q) = p;
        }
    }
    const Vec target = standardized_moments(moments.values, fit.center, fit.scale).cast<Real>();

    Vec lambda = Vec::Zero(order);
    if (by_moments) {
        lambda(1) = 0.5;  // start from the Gaussian
    }
    DualState state = evaluate_dual(powers, lambda, target);
    Vec grad(order);
    int it = 0;
    bool converged = false;
    for (; it <= options.max_iterations; ++it) {
        const Vec fitted = powers.transpose() * state.weights;
        grad = target - fitted;
        if (!grad.allFinite()) {
            break;
        }
        if (grad.cwiseAbs().maxCoeff() <= options.residual_tol) {
            converged = true;
            break;
        }
        if (it == options.max_iterations) {
            break;
        }
        const Mat centred = powers.rowwise() - fitted.transpose();
        const Mat hessian =
            centred.transpose() * (centred.array().colwise() * state.weights.array()).matrix();
        Eigen::LDLT<Mat> ldlt(hessian);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            break;
        }
        const Vec step = ldlt.solve(grad);
        if (!step.allFinite()) {
            break;
        }
        // Armijo backtracking on the dual; descent direction is -step. Once
        // the predicted decrease is below the rounding of psi the test is
        // meaningless, so the full step is judged by the moment mismatch.
        const Real slope = -grad.dot(step);
        const Real noise = 64 * std::numeric_limits<Real>::epsilon() * (1 + std::abs(state.value));
        bool accepted = false;
        if (-slope <= noise) {
            const Vec trial = lambda - step;
            DualState next = evaluate_dual(powers, trial, target);
            const Vec next_grad = target - powers.transpose() * next.weights;
            if (next_grad.allFinite() && next_grad.cwiseAbs().maxCoeff() < grad.cwiseAbs().maxCoeff()) {
                lambda = trial;
                state = std::move(next);
                accepted = true;
            }
        }
        for (Real t = 1.0; !accepted && t > 1e-12; t *= 0.5) {
            const Vec trial = lambda - t * step;
            DualState next = evaluate_dual(powers, trial, target);
            if (std::isfinite(next.value) && next.value <= state.value + 1e-4 * t * slope) {
                lambda = trial;
                state = std::move(next);
                accepted = true;
            }
        }
        if (!accepted) {
            break;
        }
    }

    fit.iterations = it;
    fit.multipliers.resize(static_cast<std::size_t>(order));
    for (int q = 0; q < order; ++q) {
        fit.multipliers[static_cast<std::size_t>(q)] = static_cast<double>(lambda(q));
    }
    fit.log_partition = static_cast<double>(state.log_partition);
    fit.weights.resize(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        fit.weights[static_cast<std::size_t>(k)] = static_cast<double>(state.weights(k));
    }

    fit.moment_residuals.resize(static_cast<std::size_t>(order));
    for (int q = 1; q <= order; ++q) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            acc += fit.weights[static_cast<std::size_t>(k)] *
                   std::pow(grid.points[static_cast<std::size_t>(k)], q);
        }
        fit.moment_residuals[static_cast<std::size_t>(q - 1)] =
            acc - moments.values[static_cast<std::size_t>(q - 1)];
    }
    if (!converged) {
        throw MaxEntError("maxent_fit: moments infeasible on the grid or Newton stalled after " +
                              std::to_string(it) + " iterations; residuals " +
                              describe(fit.moment_residuals),
                          fit.moment_residuals);
    }

    double h = 0.0;
    for (double w : fit.weights) {
        if (w > 0.0) {
            h -= w * std::log2(w);
        }
    }
    fit.entropy = h;
    return fit;
}

PercentileTable percentiles(const MaxEntFit& fit)
{
    const std::vector<double> c = fit.cdf();
    const std::vector<double>& x = fit.grid.points;
    PercentileTable table;
    std::size_t k = 0;
    for (int i = 1; i <= 99; ++i) {
        const double p = i / 100.0;
        while (k < c.size() && c[k] < p) {
            ++k;
        }
        double q;
        if (k == 0) {
            q = x.front();
        } else if (k == c.size()) {
            q = x.back();
        } else {
            const double span = c[k] - c[k - 1];
            const double frac = span > 0.0 ? (p - c[k - 1]) / span : 0.0;
            q = x[k - 1] + frac * (x[k] - x[k - 1]);
        }
        table.at(i) = q;
    }
    return table;
}

double max_abs_difference(const PercentileTable& a, const PercentileTable& b)
{
    double d = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        d = std::max(d, std::abs(a.values[k] - b.values[k]));
    }
    return d;
}

PercentileTable estimator_percentiles(const EstimatorModel& model, int order,
                                      const PercentileOptions& options)
{
    const MomentVector m = moments(model, order, options.repetitions);
    const SupportGrid grid = default_support(m, options.k_sigma, options.n_points);
    return percentiles(maxent_fit(m, grid));
}

ConvergedPercentiles converged_percentiles(const EstimatorModel& model, const PercentileOptions& options)
{
    if (options.M_start < 2) {
        throw InvalidArgument("converged_percentiles: M_start must be at least 2");
    }
    if (options.M_max <= options.M_start) {
        throw InvalidArgument("converged_percentiles: M_max must exceed M_start");
    }
    std::vector<double> diffs;
    int order = options.M_start;
    PercentileTable previous = estimator_percentiles(model, order, options);
    while (order < options.M_max) {
        PercentileTable next;
        try {
            next = estimator_percentiles(model, order + 1, options);
        } catch (const MaxEntError& e) {
            throw PercentileConvergenceError(
                "percentiles not converged: fit with " + std::to_string(order + 1) +
                    " moments failed after max differences " + describe(diffs) + " (" + e.what() + ")",
                diffs, previous, order);
        }
        const double d = max_abs_difference(previous, next);
        diffs.push_back(d);
        if (d <= options.tol) {
            return {next, order + 1, diffs};
        }
        previous = next;
        ++order;
    }
    throw PercentileConvergenceError("percentiles not converged by M_max = " +
                                         std::to_string(options.M_max) + "; max differences " +
                                         describe(diffs),
                                     diffs, previous, order);
}

}  // namespace fpcool
