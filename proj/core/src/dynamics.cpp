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

#include "fpcool/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "fpcool/error.hpp"

namespace fpcool {

namespace {

constexpr double kOverflowExponent = 700.0;

ComplexMatrix outer(const ComplexVector& ket, const ComplexVector& bra)
{
    return ket * bra.adjoint();
}

ComplexMatrix ketbra(const char* ket, const char* bra)
{
    return outer(basis_ket(ket), basis_ket(bra));
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// Real coordinates of a Hermitian 8x8 matrix: the 8 diagonal entries, then
// (Re, Im) of each upper-triangular entry. The generator restricted to these
// 64 coordinates is a real 64x64 matrix, which makes the RK4 inner loop a
// real matrix-vector product.
class HermitianCoordinates {
public:
    static constexpr int kDim = 8;
    static constexpr int kCoords = kDim * kDim;

    static Eigen::VectorXd to_coords(const ComplexMatrix& m)
    {
        Eigen::VectorXd x(kCoords);
        int k = 0;
        for (int i = 0; i < kDim; ++i) {
            x(k++) = m(i, i).real();
        }
        for (int i = 0; i < kDim; ++i) {
            for (int j = i + 1; j < kDim; ++j) {
                x(k++) = m(i, j).real();
                x(k++) = m(i, j).imag();
            }
        }
        return x;
    }

    static ComplexMatrix from_coords(const Eigen::VectorXd& x)
    {
        ComplexMatrix m(kDim, kDim);
        int k = 0;
        for (int i = 0; i < kDim; ++i) {
            m(i, i) = Complex(x(k++), 0.0);
        }
        for (int i = 0; i < kDim; ++i) {
            for (int j = i + 1; j < kDim; ++j) {
                const Complex z(x(k), x(k + 1));
                k += 2;
                m(i, j) = z;
                m(j, i) = std::conj(z);
            }
        }
        return m;
    }

    static double trace(const Eigen::VectorXd& x) { return x.head(kDim).sum(); }

    /// Real matrix R with to_coords(L rho) = R to_coords(rho) for Hermitian rho.
    static Eigen::MatrixXd restrict(const ComplexMatrix& liouv)
    {
        Eigen::MatrixXd r(kCoords, kCoords);
        for (int c = 0; c < kCoords; ++c) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(kCoords);
            e(c) = 1.0;
            const ComplexMatrix basis = from_coords(e);
            const ComplexMatrix image = unvectorize(liouv * vectorize(basis), kDim);
            // the image of a Hermitian matrix is Hermitian; drop rounding noise
            r.col(c) = to_coords(0.5 * (image + image.adjoint()));
        }
        return r;
    }
};

}  // namespace

const char* to_string(Regime regime)
{
    return regime == Regime::Strong ? "strong" : "weak";
}

Regime regime_from_string(const std::string& name)
{
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "strong") {
        return Regime::Strong;
    }
    if (lower == "weak") {
        return Regime::Weak;
    }
    throw InvalidArgument("unknown regime '" + name + "' (expected strong or weak)");
}

std::vector<std::string> RefrigeratorParams::validate() const
{
    std::vector<std::string> warnings;
    for (int j = 0; j < 3; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const std::string idx = std::to_string(j + 1);
        if (!(energy[k] > 0.0)) {
            throw InvalidArgument("E" + idx + " must be positive");
        }
        if (!(temperature[k] > 0.0)) {
            throw InvalidArgument("T" + idx + " must be positive");
        }
        if (!(alpha[k] > 0.0)) {
            throw InvalidArgument("alpha" + idx + " must be positive");
        }
        if (!(cutoff[k] > 0.0)) {
            throw InvalidArgument("Omega" + idx + " must be positive");
        }
    }
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw InvalidArgument("g must be nonnegative");
    }
    if (std::abs(energy[2] - (energy[1] - energy[0])) > 1e-12) {
        throw InvalidArgument("refrigerator is not self-contained: E3 = " + format_double(energy[2]) +
                              " but E2 - E1 = " + format_double(energy[1] - energy[0]));
    }
    if (temperature[0] > temperature[1] || temperature[1] > temperature[2]) {
        throw InvalidArgument("bath temperatures must satisfy T1 <= T2 <= T3");
    }
    if (temperature[1] == temperature[2]) {
        warnings.emplace_back("T2 == T3: no thermal gradient drives the refrigerator");
    }
    const double e_min = std::min({energy[0], energy[1], energy[2]});
    if (regime == Regime::Weak && g > 0.1 * e_min) {
        warnings.emplace_back("weak regime with g = " + format_double(g) +
                              " > 0.1 min(E): local master equation may be inaccurate");
    }
    return warnings;
}

RefrigeratorParams RefrigeratorParams::strong_preset()
{
    RefrigeratorParams p;
    p.energy = {1.0, 10.0, 9.0};
    p.g = 0.8;
    p.temperature = {0.9, 0.9, 100.0};
    p.alpha = {1e-4, 1e-4, 1e-2};
    p.cutoff = {1e4, 1e4, 1e4};
    p.regime = Regime::Strong;
    return p;
}

RefrigeratorParams RefrigeratorParams::weak_preset()
{
    RefrigeratorParams p = strong_preset();
    p.g = 0.05;
    p.alpha = {1e-3, 1e-3, 1e-3};
    p.regime = Regime::Weak;
    return p;
}

ComplexMatrix build_hamiltonian(const RefrigeratorParams& p)
{
    ComplexMatrix h = ComplexMatrix::Zero(8, 8);
    for (int k = 0; k < 8; ++k) {
        double e = 0.0;
        for (int j = 0; j < 3; ++j) {
            // |0> is the ground state with energy -E/2
            const int bit = (k >> (2 - j)) & 1;
            e += 0.5 * p.energy[static_cast<std::size_t>(j)] * (bit == 1 ? 1.0 : -1.0);
        }
        h(k, k) = e;
    }
    h += p.g * (ketbra("010", "101") + ketbra("101", "010"));
    return h;
}

double ground_population(double E, double T)
{
    if (!(E > 0.0) || !(T > 0.0)) {
        throw InvalidArgument("ground_population requires E > 0 and T > 0");
    }
    // e^{E/2T} / (e^{E/2T} + e^{-E/2T}) without overflow
    return 1.0 / (1.0 + std::exp(-E / T));
}

DensityMatrix thermal_qubit(double E, double T)
{
    const double r = ground_population(E, T);
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = r;
    m(1, 1) = 1.0 - r;
    return DensityMatrix(std::move(m));
}

double temperature_from_population(double r, double E)
{
    if (!(E > 0.0)) {
        throw InvalidArgument("temperature_from_population requires E > 0");
    }
    if (!(r > 0.5)) {
        throw InvalidArgument("ground population " + format_double(r) +
                              " <= 0.5 corresponds to infinite or negative temperature");
    }
    if (!(r < 1.0)) {
        throw InvalidArgument("ground population " + format_double(r) +
                              " >= 1 corresponds to zero temperature");
    }
    return E / (std::log(r) - std::log1p(-r));
}

double temperature_or_nan(double r, double E)
{
    if (!(r > 0.5) || !(r < 1.0) || !(E > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return E / (std::log(r) - std::log1p(-r));
}

double bose_occupation(double omega, double beta)
{
    if (!(omega > 0.0) || !(beta > 0.0)) {
        throw InvalidArgument("bose_occupation requires omega > 0 and beta > 0");
    }
    const double x = omega * beta;
    if (x >= kOverflowExponent) {
        return 0.0;
    }
    return 1.0 / std::expm1(x);
}

double ohmic_density(double omega, double alpha, double cutoff)
{
    if (!(omega > 0.0)) {
        throw InvalidArgument("ohmic_density requires omega > 0");
    }
    return alpha * omega * std::exp(-omega / cutoff);
}

double transition_rate(double omega, double alpha, double cutoff, double beta)
{
    if (omega == 0.0) {
        throw InvalidArgument("transition_rate: zero transition frequency");
    }
    if (omega > 0.0) {
        return ohmic_density(omega, alpha, cutoff) * (1.0 + bose_occupation(omega, beta));
    }
    const double w = -omega;
    return ohmic_density(w, alpha, cutoff) * bose_occupation(w, beta);
}

std::vector<LindbladTerm> lindblad_terms_strong(const RefrigeratorParams& p)
{
    if (p.regime != Regime::Strong) {
        throw InvalidArgument("lindblad_terms_strong called with weak-regime parameters");
    }
    p.validate();
    const double e1 = p.energy[0];
    const double e2 = p.energy[1];
    const double e3 = p.energy[2];
    const double g = p.g;
    const double s = 1.0 / std::sqrt(2.0);

    // dressed states of the degenerate |101>, |010> pair
    const ComplexVector plus = s * (basis_ket("101") + basis_ket("010"));
    const ComplexVector minus = s * (basis_ket("101") - basis_ket("010"));
    const auto ket = [](const char* b) { return basis_ket(b); };

    struct Channel {
        double omega;
        ComplexMatrix jump;
        int bath;
        const char* label;
    };
    // Lowering operators obtained from the sigma^x_j coupling written in the
    // eigenbasis of H_S; qubit 1 flips |001> <-> |101>, hence |001> below.
    const std::vector<Channel> channels = {
        {e1, ketbra("011", "111") + ketbra("000", "100"), 0, "L1(E1)"},
        {e1 + g, s * (outer(ket("001"), plus) - outer(minus, ket("110"))), 0, "L2(E1+g)"},
        {e1 - g, s * (outer(plus, ket("110")) + outer(ket("001"), minus)), 0, "L3(E1-g)"},
        {e2, ketbra("100", "110") + ketbra("001", "011"), 1, "L4(E2)"},
        {e2 + g, s * (outer(ket("000"), plus) - outer(minus, ket("111"))), 1, "L5(E2+g)"},
        {e2 - g, s * (outer(plus, ket("111")) - outer(ket("000"), minus)), 1, "L6(E2-g)"},
        {e3, ketbra("110", "111") + ketbra("000", "001"), 2, "L7(E3)"},
        {e3 + g, s * (outer(ket("100"), plus) - outer(minus, ket("011"))), 2, "L8(E3+g)"},
        {e3 - g, s * (outer(plus, ket("011")) + outer(ket("100"), minus)), 2, "L9(E3-g)"},
    };

    std::vector<LindbladTerm> terms;
    terms.reserve(2 * channels.size());
    for (const Channel& c : channels) {
        if (c.omega == 0.0) {
            throw InvalidArgument(std::string("degenerate transition: ") + c.label +
                                  " has zero frequency (E_j == g)");
        }
        const auto b = static_cast<std::size_t>(c.bath);
        const double beta = p.beta(c.bath);
        terms.push_back({transition_rate(c.omega, p.alpha[b], p.cutoff[b], beta), c.jump, c.bath,
                         c.omega, c.label});
        terms.push_back({transition_rate(-c.omega, p.alpha[b], p.cutoff[b], beta), c.jump.adjoint(),
                         c.bath, -c.omega, std::string(c.label) + "^+"});
    }
    return terms;
}

std::vector<LindbladTerm> lindblad_terms_weak(const RefrigeratorParams& p)
{
    if (p.regime != Regime::Weak) {
        throw InvalidArgument("lindblad_terms_weak called with strong-regime parameters");
    }
    p.validate();
    ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
    lower(0, 1) = 1.0;  // |0><1|
    std::vector<LindbladTerm> terms;
    terms.reserve(6);
    for (int j = 0; j < 3; ++j) {
        const auto b = static_cast<std::size_t>(j);
        const ComplexMatrix sm = embed_single_qubit(lower, j + 1);
        const double e = p.energy[b];
        const double beta = p.beta(j);
        const std::string idx = std::to_string(j + 1);
        terms.push_back({transition_rate(e, p.alpha[b], p.cutoff[b], beta), sm, j, e,
                         "sigma" + idx + "^-"});
        terms.push_back({transition_rate(-e, p.alpha[b], p.cutoff[b], beta), sm.adjoint(), j, -e,
                         "sigma" + idx + "^+"});
    }
    return terms;
}

std::vector<LindbladTerm> lindblad_terms(const RefrigeratorParams& p)
{
    return p.regime == Regime::Strong ? lindblad_terms_strong(p) : lindblad_terms_weak(p);
}

ComplexMatrix build_liouvillian(const ComplexMatrix& hamiltonian,
                                const std::vector<LindbladTerm>& terms)
{
    const Eigen::Index n = hamiltonian.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const Complex i_unit(0.0, 1.0);
    // vec(A X B) = (B^T ⊗ A) vec(X)
    ComplexMatrix l = -i_unit * (tensor_product(id, hamiltonian) -
                                 tensor_product(hamiltonian.transpose(), id));
    for (const LindbladTerm& t : terms) {
        if (t.rate < 0.0) {
            throw InvalidArgument("negative Lindblad rate for " + t.label);
        }
        const ComplexMatrix ldl = t.jump.adjoint() * t.jump;
        l += t.rate * (tensor_product(t.jump.conjugate(), t.jump) -
                       0.5 * tensor_product(id, ldl) - 0.5 * tensor_product(ldl.transpose(), id));
    }
    return l;
}

ComplexMatrix liouvillian(const RefrigeratorParams& p)
{
    return build_liouvillian(build_hamiltonian(p), lindblad_terms(p));
}

ComplexVector vectorize(const ComplexMatrix& m)
{
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim)
{
    if (v.size() != dim * dim) {
        throw InvalidArgument("unvectorize: size mismatch");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

double generator_residual(const ComplexMatrix& liouv, const ComplexMatrix& rho)
{
    return (liouv * vectorize(rho)).norm();
}

DensityMatrix initial_state(const RefrigeratorParams& p)
{
    std::vector<ComplexMatrix> factors;
    for (std::size_t j = 0; j < 3; ++j) {
        factors.push_back(thermal_qubit(p.energy[j], p.temperature[j]).matrix());
    }
    return DensityMatrix(tensor_product(factors));
}

double local_temperature(const ComplexMatrix& rho, int qubit, double E)
{
    return temperature_or_nan(partial_trace(rho, qubit)(0, 0).real(), E);
}

std::size_t default_sample_every(double t_end, double dt, std::size_t max_samples)
{
    if (!(t_end > 0.0) || !(dt > 0.0) || max_samples < 2) {
        return 1;
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    // the final state is always stored, so reserve one slot for it
    return std::max<std::size_t>(1, (steps + max_samples - 2) / (max_samples - 1));
}

Trajectory evolve(const RefrigeratorParams& p, double t_end, double dt, std::size_t sample_every)
{
    if (t_end < 0.0 || !std::isfinite(t_end)) {
        throw InvalidArgument("evolve: t_end must be finite and nonnegative");
    }
    p.validate();
    return evolve(p, initial_state(p), 0.0, t_end, dt, sample_every);
}

Trajectory evolve(const RefrigeratorParams& p, const DensityMatrix& rho0, double t_start, double t_end,
                  double dt, std::size_t sample_every)
{
    if (!(dt > 0.0)) {
        throw InvalidArgument("evolve: dt must be positive");
    }
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || t_end < t_start) {
        throw InvalidArgument("evolve: need finite t_start <= t_end");
    }
    if (rho0.dim() != 8) {
        throw InvalidArgument("evolve: start state must be a three-qubit state");
    }
    if (sample_every == 0) {
        throw InvalidArgument("evolve: sample_every must be positive");
    }
    p.validate();
    const ComplexMatrix h = build_hamiltonian(p);
    const Eigen::VectorXd spectrum = eig_hermitian(h).values;
    if (spectrum.cwiseAbs().maxCoeff() >= 5.0 && dt > 0.01) {
        throw InvalidArgument("evolve: dt = " + format_double(dt) +
                              " exceeds 0.01 for a Hamiltonian with |eigenvalue| >= 5");
    }

    const ComplexMatrix liouv = build_liouvillian(h, lindblad_terms(p));
    const Eigen::MatrixXd gen = HermitianCoordinates::restrict(liouv);
    const double e1 = p.energy[0];
    const StateTolerance tol;

    Trajectory traj;
    auto record = [&](double t, const Eigen::VectorXd& x, std::size_t step) {
        ComplexMatrix rho = HermitianCoordinates::from_coords(x);
        try {
            DensityMatrix state(rho, tol);
            traj.cold_temps.push_back(
                temperature_from_population(partial_trace(rho, 1)(0, 0).real(), e1));
            traj.residuals.push_back(generator_residual(liouv, rho));
            traj.times.push_back(t);
            traj.states.push_back(std::move(state));
        } catch (const InvalidArgument& e) {
            throw NumericalError("evolve: state invalid at step " + std::to_string(step) +
                                 " (t = " + format_double(t) + "): " + e.what());
        }
    };

    Eigen::VectorXd x = HermitianCoordinates::to_coords(rho0.matrix());
    record(t_start, x, 0);
    const double span = t_end - t_start;
    if (span == 0.0) {
        return traj;
    }

    const auto n_steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    Eigen::VectorXd k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), tmp(x.size());
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double offset = static_cast<double>(step - 1) * dt;
        const double h_step = step == n_steps ? span - offset : dt;
        k1.noalias() = gen * x;
        tmp = x + (0.5 * h_step) * k1;
        k2.noalias() = gen * tmp;
        tmp = x + (0.5 * h_step) * k2;
        k3.noalias() = gen * tmp;
        tmp = x + h_step * k3;
        k4.noalias() = gen * tmp;
        x += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        // hermiticity is exact in these coordinates; renormalize the trace
        const double tr = HermitianCoordinates::trace(x);
        if (!std::isfinite(tr)) {
            throw NumericalError("evolve: non-finite state at step " + std::to_string(step));
        }
        const double correction = std::abs(tr - 1.0) * x.norm() / std::abs(tr);
        traj.max_correction = std::max(traj.max_correction, correction);
        if (correction > 1e-10) {
            throw NumericalError("evolve: trace drift " + format_double(correction) +
                                 " exceeds 1e-10 at step " + std::to_string(step));
        }
        x /= tr;

        if (step % sample_every == 0 || step == n_steps) {
            record(step == n_steps ? t_end : t_start + static_cast<double>(step) * dt, x, step);
        }
    }
    traj.steps = n_steps;
    return traj;
}

double detect_steady_time(const Trajectory& traj, double tol)
{
    if (traj.empty() || traj.residuals.size() != traj.size()) {
        throw InvalidArgument("detect_steady_time: trajectory has no residuals");
    }
    if (!(tol > 0.0)) {
        throw InvalidArgument("detect_steady_time: tol must be positive");
    }
    std::size_t first = 0;
    for (std::size_t k = traj.size(); k-- > 0;) {
        if (traj.residuals[k] > tol) {
            first = k + 1;
            break;
        }
    }
    if (first >= traj.size()) {
        throw NumericalError("steady state not converged by t_end = " +
                             format_double(traj.times.back()) + " (residual " +
                             format_double(traj.residuals.back()) + " > tol " +
                             format_double(tol) + ")");
    }
    return traj.times[first];
}

double detect_steady_time(const Trajectory& traj, const RefrigeratorParams& p, double tol)
{
    const ComplexMatrix liouv = liouvillian(p);
    Trajectory probe;
    probe.times = traj.times;
    probe.residuals.reserve(traj.size());
    for (const DensityMatrix& s : traj.states) {
        probe.residuals.push_back(generator_residual(liouv, s.matrix()));
    }
    if (probe.residuals.size() != probe.times.size()) {
        throw InvalidArgument("detect_steady_time: times and states differ in length");
    }
    return detect_steady_time(probe, tol);
}

DensityMatrix steady_state_direct(const RefrigeratorParams& p)
{
    const ComplexMatrix liouv = liouvillian(p);
    Eigen::JacobiSVD<ComplexMatrix> svd(liouv, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::Index n = sv.size();
    const double scale = std::max(1.0, sv(0));
    const double smallest = sv(n - 1);
    const double gap = sv(n - 2);
    if (smallest > 1e-10 * scale) {
        throw NumericalError("Liouvillian has no kernel: smallest singular value " +
                             format_double(smallest));
    }
    if (gap <= 1e-10 * scale) {
        throw NumericalError("degenerate steady manifold: second-smallest singular value " +
                             format_double(gap) + " (gap to kernel " + format_double(gap - smallest) +
                             ")");
    }
    // the kernel vector carries an arbitrary phase; fix it through the trace
    ComplexMatrix rho = unvectorize(svd.matrixV().col(n - 1), 8);
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    const double residual = generator_residual(liouv, rho);
    if (residual > 1e-10) {
        throw NumericalError("steady state residual " + format_double(residual) + " exceeds 1e-10");
    }
    return DensityMatrix(std::move(rho));
}

}  // namespace fpcool
