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

#include "fpcool/qstate.hpp"

#include <cmath>
#include <string>

#include "fpcool/error.hpp"

namespace fpcool {

StateDiagnostics diagnose_state(const ComplexMatrix& m)
{
    StateDiagnostics d;
    d.hermiticity_error = (m - m.adjoint()).norm();
    d.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const StateTolerance& tol)
    : matrix_(std::move(m))
{
    if (matrix_.rows() != matrix_.cols() || (matrix_.rows() != 2 && matrix_.rows() != 8)) {
        throw InvalidArgument("density matrix must be 2x2 or 8x8, got " +
                              std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()));
    }
    const StateDiagnostics d = diagnose_state(matrix_);
    if (d.hermiticity_error > tol.hermiticity) {
        throw InvalidArgument("density matrix not Hermitian: ||M - M^+||_F = " +
                              std::to_string(d.hermiticity_error));
    }
    if (d.trace_error > tol.trace) {
        throw InvalidArgument("density matrix trace differs from 1 by " +
                              std::to_string(d.trace_error));
    }
    if (d.min_eigenvalue < -tol.positivity) {
        throw InvalidArgument("density matrix not positive semidefinite: min eigenvalue " +
                              std::to_string(d.min_eigenvalue));
    }
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix tensor_product(const std::vector<ComplexMatrix>& factors)
{
    if (factors.empty()) {
        throw InvalidArgument("tensor_product of an empty list");
    }
    ComplexMatrix out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        out = tensor_product(out, factors[k]);
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int keep_qubit)
{
    if (rho.rows() != 8 || rho.cols() != 8) {
        throw InvalidArgument("partial_trace expects an 8x8 three-qubit matrix");
    }
    if (keep_qubit < 1 || keep_qubit > 3) {
        throw InvalidArgument("keep_qubit must be 1, 2 or 3");
    }
    // bit position of the kept qubit in the index q1 q2 q3
    const int shift = 3 - keep_qubit;
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const int rest_i = i & ~(1 << shift);
            const int rest_j = j & ~(1 << shift);
            if (rest_i != rest_j) {
                continue;
            }
            out((i >> shift) & 1, (j >> shift) & 1) += rho(i, j);
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep_qubit)
{
    if (rho.dim() != 8) {
        throw InvalidArgument("partial_trace expects a three-qubit state");
    }
    return DensityMatrix(partial_trace(rho.matrix(), keep_qubit));
}

HermitianEigen eig_hermitian(const ComplexMatrix& m, double hermiticity_tol)
{
    if (m.rows() != m.cols()) {
        throw InvalidArgument("eig_hermitian expects a square matrix");
    }
    const double herm = (m - m.adjoint()).norm();
    if (herm > hermiticity_tol) {
        throw InvalidArgument("eig_hermitian: input not Hermitian (||M - M^+||_F = " +
                              std::to_string(herm) + ")");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eig_hermitian: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("frobenius_distance: shape mismatch");
    }
    return (a - b).norm();
}

ComplexVector basis_ket(std::string_view bits)
{
    if (bits.empty() || bits.size() > 6) {
        throw InvalidArgument("basis_ket: expected 1 to 6 qubit labels");
    }
    Eigen::Index index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw InvalidArgument("basis_ket: labels must be 0 or 1");
        }
        index = 2 * index + (c == '1' ? 1 : 0);
    }
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << bits.size());
    v(index) = 1.0;
    return v;
}

ComplexMatrix embed_single_qubit(const ComplexMatrix& op, int qubit)
{
    if (op.rows() != 2 || op.cols() != 2) {
        throw InvalidArgument("embed_single_qubit expects a 2x2 operator");
    }
    if (qubit < 1 || qubit > 3) {
        throw InvalidArgument("qubit index must be 1, 2 or 3");
    }
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    std::vector<ComplexMatrix> factors(3, id);
    factors[static_cast<std::size_t>(qubit - 1)] = op;
    return tensor_product(factors);
}

}  // namespace fpcool
