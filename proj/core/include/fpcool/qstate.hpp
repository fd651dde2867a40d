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

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fpcool {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Tolerances used when validating density matrices.
struct StateTolerance {
    double hermiticity = 1e-10;
    double trace = 1e-9;
    double positivity = 1e-9;
};

/// Summary of how far a matrix is from being a valid quantum state.
struct StateDiagnostics {
    double hermiticity_error = 0.0;  // ||M - M^dagger||_F
    double trace_error = 0.0;        // |Tr M - 1|
    double min_eigenvalue = 0.0;     // of (M + M^dagger)/2
};

StateDiagnostics diagnose_state(const ComplexMatrix& m);

/// A validated density matrix of one qubit (dim 2) or three qubits (dim 8).
///
/// Construction checks hermiticity, unit trace and positivity; the stored
/// matrix is immutable afterwards.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m, const StateTolerance& tol = {});

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }

    double population(int level) const { return matrix_(level, level).real(); }

private:
    ComplexMatrix matrix_;
};

/// Result of a Hermitian eigendecomposition; eigenvalues ascend and the
/// columns of `vectors` are the matching orthonormal eigenvectors.
struct HermitianEigen {
    Eigen::VectorXd values;
    ComplexMatrix vectors;
};

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product of a list, grouped left to right: ((m0 ⊗ m1) ⊗ m2) ...
ComplexMatrix tensor_product(const std::vector<ComplexMatrix>& factors);

/// Reduced state of one qubit of a three-qubit state. Qubit 1 is the most
/// significant tensor factor (|q1 q2 q3>).
DensityMatrix partial_trace(const DensityMatrix& rho, int keep_qubit);

/// Same reduction on an unvalidated 8x8 matrix.
ComplexMatrix partial_trace(const ComplexMatrix& rho, int keep_qubit);

HermitianEigen eig_hermitian(const ComplexMatrix& m, double hermiticity_tol = 1e-8);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Basis ket |bits> of a register; `bits` is read left to right as q1 q2 ...
ComplexVector basis_ket(std::string_view bits);

/// Embeds a single-qubit operator on `qubit` (1-based) of a three-qubit register.
ComplexMatrix embed_single_qubit(const ComplexMatrix& op, int qubit);

}  // namespace fpcool
