// Copyright 2026 The qss Authors
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
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

/// Small dense complex linear algebra for registers of at most four qubits.
///
/// Qubit labels are 1-based and qubit 1 is the most significant bit of a
/// basis index, so |q1 q2 q3 q4> has index 8*q1 + 4*q2 + 2*q3 + q4.
namespace qss {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
/// Eigenvalues in [-kEigenFloor, 0) are treated as zero; anything lower is a bug.
inline constexpr double kEigenFloor = 1e-10;
/// Eigenvalues below this contribute nothing to entropies.
inline constexpr double kEntropyCutoff = 1e-12;

/// Hermitian, trace-carrying operator. The trace is the state's weight, so
/// unnormalized branch states are representable; use normalized() for unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix mat);

  static DensityMatrix from_ket(const Ket& ket);

  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
  /// Number of qubits, or -1 when dim is not a power of two.
  int num_qubits() const;
  const CMatrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }
  DensityMatrix normalized() const;
  DensityMatrix scaled(double factor) const;

 private:
  CMatrix mat_;
};

/// Max-abs entry of m - m^dagger.
double hermiticity_error(const CMatrix& m);
double max_abs(const CMatrix& m);

/// Computational basis ket from a bit string such as "0110" (qubit 1 first).
Ket basis_ket(std::string_view bits);
Ket basis_ket(std::size_t dim, std::size_t index);

CMatrix kron(const CMatrix& a, const CMatrix& b);
Ket kron(const Ket& a, const Ket& b);
CMatrix identity(std::size_t dim);

/// Trace out the 1-based qubits in `traced` from a 2^qubits_total register.
DensityMatrix partial_trace(const DensityMatrix& rho, int qubits_total,
                            const std::vector<int>& traced);

struct HermitianEigen {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // column k pairs with values[k]
};

HermitianEigen eig_hermitian(const CMatrix& m);

/// Eigenvalues after the eigen-floor; throws std::domain_error below -kEigenFloor.
Eigen::VectorXd floored_eigenvalues(const CMatrix& m);

CMatrix psd_sqrt(const CMatrix& m);

/// Entropy in bits of a unit-trace density matrix.
double von_neumann_entropy(const DensityMatrix& rho);

/// Shannon entropy in bits of a probability vector, 0 log 0 := 0.
double shannon_entropy(const Eigen::VectorXd& probabilities);

/// Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// sqrt(<psi|sigma|psi>), the pure-state case of the above.
double fidelity(const Ket& psi, const DensityMatrix& sigma);

struct PsdCheck {
  bool psd;
  double min_eigenvalue;
};

PsdCheck is_psd(const CMatrix& m, double tol);

}  // namespace qss
