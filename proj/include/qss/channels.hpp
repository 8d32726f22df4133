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

#include <string>
#include <vector>

#include "qss/qmath.hpp"

namespace qss {

/// Single-qubit operator-sum channel rho -> sum_k E_k rho E_k^dagger.
struct KrausChannel {
  int dim = 2;
  std::vector<CMatrix> ops;
  std::string label;

  /// ||sum_k E_k^dagger E_k - I||_inf
  double completeness_error() const;
};

/// E1 = diag(1, sqrt(1-gamma)), E2 = sqrt(gamma) |0><1|.
KrausChannel amplitude_damping(double gamma);
/// Phase damping: diag(1, sqrt(1-p)), diag(0, sqrt(p)). p = 1 erases all coherence.
KrausChannel dephasing(double p);
/// rho -> (1-p) rho + p I/2.
KrausChannel depolarizing(double p);

/// Applies `channel` independently to each 1-based qubit in `targets`. The
/// |targets|-fold Kraus products are expanded into full-register operators and
/// summed, so two targets give the four-term E_a (x) E_b expansion.
DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho,
                    const std::vector<int>& targets);

/// |lambda_i><lambda_i| after amplitude damping on qubits 1 and 2.
DensityMatrix noisy_lambda_state(int i, double gamma);

/// Closed-form coefficient listing of the damped states, entered term by term.
/// Cross terms are entered in both orders with the coefficients as listed, so
/// any sign slip in the listing survives into the matrix for the audit to find.
DensityMatrix transcribed_rho_prime(int i, double gamma);

}  // namespace qss
