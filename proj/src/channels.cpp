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

#include "qss/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qss/protocol.hpp"

namespace qss {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": parameter must lie in [0,1], got " +
                                std::to_string(p));
  }
}

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

double KrausChannel::completeness_error() const {
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& e : ops) sum += e.adjoint() * e;
  return max_abs(sum - identity(static_cast<std::size_t>(dim)));
}

KrausChannel amplitude_damping(double gamma) {
  require_probability(gamma, "amplitude_damping");
  return {2,
          {mat2(1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)), mat2(0.0, std::sqrt(gamma), 0.0, 0.0)},
          "amplitude_damping(" + std::to_string(gamma) + ")"};
}

KrausChannel dephasing(double p) {
  require_probability(p, "dephasing");
  return {2,
          {mat2(1.0, 0.0, 0.0, std::sqrt(1.0 - p)), mat2(0.0, 0.0, 0.0, std::sqrt(p))},
          "dephasing(" + std::to_string(p) + ")"};
}

KrausChannel depolarizing(double p) {
  require_probability(p, "depolarizing");
  const double a = std::sqrt(1.0 - 0.75 * p);
  const double b = std::sqrt(0.25 * p);
  const Complex i(0.0, 1.0);
  return {2,
          {a * mat2(1.0, 0.0, 0.0, 1.0), b * mat2(0.0, 1.0, 1.0, 0.0),
           b * mat2(0.0, -i, i, 0.0), b * mat2(1.0, 0.0, 0.0, -1.0)},
          "depolarizing(" + std::to_string(p) + ")"};
}

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho,
                    const std::vector<int>& targets) {
  if (targets.empty()) throw std::invalid_argument("apply: empty target list");
  if (channel.dim != 2 || channel.ops.empty()) {
    throw std::invalid_argument("apply: only nonempty single-qubit channels are supported");
  }
  const int n = rho.num_qubits();
  if (n < 1) throw std::invalid_argument("apply: register dimension is not a power of two");
  std::vector<int> slot(static_cast<std::size_t>(n) + 1, -1);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const int q = targets[t];
    if (q < 1 || q > n || slot[static_cast<std::size_t>(q)] != -1) {
      throw std::invalid_argument("apply: targets must be distinct qubits in 1.." +
                                  std::to_string(n));
    }
    slot[static_cast<std::size_t>(q)] = static_cast<int>(t);
  }

  const std::size_t k = channel.ops.size();
  std::size_t combos = 1;
  for (std::size_t t = 0; t < targets.size(); ++t) combos *= k;

  const CMatrix id2 = identity(2);
  CMatrix out = CMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  std::vector<std::size_t> choice(targets.size(), 0);
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    for (std::size_t t = targets.size(); t-- > 0;) {
      choice[t] = rest % k;
      rest /= k;
    }
    CMatrix full = CMatrix::Identity(1, 1);
    for (int q = 1; q <= n; ++q) {
      const int s = slot[static_cast<std::size_t>(q)];
      full = kron(full, s < 0 ? id2 : channel.ops[choice[static_cast<std::size_t>(s)]]);
    }
    out += full * rho.matrix() * full.adjoint();
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix noisy_lambda_state(int i, double gamma) {
  return apply(amplitude_damping(gamma), DensityMatrix::from_ket(lambda_entry(i).ket), {1, 2});
}

namespace {

struct Term {
  double coefficient;
  std::string_view row;
  std::string_view col;
};

DensityMatrix from_terms(const std::vector<Term>& terms) {
  CMatrix m = CMatrix::Zero(16, 16);
  for (const auto& t : terms) {
    m += t.coefficient * basis_ket(t.row) * basis_ket(t.col).adjoint();
  }
  return DensityMatrix(std::move(m));
}

}  // namespace

DensityMatrix transcribed_rho_prime(int i, double gamma) {
  require_probability(gamma, "transcribed_rho_prime");
  const double g = gamma;
  const double h = (1.0 - g) / 2.0;           // (1-g)/2
  const double hg = (1.0 - g) * g / 2.0;      // (1-g)g/2
  const double sq = (1.0 - 2.0 * g + g * g) / 2.0;
  const double gm1 = (g - 1.0) / 2.0;         // (g-1)/2
  switch (i) {
    case 1:
      return from_terms({{0.5, "0000", "0000"}, {h, "1111", "0000"}, {g * g / 2, "0011", "0011"},
                         {hg, "0111", "0111"}, {hg, "1011", "1011"}, {h, "0000", "1111"},
                         {sq, "1111", "1111"}});
    case 2:
      return from_terms({{0.5, "0000", "0000"}, {-h, "1111", "0000"}, {g * g / 2, "0011", "0011"},
                         {hg, "0111", "0111"}, {hg, "1011", "1011"}, {-h, "0000", "1111"},
                         {sq, "1111", "1111"}});
    case 3:
      return from_terms({{g / 2, "0000", "0000"}, {g / 2, "0011", "0011"}, {h, "0100", "0100"},
                         {h, "1011", "0100"}, {h, "0100", "1011"}, {h, "1011", "1011"}});
    case 4:
      return from_terms({{g / 2, "0000", "0000"}, {g / 2, "0011", "0011"}, {h, "0100", "0100"},
                         {-h, "1011", "0100"}, {-h, "0100", "1011"}, {h, "1011", "1011"}});
    case 5:
      return from_terms({{g / 2, "0000", "0000"}, {g / 2, "0011", "0011"}, {h, "0111", "0111"},
                         {h, "1000", "0111"}, {h, "0111", "1000"}, {h, "1000", "1000"}});
    case 6:
      return from_terms({{g / 2, "0000", "0000"}, {g / 2, "0011", "0011"}, {h, "0111", "0111"},
                         {-h, "1000", "0111"}, {-h, "0111", "1000"}, {h, "1000", "1000"}});
    case 7:
      return from_terms({{g * g / 2, "0000", "0000"}, {0.5, "0011", "0011"},
                         {gm1, "1100", "0011"}, {hg, "0100", "0100"}, {hg, "1000", "1000"},
                         {gm1, "0011", "1100"}, {sq, "1100", "1100"}});
    case 8:
      return from_terms({{g * g / 2, "0000", "0000"}, {0.5, "0011", "0011"},
                         {-gm1, "1100", "0011"}, {hg, "0100", "0100"}, {hg, "1000", "1000"},
                         {-gm1, "0011", "1100"}, {sq, "1100", "1100"}});
    default:
      throw std::out_of_range("transcribed_rho_prime: index must be in 1..8");
  }
}

}  // namespace qss
