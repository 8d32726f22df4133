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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qss/qmath.hpp"

namespace qss {

struct FidelityPair {
  double numeric;
  double closed_form;
};

/// Fidelity between |lambda_i> and its amplitude-damped image.
FidelityPair fidelity_vs_gamma(int i, double gamma);

/// Sum of |rho_jk| over j != k in the computational basis.
double l1_coherence(const DensityMatrix& rho);

/// S(diag rho) - S(rho), where diag rho keeps only the computational-basis
/// diagonal. Entropies are in bits.
double rel_entropy_coherence(const DensityMatrix& rho);

/// sqrt(1 - g + g^2/4) for i in {1,2,7,8}, sqrt(1 - g) for i in {3,4,5,6}.
double closed_form_fidelity(int i, double gamma);
/// 1 - g for every state.
double closed_form_cl1(double gamma);
/// 1 - g for i in {3..6}; the two-level entropy expression otherwise.
double closed_form_cr(int i, double gamma);

enum class Metric { Fidelity, L1Coherence, RelEntropyCoherence };

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view s);  // "fidelity", "cl1", "cr"

struct MetricSample {
  double gamma;
  double numeric;
  double closed_form;
};

struct MetricCurve {
  Metric metric;
  int state;
  std::vector<MetricSample> samples;
};

/// One curve per state, in the order given. Curves are computed concurrently
/// (threads = 0 uses the hardware count) and returned in input order.
std::vector<MetricCurve> metric_sweep(Metric metric, std::span<const int> states,
                                      std::span<const double> gammas, unsigned threads = 0);

}  // namespace qss
