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

#include "qss/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qss/channels.hpp"
#include "qss/parallel.hpp"
#include "qss/protocol.hpp"

namespace qss {

namespace {

void require_state(int i) {
  if (i < 1 || i > 8) throw std::out_of_range("state index must be in 1..8");
}

void require_gamma(double g) {
  if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
}

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

bool two_level_group(int i) { return i == 1 || i == 2 || i == 7 || i == 8; }

}  // namespace

FidelityPair fidelity_vs_gamma(int i, double gamma) {
  require_state(i);
  require_gamma(gamma);
  const Ket& psi = lambda_entry(i).ket;
  return {fidelity(psi, noisy_lambda_state(i, gamma)), closed_form_fidelity(i, gamma)};
}

double l1_coherence(const DensityMatrix& rho) {
  const CMatrix& m = rho.matrix();
  double s = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (r != c) s += std::abs(m(r, c));
    }
  }
  return s;
}

double rel_entropy_coherence(const DensityMatrix& rho) {
  const Eigen::VectorXd diag = rho.matrix().diagonal().real();
  return shannon_entropy(diag) - von_neumann_entropy(rho);
}

double closed_form_fidelity(int i, double gamma) {
  require_state(i);
  require_gamma(gamma);
  const double g = gamma;
  return two_level_group(i) ? std::sqrt(1.0 - g + g * g / 4.0) : std::sqrt(1.0 - g);
}

double closed_form_cl1(double gamma) {
  require_gamma(gamma);
  return 1.0 - gamma;
}

double closed_form_cr(int i, double gamma) {
  require_state(i);
  require_gamma(gamma);
  const double g = gamma;
  if (!two_level_group(i)) return 1.0 - g;
  return 0.5 - xlog2x((1.0 - g) * (1.0 - g) / 2.0) + xlog2x((2.0 - 2.0 * g + g * g) / 2.0);
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Fidelity: return "fidelity";
    case Metric::L1Coherence: return "cl1";
    case Metric::RelEntropyCoherence: return "cr";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view s) {
  for (Metric m : {Metric::Fidelity, Metric::L1Coherence, Metric::RelEntropyCoherence}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::vector<MetricCurve> metric_sweep(Metric metric, std::span<const int> states,
                                      std::span<const double> gammas, unsigned threads) {
  if (gammas.empty()) throw std::invalid_argument("metric_sweep: empty gamma grid");
  for (std::size_t k = 1; k < gammas.size(); ++k) {
    if (!(gammas[k] > gammas[k - 1])) {
      throw std::invalid_argument("metric_sweep: gamma grid must be strictly increasing");
    }
  }
  for (int i : states) require_state(i);
  return parallel_map(states.size(), threads, [&](std::size_t s) {
    const int i = states[s];
    MetricCurve curve{metric, i, {}};
    for (double g : gammas) {
      switch (metric) {
        case Metric::Fidelity: {
          const FidelityPair f = fidelity_vs_gamma(i, g);
          curve.samples.push_back({g, f.numeric, f.closed_form});
          break;
        }
        case Metric::L1Coherence:
          curve.samples.push_back({g, l1_coherence(noisy_lambda_state(i, g)), closed_form_cl1(g)});
          break;
        case Metric::RelEntropyCoherence:
          curve.samples.push_back(
              {g, rel_entropy_coherence(noisy_lambda_state(i, g)), closed_form_cr(i, g)});
          break;
      }
    }
    return curve;
  });
}

}  // namespace qss
