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

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qss {

inline constexpr double kGridSnap = 1e-12;

/// start, start+step, ... up to stop. Points are start + k*step (no running
/// sum); a point within kGridSnap of stop is emitted as stop exactly.
inline std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(stop >= start)) throw std::invalid_argument("grid stop must not precede start");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double x = start + static_cast<double>(k) * step;
    if (std::abs(x - stop) <= kGridSnap) {
      out.push_back(stop);
      break;
    }
    if (x > stop) break;
    out.push_back(x);
  }
  return out;
}

/// 0:1:0.01 plus the Bell point 1/sqrt(2), ascending.
inline std::vector<double> default_alpha_grid() {
  std::vector<double> g = make_grid(0.0, 1.0, 0.01);
  const double bell = 1.0 / std::sqrt(2.0);
  auto it = g.begin();
  while (it != g.end() && *it < bell) ++it;
  g.insert(it, bell);
  return g;
}

}  // namespace qss
