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

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qss/discrimination.hpp"

namespace qss::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // decode failure or broken invariant
  kUsage = 2,
};

/// "start:stop:step" or a single value. Every point must lie in [lo, hi].
std::vector<double> parse_grid(std::string_view spec, double lo = 0.0, double hi = 1.0);

/// 12 significant digits, shortest of fixed/scientific, locale-free. NaN prints
/// as "nan" and -0 as "0".
std::string format_number(double x);

using Cell = std::variant<double, long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void write_csv(std::ostream& os, const Table& t);
/// Array of flat objects keyed by column name; NaN becomes null.
void write_json(std::ostream& os, const Table& t);

/// Column order shared by `noisy` and `sweep`.
const std::vector<std::string>& report_columns();
std::vector<Cell> report_row(const DiscriminationReport& r);
/// Placeholder row for a grid point with no feasible (u, v).
std::vector<Cell> infeasible_row(double gamma);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qss::cli
