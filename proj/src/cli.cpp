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

#include "qss/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qss/grid.hpp"
#include "qss/metrics.hpp"
#include "qss/parallel.hpp"

namespace qss::cli {

namespace {

double parse_real(std::string_view s) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return x;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec, double lo, double hi) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  std::vector<double> grid;
  if (parts.size() == 1) {
    grid.push_back(parse_real(parts[0]));
  } else if (parts.size() == 3) {
    grid = make_grid(parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]));
  } else {
    throw std::invalid_argument("grid must be VALUE or START:STOP:STEP, got '" +
                                std::string(spec) + "'");
  }
  for (double x : grid) {
    if (!(x >= lo && x <= hi)) {
      throw std::invalid_argument("grid value " + format_number(x) + " outside [" +
                                  format_number(lo) + "," + format_number(hi) + "]");
    }
  }
  return grid;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_escape(cell_text(row[k]));
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              obj[t.columns[k]] = std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr;
            } else {
              obj[t.columns[k]] = v;
            }
          },
          row[k]);
    }
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << '\n';
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "gamma",       "alpha",       "beta",       "u",          "v",
      "er1_numeric", "er2_numeric", "er1_paper",  "er2_paper",  "p0_1",
      "p0_2",        "t_bits_numeric", "t_bits_paper", "feasible_u", "feasible_v"};
  return cols;
}

std::vector<Cell> report_row(const DiscriminationReport& r) {
  return {r.gamma,       r.alpha,       r.beta,           r.u,
          r.v,           r.er1_numeric, r.er2_numeric,    r.er1_paper,
          r.er2_paper,   r.p0_1.value,  r.p0_2.value,     r.t_bits_numeric,
          r.t_bits_paper, r.feasible_u, r.feasible_v};
}

std::vector<Cell> infeasible_row(double gamma) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<Cell> row{gamma};
  for (int k = 0; k < 12; ++k) row.emplace_back(nan);
  row.emplace_back(false);
  row.emplace_back(false);
  return row;
}

namespace {

struct Config {
  std::string gamma;
  std::string u;
  std::string v;
  std::string alpha;
  double phase = 0.0;
  std::string branch = "Z";
  double prior = 0.5;
  std::string out_path;
  std::string format = "csv";
  double tol = kFlagThreshold;
  std::uint64_t seed = 20240101;
  unsigned threads = 0;
  std::string metric = "all";
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void emit(const Config& cfg, const Table& t, std::ostream& out) {
  Output o(cfg.out_path, out);
  if (cfg.format == "json") {
    write_json(o.get(), t);
  } else {
    write_csv(o.get(), t);
  }
}

Pauli branch_of(const Config& cfg) {
  const auto p = parse_pauli(cfg.branch);
  if (!p) throw std::invalid_argument("unknown branch '" + cfg.branch + "'");
  return *p;
}

PipelineOptions pipeline_options(const Config& cfg) {
  if (!(cfg.prior > 0.0 && cfg.prior <= 1.0)) {
    throw std::invalid_argument("--prior must lie in (0,1]");
  }
  PipelineOptions o;
  o.branch = branch_of(cfg);
  o.prior = cfg.prior;
  o.phase = cfg.phase;
  o.flag_threshold = cfg.tol;
  return o;
}

std::string probability_text(double p) {
  std::string s = format_number(p);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

int cmd_ideal(const Config& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Pauli> branch;
  if (!cfg.branch.empty()) branch = branch_of(cfg);
  const IdealSummary s = run_ideal_exhaustive(branch, cfg.threads);

  Table t{{"alice", "bob", "outcome", "probability", "bob_received", "charlie_state",
           "decoded_alice", "success"},
          {}};
  for (const auto& r : s.records) {
    t.rows.push_back({std::string(to_string(r.alice)), std::string(to_string(r.bob)),
                      std::string(label(r.outcome)), r.probability,
                      std::string(to_string(r.bob_received)),
                      r.charlie_state ? std::string(to_string(*r.charlie_state)) : "",
                      r.decoded_alice ? std::string(to_string(*r.decoded_alice)) : "",
                      r.success});
  }
  if (!cfg.out_path.empty()) emit(cfg, t, out);
  out << s.pairs_decoded << '/' << s.pairs_total << " pairs decoded, success probability "
      << probability_text(s.success_probability) << '\n';
  if (s.failures > 0 || s.pairs_decoded != s.pairs_total) {
    err << "error: " << s.failures << " decode failures\n";
    return kFailure;
  }
  return kOk;
}

int cmd_noisy(const Config& cfg, std::ostream& out, std::ostream& err) {
  const PipelineOptions opts = pipeline_options(cfg);
  const auto gammas = parse_grid(cfg.gamma.empty() ? "0" : cfg.gamma);
  const auto us = parse_grid(cfg.u.empty() ? "0" : cfg.u);
  const auto vs = parse_grid(cfg.v.empty() ? "0" : cfg.v);
  const auto alphas =
      cfg.alpha.empty() ? std::vector<double>{1.0 / std::sqrt(2.0)} : parse_grid(cfg.alpha);

  const auto per_gamma = parallel_map(gammas.size(), cfg.threads, [&](std::size_t k) {
    std::vector<DiscriminationReport> rows;
    for (double u : us) {
      for (double v : vs) {
        for (double a : alphas) rows.push_back(evaluate(gammas[k], u, v, a, opts));
      }
    }
    return rows;
  });

  Table t{report_columns(), {}};
  std::size_t infeasible = 0;
  for (const auto& rows : per_gamma) {
    for (const auto& r : rows) {
      if (!r.feasible_u || !r.feasible_v) ++infeasible;
      t.rows.push_back(report_row(r));
    }
  }
  if (infeasible > 0) {
    err << "warning: " << infeasible << " of " << t.rows.size()
        << " rows use a POVM that is not positive semidefinite\n";
  }
  emit(cfg, t, out);
  return kOk;
}

int cmd_sweep(const Config& cfg, std::ostream& out, std::ostream& err) {
  const PipelineOptions opts = pipeline_options(cfg);
  const auto gammas = parse_grid(cfg.gamma.empty() ? "0:1:0.01" : cfg.gamma);
  const auto us = parse_grid(cfg.u.empty() ? "0:1:0.005" : cfg.u);
  const auto vs = parse_grid(cfg.v.empty() ? "0:1:0.005" : cfg.v);
  const auto alphas = cfg.alpha.empty() ? default_alpha_grid() : parse_grid(cfg.alpha);

  const auto results = parallel_map(gammas.size(), cfg.threads, [&](std::size_t k) {
    return optimize(gammas[k], us, vs, alphas, opts);
  });

  Table t{report_columns(), {}};
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].best) {
      t.rows.push_back(report_row(*results[k].best));
    } else {
      err << "warning: gamma=" << format_number(gammas[k]) << ": " << results[k].reason << '\n';
      t.rows.push_back(infeasible_row(gammas[k]));
    }
  }
  emit(cfg, t, out);
  return kOk;
}

int cmd_metrics(const Config& cfg, std::ostream& out, std::ostream&) {
  const auto gammas = parse_grid(cfg.gamma.empty() ? "0:1:0.01" : cfg.gamma);
  std::vector<Metric> metrics;
  if (cfg.metric == "all") {
    metrics = {Metric::Fidelity, Metric::L1Coherence, Metric::RelEntropyCoherence};
  } else if (const auto m = parse_metric(cfg.metric)) {
    metrics = {*m};
  } else {
    throw std::invalid_argument("unknown metric '" + cfg.metric + "'");
  }
  const std::array<int, 8> states{1, 2, 3, 4, 5, 6, 7, 8};

  Table t{{"gamma", "state_index", "metric", "numeric", "closed_form", "delta"}, {}};
  for (Metric m : metrics) {
    for (const auto& curve : metric_sweep(m, states, gammas, cfg.threads)) {
      for (const auto& s : curve.samples) {
        t.rows.push_back({s.gamma, static_cast<long>(curve.state), std::string(to_string(m)),
                          s.numeric, s.closed_form, std::abs(s.numeric - s.closed_form)});
      }
    }
  }
  emit(cfg, t, out);
  return kOk;
}

std::string section_title(const std::string& s) {
  static const std::map<std::string, std::string> titles{
      {"rho_prime", "rho_prime transcription"}, {"bell_form", "bell_form coefficients"}};
  const auto it = titles.find(s);
  return it == titles.end() ? s : it->second;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto gammas = parse_grid(cfg.gamma.empty() ? "0:1:0.25" : cfg.gamma);
  AuditOptions opts;
  opts.flag_threshold = cfg.tol;
  const auto rows = discrepancy_report(gammas, opts);

  Table t{{"section", "quantity", "gamma", "numeric", "reference", "delta", "status", "note"}, {}};
  std::vector<std::string> order;
  std::map<std::string, std::pair<int, int>> counts;  // pass, total
  for (const auto& r : rows) {
    t.rows.push_back({r.section, r.quantity, r.gamma, r.numeric, r.reference, r.delta,
                      std::string(r.flagged ? "flagged" : "pass"), r.note});
    if (!counts.count(r.section)) order.push_back(r.section);
    auto& c = counts[r.section];
    c.first += r.flagged ? 0 : 1;
    c.second += 1;
  }
  emit(cfg, t, out);

  std::ostream& summary = cfg.out_path.empty() ? err : out;
  for (const auto& s : order) {
    const auto [pass, total] = counts[s];
    summary << section_title(s) << ": " << pass << '/' << total << " pass";
    if (pass != total) summary << ", " << (total - pass) << " flagged";
    summary << '\n';
  }

  const auto broken = check_invariants(gammas, cfg.seed);
  if (!broken.empty()) {
    for (const auto& b : broken) err << "invariant violated: " << b << '\n';
    return kFailure;
  }
  summary << "invariants: ok\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Noisy GHZ secret-sharing simulator"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "Write results to PATH instead of stdout");
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  };
  auto add_pipeline = [&](CLI::App* sub) {
    sub->add_option("--gamma", cfg.gamma, "Damping strength: VALUE or START:STOP:STEP");
    sub->add_option("--u", cfg.u, "U-family parameter grid");
    sub->add_option("--v", cfg.v, "V-family parameter grid");
    sub->add_option("--alpha", cfg.alpha, "Dennis measurement amplitude grid");
    sub->add_option("--phase", cfg.phase, "Relative phase of beta (radians)");
    sub->add_option("--branch", cfg.branch, "Operation Bob reveals")
        ->check(CLI::IsMember({"I", "X", "iY", "Z"}));
    sub->add_option("--prior", cfg.prior, "Classification prior");
    sub->add_option("--tol", cfg.tol, "Discrepancy threshold");
  };

  CLI::App* ideal = app.add_subcommand("ideal", "Exhaustive noiseless decode of all 16 pairs");
  ideal->add_option("--branch", cfg.branch, "Only pairs where Bob applied this operation")
      ->check(CLI::IsMember({"I", "X", "iY", "Z"}));
  add_common(ideal);

  CLI::App* noisy = app.add_subcommand("noisy", "Evaluate the damped pipeline on a grid");
  add_pipeline(noisy);
  add_common(noisy);

  CLI::App* sweep = app.add_subcommand("sweep", "Minimize er1 + er2 per gamma");
  add_pipeline(sweep);
  add_common(sweep);

  CLI::App* metrics = app.add_subcommand("metrics", "Fidelity and coherence curves");
  metrics->add_option("--gamma", cfg.gamma, "Damping grid");
  metrics->add_option("--metric", cfg.metric, "Which curve")
      ->check(CLI::IsMember({"all", "fidelity", "cl1", "cr"}));
  add_common(metrics);

  CLI::App* verify = app.add_subcommand("verify", "Audit closed forms against the simulation");
  verify->add_option("--gamma", cfg.gamma, "Damping grid");
  verify->add_option("--tol", cfg.tol, "Discrepancy threshold");
  verify->add_option("--seed", cfg.seed, "Seed for randomized invariant checks");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  // `ideal` runs every branch unless one is asked for.
  if (ideal->parsed() && ideal->count("--branch") == 0) cfg.branch.clear();

  try {
    if (ideal->parsed()) return cmd_ideal(cfg, out, err);
    if (noisy->parsed()) return cmd_noisy(cfg, out, err);
    if (sweep->parsed()) return cmd_sweep(cfg, out, err);
    if (metrics->parsed()) return cmd_metrics(cfg, out, err);
    return cmd_verify(cfg, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace qss::cli
