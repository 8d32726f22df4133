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

#include "qss/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qss/channels.hpp"
#include "qss/grid.hpp"

namespace qss {

namespace {

constexpr double kZeroBranch = 1e-14;

std::array<Eigen::Index, 2> subspace_indices(Subspace s) {
  return s == Subspace::Even ? std::array<Eigen::Index, 2>{0, 3}
                             : std::array<Eigen::Index, 2>{1, 2};
}

Subspace subspace_of(Classifier c) { return c == Classifier::M1 ? Subspace::Even : Subspace::Odd; }

CMatrix embed(const CMatrix& op2, Subspace s) {
  const auto idx = subspace_indices(s);
  CMatrix out = CMatrix::Zero(4, 4);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) out(idx[r], idx[c]) = op2(r, c);
  }
  return out;
}

CMatrix mat2(double a, double b, double c, double d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

std::array<DensityMatrix, 4> damped_branch(double gamma, Pauli branch) {
  const auto labels = branch_labels(branch);
  return {noisy_lambda_state(labels[0], gamma), noisy_lambda_state(labels[1], gamma),
          noisy_lambda_state(labels[2], gamma), noisy_lambda_state(labels[3], gamma)};
}

WeightedEnsemble ensemble_from(const std::array<DensityMatrix, 4>& damped,
                               const std::array<int, 4>& labels, const GenMeasurement& m,
                               Classifier c, double prior) {
  WeightedEnsemble e{c, {}};
  for (std::size_t k = 0; k < 4; ++k) {
    const Projection p = dennis_project(damped[k], m);
    if (!p.state) {
      e.members.push_back({labels[k], std::nullopt, 0.0});
      continue;
    }
    Classified cl = classify(*p.state, c, prior);
    e.members.push_back({labels[k], std::move(cl.state), cl.weight});
  }
  return e;
}

}  // namespace

GenMeasurement GenMeasurement::bell(DennisOutcome kind) {
  const double h = 1.0 / std::sqrt(2.0);
  return {h, h, kind};
}

GenMeasurement GenMeasurement::from_alpha(double alpha, double phase, DennisOutcome kind) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("GenMeasurement: alpha must lie in [0,1]");
  }
  const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  return {alpha, std::polar(beta, phase), kind};
}

CMatrix measurement_operator(const GenMeasurement& m) {
  if (m.normalization_error() > 1e-12) {
    throw std::invalid_argument("measurement_operator: |alpha|^2 + |beta|^2 must equal 1");
  }
  const bool p_type = m.kind == DennisOutcome::P1 || m.kind == DennisOutcome::P2;
  const bool first = m.kind == DennisOutcome::P1 || m.kind == DennisOutcome::Q1;
  const Ket lo = basis_ket(p_type ? "00" : "01");
  const Ket hi = basis_ket(p_type ? "11" : "10");
  // The second vector is the orthogonal partner of the first, which is
  // alpha|lo> - beta|hi> whenever |alpha| = |beta|.
  const Ket v = first ? Ket(m.alpha * lo + m.beta * hi)
                      : Ket(std::conj(m.beta) * lo - std::conj(m.alpha) * hi);
  return v * v.adjoint();
}

Projection dennis_project(const DensityMatrix& rho_prime, const GenMeasurement& m) {
  if (rho_prime.dim() != 16) throw std::invalid_argument("dennis_project: expected a 16-dim state");
  const CMatrix op = kron(identity(4), measurement_operator(m));
  const DensityMatrix projected(op * rho_prime.matrix() * op.adjoint());
  const DensityMatrix reduced = partial_trace(projected, 4, {3, 4});
  const double p = reduced.trace();
  if (p < kZeroBranch) return {p, std::nullopt};
  return {p, reduced.normalized()};
}

CMatrix classifier_projector(Classifier c) {
  CMatrix m = CMatrix::Zero(4, 4);
  for (Eigen::Index k : subspace_indices(subspace_of(c))) m(k, k) = 1.0;
  return m;
}

Classified classify(const DensityMatrix& rho00, Classifier which, double prior) {
  if (rho00.dim() != 4) throw std::invalid_argument("classify: expected a 4-dim state");
  if (!(prior > 0.0)) throw std::invalid_argument("classify: prior must be positive");
  const CMatrix m = classifier_projector(which);
  const DensityMatrix projected(m * rho00.matrix() * m.adjoint());
  const double t = projected.trace();
  if (t < kZeroBranch) return {0.0, std::nullopt};
  return {prior * t, projected.normalized()};
}

CMatrix EnsembleMember::weighted() const {
  if (!state) return CMatrix::Zero(4, 4);
  return weight * state->matrix();
}

std::array<int, 4> branch_labels(Pauli bob) {
  // Slots follow the Bell pair Charlie is left with after Dennis reports Phi+:
  // Phi+, Phi-, Psi+, Psi-.
  if (bob == Pauli::Z || bob == Pauli::I) return {1, 2, 5, 6};
  return {7, 8, 3, 4};
}

WeightedEnsemble build_ensemble(double gamma, const GenMeasurement& m, Classifier c,
                                const EnsembleOptions& opts) {
  return ensemble_from(damped_branch(gamma, opts.branch), branch_labels(opts.branch), m, c,
                       opts.prior);
}

InconclusiveBound inconclusive_bound(const WeightedEnsemble& ensemble, WeightMode mode) {
  const auto& mem = ensemble.members;
  const std::size_t n = mem.size();
  if (n < 2) return {0.0, 0.0};
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = mem[i].weight;
  if (mode == WeightMode::Normalized) {
    double total = 0.0;
    for (double x : w) total += x;
    if (total > 0.0) {
      for (double& x : w) x /= total;
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !mem[i].state || !mem[j].state) continue;
      const double wij = w[i] * w[j];
      if (wij == 0.0) continue;
      const double f = fidelity(*mem[i].state, *mem[j].state);
      sum += wij * f * f;
    }
  }
  const double nn = static_cast<double>(n);
  const double value = std::sqrt(std::max(0.0, nn / (nn - 1.0) * sum));
  return {value, std::min(value, 1.0)};
}

CMatrix Povm::sum() const {
  CMatrix s = CMatrix::Zero(2, 2);
  for (const auto& e : elements) s += e.op;
  return s;
}

Povm povm_U(double u, std::array<int, 4> labels) {
  return {Subspace::Even,
          {{labels[0], 0.5 * mat2(1.0 - 2.0 * u, 1.0, 1.0, 1.0)},
           {labels[1], 0.5 * mat2(1.0 - 2.0 * u, -1.0, -1.0, 1.0)},
           {labels[2], mat2(u, 0.0, 0.0, 0.0)},
           {labels[3], mat2(u, 0.0, 0.0, 0.0)}}};
}

Povm povm_V(double v, std::array<int, 4> labels) {
  return {Subspace::Odd,
          {{labels[0], mat2(0.0, v, v, 0.0)},
           {labels[1], mat2(0.0, v, v, 0.0)},
           {labels[2], 0.5 * mat2(1.0, 1.0 - 2.0 * v, 1.0 - 2.0 * v, 1.0)},
           {labels[3], 0.5 * mat2(1.0, -1.0 - 2.0 * v, -1.0 - 2.0 * v, 1.0)}}};
}

PovmFamily u_family() { return {"u", Subspace::Even, &povm_U}; }
PovmFamily v_family() { return {"v", Subspace::Odd, &povm_V}; }

std::vector<FeasibilityPoint> psd_scan(const PovmFamily& family, std::span<const double> grid,
                                       double tol) {
  std::vector<FeasibilityPoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    const Povm povm = family.make(x, kDefaultSlots);
    FeasibilityPoint pt{x, {}, true};
    for (const auto& e : povm.elements) {
      const PsdCheck c = is_psd(e.op, tol);
      pt.min_eigenvalues.push_back(c.min_eigenvalue);
      pt.feasible = pt.feasible && c.psd;
    }
    out.push_back(std::move(pt));
  }
  return out;
}

double error_rate(const Povm& povm, const WeightedEnsemble& ensemble) {
  if (povm.subspace != subspace_of(ensemble.classifier)) {
    throw std::invalid_argument("error_rate: POVM subspace does not match the classifier");
  }
  if (povm.elements.size() != ensemble.members.size()) {
    throw std::invalid_argument("error_rate: POVM and ensemble sizes differ");
  }
  double total = 0.0;
  std::set<int> used;
  for (const auto& e : povm.elements) {
    const auto it = std::find_if(ensemble.members.begin(), ensemble.members.end(),
                                 [&](const EnsembleMember& m) { return m.label == e.label; });
    if (it == ensemble.members.end() || !used.insert(e.label).second) {
      throw std::invalid_argument("error_rate: POVM label " + std::to_string(e.label) +
                                  " has no unique ensemble member");
    }
    total += (embed(e.op, povm.subspace) * it->weighted()).trace().real();
  }
  return 1.0 - 0.5 * total;
}

double closed_form_er1(double u, double gamma) {
  const double g = gamma;
  return 0.5 * (1.0 + (1.0 - g) / 2.0 - (1.0 - g) * (1.0 - g) / 4.0 - u * g -
                0.25 * (1.0 - 2.0 * u) * (1.0 + g * g));
}

double closed_form_er2(double v, double gamma) {
  const double g = gamma;
  return 0.25 * (1.0 - (1.0 - g) * (1.0 - 2.0 * v - 2.0 * v * g) + g);
}

double t_bits(double er1, double er2) { return 4.0 - (er1 + er2); }

namespace {

std::vector<double> min_eigs(const Povm& p) {
  std::vector<double> out;
  for (const auto& e : p.elements) out.push_back(is_psd(e.op, 0.0).min_eigenvalue);
  return out;
}

bool all_above(const std::vector<double>& v, double tol) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x >= -tol; });
}

DiscriminationReport report_from(double gamma, double u, double v, const GenMeasurement& m,
                                 const WeightedEnsemble& e1, const WeightedEnsemble& e2,
                                 const std::array<int, 4>& labels, const PipelineOptions& opts) {
  DiscriminationReport r;
  r.gamma = gamma;
  r.alpha = std::abs(m.alpha);
  r.beta = std::abs(m.beta);
  r.u = u;
  r.v = v;
  const Povm pu = povm_U(u, labels);
  const Povm pv = povm_V(v, labels);
  r.er1_numeric = error_rate(pu, e1);
  r.er2_numeric = error_rate(pv, e2);
  r.er1_paper = closed_form_er1(u, gamma);
  r.er2_paper = closed_form_er2(v, gamma);
  r.p0_1 = inconclusive_bound(e1);
  r.p0_2 = inconclusive_bound(e2);
  r.t_bits_numeric = t_bits(r.er1_numeric, r.er2_numeric);
  r.t_bits_paper = t_bits(r.er1_paper, r.er2_paper);
  r.min_eig_u = min_eigs(pu);
  r.min_eig_v = min_eigs(pv);
  r.feasible_u = all_above(r.min_eig_u, opts.psd_tol);
  r.feasible_v = all_above(r.min_eig_v, opts.psd_tol);
  const std::array<Discrepancy, 3> checks{{
      {"er1", r.er1_numeric, r.er1_paper, std::abs(r.er1_numeric - r.er1_paper)},
      {"er2", r.er2_numeric, r.er2_paper, std::abs(r.er2_numeric - r.er2_paper)},
      {"t_bits", r.t_bits_numeric, r.t_bits_paper, std::abs(r.t_bits_numeric - r.t_bits_paper)},
  }};
  for (const auto& d : checks) {
    if (d.delta > opts.flag_threshold) r.discrepancies.push_back(d);
  }
  return r;
}

}  // namespace

DiscriminationReport evaluate(double gamma, double u, double v, double alpha,
                              const PipelineOptions& opts) {
  const GenMeasurement m = GenMeasurement::from_alpha(alpha, opts.phase);
  const auto labels = branch_labels(opts.branch);
  const auto damped = damped_branch(gamma, opts.branch);
  const auto e1 = ensemble_from(damped, labels, m, Classifier::M1, opts.prior);
  const auto e2 = ensemble_from(damped, labels, m, Classifier::M2, opts.prior);
  return report_from(gamma, u, v, m, e1, e2, labels, opts);
}

OptimizeResult optimize(double gamma, std::span<const double> u_grid,
                        std::span<const double> v_grid, std::span<const double> alpha_grid,
                        const PipelineOptions& opts) {
  if (u_grid.empty() || v_grid.empty() || alpha_grid.empty()) {
    return {false, "empty parameter grid", std::nullopt};
  }
  auto feasible = [&](const PovmFamily& fam, std::span<const double> grid) {
    std::vector<double> ok;
    for (const auto& pt : psd_scan(fam, grid, opts.psd_tol)) {
      if (pt.feasible) ok.push_back(pt.parameter);
    }
    std::sort(ok.begin(), ok.end());
    ok.erase(std::unique(ok.begin(), ok.end()), ok.end());
    return ok;
  };
  const std::vector<double> us = feasible(u_family(), u_grid);
  const std::vector<double> vs = feasible(v_family(), v_grid);
  if (us.empty()) return {false, "no PSD-feasible u on the grid", std::nullopt};
  if (vs.empty()) return {false, "no PSD-feasible v on the grid", std::nullopt};

  std::vector<double> alphas(alpha_grid.begin(), alpha_grid.end());
  std::sort(alphas.begin(), alphas.end(), std::greater<>());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  const auto labels = branch_labels(opts.branch);
  const auto damped = damped_branch(gamma, opts.branch);
  std::vector<std::vector<double>> er1(alphas.size());
  std::vector<std::vector<double>> er2(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const GenMeasurement m = GenMeasurement::from_alpha(alphas[a], opts.phase);
    const auto e1 = ensemble_from(damped, labels, m, Classifier::M1, opts.prior);
    const auto e2 = ensemble_from(damped, labels, m, Classifier::M2, opts.prior);
    for (double u : us) er1[a].push_back(error_rate(povm_U(u, labels), e1));
    for (double v : vs) er2[a].push_back(error_rate(povm_V(v, labels), e2));
  }

  // Lexicographic scan order (u asc, v asc, alpha desc) with strict improvement
  // implements the tie-break.
  double best = std::numeric_limits<double>::infinity();
  std::size_t bu = 0, bv = 0, ba = 0;
  for (std::size_t i = 0; i < us.size(); ++i) {
    for (std::size_t j = 0; j < vs.size(); ++j) {
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        const double total = er1[a][i] + er2[a][j];
        if (total < best) {
          best = total;
          bu = i;
          bv = j;
          ba = a;
        }
      }
    }
  }
  return {true, "", evaluate(gamma, us[bu], vs[bv], alphas[ba], opts)};
}

CMatrix transcribed_rho00(int i, double gamma, Complex alpha, Complex beta) {
  const double g = gamma;
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  const Complex ac_b = std::conj(alpha) * beta;  // alpha* beta
  const Complex a_bc = alpha * std::conj(beta);  // alpha beta*
  CMatrix m = CMatrix::Zero(4, 4);
  switch (i) {
    case 1:
    case 2: {
      const double s = i == 1 ? 1.0 : -1.0;
      m(0, 0) = a2 + b2 * g * g;
      m(0, 3) = -s * ac_b * (g - 1.0);
      m(1, 1) = -b2 * (g - 1.0) * g;
      m(2, 2) = -b2 * (g - 1.0) * g;
      m(3, 0) = -s * a_bc * (g - 1.0);
      m(3, 3) = b2 * (g - 1.0) * (g - 1.0);
      return m;
    }
    case 5:
    case 6: {
      const double s = i == 5 ? 1.0 : -1.0;
      m(0, 0) = g;
      m(1, 1) = -b2 * (g - 1.0);
      m(1, 2) = -s * a_bc * (g - 1.0);
      m(2, 1) = -s * ac_b * (g - 1.0);
      m(2, 2) = -a2 * (g - 1.0);
      return m;
    }
    default:
      throw std::out_of_range("transcribed_rho00: index must be one of 1, 2, 5, 6");
  }
}

CMatrix transcribed_rho_classified(int i, Classifier c, double gamma, Complex alpha,
                                   Complex beta) {
  const double g = gamma;
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  const Complex ac_b = std::conj(alpha) * beta;
  const Complex a_bc = alpha * std::conj(beta);
  CMatrix m = CMatrix::Zero(4, 4);
  if (i != 1 && i != 2 && i != 5 && i != 6) {
    throw std::out_of_range("transcribed_rho_classified: index must be one of 1, 2, 5, 6");
  }
  const double s = (i == 1 || i == 5) ? 1.0 : -1.0;
  if (c == Classifier::M1) {
    if (i <= 2) {
      m(0, 0) = (a2 + b2 * g * g) / 2.0;
      m(0, 3) = s * (1.0 - g) * ac_b / 2.0;
      m(3, 0) = s * (1.0 - g) * a_bc / 2.0;
      m(3, 3) = b2 * (g - 1.0) * (g - 1.0) / 2.0;
    } else {
      m(0, 0) = g / 2.0;
    }
  } else {
    if (i <= 2) {
      m(1, 1) = b2 * g * (1.0 - g) / 2.0;
      m(2, 2) = b2 * g * (1.0 - g) / 2.0;
    } else {
      m(1, 1) = b2 * (1.0 - g) / 2.0;
      m(1, 2) = s * a_bc * (1.0 - g) / 2.0;
      m(2, 1) = s * ac_b * (1.0 - g) / 2.0;
      m(2, 2) = a2 * (1.0 - g) / 2.0;
    }
  }
  return m;
}

double closed_form_eta(int i, double gamma, Complex alpha, Complex beta) {
  const double g = gamma;
  if (i == 1 || i == 2) {
    return (std::norm(alpha) + std::norm(beta) * ((g - 1.0) * (g - 1.0) + g * g)) / 2.0;
  }
  if (i == 5 || i == 6) return g / 2.0;
  throw std::out_of_range("closed_form_eta: index must be one of 1, 2, 5, 6");
}

double closed_form_zeta(int i, double gamma, Complex /*alpha*/, Complex beta) {
  const double g = gamma;
  if (i == 1 || i == 2) return std::norm(beta) * g * (1.0 - g) / 2.0;
  if (i == 5 || i == 6) return (1.0 - g) / 2.0;
  throw std::out_of_range("closed_form_zeta: index must be one of 1, 2, 5, 6");
}

namespace {

std::string fmt_param(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string join_set(const std::vector<double>& xs) {
  std::ostringstream os;
  os.precision(6);
  os << '{';
  for (std::size_t k = 0; k < xs.size(); ++k) os << (k ? ";" : "") << xs[k];
  os << '}';
  return os.str();
}

}  // namespace

std::vector<LedgerRow> discrepancy_report(std::span<const double> gamma_grid,
                                          const AuditOptions& opts) {
  const double thr = opts.flag_threshold;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<LedgerRow> rows;
  auto add = [&](std::string section, std::string quantity, double gamma, double numeric,
                 double reference, double delta, std::string note = {}) {
    rows.push_back({std::move(section), std::move(quantity), gamma, numeric, reference, delta,
                    delta > thr, std::move(note)});
  };
  auto add_matrix = [&](std::string section, std::string quantity, double gamma,
                        const CMatrix& numeric, const CMatrix& reference) {
    add(std::move(section), std::move(quantity), gamma, max_abs(numeric), max_abs(reference),
        max_abs(numeric - reference), "max-abs entrywise difference");
  };

  // Encoded states against their listed Bell-pair forms, whose coefficient is 1/2.
  for (const auto& entry : lambda_table()) {
    for (const auto& t : bell_decompose(entry.ket)) {
      add("bell_form",
          "lambda_" + std::to_string(entry.index) + " " + std::string(to_string(t.first)) +
              std::string(to_string(t.second)),
          nan, std::abs(t.coefficient), 0.5, std::abs(std::abs(t.coefficient) - 0.5),
          "listed coefficient magnitude 1/2");
    }
  }

  const std::array<std::pair<double, std::string>, 2> params{
      {{1.0 / std::sqrt(2.0), "bell"}, {0.8, "alpha=0.8"}}};
  const std::array<int, 4> z_labels = branch_labels(Pauli::Z);

  for (double g : gamma_grid) {
    for (int i = 1; i <= 8; ++i) {
      add_matrix("rho_prime", "rho'_" + std::to_string(i), g, noisy_lambda_state(i, g).matrix(),
                 transcribed_rho_prime(i, g).matrix());
    }
    for (const auto& [alpha, tag] : params) {
      const GenMeasurement m = GenMeasurement::from_alpha(alpha);
      const auto e1 = build_ensemble(g, m, Classifier::M1);
      const auto e2 = build_ensemble(g, m, Classifier::M2);
      for (std::size_t k = 0; k < 4; ++k) {
        const int i = z_labels[k];
        const std::string id = std::to_string(i) + " (" + tag + ")";
        const Projection p = dennis_project(noisy_lambda_state(i, g), m);
        add_matrix("rho00", "rho00_" + id, g, p.state ? p.state->matrix() : CMatrix::Zero(4, 4),
                   transcribed_rho00(i, g, m.alpha, m.beta));
        add_matrix("rho_M1", "rhoM1_" + id, g, e1.members[k].weighted(),
                   transcribed_rho_classified(i, Classifier::M1, g, m.alpha, m.beta));
        add_matrix("rho_M2", "rhoM2_" + id, g, e2.members[k].weighted(),
                   transcribed_rho_classified(i, Classifier::M2, g, m.alpha, m.beta));
        const double eta = closed_form_eta(i, g, m.alpha, m.beta);
        const double zeta = closed_form_zeta(i, g, m.alpha, m.beta);
        add("eta", "eta_" + id, g, e1.members[k].weight, eta,
            std::abs(e1.members[k].weight - eta));
        add("zeta", "zeta_" + id, g, e2.members[k].weight, zeta,
            std::abs(e2.members[k].weight - zeta));
      }
    }
    for (double x : {0.0, 0.5}) {
      const DiscriminationReport r = evaluate(g, x, x, 1.0 / std::sqrt(2.0));
      add("er1", "er1(u=" + fmt_param(x) + ")", g, r.er1_numeric, r.er1_paper,
          std::abs(r.er1_numeric - r.er1_paper));
      add("er2", "er2(v=" + fmt_param(x) + ")", g, r.er2_numeric, r.er2_paper,
          std::abs(r.er2_numeric - r.er2_paper));
    }
  }

  const std::vector<double> u_grid = opts.u_grid.empty() ? make_grid(0.0, 1.0, 0.005) : opts.u_grid;
  const std::vector<double> v_grid = opts.v_grid.empty() ? make_grid(0.0, 1.0, 0.005) : opts.v_grid;
  for (const auto& [fam, grid] : {std::pair{u_family(), u_grid}, std::pair{v_family(), v_grid}}) {
    std::vector<double> ok;
    double worst = 0.0;
    for (const auto& pt : psd_scan(fam, grid, opts.psd_tol)) {
      if (pt.feasible) ok.push_back(pt.parameter);
      for (double e : pt.min_eigenvalues) worst = std::min(worst, e);
    }
    // numeric/reference: feasible points out of the grid; delta: the most
    // negative element eigenvalue seen, as a magnitude.
    add("psd_" + fam.parameter, fam.parameter + " feasible points", nan,
        static_cast<double>(ok.size()), static_cast<double>(grid.size()), -worst,
        "feasible " + fam.parameter + " = " + join_set(ok) + " of " +
            std::to_string(grid.size()) + " grid points");
  }
  return rows;
}

namespace {

CMatrix random_density(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = Complex(n(rng), n(rng));
  }
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace

std::vector<std::string> check_invariants(std::span<const double> gamma_grid, std::uint64_t seed) {
  std::vector<std::string> broken;
  auto require = [&](bool ok, const std::string& name) {
    if (!ok && std::find(broken.begin(), broken.end(), name) == broken.end()) {
      broken.push_back(name);
    }
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Encoding table: 16 pairs, two per entry, each pair reproducing its entry exactly.
  std::array<int, 9> hits{};
  for (Pauli a : kAllPaulis) {
    for (Pauli b : kAllPaulis) {
      const Encoding e = encode(a, b);
      ++hits[static_cast<std::size_t>(e.index)];
      require((e.ket - lambda_entry(e.index).ket).cwiseAbs().maxCoeff() < 1e-12,
              "encoding reproduces the lambda table");
    }
  }
  for (int i = 1; i <= 8; ++i) require(hits[static_cast<std::size_t>(i)] == 2, "lambda table covers 16 pairs");

  for (double g : gamma_grid) {
    require(amplitude_damping(g).completeness_error() < 1e-12, "Kraus completeness");
    std::vector<DensityMatrix> inputs;
    for (int i = 1; i <= 8; ++i) inputs.push_back(DensityMatrix::from_ket(lambda_entry(i).ket));
    inputs.emplace_back(random_density(rng, 16));
    for (const auto& rho : inputs) {
      const DensityMatrix out = apply(amplitude_damping(g), rho, {1, 2});
      require(std::abs(out.trace() - 1.0) < 1e-12, "channel output trace preservation");
      require(hermiticity_error(out.matrix()) < 1e-12, "channel output Hermiticity");
      require(is_psd(out.matrix(), kPsdTol).psd, "channel output PSD");
    }
    for (int i = 1; i <= 8; ++i) {
      const DensityMatrix rho = noisy_lambda_state(i, g);
      const GenMeasurement m = GenMeasurement::from_alpha(unit(rng), 2.0 * M_PI * unit(rng));
      double total = 0.0;
      for (DennisOutcome k : kAllOutcomes) {
        total += dennis_project(rho, {m.alpha, m.beta, k}).branch_probability;
      }
      require(std::abs(total - 1.0) < 1e-12, "Dennis branch probabilities sum to one");
    }
  }

  for (int t = 0; t < 100; ++t) {
    const GenMeasurement m = GenMeasurement::from_alpha(unit(rng), 2.0 * M_PI * unit(rng));
    CMatrix sum = CMatrix::Zero(4, 4);
    for (DennisOutcome k : kAllOutcomes) sum += measurement_operator({m.alpha, m.beta, k});
    require(max_abs(sum - identity(4)) < 1e-12, "P1+P2+Q1+Q2 = I");
  }
  for (double x : {0.0, 0.25, 0.5, 1.0}) {
    require(povm_U(x).sum() == identity(2), "U elements sum to I");
    require(povm_V(x).sum() == identity(2), "V elements sum to I");
  }
  return broken;
}

}  // namespace qss
