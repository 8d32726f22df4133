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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qss/protocol.hpp"
#include "qss/qmath.hpp"

/// Noisy-channel pipeline on Charlie's side: Dennis' rotated Bell measurement,
/// M1/M2 classification, the U/V POVM families and their error rates, the
/// inconclusive-probability bound, and the grid optimizer.
namespace qss {

inline constexpr double kPsdTol = 1e-10;
inline constexpr double kFlagThreshold = 1e-9;

/// Dennis' rank-one operator on qubits 3,4. P1 = alpha|00> + beta|11> and
/// Q1 = alpha|01> + beta|10>; P2 and Q2 are their orthogonal partners
/// beta*|00> - alpha*|11> and beta*|01> - alpha*|10>, so the four always sum
/// to I. alpha = beta = 1/sqrt(2) is the Bell case.
struct GenMeasurement {
  Complex alpha;
  Complex beta;
  DennisOutcome kind = DennisOutcome::P1;

  static GenMeasurement bell(DennisOutcome kind = DennisOutcome::P1);
  /// Real alpha in [0,1], beta = sqrt(1 - alpha^2) e^{i phase}.
  static GenMeasurement from_alpha(double alpha, double phase = 0.0,
                                   DennisOutcome kind = DennisOutcome::P1);
  double normalization_error() const { return std::abs(std::norm(alpha) + std::norm(beta) - 1.0); }
};

CMatrix measurement_operator(const GenMeasurement& m);

struct Projection {
  double branch_probability;
  std::optional<DensityMatrix> state;  // normalized; empty on a zero-trace branch
};

/// tr_{3,4}[(I (x) I (x) P) rho' (I (x) I (x) P)^dagger], split into its trace
/// and the normalized remainder.
Projection dennis_project(const DensityMatrix& rho_prime, const GenMeasurement& m);

enum class Classifier { M1, M2 };

/// M1 = |00><00| + |11><11|, M2 = |01><01| + |10><10|.
CMatrix classifier_projector(Classifier c);

struct Classified {
  double weight;                       // prior * tr(M rho M)
  std::optional<DensityMatrix> state;  // normalized projection
};

Classified classify(const DensityMatrix& rho00, Classifier which, double prior = 0.5);

struct EnsembleMember {
  int label;  // lambda index
  std::optional<DensityMatrix> state;
  double weight;

  /// weight * state, or zero when the member does not occur.
  CMatrix weighted() const;
};

struct WeightedEnsemble {
  Classifier classifier;
  std::vector<EnsembleMember> members;
};

/// Candidate states once Bob's operation is known, in POVM slot order
/// (slot k of the U/V families pairs with element k here).
std::array<int, 4> branch_labels(Pauli bob);

struct EnsembleOptions {
  Pauli branch = Pauli::Z;
  double prior = 0.5;
};

/// Damped, Dennis-projected and classified states for one branch.
WeightedEnsemble build_ensemble(double gamma, const GenMeasurement& m, Classifier c,
                                const EnsembleOptions& opts = {});

enum class WeightMode {
  AsListed,    // weights exactly as produced by classify
  Normalized,  // rescaled to sum to one
};

struct InconclusiveBound {
  double value;    // sqrt(n/(n-1) sum_{i != j} w_i w_j F^2(rho_i, rho_j))
  double clamped;  // min(value, 1)
};

/// Fidelity-based lower bound on the inconclusive probability, summed over
/// ordered pairs of distinct members; n is the number of members.
InconclusiveBound inconclusive_bound(const WeightedEnsemble& ensemble,
                                     WeightMode mode = WeightMode::AsListed);

/// Two-dimensional coordinates: Even = {|00>,|11>}, Odd = {|01>,|10>}.
enum class Subspace { Even, Odd };

struct PovmElement {
  int label;
  CMatrix op;  // 2x2 in subspace coordinates
};

struct Povm {
  Subspace subspace;
  std::vector<PovmElement> elements;

  CMatrix sum() const;
};

inline constexpr std::array<int, 4> kDefaultSlots{1, 2, 5, 6};

/// U1 = 1/2[[1-2u, 1],[1, 1]], U2 = 1/2[[1-2u, -1],[-1, 1]], U5 = U6 = diag(u, 0).
Povm povm_U(double u, std::array<int, 4> labels = kDefaultSlots);
/// V1 = V2 = [[0, v],[v, 0]], V5 = 1/2[[1, 1-2v],[1-2v, 1]], V6 = 1/2[[1, -1-2v],[-1-2v, 1]].
Povm povm_V(double v, std::array<int, 4> labels = kDefaultSlots);

struct PovmFamily {
  std::string parameter;
  Subspace subspace;
  Povm (*make)(double, std::array<int, 4>);
};

PovmFamily u_family();
PovmFamily v_family();

struct FeasibilityPoint {
  double parameter;
  std::vector<double> min_eigenvalues;  // per element, family order
  bool feasible;
};

std::vector<FeasibilityPoint> psd_scan(const PovmFamily& family, std::span<const double> grid,
                                       double tol = kPsdTol);

/// 1 - (1/2) sum_k tr[Pi_k rho_k], pairing POVM elements and members by label.
double error_rate(const Povm& povm, const WeightedEnsemble& ensemble);

/// Closed forms quoted for the Bell-measurement error rates.
double closed_form_er1(double u, double gamma);
double closed_form_er2(double v, double gamma);

double t_bits(double er1, double er2);

struct PipelineOptions {
  Pauli branch = Pauli::Z;
  double prior = 0.5;
  double phase = 0.0;
  double psd_tol = kPsdTol;
  double flag_threshold = kFlagThreshold;
};

struct Discrepancy {
  std::string quantity;
  double numeric;
  double reference;
  double delta;
};

/// One (gamma, alpha, u, v) evaluation. The *_paper fields use the quoted
/// closed forms; t_bits_numeric = 4 - (er1_numeric + er2_numeric) and
/// t_bits_paper = 4 - (er1_paper + er2_paper).
struct DiscriminationReport {
  double gamma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double u = 0.0;
  double v = 0.0;
  double er1_numeric = 0.0;
  double er2_numeric = 0.0;
  double er1_paper = 0.0;
  double er2_paper = 0.0;
  InconclusiveBound p0_1{};
  InconclusiveBound p0_2{};
  double t_bits_numeric = 0.0;
  double t_bits_paper = 0.0;
  std::vector<double> min_eig_u;
  std::vector<double> min_eig_v;
  bool feasible_u = false;
  bool feasible_v = false;
  std::vector<Discrepancy> discrepancies;
};

DiscriminationReport evaluate(double gamma, double u, double v, double alpha,
                              const PipelineOptions& opts = {});

struct OptimizeResult {
  bool feasible = false;
  std::string reason;  // set when infeasible
  std::optional<DiscriminationReport> best;
};

/// Exhaustive search for the smallest er1_numeric + er2_numeric over PSD-feasible
/// u and v and the alpha grid. Ties go to the smallest u, then the smallest v,
/// then the largest alpha.
OptimizeResult optimize(double gamma, std::span<const double> u_grid,
                        std::span<const double> v_grid, std::span<const double> alpha_grid,
                        const PipelineOptions& opts = {});

// Closed-form listings for the Bob-revealed-Z branch under P1, used by the audit.

/// Normalized Dennis-projected states, i in {1,2,5,6}.
CMatrix transcribed_rho00(int i, double gamma, Complex alpha, Complex beta);
/// Unnormalized classified states as 4x4 matrices, i in {1,2,5,6}.
CMatrix transcribed_rho_classified(int i, Classifier c, double gamma, Complex alpha, Complex beta);
double closed_form_eta(int i, double gamma, Complex alpha, Complex beta);
double closed_form_zeta(int i, double gamma, Complex alpha, Complex beta);

struct LedgerRow {
  std::string section;
  std::string quantity;
  double gamma;
  double numeric;
  double reference;
  double delta;
  bool flagged;
  std::string note;
};

struct AuditOptions {
  double flag_threshold = kFlagThreshold;
  double psd_tol = kPsdTol;
  std::vector<double> u_grid;  // feasibility scan grid; empty = 0:1:0.005
  std::vector<double> v_grid;
};

/// Numeric pipeline against every closed-form listing, one row per comparison.
/// Rows beyond the threshold are flagged; nothing here throws on a mismatch.
std::vector<LedgerRow> discrepancy_report(std::span<const double> gamma_grid,
                                          const AuditOptions& opts = {});

/// Structural invariants (completeness, trace/PSD preservation, POVM sums,
/// branch probabilities, encoding table). Returns the violated ones by name.
std::vector<std::string> check_invariants(std::span<const double> gamma_grid, std::uint64_t seed);

}  // namespace qss
