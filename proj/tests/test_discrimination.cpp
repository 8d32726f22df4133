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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "qss/channels.hpp"
#include "qss/discrimination.hpp"
#include "qss/grid.hpp"

using Catch::Approx;
using namespace qss;

namespace {

const double kBell = 1.0 / std::sqrt(2.0);

GenMeasurement with_kind(const GenMeasurement& m, DennisOutcome k) { return {m.alpha, m.beta, k}; }

}  // namespace

TEST_CASE("measurement operators") {
  CHECK(max_abs(measurement_operator(GenMeasurement::from_alpha(1.0)) -
                DensityMatrix::from_ket(basis_ket("00")).matrix()) < 1e-15);
  const Ket phi_plus = (basis_ket("00") + basis_ket("11")) / std::sqrt(2.0);
  CHECK(max_abs(measurement_operator(GenMeasurement::bell()) - phi_plus * phi_plus.adjoint()) < 1e-15);
  const Ket psi_minus = (basis_ket("01") - basis_ket("10")) / std::sqrt(2.0);
  CHECK(max_abs(measurement_operator(GenMeasurement::bell(DennisOutcome::Q2)) -
                psi_minus * psi_minus.adjoint()) < 1e-15);
  CHECK_THROWS(GenMeasurement::from_alpha(1.2));
  CHECK_THROWS(measurement_operator({1.0, 1.0, DennisOutcome::P1}));
}

TEST_CASE("the four Dennis operators resolve the identity for random (alpha, beta)") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const GenMeasurement m = GenMeasurement::from_alpha(unit(rng), 6.283185307179586 * unit(rng));
    CMatrix sum = CMatrix::Zero(4, 4);
    for (DennisOutcome k : kAllOutcomes) {
      const CMatrix p = measurement_operator(with_kind(m, k));
      CHECK(max_abs(p * p - p) < 1e-12);
      CHECK(p.trace().real() == Approx(1.0).margin(1e-12));
      sum += p;
    }
    CHECK(max_abs(sum - identity(4)) < 1e-12);
  }
}

TEST_CASE("Dennis projection agrees with the contraction oracle") {
  for (double alpha : {0.0, 0.3, kBell, 0.8, 1.0}) {
    const GenMeasurement m = GenMeasurement::from_alpha(alpha);
    const Ket phi = alpha * basis_ket("00") + m.beta * basis_ket("11");
    for (int i = 1; i <= 8; ++i) {
      for (double g : {0.0, 0.3, 0.7, 1.0}) {
        const CMatrix want = oracle::contract_34(oracle::damped_lambda(i, g), phi);
        const Projection p = dennis_project(noisy_lambda_state(i, g), m);
        CHECK(p.branch_probability == Approx(want.trace().real()).margin(1e-14));
        if (p.state) CHECK(max_abs(p.state->matrix() * p.branch_probability - want) < 1e-14);
      }
    }
  }
}

TEST_CASE("Dennis projection examples") {
  const Projection p = dennis_project(noisy_lambda_state(1, 0.0), GenMeasurement::bell());
  CHECK(p.branch_probability == Approx(0.5).margin(1e-14));
  REQUIRE(p.state);
  CHECK(max_abs(p.state->matrix() - DensityMatrix::from_ket(bell_ket(BellState::PhiPlus)).matrix()) <
        1e-14);

  const Projection q = dennis_project(noisy_lambda_state(1, 0.3), GenMeasurement::bell());
  REQUIRE(q.state);
  CHECK(q.state->matrix()(0, 0).real() == Approx(0.545).margin(1e-12));

  const Projection r = dennis_project(noisy_lambda_state(5, 1.0), GenMeasurement::bell());
  REQUIRE(r.state);
  CHECK(max_abs(r.state->matrix() - DensityMatrix::from_ket(basis_ket("00")).matrix()) < 1e-14);

  CHECK_THROWS(dennis_project(DensityMatrix::from_ket(basis_ket("00")), GenMeasurement::bell()));
}

TEST_CASE("branch probabilities over the four outcomes sum to one") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const GenMeasurement m = GenMeasurement::from_alpha(unit(rng), unit(rng));
    const DensityMatrix rho = noisy_lambda_state(1 + trial % 8, unit(rng));
    double total = 0.0;
    for (DennisOutcome k : kAllOutcomes) total += dennis_project(rho, with_kind(m, k)).branch_probability;
    CHECK(total == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("projected states match the closed-form listings") {
  for (double alpha : {kBell, 0.8}) {
    const GenMeasurement m = GenMeasurement::from_alpha(alpha);
    for (int i : {1, 2, 5, 6}) {
      for (double g : make_grid(0.0, 1.0, 0.05)) {
        const Projection p = dennis_project(noisy_lambda_state(i, g), m);
        REQUIRE(p.state);
        CHECK(max_abs(p.state->matrix() - transcribed_rho00(i, g, m.alpha, m.beta)) < 1e-12);
        for (Classifier c : {Classifier::M1, Classifier::M2}) {
          const Classified cl = classify(*p.state, c);
          const CMatrix weighted = cl.state ? CMatrix(cl.weight * cl.state->matrix()) : CMatrix::Zero(4, 4);
          CHECK(max_abs(weighted - transcribed_rho_classified(i, c, g, m.alpha, m.beta)) < 1e-12);
        }
      }
    }
  }
  CHECK_THROWS_AS(transcribed_rho00(3, 0.5, kBell, kBell), std::out_of_range);
}

TEST_CASE("classification weights") {
  for (double alpha : {kBell, 0.8}) {
    const GenMeasurement m = GenMeasurement::from_alpha(alpha);
    for (double g : make_grid(0.0, 1.0, 0.01)) {
      const WeightedEnsemble e1 = build_ensemble(g, m, Classifier::M1);
      const WeightedEnsemble e2 = build_ensemble(g, m, Classifier::M2);
      for (std::size_t k = 0; k < 4; ++k) {
        const int i = e1.members[k].label;
        CHECK(e1.members[k].weight == Approx(closed_form_eta(i, g, m.alpha, m.beta)).margin(1e-12));
        // The listed zeta is half the trace of the listed classified state.
        const double trace_zeta = transcribed_rho_classified(i, Classifier::M2, g, m.alpha, m.beta).trace().real();
        CHECK(e2.members[k].weight == Approx(trace_zeta).margin(1e-12));
        if (i == 5 || i == 6) {
          CHECK(e2.members[k].weight == Approx(closed_form_zeta(i, g, m.alpha, m.beta)).margin(1e-12));
        } else {
          CHECK(e2.members[k].weight ==
                Approx(2.0 * closed_form_zeta(i, g, m.alpha, m.beta)).margin(1e-12));
        }
      }
    }
  }
  const GenMeasurement bell = GenMeasurement::bell();
  const WeightedEnsemble e1 = build_ensemble(0.0, bell, Classifier::M1);
  const WeightedEnsemble e2 = build_ensemble(0.0, bell, Classifier::M2);
  CHECK(e1.members[2].weight == 0.0);
  CHECK(e1.members[3].weight == 0.0);
  CHECK(e2.members[0].weight == 0.0);
  CHECK(e2.members[1].weight == 0.0);
  CHECK_FALSE(e2.members[0].state.has_value());
}

TEST_CASE("eta weights sum to 1 + gamma^2 at the Bell point") {
  for (double g : make_grid(0.0, 1.0, 0.1)) {
    double sum = 0.0;
    for (const auto& m : build_ensemble(g, GenMeasurement::bell(), Classifier::M1).members) sum += m.weight;
    CHECK(sum == Approx(1.0 + g * g).margin(1e-12));
  }
}

TEST_CASE("the prior scales every weight") {
  const auto a = build_ensemble(0.4, GenMeasurement::bell(), Classifier::M1, {Pauli::Z, 0.5});
  const auto b = build_ensemble(0.4, GenMeasurement::bell(), Classifier::M1, {Pauli::Z, 0.25});
  for (std::size_t k = 0; k < 4; ++k) CHECK(b.members[k].weight == Approx(a.members[k].weight / 2));
  CHECK_THROWS(classify(DensityMatrix(identity(4) / 4.0), Classifier::M1, 0.0));
}

TEST_CASE("branch labels") {
  CHECK(branch_labels(Pauli::Z) == std::array<int, 4>{1, 2, 5, 6});
  CHECK(branch_labels(Pauli::I) == std::array<int, 4>{1, 2, 5, 6});
  CHECK(branch_labels(Pauli::X) == std::array<int, 4>{7, 8, 3, 4});
  CHECK(branch_labels(Pauli::iY) == std::array<int, 4>{7, 8, 3, 4});
}

TEST_CASE("POVM families sum to the identity exactly") {
  for (double x : {0.0, 0.25, 0.5, 1.0, 0.37}) {
    CHECK(povm_U(x).sum() == identity(2));
    CHECK(povm_V(x).sum() == identity(2));
  }
}

TEST_CASE("PSD scan: only u = 0 and v = 0 are feasible") {
  const auto grid = make_grid(0.0, 1.0, 0.005);
  for (const PovmFamily& fam : {u_family(), v_family()}) {
    const auto scan = psd_scan(fam, grid);
    REQUIRE(scan.size() == grid.size());
    std::vector<double> ok;
    for (const auto& pt : scan) {
      CHECK(pt.min_eigenvalues.size() == 4);
      if (pt.feasible) ok.push_back(pt.parameter);
    }
    CHECK(ok == std::vector<double>{0.0});
  }
  // V1 = [[0, v], [v, 0]] has eigenvalues +-v; U1 has determinant -u/2.
  for (double x : {0.1, 0.5, 0.9}) {
    const auto v = psd_scan(v_family(), std::vector<double>{x});
    CHECK(v[0].min_eigenvalues[0] == Approx(-x).margin(1e-14));
    const CMatrix u1 = povm_U(x).elements[0].op;
    CHECK((u1(0, 0) * u1(1, 1) - u1(0, 1) * u1(1, 0)).real() == Approx(-x / 2).margin(1e-15));
  }
}

TEST_CASE("error rates agree with the trace oracle") {
  for (double g : make_grid(0.0, 1.0, 0.1)) {
    for (double alpha : {0.2, 0.6, kBell, 0.9}) {
      for (double x : {0.0, 0.3, 1.0}) {
        const DiscriminationReport r = evaluate(g, x, x, alpha);
        CHECK(r.er1_numeric == Approx(oracle::er1(g, alpha, x)).margin(1e-12));
        CHECK(r.er2_numeric == Approx(oracle::er2(g, alpha, x)).margin(1e-12));
        CHECK(r.t_bits_numeric == Approx(4.0 - r.er1_numeric - r.er2_numeric).margin(1e-15));
      }
    }
  }
}

TEST_CASE("error-rate values at the Bell point") {
  const DiscriminationReport r0 = evaluate(0.0, 0.0, 0.0, kBell);
  CHECK(r0.er1_numeric == Approx(0.5).margin(1e-12));
  CHECK(r0.er2_numeric == Approx(0.5).margin(1e-12));
  CHECK(r0.t_bits_numeric == Approx(3.0).margin(1e-12));
  CHECK(r0.t_bits_paper == Approx(3.5).margin(1e-12));
  CHECK(r0.feasible_u);
  CHECK(r0.feasible_v);
  const DiscriminationReport r1 = evaluate(1.0, 0.0, 0.0, kBell);
  CHECK(r1.er1_numeric == Approx(0.75).margin(1e-12));

  for (double g : make_grid(0.0, 1.0, 0.05)) {
    for (double x : {0.0, 0.5}) {
      const DiscriminationReport r = evaluate(g, x, x, kBell);
      CHECK(r.er1_numeric - r.er1_paper == Approx(g / 2).margin(1e-12));
      CHECK(r.er2_numeric == Approx((1 + g) / 2).margin(1e-12));
    }
  }
  CHECK(closed_form_er2(0.0, 0.0) == 0.0);
  CHECK(closed_form_er1(0.0, 1.0) == Approx(0.25));
}

TEST_CASE("er1 at gamma = 0, u = 0 is smallest at the Bell point") {
  for (double alpha : make_grid(0.0, 1.0, 0.05)) {
    const double beta = std::sqrt(1 - alpha * alpha);
    CHECK(evaluate(0.0, 0.0, 0.0, alpha).er1_numeric ==
          Approx(1.0 - 0.25 * (1.0 + 2.0 * alpha * beta)).margin(1e-12));
  }
}

TEST_CASE("error_rate rejects mismatched POVMs") {
  const auto e1 = build_ensemble(0.3, GenMeasurement::bell(), Classifier::M1);
  CHECK_THROWS(error_rate(povm_V(0.0), e1));
  CHECK_THROWS(error_rate(povm_U(0.0, {1, 2, 5, 7}), e1));
  CHECK_THROWS(error_rate(povm_U(0.0, {1, 1, 5, 6}), e1));
}

TEST_CASE("inconclusive bound frozen values") {
  struct Row {
    double gamma, p1, p2;
  };
  for (const Row& row : {Row{0.0, 0.0, 0.0}, Row{0.5, 1.0992421631894098, 0.45643546458763845},
                         Row{1.0, 2.0, 0.0}}) {
    const DiscriminationReport r = evaluate(row.gamma, 0.0, 0.0, kBell);
    CHECK(r.p0_1.value == Approx(row.p1).margin(1e-12));
    CHECK(r.p0_2.value == Approx(row.p2).margin(1e-12));
    CHECK(r.p0_1.clamped == std::min(r.p0_1.value, 1.0));
  }
}

TEST_CASE("inconclusive bound is symmetric under relabelling and nonnegative") {
  std::mt19937_64 rng(41);
  for (double g : make_grid(0.0, 1.0, 0.05)) {
    for (Classifier c : {Classifier::M1, Classifier::M2}) {
      WeightedEnsemble e = build_ensemble(g, GenMeasurement::bell(), c);
      const double base = inconclusive_bound(e).value;
      const double norm = inconclusive_bound(e, WeightMode::Normalized).value;
      CHECK(base >= 0.0);
      CHECK(norm >= 0.0);
      for (int k = 0; k < 5; ++k) {
        std::shuffle(e.members.begin(), e.members.end(), rng);
        CHECK(inconclusive_bound(e).value == Approx(base).margin(1e-12));
      }
    }
  }
  WeightedEnsemble single{Classifier::M1, {{1, DensityMatrix(identity(4) / 4.0), 1.0}}};
  CHECK(inconclusive_bound(single).value == 0.0);
}

TEST_CASE("normalized weights give the sum-to-one variant") {
  const auto e = build_ensemble(0.5, GenMeasurement::bell(), Classifier::M1);
  double total = 0.0;
  for (const auto& m : e.members) total += m.weight;
  CHECK(inconclusive_bound(e, WeightMode::Normalized).value ==
        Approx(inconclusive_bound(e).value / total).margin(1e-12));
}

TEST_CASE("optimizer matches an exhaustive oracle with its tie-break") {
  const std::vector<double> us{0.0, 0.5};
  const std::vector<double> vs{0.0, 0.25};
  const std::vector<double> alphas{0.3, 0.6, kBell, 0.8, 1.0};
  for (double g : {0.0, 0.2, 0.5, 1.0}) {
    const OptimizeResult res = optimize(g, us, vs, alphas);
    REQUIRE(res.feasible);
    REQUIRE(res.best);
    double best = 1e9, ba = -1;
    for (double a : alphas) {
      const double t = oracle::er1(g, a, 0.0) + oracle::er2(g, a, 0.0);
      if (t < best - 1e-15 || (std::abs(t - best) <= 1e-15 && a > ba)) {
        best = t;
        ba = a;
      }
    }
    CHECK(res.best->u == 0.0);
    CHECK(res.best->v == 0.0);
    CHECK(res.best->er1_numeric + res.best->er2_numeric == Approx(best).margin(1e-12));
    CHECK(res.best->alpha == Approx(ba).margin(1e-15));
  }
}

TEST_CASE("optimizer picks the Bell point at gamma = 0 and ignores the prior") {
  const auto us = make_grid(0.0, 1.0, 0.05);
  const auto alphas = default_alpha_grid();
  const OptimizeResult a = optimize(0.0, us, us, alphas);
  REQUIRE(a.best);
  CHECK(a.best->alpha == Approx(kBell).margin(1e-15));
  for (double g : {0.1, 0.6}) {
    PipelineOptions half, quarter;
    quarter.prior = 0.25;
    const OptimizeResult x = optimize(g, us, us, alphas, half);
    const OptimizeResult y = optimize(g, us, us, alphas, quarter);
    REQUIRE(x.best);
    REQUIRE(y.best);
    CHECK(x.best->alpha == y.best->alpha);
    CHECK(x.best->u == y.best->u);
    CHECK(x.best->v == y.best->v);
  }
}

TEST_CASE("optimizer reports infeasible grids") {
  const std::vector<double> bad{0.5};
  const std::vector<double> ok{0.0};
  const std::vector<double> alphas{kBell};
  const OptimizeResult r = optimize(0.3, bad, ok, alphas);
  CHECK_FALSE(r.feasible);
  CHECK_FALSE(r.best.has_value());
  CHECK_FALSE(r.reason.empty());
  CHECK_FALSE(optimize(0.3, ok, bad, alphas).feasible);
  CHECK_FALSE(optimize(0.3, ok, ok, std::vector<double>{}).feasible);
}

TEST_CASE("X and Z branches coincide without noise") {
  PipelineOptions x;
  x.branch = Pauli::X;
  for (double alpha : {0.3, 0.6, kBell}) {
    const DiscriminationReport rz = evaluate(0.0, 0.0, 0.0, alpha);
    const DiscriminationReport rx = evaluate(0.0, 0.0, 0.0, alpha, x);
    CHECK(rx.er1_numeric == Approx(rz.er1_numeric).margin(1e-12));
    CHECK(rx.er2_numeric == Approx(rz.er2_numeric).margin(1e-12));
  }
}

TEST_CASE("discrepancy report findings") {
  const std::vector<double> gammas{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto rows = discrepancy_report(gammas);
  auto find = [&](const std::string& q, double g) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const LedgerRow& r) {
      return r.quantity == q && (std::isnan(g) ? std::isnan(r.gamma) : r.gamma == g);
    });
    REQUIRE(it != rows.end());
    return *it;
  };
  int rho_flags = 0, rho_rows = 0;
  for (const auto& r : rows) {
    if (r.section != "rho_prime") continue;
    ++rho_rows;
    if (r.flagged) {
      ++rho_flags;
      CHECK((r.quantity == "rho'_7" || r.quantity == "rho'_8"));
      CHECK(r.gamma < 1.0);
    }
  }
  CHECK(rho_rows == 40);
  CHECK(rho_flags == 8);

  const LedgerRow er2 = find("er2(v=0)", 0.0);
  CHECK(er2.flagged);
  CHECK(er2.delta == Approx(0.5).margin(1e-12));
  const LedgerRow er1 = find("er1(u=0)", 1.0);
  CHECK(er1.flagged);
  CHECK(er1.delta == Approx(0.5).margin(1e-12));
  CHECK_FALSE(find("er1(u=0)", 0.0).flagged);
  CHECK(find("u feasible points", std::nan("")).note.find("{0}") != std::string::npos);
  CHECK(find("v feasible points", std::nan("")).note.find("{0}") != std::string::npos);

  AuditOptions loose;
  loose.flag_threshold = 1.0;
  for (const auto& r : discrepancy_report(gammas, loose)) CHECK_FALSE(r.flagged);
}

TEST_CASE("invariants hold") {
  const auto gammas = make_grid(0.0, 1.0, 0.25);
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) CHECK(check_invariants(gammas, seed).empty());
}
