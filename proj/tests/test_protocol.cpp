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

#include <chrono>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qss/protocol.hpp"

using Catch::Approx;
using namespace qss;

TEST_CASE("Pauli conventions") {
  CHECK(pauli_matrix(Pauli::iY) * basis_ket("0") == basis_ket("1"));
  CHECK(pauli_matrix(Pauli::iY) * basis_ket("1") == Ket(-basis_ket("0")));
  for (Pauli p : kAllPaulis) {
    CHECK(parse_pauli(to_string(p)) == p);
    const CMatrix m = pauli_matrix(p);
    CHECK(max_abs(m * m.adjoint() - identity(2)) < 1e-15);
  }
  CHECK_FALSE(parse_pauli("Y").has_value());
}

TEST_CASE("lambda table matches the GHZ encoding oracle") {
  const auto& table = lambda_table();
  REQUIRE(table.size() == 8);
  const std::map<Pauli, char> code{{Pauli::I, 'I'}, {Pauli::X, 'X'}, {Pauli::iY, 'Y'}, {Pauli::Z, 'Z'}};
  for (const auto& e : table) {
    CHECK(std::abs(e.ket.norm() - 1.0) < 1e-14);
    for (const auto& [a, b] : e.op_pairs) {
      CHECK((e.ket - oracle::encoded(code.at(a), code.at(b))).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(std::abs(table[i].ket.dot(table[j].ket)) == Approx(i == j ? 1.0 : 0.0).margin(1e-14));
    }
  }
  CHECK((lambda_entry(1).ket - ghz4()).norm() < 1e-15);
  CHECK_THROWS_AS(lambda_entry(0), std::out_of_range);
  CHECK_THROWS_AS(lambda_entry(9), std::out_of_range);
}

TEST_CASE("encode covers all 16 pairs, two per entry") {
  std::map<int, int> hits;
  for (Pauli a : kAllPaulis) {
    for (Pauli b : kAllPaulis) ++hits[encode(a, b).index];
  }
  REQUIRE(hits.size() == 8);
  for (const auto& [k, n] : hits) CHECK(n == 2);
  CHECK(encode(Pauli::Z, Pauli::iY).index == 3);
  CHECK(encode(Pauli::iY, Pauli::X).index == 8);
}

TEST_CASE("Bell-pair decomposition") {
  const double h = 1.0 / std::sqrt(2.0);
  for (const auto& e : lambda_table()) {
    const auto terms = bell_decompose(e.ket);
    REQUIRE(terms.size() == 2);
    Ket rebuilt = Ket::Zero(16);
    for (const auto& t : terms) {
      CHECK(std::abs(t.coefficient) == Approx(h).margin(1e-14));
      rebuilt += t.coefficient * kron(bell_ket(t.first), bell_ket(t.second));
    }
    CHECK((rebuilt - e.ket).norm() < 1e-14);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(terms[k].first == e.bell_form[k].first);
      CHECK(terms[k].second == e.bell_form[k].second);
      CHECK(std::abs(terms[k].coefficient - e.bell_form[k].coefficient) < 1e-14);
    }
  }
  const auto l1 = bell_decompose(lambda_entry(1).ket);
  CHECK(l1[0].first == BellState::PhiPlus);
  CHECK(l1[0].second == BellState::PhiPlus);
  CHECK(l1[1].first == BellState::PhiMinus);
  CHECK(l1[1].second == BellState::PhiMinus);
  CHECK(l1[1].coefficient.real() == Approx(h));
}

TEST_CASE("Dennis never sees a Psi outcome in the ideal protocol") {
  for (const auto& e : lambda_table()) {
    double total = 0.0;
    for (DennisOutcome o : kAllOutcomes) {
      const DennisResult r = dennis_measure_ideal(e.ket, o);
      total += r.probability;
      if (o == DennisOutcome::Q1 || o == DennisOutcome::Q2) {
        CHECK(r.probability < 1e-14);
        CHECK_FALSE(r.charlie.has_value());
      } else {
        CHECK(r.probability == Approx(0.5).margin(1e-14));
        REQUIRE(r.charlie.has_value());
        CHECK(identify_bell(*r.charlie).has_value());
      }
    }
    CHECK(total == Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("qudit index mapping") {
  CHECK(qudit_index(Pauli::I) == 0);
  CHECK(qudit_index(Pauli::X) == 1);
  CHECK(qudit_index(Pauli::iY) == 2);
  CHECK(qudit_index(Pauli::Z) == 3);
  for (Pauli p : kAllPaulis) CHECK(pauli_from_qudit_index(qudit_index(p)) == p);
  CHECK_THROWS(pauli_from_qudit_index(4));
}

TEST_CASE("qudit teleportation on random inputs") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Ket chi = oracle::random_ket(rng, 4);
    const Teleported t = teleport_qudit(chi);
    CHECK(t.success_probability == Approx(1.0 / 16.0).margin(1e-12));
    CHECK(std::abs(chi.dot(t.output)) == Approx(1.0).margin(1e-12));
  }
  for (std::size_t k = 0; k < 4; ++k) {
    const Teleported t = teleport_qudit(basis_ket(4, k));
    CHECK(std::abs(t.output(static_cast<Eigen::Index>(k))) == Approx(1.0).margin(1e-12));
  }
  CHECK_THROWS(teleport_qudit(2.0 * basis_ket(4, 0)));
  CHECK_THROWS(teleport_qudit(basis_ket(2, 0)));
}

TEST_CASE("exhaustive ideal decode") {
  const auto start = std::chrono::steady_clock::now();
  const IdealSummary s = run_ideal_exhaustive();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(s.pairs_total == 16);
  CHECK(s.pairs_decoded == 16);
  CHECK(s.failures == 0);
  CHECK(s.branches == 32);
  CHECK(s.success_probability == 1.0);
  CHECK(secs < 1.0);
  for (const auto& r : s.records) {
    CHECK(r.success);
    REQUIRE(r.decoded_alice.has_value());
    CHECK(*r.decoded_alice == r.alice);
    CHECK(r.bob_received == r.bob);
  }
}

TEST_CASE("each Bob branch decodes on its own, serially or concurrently") {
  for (Pauli b : kAllPaulis) {
    const IdealSummary serial = run_ideal_exhaustive(b, 1);
    const IdealSummary threaded = run_ideal_exhaustive(b, 4);
    CHECK(serial.pairs_total == 4);
    CHECK(serial.pairs_decoded == 4);
    CHECK(serial.success_probability == 1.0);
    REQUIRE(threaded.records.size() == serial.records.size());
    for (std::size_t k = 0; k < serial.records.size(); ++k) {
      CHECK(threaded.records[k].alice == serial.records[k].alice);
      CHECK(threaded.records[k].outcome == serial.records[k].outcome);
    }
  }
}

TEST_CASE("decoding example: (I, X)") {
  const auto records = run_ideal(Pauli::I, Pauli::X);
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    CHECK(r.probability == Approx(0.5));
    CHECK(r.decoded_alice == Pauli::I);
  }
}
