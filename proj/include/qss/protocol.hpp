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
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qss/qmath.hpp"

/// Noiseless four-party secret sharing on a GHZ resource.
///
/// Register order is A, B, D, D (qubits 1..4). After Alice and Bob forward
/// their qubits, qubits 1-2 are Charlie's and 3-4 are Dennis'.
namespace qss {

enum class Pauli { I, X, iY, Z };

inline constexpr std::array<Pauli, 4> kAllPaulis{Pauli::I, Pauli::X, Pauli::iY, Pauli::Z};

/// Real matrix form. iY is [[0,-1],[1,0]]: it sends |0> to |1> and |1> to -|0>,
/// which reproduces the signs of the encoded-state table entrywise.
CMatrix pauli_matrix(Pauli p);
std::string_view to_string(Pauli p);
std::optional<Pauli> parse_pauli(std::string_view s);

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellState, 4> kAllBellStates{
    BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus};

Ket bell_ket(BellState b);
std::string_view to_string(BellState b);

/// One product-Bell component |first>_{12} |second>_{34}.
struct BellTerm {
  BellState first;
  BellState second;
  Complex coefficient;
};

struct LambdaEntry {
  int index;  // 1..8
  Ket ket;
  std::array<std::pair<Pauli, Pauli>, 2> op_pairs;  // (Alice, Bob)
  std::array<BellTerm, 2> bell_form;
};

/// The eight encoded states, indexed 1..8 at positions 0..7.
const std::array<LambdaEntry, 8>& lambda_table();
const LambdaEntry& lambda_entry(int index);

Ket ghz4();

struct Encoding {
  int index;
  Ket ket;
};

/// (a (x) b (x) I (x) I) |GHZ>, with its table index.
Encoding encode(Pauli alice, Pauli bob);

/// Components of a 16-dim ket over the product-Bell basis, nonzero ones only,
/// in (first, second) enumeration order.
std::vector<BellTerm> bell_decompose(const Ket& ket);

/// Bob's classical bit as a qudit basis index: I, X, iY, Z -> 0, 1, 2, 3.
int qudit_index(Pauli p);
Pauli pauli_from_qudit_index(int k);

struct Teleported {
  Ket output;
  double success_probability;
};

/// Projects B,C of |chi>_B |psi>_{CC'} onto |psi>, psi = (1/2) sum_{i=0}^{3} |ii>,
/// and returns the renormalized state left on C'.
Teleported teleport_qudit(const Ket& chi);

/// Dennis' two-bit report. 00, 01, 10, 11 name P1, P2, Q1, Q2.
enum class DennisOutcome { P1 = 0, P2 = 1, Q1 = 2, Q2 = 3 };

inline constexpr std::array<DennisOutcome, 4> kAllOutcomes{
    DennisOutcome::P1, DennisOutcome::P2, DennisOutcome::Q1, DennisOutcome::Q2};

std::string_view bits(DennisOutcome o);
std::string_view label(DennisOutcome o);
/// The Bell state an ideal measurement projects onto for this report.
BellState bell_state(DennisOutcome o);

struct DennisResult {
  double probability;
  std::optional<Ket> charlie;  // empty on a zero-probability branch
};

DennisResult dennis_measure_ideal(const Ket& ket, DennisOutcome outcome);

/// Which Bell state a (Bell) ket is, if it is one up to phase.
std::optional<BellState> identify_bell(const Ket& ket);

struct DecodeRecord {
  Pauli alice;
  Pauli bob;
  DennisOutcome outcome;
  double probability;
  Pauli bob_received;
  std::optional<BellState> charlie_state;
  std::optional<Pauli> decoded_alice;
  bool success;
};

/// Every nonzero-probability Dennis outcome for one (Alice, Bob) choice.
std::vector<DecodeRecord> run_ideal(Pauli alice, Pauli bob);

struct IdealSummary {
  int pairs_total = 0;
  int pairs_decoded = 0;
  int branches = 0;
  int failures = 0;
  double success_probability = 0.0;  // per pair: decoded mass / branch mass; averaged over pairs
  std::vector<DecodeRecord> records;
};

/// Exhaustive run. With `bob_branch` set only pairs where Bob applied it are run.
IdealSummary run_ideal_exhaustive(std::optional<Pauli> bob_branch = std::nullopt,
                                  unsigned threads = 1);

}  // namespace qss
