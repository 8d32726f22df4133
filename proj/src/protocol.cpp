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

#include "qss/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qss/parallel.hpp"

namespace qss {

namespace {

constexpr double kAmpTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Ket two_term(std::string_view first, std::string_view second, double sign) {
  return kInvSqrt2 * (basis_ket(first) + sign * basis_ket(second));
}

std::array<LambdaEntry, 8> build_table() {
  using P = Pauli;
  using B = BellState;
  const Complex c = kInvSqrt2;
  return {{
      {1, two_term("0000", "1111", +1), {{{P::I, P::I}, {P::Z, P::Z}}},
       {{{B::PhiPlus, B::PhiPlus, c}, {B::PhiMinus, B::PhiMinus, c}}}},
      {2, two_term("0000", "1111", -1), {{{P::I, P::Z}, {P::Z, P::I}}},
       {{{B::PhiPlus, B::PhiMinus, c}, {B::PhiMinus, B::PhiPlus, c}}}},
      {3, two_term("0100", "1011", +1), {{{P::I, P::X}, {P::Z, P::iY}}},
       {{{B::PsiPlus, B::PhiPlus, c}, {B::PsiMinus, B::PhiMinus, c}}}},
      {4, two_term("0100", "1011", -1), {{{P::I, P::iY}, {P::Z, P::X}}},
       {{{B::PsiPlus, B::PhiMinus, c}, {B::PsiMinus, B::PhiPlus, c}}}},
      {5, two_term("1000", "0111", +1), {{{P::X, P::I}, {P::iY, P::Z}}},
       {{{B::PsiPlus, B::PhiPlus, c}, {B::PsiMinus, B::PhiMinus, -c}}}},
      {6, two_term("1000", "0111", -1), {{{P::X, P::Z}, {P::iY, P::I}}},
       {{{B::PsiPlus, B::PhiMinus, c}, {B::PsiMinus, B::PhiPlus, -c}}}},
      {7, two_term("1100", "0011", +1), {{{P::X, P::X}, {P::iY, P::iY}}},
       {{{B::PhiPlus, B::PhiPlus, c}, {B::PhiMinus, B::PhiMinus, -c}}}},
      {8, two_term("1100", "0011", -1), {{{P::X, P::iY}, {P::iY, P::X}}},
       {{{B::PhiPlus, B::PhiMinus, c}, {B::PhiMinus, B::PhiPlus, -c}}}},
  }};
}

}  // namespace

CMatrix pauli_matrix(Pauli p) {
  CMatrix m(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::iY: m << 0, -1, 1, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

std::string_view to_string(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::iY: return "iY";
    case Pauli::Z: return "Z";
  }
  return "?";
}

std::optional<Pauli> parse_pauli(std::string_view s) {
  for (Pauli p : kAllPaulis) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

Ket bell_ket(BellState b) {
  switch (b) {
    case BellState::PhiPlus: return two_term("00", "11", +1);
    case BellState::PhiMinus: return two_term("00", "11", -1);
    case BellState::PsiPlus: return two_term("01", "10", +1);
    case BellState::PsiMinus: return two_term("01", "10", -1);
  }
  throw std::logic_error("bell_ket: unknown Bell state");
}

std::string_view to_string(BellState b) {
  switch (b) {
    case BellState::PhiPlus: return "Phi+";
    case BellState::PhiMinus: return "Phi-";
    case BellState::PsiPlus: return "Psi+";
    case BellState::PsiMinus: return "Psi-";
  }
  return "?";
}

const std::array<LambdaEntry, 8>& lambda_table() {
  static const std::array<LambdaEntry, 8> table = build_table();
  return table;
}

const LambdaEntry& lambda_entry(int index) {
  if (index < 1 || index > 8) {
    throw std::out_of_range("lambda_entry: index must be in 1..8, got " + std::to_string(index));
  }
  return lambda_table()[static_cast<std::size_t>(index - 1)];
}

Ket ghz4() { return two_term("0000", "1111", +1); }

Encoding encode(Pauli alice, Pauli bob) {
  const CMatrix op = kron(kron(pauli_matrix(alice), pauli_matrix(bob)), identity(4));
  Ket ket = op * ghz4();
  for (const auto& entry : lambda_table()) {
    if ((entry.ket - ket).cwiseAbs().maxCoeff() < kAmpTol) return {entry.index, std::move(ket)};
  }
  throw std::logic_error("encode: state not in the lambda table");
}

std::vector<BellTerm> bell_decompose(const Ket& ket) {
  if (ket.size() != 16) throw std::invalid_argument("bell_decompose: expected a 16-dim ket");
  std::vector<BellTerm> terms;
  for (BellState first : kAllBellStates) {
    for (BellState second : kAllBellStates) {
      const Complex c = kron(bell_ket(first), bell_ket(second)).dot(ket);
      if (std::abs(c) > kAmpTol) terms.push_back({first, second, c});
    }
  }
  return terms;
}

int qudit_index(Pauli p) { return static_cast<int>(p); }

Pauli pauli_from_qudit_index(int k) {
  if (k < 0 || k > 3) throw std::out_of_range("pauli_from_qudit_index: index must be 0..3");
  return kAllPaulis[static_cast<std::size_t>(k)];
}

Teleported teleport_qudit(const Ket& chi) {
  if (chi.size() != 4) throw std::invalid_argument("teleport_qudit: expected a 4-level qudit");
  if (std::abs(chi.norm() - 1.0) > kAmpTol) {
    throw std::invalid_argument("teleport_qudit: input is not normalized");
  }
  Ket resource = Ket::Zero(16);
  for (int i = 0; i < 4; ++i) resource(i * 4 + i) = 0.5;

  // Register order B, C, C'.
  const Ket joint = kron(chi, resource);
  const CMatrix global = kron(CMatrix(resource * resource.adjoint()), identity(4));
  const Ket projected = global * joint;
  const double p = projected.squaredNorm();

  // projected = |psi>_{BC} (x) |out>_{C'}; contract B,C against <psi|.
  Ket out = Ket::Zero(4);
  for (int bc = 0; bc < 16; ++bc) {
    out += std::conj(resource(bc)) * projected.segment(bc * 4, 4);
  }
  if (p < kAmpTol) throw std::logic_error("teleport_qudit: projection vanished");
  return {out / out.norm(), p};
}

std::string_view bits(DennisOutcome o) {
  switch (o) {
    case DennisOutcome::P1: return "00";
    case DennisOutcome::P2: return "01";
    case DennisOutcome::Q1: return "10";
    case DennisOutcome::Q2: return "11";
  }
  return "??";
}

std::string_view label(DennisOutcome o) {
  switch (o) {
    case DennisOutcome::P1: return "P1";
    case DennisOutcome::P2: return "P2";
    case DennisOutcome::Q1: return "Q1";
    case DennisOutcome::Q2: return "Q2";
  }
  return "??";
}

BellState bell_state(DennisOutcome o) {
  return kAllBellStates[static_cast<std::size_t>(o)];
}

DennisResult dennis_measure_ideal(const Ket& ket, DennisOutcome outcome) {
  if (ket.size() != 16) throw std::invalid_argument("dennis_measure_ideal: expected a 16-dim ket");
  const Ket bell = bell_ket(bell_state(outcome));
  Ket charlie = Ket::Zero(4);
  for (int c = 0; c < 4; ++c) {
    charlie(c) = bell.dot(ket.segment(c * 4, 4));
  }
  const double p = charlie.squaredNorm();
  if (p < kAmpTol) return {p, std::nullopt};
  return {p, charlie / std::sqrt(p)};
}

std::optional<BellState> identify_bell(const Ket& ket) {
  if (ket.size() != 4) return std::nullopt;
  for (BellState b : kAllBellStates) {
    if (std::norm(bell_ket(b).dot(ket)) > 1.0 - kAmpTol) return b;
  }
  return std::nullopt;
}

namespace {

// Alice's operation from Bob's revealed op and the (Charlie, Dennis) Bell pair.
std::optional<Pauli> decode_alice(Pauli bob, BellState charlie, BellState dennis) {
  std::optional<Pauli> found;
  for (const auto& entry : lambda_table()) {
    bool has_term = false;
    for (const auto& t : entry.bell_form) {
      if (t.first == charlie && t.second == dennis) has_term = true;
    }
    if (!has_term) continue;
    for (const auto& [a, b] : entry.op_pairs) {
      if (b != bob) continue;
      if (found && *found != a) return std::nullopt;  // ambiguous
      found = a;
    }
  }
  return found;
}

Pauli read_qudit(const Ket& out) {
  Eigen::Index k = 0;
  out.cwiseAbs2().maxCoeff(&k);
  return pauli_from_qudit_index(static_cast<int>(k));
}

}  // namespace

std::vector<DecodeRecord> run_ideal(Pauli alice, Pauli bob) {
  const Encoding enc = encode(alice, bob);
  const Teleported tele = teleport_qudit(basis_ket(4, static_cast<std::size_t>(qudit_index(bob))));
  const Pauli bob_received = read_qudit(tele.output);

  std::vector<DecodeRecord> records;
  for (DennisOutcome o : kAllOutcomes) {
    const DennisResult r = dennis_measure_ideal(enc.ket, o);
    if (!r.charlie) continue;
    DecodeRecord rec{alice, bob, o, r.probability, bob_received, identify_bell(*r.charlie),
                     std::nullopt, false};
    if (rec.charlie_state) {
      rec.decoded_alice = decode_alice(bob_received, *rec.charlie_state, bell_state(o));
    }
    rec.success = rec.decoded_alice == alice;
    records.push_back(rec);
  }
  return records;
}

IdealSummary run_ideal_exhaustive(std::optional<Pauli> bob_branch, unsigned threads) {
  std::vector<std::pair<Pauli, Pauli>> pairs;
  for (Pauli a : kAllPaulis) {
    for (Pauli b : kAllPaulis) {
      if (!bob_branch || *bob_branch == b) pairs.emplace_back(a, b);
    }
  }
  const auto per_pair = parallel_map(pairs.size(), threads, [&](std::size_t k) {
    return run_ideal(pairs[k].first, pairs[k].second);
  });

  IdealSummary s;
  s.pairs_total = static_cast<int>(pairs.size());
  double total = 0.0;
  for (const auto& records : per_pair) {
    bool all_ok = !records.empty();
    double p_ok = 0.0;
    double p_all = 0.0;
    for (const auto& r : records) {
      ++s.branches;
      p_all += r.probability;
      if (r.success) {
        p_ok += r.probability;
      } else {
        ++s.failures;
        all_ok = false;
      }
      s.records.push_back(r);
    }
    if (all_ok) ++s.pairs_decoded;
    // Conditioned on the observed branches, so a clean pair counts as exactly 1.
    if (p_all > 0.0) total += p_ok / p_all;
  }
  s.success_probability = pairs.empty() ? 0.0 : total / static_cast<double>(pairs.size());
  return s;
}

}  // namespace qss
