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

#include "qss/qmath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qss {

namespace {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Bit position (from the least significant end) of 1-based qubit q.
int bit_of(int q, int qubits_total) { return qubits_total - q; }

// Numerically pure: one eigenvalue carries the whole trace.
bool rank_one(const HermitianEigen& e) {
  return e.values.size() == 1 || e.values(1) < kEntropyCutoff;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix mat) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  }
  if (hermiticity_error(mat_) > kHermitianTol) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian (error " +
                                std::to_string(hermiticity_error(mat_)) + ")");
  }
}

DensityMatrix DensityMatrix::from_ket(const Ket& ket) {
  return DensityMatrix(ket * ket.adjoint());
}

int DensityMatrix::num_qubits() const {
  if (!is_power_of_two(dim())) return -1;
  return std::countr_zero(dim());
}

DensityMatrix DensityMatrix::normalized() const {
  const double t = trace();
  if (t <= 0.0) throw std::domain_error("DensityMatrix: cannot normalize zero-trace state");
  return DensityMatrix(mat_ / t);
}

DensityMatrix DensityMatrix::scaled(double factor) const {
  return DensityMatrix(mat_ * factor);
}

double hermiticity_error(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m - m.adjoint());
}

double max_abs(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

Ket basis_ket(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("basis_ket: bits must be 0/1");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return basis_ket(std::size_t{1} << bits.size(), index);
}

Ket basis_ket(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("basis_ket: index out of range");
  Ket k = Ket::Zero(static_cast<Eigen::Index>(dim));
  k(static_cast<Eigen::Index>(index)) = 1.0;
  return k;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Ket kron(const Ket& a, const Ket& b) {
  Ket out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

CMatrix identity(std::size_t dim) {
  return CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

DensityMatrix partial_trace(const DensityMatrix& rho, int qubits_total,
                            const std::vector<int>& traced) {
  if (qubits_total < 1 || rho.dim() != (std::size_t{1} << qubits_total)) {
    throw std::invalid_argument("partial_trace: dimension does not match qubit count");
  }
  std::vector<bool> is_traced(static_cast<std::size_t>(qubits_total) + 1, false);
  for (int q : traced) {
    if (q < 1 || q > qubits_total || is_traced[static_cast<std::size_t>(q)]) {
      throw std::invalid_argument("partial_trace: invalid traced qubit set");
    }
    is_traced[static_cast<std::size_t>(q)] = true;
  }
  std::vector<int> kept_bits;
  std::vector<int> traced_bits;
  for (int q = 1; q <= qubits_total; ++q) {
    (is_traced[static_cast<std::size_t>(q)] ? traced_bits : kept_bits)
        .push_back(bit_of(q, qubits_total));
  }

  // Scatter the bits of a compact index onto the register positions in `bits`
  // (listed most significant first).
  auto scatter = [](std::size_t compact, const std::vector<int>& bits) {
    std::size_t full = 0;
    const std::size_t n = bits.size();
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t bit = (compact >> (n - 1 - k)) & 1U;
      full |= bit << bits[k];
    }
    return full;
  };

  const std::size_t kept_dim = std::size_t{1} << kept_bits.size();
  const std::size_t traced_dim = std::size_t{1} << traced_bits.size();
  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(kept_dim),
                              static_cast<Eigen::Index>(kept_dim));
  for (std::size_t r = 0; r < kept_dim; ++r) {
    const std::size_t row_base = scatter(r, kept_bits);
    for (std::size_t c = 0; c < kept_dim; ++c) {
      const std::size_t col_base = scatter(c, kept_bits);
      Complex acc = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) {
        const std::size_t off = scatter(t, traced_bits);
        acc += m(static_cast<Eigen::Index>(row_base | off),
                 static_cast<Eigen::Index>(col_base | off));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return DensityMatrix(std::move(out));
}

HermitianEigen eig_hermitian(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_hermitian: matrix is not square");
  if (hermiticity_error(m) > kHermitianTol) {
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  HermitianEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

namespace {

Eigen::VectorXd apply_floor(Eigen::VectorXd values) {
  for (auto& v : values) {
    if (v < -kEigenFloor) {
      throw std::domain_error("negative eigenvalue " + std::to_string(v) +
                              " below the PSD floor");
    }
    if (v < 0.0) v = 0.0;
  }
  return values;
}

}  // namespace

Eigen::VectorXd floored_eigenvalues(const CMatrix& m) {
  return apply_floor(eig_hermitian(m).values);
}

CMatrix psd_sqrt(const CMatrix& m) {
  const auto e = eig_hermitian(m);
  const Eigen::VectorXd roots = apply_floor(e.values).cwiseSqrt();
  return e.vectors * roots.asDiagonal() * e.vectors.adjoint();
}

double shannon_entropy(const Eigen::VectorXd& probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p > kEntropyCutoff) s -= p * std::log2(p);
  }
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-9) {
    throw std::invalid_argument("von_neumann_entropy: state is not normalized");
  }
  return shannon_entropy(floored_eigenvalues(rho.matrix()));
}

double fidelity(const Ket& psi, const DensityMatrix& sigma) {
  if (static_cast<std::size_t>(psi.size()) != sigma.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const double overlap = psi.dot(sigma.matrix() * psi).real();
  return std::min(1.0, std::sqrt(std::max(0.0, overlap)));
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");

  // Rank-one arguments go through the pure-state formula; the general route
  // would take square roots of round-off sized eigenvalues.
  const auto er = eig_hermitian(rho.matrix());
  if (rank_one(er)) {
    const double w = std::max(0.0, er.values(0));
    return fidelity(Ket(er.vectors.col(0) * std::sqrt(w)), sigma);
  }
  const auto es = eig_hermitian(sigma.matrix());
  if (rank_one(es)) {
    const double w = std::max(0.0, es.values(0));
    return fidelity(Ket(es.vectors.col(0) * std::sqrt(w)), rho);
  }

  const Eigen::VectorXd roots = apply_floor(er.values).cwiseSqrt();
  const CMatrix sqrt_rho = er.vectors * roots.asDiagonal() * er.vectors.adjoint();
  CMatrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  inner = 0.5 * (inner + inner.adjoint());
  double f = 0.0;
  for (double mu : floored_eigenvalues(inner)) f += std::sqrt(mu);
  return std::min(1.0, f);
}

PsdCheck is_psd(const CMatrix& m, double tol) {
  const double min_eig = eig_hermitian(m).values.minCoeff();
  return {min_eig >= -tol, min_eig};
}

}  // namespace qss
