/*******************************************************************************
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/
#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "psi/structure.hpp"
#include "psi/subspace.hpp"

namespace psi::testing {

inline Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = d(rng);
  }
  return m;
}

inline Matrix random_orthonormal(Index rows, Index cols, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rows, cols, rng));
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

inline OrthonormalBasis random_basis(Index rows, Index cols, std::mt19937_64& rng) {
  return OrthonormalBasis::from_columns(random_orthonormal(rows, cols, rng));
}

/// Columns given as rows of the initializer for readability.
inline Matrix columns(Index n, std::vector<std::vector<double>> cols) {
  Matrix m(n, static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (Index i = 0; i < n; ++i) m(i, static_cast<Index>(j)) = cols[j][static_cast<std::size_t>(i)];
  }
  return m;
}

inline OrthonormalBasis basis(Index n, std::vector<std::vector<double>> cols) {
  return OrthonormalBasis::from_columns(columns(n, std::move(cols)));
}

inline Vector unit(Index n, Index i) { return Vector::Unit(n, i); }

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

/// Projector equality oracle: Frobenius distance of the explicit projectors.
inline double projector_gap(const Matrix& a, const Matrix& b) {
  const Matrix pa = a.cols() ? Matrix(a * (a.transpose() * a).inverse() * a.transpose())
                             : Matrix::Zero(a.rows(), a.rows());
  const Matrix pb = b.cols() ? Matrix(b * (b.transpose() * b).inverse() * b.transpose())
                             : Matrix::Zero(b.rows(), b.rows());
  return (pa - pb).norm();
}

// ---- worked fixtures ---------------------------------------------------------

inline const double kR2 = std::sqrt(2.0);
inline const double kR3 = std::sqrt(3.0);

/// V_1 = span{(cos 30, 0, sin 30)}, V_2 = span{e1, e2}.
inline std::vector<OrthonormalBasis> tilted_pair() {
  return {basis(3, {{std::cos(deg(30)), 0.0, std::sin(deg(30))}}), basis(3, {{1, 0, 0}, {0, 1, 0}})};
}

inline std::vector<OrthonormalBasis> independent_triple() {
  return {basis(4, {{1, 0, 0, 0}, {0, 1, 0, 0}}),
          basis(4, {{1, 0, 0, 0}, {0, 1 / kR2, 1 / kR2, 0}}),
          basis(4, {{1, 0, 0, 0}, {0, 0, 1 / kR2, 1 / kR2}})};
}

inline std::vector<OrthonormalBasis> dependent_triple() {
  return {basis(4, {{1, 0, 0, 0}, {0, 1, 0, 0}}),
          basis(4, {{1, 0, 0, 0}, {0, 1 / kR2, 1 / kR2, 0}}),
          basis(4, {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 1 / kR2, 1 / kR2}})};
}

inline std::vector<OrthonormalBasis> orthogonal_quad() {
  return {basis(6, {{0, 0, 1, 0, 0, 0}}),
          basis(6, {{0, 0, 0, 1, 0, 0}}),
          basis(6, {{1 / kR2, 1 / kR2, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 0}}),
          basis(6, {{1 / kR2, 1 / kR2, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 1}})};
}

inline std::vector<OrthonormalBasis> skewed_quad() {
  const double a = 1 / (2 * kR2);
  const double b = kR3 / (2 * kR2);
  return {basis(6, {{a, b, 1 / kR2, 0, 0, 0}}),
          basis(6, {{b, a, 0, 1 / kR2, 0, 0}}),
          basis(6, {{1 / kR2, 1 / kR2, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 0}}),
          basis(6, {{1 / kR2, 1 / kR2, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 1}})};
}

inline IndexOrdering ordering_of(int K, std::vector<std::vector<int>> sets) {
  std::vector<IndexSet> s;
  for (auto& blocks : sets) s.push_back(IndexSet::of(blocks));
  return IndexOrdering::from_sets(K, std::move(s));
}

inline PartialJointStructure structure_of(int K, std::vector<std::pair<std::vector<int>, int>> entries) {
  std::vector<StructureEntry> e;
  for (auto& [blocks, rank] : entries) e.push_back({IndexSet::of(blocks), rank});
  return PartialJointStructure(K, std::move(e));
}

/// Random structure for K blocks: each nonempty subset gets rank 0..max_rank.
inline PartialJointStructure random_structure(int K, int max_rank, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> r(0, max_rank);
  std::vector<StructureEntry> e;
  for (std::uint32_t m = 1; m < (1u << K); ++m) {
    const int rank = r(rng);
    if (rank > 0) e.push_back({IndexSet::from_mask(m), rank});
  }
  return PartialJointStructure(K, std::move(e));
}

}  // namespace psi::testing
