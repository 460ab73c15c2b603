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

// Signal extraction and partially-joint structure identification.

#include <span>
#include <string>
#include <vector>

#include "psi/structure.hpp"
#include "psi/subspace.hpp"

namespace psi {

/// K row-centered blocks X_k (p_k x n) with matched columns.
struct MultiBlockDataset {
  std::vector<Matrix> blocks;

  int num_blocks() const noexcept { return static_cast<int>(blocks.size()); }
  Index num_samples() const noexcept { return blocks.empty() ? 0 : blocks.front().cols(); }

  /// Throws ValidationError("matched samples required") on column mismatch,
  /// and on empty or non-finite blocks.
  void validate() const;
};

/// True when every row mean is within 1e-8 times the row standard deviation.
bool is_row_centered(const Matrix& x);

/// Subtracts each row's mean.
Matrix center_rows(const Matrix& x);

/// Rank-r_k approximation of a block and the basis of its row space.
struct SignalEstimate {
  Matrix zhat;
  OrthonormalBasis vhat;
  int rank = 0;
  /// Singular values of the block, all of them (descending).
  Vector singular_values;
  bool row_centered = true;
};

/// Best rank-r approximation via the SVD. The right singular vectors are
/// sign-fixed (largest-magnitude entry positive) and the left ones follow.
SignalEstimate extract_signal(const Matrix& x, int rank);

/// Smallest r whose top-r squared singular values reach proportion q of the
/// total.
int rank_for_variance_proportion(const Vector& singular_values, double proportion);

/// Record of one accepted direction inside a stage.
struct AcceptedDirection {
  std::size_t stage = 0;
  /// Principal angle (radians) to each working subspace of the stage, in
  /// member order.
  std::vector<double> angles;
  bool degenerate = false;
};

/// Angles observed when a stage's gate rejected its candidate direction.
struct RejectedCandidate {
  std::size_t stage = 0;
  std::vector<double> angles;
  bool nothing_to_peel = false;
};

struct DecompositionDiagnostics {
  std::vector<AcceptedDirection> accepted;
  std::vector<RejectedCandidate> rejected;
  int degenerate_flag_means = 0;
};

struct DecompositionResult {
  /// One entry per ordering position (rank 0 entries included).
  PartialJointStructure structure;
  /// Score basis W_i per ordering position (n x r_i, possibly r_i = 0).
  std::vector<OrthonormalBasis> scores;
  double lambda = 0.0;
  IndexOrdering ordering;
  DecompositionDiagnostics diagnostics;

  Index num_samples() const;
  int rank_at(std::size_t position) const { return static_cast<int>(scores[position].dim()); }
  const OrthonormalBasis& score(const IndexSet& set) const { return scores[ordering.position(set)]; }
};

/// Runs the identification on signal score bases V_1..V_K.
///
/// Index-sets are visited in ordering order with working copies of the bases
/// that carry deflations from stage to stage. A multi-block stage repeatedly
/// takes the flag mean of its members' working bases and accepts it while
/// every principal angle is strictly below lambda, deflating each member by
/// the accepted direction. A singleton stage takes the remaining basis of its
/// block as is.
DecompositionResult identify(std::span<const OrthonormalBasis> bases, const IndexOrdering& ordering,
                             double lambda);

DecompositionResult identify(std::span<const SignalEstimate> signals, const IndexOrdering& ordering,
                             double lambda);

}  // namespace psi
