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

// Block-sparse least-squares loadings for an identified structure, and
// signal reconstruction from loadings and scores.

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "psi/core.hpp"

namespace psi {

/// Loading blocks U_(k),i, keyed by (block k [1-based], ordering position i).
/// Only blocks with k in S_i and r(S_i) > 0 are stored; all others are zero.
struct LoadingSet {
  std::vector<Index> block_rows;
  std::map<std::pair<int, std::size_t>, Matrix> blocks;

  int num_blocks() const noexcept { return static_cast<int>(block_rows.size()); }
  /// nullptr when the block is structurally zero.
  const Matrix* find(int block, std::size_t position) const;
};

/// Ordering positions contributing to block k: k in S_i and r(S_i) > 0.
std::vector<std::size_t> block_positions(const DecompositionResult& result, int block);

/// W_(k): column-wise concatenation of the scores of block_positions(k).
Matrix block_scores(const DecompositionResult& result, int block);

/// All scores concatenated in ordering order (n x total rank).
Matrix all_scores(const DecompositionResult& result);

/// Per block: U_(k) = Zhat_k W_(k) (W_(k)^T W_(k))^+ split back into the
/// U_(k),i. The Gram pseudo-inverse truncates at relative tolerance 1e-10;
/// truncation means the scores are corrupted and raises NumericalError.
LoadingSet estimate_loadings(std::span<const Matrix> signals, const DecompositionResult& result);

LoadingSet estimate_loadings(std::span<const SignalEstimate> signals, const DecompositionResult& result);

/// sum over i with k in S_i of U_(k),i W_i^T  (p_k x n).
Matrix reconstruct(const LoadingSet& loadings, const DecompositionResult& result, int block);

/// U_(k) laid out against all_scores(): p_k x total rank with zero columns for
/// index-sets not containing k.
Matrix block_loading_matrix(const LoadingSet& loadings, const DecompositionResult& result, int block);

/// U_(k) restricted to block_positions(k) (p_k x r_(k)).
Matrix block_loadings(const LoadingSet& loadings, const DecompositionResult& result, int block);

}  // namespace psi
