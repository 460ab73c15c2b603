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

// Exact-arithmetic diagnostics on noiseless score subspaces: relative
// independence, relative orthogonality and absolute orthogonality of a
// collection {[V_k]}, plus the exact partially-joint structure they define.

#include <span>
#include <vector>

#include "psi/structure.hpp"
#include "psi/subspace.hpp"

namespace psi {

/// A (layer, index-set) pair that breaks a condition, with a witness basis.
/// For independence the witness spans the shared directions; for the
/// orthogonality checks it is the offending deflated subspace.
struct UniquenessViolation {
  int layer = 0;
  IndexSet set;
  OrthonormalBasis witness;
};

struct UniquenessReport {
  bool relative_independence = true;
  bool relative_orthogonality = true;
  bool absolute_orthogonality = true;

  /// In ordering order; the first element is the first violation.
  std::vector<UniquenessViolation> independence_violations;
  std::vector<UniquenessViolation> orthogonality_violations;
  std::vector<UniquenessViolation> absolute_violations;

  /// [I_l] for l = 1..K-1 (index l-1): sum of intersections of index-sets
  /// larger than l.
  std::vector<OrthonormalBasis> layer_spans;
  /// Per ordering position: intersection of the member subspaces.
  std::vector<OrthonormalBasis> intersections;
  /// Per ordering position with |S| < K: P_{I_l}^perp of the intersection.
  std::vector<OrthonormalBasis> deflated;
  /// Per ordering position with |S| < K: [J_i], sum of intersections of
  /// larger index-sets overlapping S.
  std::vector<OrthonormalBasis> overlap_spans;
};

/// Full analysis. tol: directions with principal-angle cosine > 1 - tol are
/// shared; subspaces with all cosines <= tol are orthogonal.
UniquenessReport analyze_uniqueness(std::span<const OrthonormalBasis> exact_bases,
                                    const IndexOrdering& ordering, double tol = 1e-9);

/// Relative independence (the report also carries the orthogonality checks).
UniquenessReport check_relative_independence(std::span<const OrthonormalBasis> exact_bases,
                                             const IndexOrdering& ordering, double tol = 1e-9);

/// Relative orthogonality plus the per-index projector equality
/// P_{I_l}^perp(cap V) = P_{J_i}^perp(cap V).
UniquenessReport check_absolute_orthogonality(std::span<const OrthonormalBasis> exact_bases,
                                              const IndexOrdering& ordering, double tol = 1e-9);

struct ExactStructure {
  PartialJointStructure structure;
  /// Per ordering position.
  std::vector<OrthonormalBasis> scores;
};

/// Exact partially-joint score subspaces: each intersection of the member
/// subspaces, projected off every score subspace constructed before it in the
/// ordering.
ExactStructure exact_structure(std::span<const OrthonormalBasis> exact_bases,
                               const IndexOrdering& ordering, double tol = 1e-9);

}  // namespace psi
