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

// Index-sets, index-set orderings, partially-joint structures and the
// Hamming-based dissimilarity between structures.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace psi {

inline constexpr int kMaxBlocks = 16;

/// Nonempty subset of {1, ..., K}, stored as a bit mask (block b -> bit b-1).
class IndexSet {
 public:
  IndexSet() = default;

  /// From 1-indexed block numbers; order and duplicates do not matter.
  static IndexSet of(const std::vector<int>& blocks);
  static IndexSet from_mask(std::uint32_t mask);

  std::uint32_t mask() const noexcept { return mask_; }
  int size() const noexcept;
  bool contains(int block) const noexcept { return (mask_ >> (block - 1)) & 1u; }
  bool intersects(const IndexSet& other) const noexcept { return (mask_ & other.mask_) != 0; }
  /// Ascending 1-indexed members.
  std::vector<int> members() const;
  /// Largest member (the smallest K this set is valid for).
  int max_block() const noexcept;
  /// "1|2|3"
  std::string label() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::uint32_t mask_ = 0;
};

/// All 2^K - 1 index-sets, sizes non-increasing.
class IndexOrdering {
 public:
  IndexOrdering() = default;

  /// Validates: every nonempty subset of {1..K} exactly once, sizes
  /// non-increasing along the sequence.
  static IndexOrdering from_sets(int num_blocks, std::vector<IndexSet> sets);

  int num_blocks() const noexcept { return num_blocks_; }
  const std::vector<IndexSet>& sets() const noexcept { return sets_; }
  std::size_t size() const noexcept { return sets_.size(); }
  const IndexSet& operator[](std::size_t i) const { return sets_[i]; }
  /// Position of a set in the sequence; throws if absent.
  std::size_t position(const IndexSet& set) const;

 private:
  int num_blocks_ = 0;
  std::vector<IndexSet> sets_;
};

/// Sizes descending; equal sizes in lexicographic order of sorted members.
IndexOrdering default_ordering(int num_blocks);

/// Parses one index-set per nonblank line ("1,2,3" or "1 2 3"); '#' starts a
/// comment.
IndexOrdering parse_ordering(std::string_view text, int num_blocks);

struct StructureEntry {
  IndexSet set;
  int rank = 0;

  friend bool operator==(const StructureEntry&, const StructureEntry&) = default;
};

/// Collection of (index-set, rank) pairs for K blocks. Rank-0 entries may be
/// present; they carry no components.
class PartialJointStructure {
 public:
  PartialJointStructure() = default;
  PartialJointStructure(int num_blocks, std::vector<StructureEntry> entries);

  int num_blocks() const noexcept { return num_blocks_; }
  const std::vector<StructureEntry>& entries() const noexcept { return entries_; }
  /// Sum of ranks of entries matching set (0 if none).
  int rank_of(const IndexSet& set) const;
  /// Sum of ranks over entries containing block.
  int block_rank(int block) const;
  int total_rank() const;

 private:
  int num_blocks_ = 0;
  std::vector<StructureEntry> entries_;
};

/// Multiset of K-length indicator vectors, kept sorted.
class BinaryMultiset {
 public:
  BinaryMultiset(int num_blocks, std::vector<std::uint32_t> vectors);

  int num_blocks() const noexcept { return num_blocks_; }
  const std::vector<std::uint32_t>& vectors() const noexcept { return vectors_; }
  std::size_t size() const noexcept { return vectors_.size(); }

  friend bool operator==(const BinaryMultiset&, const BinaryMultiset&) = default;

 private:
  int num_blocks_ = 0;
  std::vector<std::uint32_t> vectors_;
};

/// Each entry (S, r) contributes r copies of the indicator vector of S.
BinaryMultiset to_binary_multiset(const PartialJointStructure& s);

/// Drops rank-0 entries, keeping order.
std::vector<StructureEntry> canonical_display(const PartialJointStructure& s);

/// Same binary multiset.
bool same_structure(const PartialJointStructure& a, const PartialJointStructure& b);

int hamming_distance(std::uint32_t a, std::uint32_t b);

/// Semi-metric between structures: identical indicator vectors are cancelled
/// pairwise, then every survivor on either side adds the squared Hamming
/// distance to its nearest survivor on the other side. A survivor facing an
/// empty side is measured against the zero vector.
long dissimilarity(const PartialJointStructure& a, const PartialJointStructure& b);

/// {"K":3,"entries":[{"blocks":[1,2,3],"rank":2},...]}, rank-0 entries dropped.
nlohmann::ordered_json structure_to_json(const PartialJointStructure& s);
PartialJointStructure structure_from_json(const nlohmann::json& j);

/// Compact text form, e.g. "{1,2,3}:2 {1}:1".
std::string structure_to_string(const PartialJointStructure& s);

}  // namespace psi
