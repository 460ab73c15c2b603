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
#include "psi/structure.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

#include "psi/error.hpp"

namespace psi {

IndexSet IndexSet::of(const std::vector<int>& blocks) {
  std::uint32_t mask = 0;
  for (int b : blocks) {
    if (b < 1 || b > kMaxBlocks) throw ValidationError("block index out of range: " + std::to_string(b));
    mask |= 1u << (b - 1);
  }
  if (mask == 0) throw ValidationError("index-set must be nonempty");
  return from_mask(mask);
}

IndexSet IndexSet::from_mask(std::uint32_t mask) {
  if (mask == 0 || mask >= (1u << kMaxBlocks)) throw ValidationError("invalid index-set mask");
  IndexSet s;
  s.mask_ = mask;
  return s;
}

int IndexSet::size() const noexcept { return std::popcount(mask_); }

int IndexSet::max_block() const noexcept { return 32 - std::countl_zero(mask_); }

std::vector<int> IndexSet::members() const {
  std::vector<int> out;
  for (int b = 1; b <= kMaxBlocks; ++b) {
    if (contains(b)) out.push_back(b);
  }
  return out;
}

std::string IndexSet::label() const {
  std::string out;
  for (int b : members()) {
    if (!out.empty()) out += '|';
    out += std::to_string(b);
  }
  return out;
}

IndexOrdering IndexOrdering::from_sets(int num_blocks, std::vector<IndexSet> sets) {
  if (num_blocks < 1 || num_blocks > kMaxBlocks) {
    throw ValidationError("number of blocks must be in [1, 16]");
  }
  const std::size_t expected = (std::size_t{1} << num_blocks) - 1;
  if (sets.size() != expected) {
    throw ValidationError("ordering must list all " + std::to_string(expected) + " index-sets");
  }
  std::vector<bool> seen(expected + 1, false);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto mask = sets[i].mask();
    if (mask == 0 || mask > expected) throw ValidationError("index-set out of range for K");
    if (seen[mask]) throw ValidationError("index-set listed twice: {" + sets[i].label() + "}");
    seen[mask] = true;
    if (i > 0 && sets[i].size() > sets[i - 1].size()) {
      throw ValidationError("index-set sizes must be non-increasing along the ordering");
    }
  }
  IndexOrdering o;
  o.num_blocks_ = num_blocks;
  o.sets_ = std::move(sets);
  return o;
}

std::size_t IndexOrdering::position(const IndexSet& set) const {
  const auto it = std::find(sets_.begin(), sets_.end(), set);
  if (it == sets_.end()) throw ValidationError("index-set not in ordering: {" + set.label() + "}");
  return static_cast<std::size_t>(it - sets_.begin());
}

IndexOrdering default_ordering(int num_blocks) {
  if (num_blocks < 1 || num_blocks > kMaxBlocks) {
    throw ValidationError("number of blocks must be in [1, 16]");
  }
  const std::uint32_t count = (1u << num_blocks) - 1;
  std::vector<IndexSet> sets;
  sets.reserve(count);
  for (std::uint32_t m = 1; m <= count; ++m) sets.push_back(IndexSet::from_mask(m));
  std::sort(sets.begin(), sets.end(), [](const IndexSet& a, const IndexSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.members() < b.members();
  });
  return IndexOrdering::from_sets(num_blocks, std::move(sets));
}

IndexOrdering parse_ordering(std::string_view text, int num_blocks) {
  std::vector<IndexSet> sets;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<int> blocks;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        const int b = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        blocks.push_back(b);
      } catch (const std::exception&) {
        throw ValidationError("ordering: bad block index '" + tok + "'");
      }
    }
    if (!blocks.empty()) sets.push_back(IndexSet::of(blocks));
  }
  return IndexOrdering::from_sets(num_blocks, std::move(sets));
}

PartialJointStructure::PartialJointStructure(int num_blocks, std::vector<StructureEntry> entries)
    : num_blocks_(num_blocks), entries_(std::move(entries)) {
  if (num_blocks < 1 || num_blocks > kMaxBlocks) {
    throw ValidationError("number of blocks must be in [1, 16]");
  }
  for (const auto& e : entries_) {
    if (e.rank < 0) throw ValidationError("structure ranks must be nonnegative");
    if (e.set.mask() == 0 || e.set.max_block() > num_blocks) {
      throw ValidationError("structure entry outside {1..K}");
    }
  }
}

int PartialJointStructure::rank_of(const IndexSet& set) const {
  int r = 0;
  for (const auto& e : entries_) {
    if (e.set == set) r += e.rank;
  }
  return r;
}

int PartialJointStructure::block_rank(int block) const {
  int r = 0;
  for (const auto& e : entries_) {
    if (e.set.contains(block)) r += e.rank;
  }
  return r;
}

int PartialJointStructure::total_rank() const {
  int r = 0;
  for (const auto& e : entries_) r += e.rank;
  return r;
}

BinaryMultiset::BinaryMultiset(int num_blocks, std::vector<std::uint32_t> vectors)
    : num_blocks_(num_blocks), vectors_(std::move(vectors)) {
  for (auto v : vectors_) {
    if (v == 0) throw ValidationError("binary multiset vectors need at least one 1");
  }
  std::sort(vectors_.begin(), vectors_.end());
}

BinaryMultiset to_binary_multiset(const PartialJointStructure& s) {
  std::vector<std::uint32_t> out;
  for (const auto& e : s.entries()) {
    for (int c = 0; c < e.rank; ++c) out.push_back(e.set.mask());
  }
  return BinaryMultiset(s.num_blocks(), std::move(out));
}

std::vector<StructureEntry> canonical_display(const PartialJointStructure& s) {
  std::vector<StructureEntry> out;
  for (const auto& e : s.entries()) {
    if (e.rank > 0) out.push_back(e);
  }
  return out;
}

bool same_structure(const PartialJointStructure& a, const PartialJointStructure& b) {
  return a.num_blocks() == b.num_blocks() && to_binary_multiset(a) == to_binary_multiset(b);
}

int hamming_distance(std::uint32_t a, std::uint32_t b) { return std::popcount(a ^ b); }

namespace {

long one_sided(const std::vector<std::uint32_t>& from, const std::vector<std::uint32_t>& to) {
  long total = 0;
  for (auto a : from) {
    int best = std::popcount(a);  // distance to the zero vector
    if (!to.empty()) {
      best = std::numeric_limits<int>::max();
      for (auto b : to) best = std::min(best, hamming_distance(a, b));
    }
    total += static_cast<long>(best) * best;
  }
  return total;
}

}  // namespace

long dissimilarity(const PartialJointStructure& a, const PartialJointStructure& b) {
  if (a.num_blocks() != b.num_blocks()) {
    throw ValidationError("dissimilarity: structures have different K");
  }
  const BinaryMultiset ma = to_binary_multiset(a);
  const BinaryMultiset mb = to_binary_multiset(b);
  const auto& va = ma.vectors();
  const auto& vb = mb.vectors();
  std::vector<std::uint32_t> only_a;
  std::vector<std::uint32_t> only_b;
  std::set_difference(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(only_a));
  std::set_difference(vb.begin(), vb.end(), va.begin(), va.end(), std::back_inserter(only_b));
  return one_sided(only_a, only_b) + one_sided(only_b, only_a);
}

nlohmann::ordered_json structure_to_json(const PartialJointStructure& s) {
  nlohmann::ordered_json j;
  j["K"] = s.num_blocks();
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : canonical_display(s)) {
    nlohmann::ordered_json entry;
    entry["blocks"] = e.set.members();
    entry["rank"] = e.rank;
    j["entries"].push_back(std::move(entry));
  }
  return j;
}

PartialJointStructure structure_from_json(const nlohmann::json& j) {
  try {
    const int k = j.at("K").get<int>();
    std::vector<StructureEntry> entries;
    for (const auto& e : j.at("entries")) {
      entries.push_back({IndexSet::of(e.at("blocks").get<std::vector<int>>()), e.at("rank").get<int>()});
    }
    return PartialJointStructure(k, std::move(entries));
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed structure JSON: ") + ex.what());
  }
}

std::string structure_to_string(const PartialJointStructure& s) {
  std::string out;
  for (const auto& e : canonical_display(s)) {
    if (!out.empty()) out += ' ';
    out += '{';
    const auto m = e.set.members();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(m[i]);
    }
    out += "}:" + std::to_string(e.rank);
  }
  return out.empty() ? "{}" : out;
}

}  // namespace psi
