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
#include "psi/uniqueness.hpp"

#include <cmath>

#include "psi/error.hpp"

namespace psi {

namespace {

void validate_inputs(std::span<const OrthonormalBasis> bases, const IndexOrdering& ordering) {
  if (bases.empty()) throw ValidationError("uniqueness: no bases given");
  if (static_cast<int>(bases.size()) != ordering.num_blocks()) {
    throw ValidationError("uniqueness: ordering K does not match the number of bases");
  }
  for (const auto& b : bases) {
    if (b.ambient_dim() != bases.front().ambient_dim()) {
      throw ValidationError("matched samples required");
    }
  }
}

std::vector<OrthonormalBasis> member_intersections(std::span<const OrthonormalBasis> bases,
                                                   const IndexOrdering& ordering, double tol) {
  std::vector<OrthonormalBasis> out;
  out.reserve(ordering.size());
  for (const auto& set : ordering.sets()) {
    std::vector<OrthonormalBasis> members;
    for (int k : set.members()) members.push_back(bases[k - 1]);
    out.push_back(intersect_all(members, tol));
  }
  return out;
}

}  // namespace

UniquenessReport analyze_uniqueness(std::span<const OrthonormalBasis> exact_bases,
                                    const IndexOrdering& ordering, double tol) {
  validate_inputs(exact_bases, ordering);
  const int num_blocks = ordering.num_blocks();
  const Index n = exact_bases.front().ambient_dim();
  const std::size_t count = ordering.size();

  UniquenessReport report;
  report.intersections = member_intersections(exact_bases, ordering, tol);
  report.deflated.assign(count, OrthonormalBasis::zero(n));
  report.overlap_spans.assign(count, OrthonormalBasis::zero(n));

  for (int layer = 1; layer < num_blocks; ++layer) {
    std::vector<OrthonormalBasis> larger;
    for (std::size_t i = 0; i < count; ++i) {
      if (ordering[i].size() > layer) larger.push_back(report.intersections[i]);
    }
    const OrthonormalBasis span_above = subspace_sum(larger, n);
    report.layer_spans.push_back(span_above);

    std::vector<std::size_t> in_layer;
    for (std::size_t i = 0; i < count; ++i) {
      if (ordering[i].size() != layer) continue;
      in_layer.push_back(i);
      report.deflated[i] = project_out(report.intersections[i], span_above);

      std::vector<OrthonormalBasis> overlapping;
      for (std::size_t j = 0; j < count; ++j) {
        if (ordering[j].size() > layer && ordering[j].intersects(ordering[i])) {
          overlapping.push_back(report.intersections[j]);
        }
      }
      report.overlap_spans[i] = subspace_sum(overlapping, n);
    }

    for (std::size_t i : in_layer) {
      const OrthonormalBasis& own = report.deflated[i];
      if (own.empty()) continue;
      std::vector<OrthonormalBasis> others;
      for (std::size_t j : in_layer) {
        if (j != i) others.push_back(report.deflated[j]);
      }
      const OrthonormalBasis rest = subspace_sum(others, n);

      const OrthonormalBasis shared = intersect(own, rest, tol);
      if (!shared.empty()) {
        report.relative_independence = false;
        report.independence_violations.push_back({layer, ordering[i], shared});
      }
      if (max_cosine(own, rest) > tol) {
        report.relative_orthogonality = false;
        report.orthogonality_violations.push_back({layer, ordering[i], own});
      }
      const OrthonormalBasis via_overlap = project_out(report.intersections[i], report.overlap_spans[i]);
      if (via_overlap.dim() != own.dim() || projector_distance(via_overlap, own) > std::sqrt(tol)) {
        report.absolute_violations.push_back({layer, ordering[i], via_overlap});
      }
    }
  }

  // An empty deflated subspace can still differ from its overlap projection.
  for (int layer = 1; layer < num_blocks; ++layer) {
    for (std::size_t i = 0; i < count; ++i) {
      if (ordering[i].size() != layer || !report.deflated[i].empty()) continue;
      const OrthonormalBasis via_overlap = project_out(report.intersections[i], report.overlap_spans[i]);
      if (!via_overlap.empty()) report.absolute_violations.push_back({layer, ordering[i], via_overlap});
    }
  }

  report.absolute_orthogonality = report.relative_orthogonality && report.absolute_violations.empty();
  return report;
}

UniquenessReport check_relative_independence(std::span<const OrthonormalBasis> exact_bases,
                                             const IndexOrdering& ordering, double tol) {
  return analyze_uniqueness(exact_bases, ordering, tol);
}

UniquenessReport check_absolute_orthogonality(std::span<const OrthonormalBasis> exact_bases,
                                              const IndexOrdering& ordering, double tol) {
  return analyze_uniqueness(exact_bases, ordering, tol);
}

ExactStructure exact_structure(std::span<const OrthonormalBasis> exact_bases,
                               const IndexOrdering& ordering, double tol) {
  validate_inputs(exact_bases, ordering);
  const Index n = exact_bases.front().ambient_dim();
  const auto intersections = member_intersections(exact_bases, ordering, tol);

  ExactStructure out;
  std::vector<StructureEntry> entries;
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    const OrthonormalBasis before = subspace_sum(out.scores, n);
    out.scores.push_back(project_out(intersections[i], before));
    entries.push_back({ordering[i], static_cast<int>(out.scores.back().dim())});
  }
  out.structure = PartialJointStructure(ordering.num_blocks(), std::move(entries));
  return out;
}

}  // namespace psi
