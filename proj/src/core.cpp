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
#include "psi/core.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "psi/error.hpp"

namespace psi {

void MultiBlockDataset::validate() const {
  if (blocks.empty()) throw ValidationError("no data blocks given");
  if (blocks.size() > static_cast<std::size_t>(kMaxBlocks)) {
    throw ValidationError("at most 16 blocks are supported");
  }
  const Index n = blocks.front().cols();
  for (const auto& b : blocks) {
    if (b.cols() != n) throw ValidationError("matched samples required");
    if (b.rows() == 0 || b.cols() == 0) throw ValidationError("empty data block");
    if (!b.allFinite()) throw ValidationError("data block has non-finite entries");
  }
}

bool is_row_centered(const Matrix& x) {
  if (x.cols() == 0) return true;
  const double n = static_cast<double>(x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).sum() / n;
    const double sd = std::sqrt((x.row(i).array() - mean).square().sum() / n);
    if (std::abs(mean) > 1e-8 * sd && std::abs(mean) > 0.0) return false;
  }
  return true;
}

Matrix center_rows(const Matrix& x) {
  Matrix out = x;
  if (x.cols() == 0) return out;
  const Vector means = x.rowwise().mean();
  out.colwise() -= means;
  return out;
}

SignalEstimate extract_signal(const Matrix& x, int rank) {
  if (!x.allFinite()) throw ValidationError("extract_signal: non-finite entries");
  const Index limit = std::min(x.rows(), x.cols());
  if (rank < 1 || rank > limit) {
    throw ValidationError("signal rank " + std::to_string(rank) + " outside [1, " +
                          std::to_string(limit) + "]");
  }
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix u = svd.matrixU().leftCols(rank);
  Matrix v = svd.matrixV().leftCols(rank);
  for (Index j = 0; j < rank; ++j) {
    Vector col = v.col(j);
    fix_sign(col);
    if (col.dot(v.col(j)) < 0) {
      v.col(j) = -v.col(j);
      u.col(j) = -u.col(j);
    }
  }
  const Vector s = svd.singularValues().head(rank);

  SignalEstimate est;
  est.zhat = u * s.asDiagonal() * v.transpose();
  est.vhat = OrthonormalBasis::from_columns(std::move(v));
  est.rank = rank;
  est.singular_values = svd.singularValues();
  est.row_centered = is_row_centered(x);
  return est;
}

int rank_for_variance_proportion(const Vector& singular_values, double proportion) {
  if (!(proportion > 0.0 && proportion <= 1.0)) {
    throw ValidationError("variance proportion must lie in (0, 1]");
  }
  const double total = singular_values.squaredNorm();
  if (total == 0.0) throw ValidationError("variance proportion: block has zero variance");
  double acc = 0.0;
  for (Index r = 0; r < singular_values.size(); ++r) {
    acc += singular_values[r] * singular_values[r];
    // Relative slack keeps q = 1 reachable despite rounding in the running sum.
    if (acc >= proportion * total * (1.0 - 1e-12)) return static_cast<int>(r + 1);
  }
  return static_cast<int>(singular_values.size());
}

Index DecompositionResult::num_samples() const {
  return scores.empty() ? 0 : scores.front().ambient_dim();
}

DecompositionResult identify(std::span<const OrthonormalBasis> bases, const IndexOrdering& ordering,
                             double lambda) {
  if (!(lambda >= 0.0 && lambda < std::numbers::pi / 2)) {
    throw ValidationError("lambda must lie in [0, pi/2)");
  }
  if (bases.empty()) throw ValidationError("identify: no bases given");
  if (static_cast<int>(bases.size()) != ordering.num_blocks()) {
    throw ValidationError("identify: ordering is for K=" + std::to_string(ordering.num_blocks()) +
                          " but " + std::to_string(bases.size()) + " bases were given");
  }
  const Index n = bases.front().ambient_dim();
  for (const auto& b : bases) {
    if (b.ambient_dim() != n) throw ValidationError("matched samples required");
  }

  std::vector<OrthonormalBasis> working(bases.begin(), bases.end());
  DecompositionResult result;
  result.lambda = lambda;
  result.ordering = ordering;
  result.scores.reserve(ordering.size());
  std::vector<StructureEntry> entries;
  entries.reserve(ordering.size());

  for (std::size_t stage = 0; stage < ordering.size(); ++stage) {
    const IndexSet& set = ordering[stage];
    const std::vector<int> members = set.members();

    if (members.size() == 1) {
      const auto k = static_cast<std::size_t>(members.front() - 1);
      result.scores.push_back(working[k]);
      entries.push_back({set, static_cast<int>(working[k].dim())});
      working[k] = OrthonormalBasis::zero(n);
      continue;
    }

    std::vector<Vector> collected;
    std::vector<OrthonormalBasis> current;
    current.reserve(members.size());
    auto all_nonempty = [&] {
      for (int m : members) {
        if (working[m - 1].empty()) return false;
      }
      return true;
    };

    while (all_nonempty()) {
      current.clear();
      for (int m : members) current.push_back(working[m - 1]);
      const FlagMean mean = flag_mean(current);
      if (mean.degenerate) ++result.diagnostics.degenerate_flag_means;

      std::vector<double> angles;
      angles.reserve(current.size());
      bool accept = true;
      for (const auto& b : current) {
        angles.push_back(principal_angle(mean.direction, b));
        if (!(angles.back() < lambda)) accept = false;
      }
      if (!accept) {
        result.diagnostics.rejected.push_back({stage, std::move(angles), false});
        break;
      }

      std::vector<OrthonormalBasis> peeled;
      peeled.reserve(current.size());
      for (const auto& b : current) {
        auto next = deflate(b, mean.direction);
        if (!next) break;
        peeled.push_back(std::move(*next));
      }
      if (peeled.size() != current.size()) {
        result.diagnostics.rejected.push_back({stage, std::move(angles), true});
        break;
      }

      for (std::size_t j = 0; j < members.size(); ++j) working[members[j] - 1] = std::move(peeled[j]);
      collected.push_back(mean.direction.vector());
      result.diagnostics.accepted.push_back({stage, std::move(angles), mean.degenerate});
    }

    Matrix w(n, static_cast<Index>(collected.size()));
    for (std::size_t j = 0; j < collected.size(); ++j) w.col(static_cast<Index>(j)) = collected[j];
    result.scores.push_back(OrthonormalBasis::from_columns(std::move(w)));
    entries.push_back({set, static_cast<int>(collected.size())});
  }

  result.structure = PartialJointStructure(ordering.num_blocks(), std::move(entries));
  return result;
}

DecompositionResult identify(std::span<const SignalEstimate> signals, const IndexOrdering& ordering,
                             double lambda) {
  std::vector<OrthonormalBasis> bases;
  bases.reserve(signals.size());
  for (const auto& s : signals) bases.push_back(s.vhat);
  return identify(bases, ordering, lambda);
}

}  // namespace psi
