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
#include "psi/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "psi/error.hpp"
#include "psi/parallel.hpp"

namespace psi {

SplitPlan split(Index n, std::uint64_t seed) {
  if (n < 4) throw ValidationError("split requires at least 4 samples");
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  const auto n_train = static_cast<std::size_t>((n + 1) / 2);
  SplitPlan plan;
  plan.seed = seed;
  plan.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  plan.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

Matrix select_columns(const Matrix& x, std::span<const Index> cols) {
  Matrix out(x.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = x.col(cols[j]);
  return out;
}

TestScores test_scores(const Matrix& x_test, const Matrix& u_train) {
  if (x_test.rows() != u_train.rows()) {
    throw ValidationError("test_scores: loading rows do not match test data rows");
  }
  const Index r = u_train.cols();
  if (r > x_test.cols()) throw ValidationError("test_scores: rank exceeds the number of test samples");
  TestScores out;
  if (r == 0) {
    out.w = Matrix(x_test.cols(), 0);
    return out;
  }
  const Matrix m = x_test.transpose() * u_train;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  out.degenerate = s(r - 1) <= 1e-10 * s(0) || s(0) == 0.0;
  out.w = svd.matrixU() * svd.matrixV().transpose();
  return out;
}

double empirical_risk(std::span<const Matrix> x_test, std::span<const Matrix> u_train,
                      const Matrix& w_test) {
  if (x_test.size() != u_train.size()) throw ValidationError("empirical_risk: block count mismatch");
  double risk = 0.0;
  for (std::size_t k = 0; k < x_test.size(); ++k) {
    const Matrix& x = x_test[k];
    const Matrix& u = u_train[k];
    if (u.rows() != x.rows() || u.cols() != w_test.cols() || w_test.rows() != x.cols()) {
      throw ValidationError("empirical_risk: inconsistent shapes");
    }
    const double denom = x.squaredNorm();
    if (denom == 0.0) throw ValidationError("empirical_risk: zero test block " + std::to_string(k + 1));
    risk += (x - u * w_test.transpose()).squaredNorm() / denom;
  }
  return risk;
}

std::vector<double> default_grid() { return degree_grid(0.0, 89.0, 1.0); }

std::vector<double> degree_grid(double lo_deg, double hi_deg, double step_deg) {
  if (!(step_deg > 0.0) || !(lo_deg >= 0.0) || !(hi_deg >= lo_deg) || !(hi_deg < 90.0)) {
    throw ValidationError("grid must satisfy 0 <= lo <= hi < 90 and step > 0");
  }
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double deg = lo_deg + static_cast<double>(i) * step_deg;
    if (deg > hi_deg + 1e-9) break;
    out.push_back(deg * std::numbers::pi / 180.0);
  }
  return out;
}

std::size_t first_argmin(std::span<const CurvePoint> curve) {
  if (curve.empty()) throw ValidationError("empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].value < curve[best].value) best = i;
  }
  return best;
}

namespace {

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("lambda grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !(grid[i] < std::numbers::pi / 2)) {
      throw ValidationError("lambda grid values must lie in [0, 90) degrees");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("lambda grid must be strictly increasing");
  }
}

std::vector<SignalEstimate> extract_all(std::span<const Matrix> blocks, std::span<const int> ranks) {
  std::vector<SignalEstimate> out;
  out.reserve(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) out.push_back(extract_signal(blocks[k], ranks[k]));
  return out;
}

}  // namespace

TuningResult select_lambda(const MultiBlockDataset& data, std::span<const int> ranks,
                           const IndexOrdering& ordering, std::span<const double> grid,
                           std::uint64_t seed, int threads) {
  data.validate();
  check_grid(grid);
  if (static_cast<int>(ranks.size()) != data.num_blocks()) {
    throw ValidationError("one rank per block required");
  }
  if (ordering.num_blocks() != data.num_blocks()) throw ValidationError("ordering does not match block count");

  TuningResult out;
  out.plan = split(data.num_samples(), seed);

  std::vector<Matrix> x_train, x_test;
  Index total_rows = 0;
  for (const auto& x : data.blocks) {
    x_train.push_back(select_columns(x, out.plan.train));
    x_test.push_back(select_columns(x, out.plan.test));
    total_rows += x.rows();
  }
  Matrix x_test_stacked(total_rows, static_cast<Index>(out.plan.test.size()));
  {
    Index row = 0;
    for (const auto& x : x_test) {
      x_test_stacked.middleRows(row, x.rows()) = x;
      row += x.rows();
    }
  }

  const auto train_signals = extract_all(x_train, ranks);
  const auto whole_signals = extract_all(data.blocks, ranks);

  std::vector<DecompositionResult> train_results(grid.size());
  std::vector<PartialJointStructure> whole(grid.size());
  out.risk_curve.resize(grid.size());

  parallel_for(grid.size(), threads, [&](std::size_t g) {
    auto result = identify(std::span<const SignalEstimate>(train_signals), ordering, grid[g]);
    const LoadingSet loadings = estimate_loadings(std::span<const SignalEstimate>(train_signals), result);

    std::vector<Matrix> u_blocks;
    Matrix u_stacked(total_rows, all_scores(result).cols());
    Index row = 0;
    for (int k = 1; k <= data.num_blocks(); ++k) {
      u_blocks.push_back(block_loading_matrix(loadings, result, k));
      u_stacked.middleRows(row, u_blocks.back().rows()) = u_blocks.back();
      row += u_blocks.back().rows();
    }
    const TestScores ts = test_scores(x_test_stacked, u_stacked);
    out.risk_curve[g] = {grid[g], empirical_risk(x_test, u_blocks, ts.w)};
    train_results[g] = std::move(result);

    whole[g] = identify(std::span<const SignalEstimate>(whole_signals), ordering, grid[g]).structure;
  });

  const std::size_t tilde = first_argmin(out.risk_curve);
  out.lambda_tilde = grid[tilde];
  out.structure_train = train_results[tilde].structure;

  out.dissimilarity_curve.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out.dissimilarity_curve[g] = {grid[g], static_cast<double>(dissimilarity(out.structure_train, whole[g]))};
  }
  const std::size_t hat = first_argmin(out.dissimilarity_curve);
  out.lambda_hat = grid[hat];
  out.structure_hat = whole[hat];
  out.whole_structures = std::move(whole);
  return out;
}

std::pair<PartialJointStructure, int> mode_structure(std::span<const PartialJointStructure> structures) {
  if (structures.empty()) throw ValidationError("mode_structure requires at least one structure");
  const int K = structures.front().num_blocks();
  std::vector<BinaryMultiset> keys;
  keys.reserve(structures.size());
  for (const auto& s : structures) {
    if (s.num_blocks() != K) throw ValidationError("mode_structure: structures differ in block count");
    keys.push_back(to_binary_multiset(s));
  }
  std::size_t best = 0;
  int best_count = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const int c = static_cast<int>(std::count(keys.begin(), keys.end(), keys[i]));
    if (c > best_count) {
      best = i;
      best_count = c;
    }
  }
  return {structures[best], best_count};
}

}  // namespace psi
