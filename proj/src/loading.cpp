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
#include "psi/loading.hpp"

#include "psi/error.hpp"

namespace psi {

const Matrix* LoadingSet::find(int block, std::size_t position) const {
  const auto it = blocks.find({block, position});
  return it == blocks.end() ? nullptr : &it->second;
}

std::vector<std::size_t> block_positions(const DecompositionResult& result, int block) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < result.ordering.size(); ++i) {
    if (result.ordering[i].contains(block) && result.rank_at(i) > 0) out.push_back(i);
  }
  return out;
}

Matrix block_scores(const DecompositionResult& result, int block) {
  const auto positions = block_positions(result, block);
  Index cols = 0;
  for (auto i : positions) cols += result.scores[i].dim();
  Matrix w(result.num_samples(), cols);
  Index at = 0;
  for (auto i : positions) {
    w.middleCols(at, result.scores[i].dim()) = result.scores[i].columns();
    at += result.scores[i].dim();
  }
  return w;
}

Matrix all_scores(const DecompositionResult& result) {
  Index cols = 0;
  for (const auto& s : result.scores) cols += s.dim();
  Matrix w(result.num_samples(), cols);
  Index at = 0;
  for (const auto& s : result.scores) {
    w.middleCols(at, s.dim()) = s.columns();
    at += s.dim();
  }
  return w;
}

LoadingSet estimate_loadings(std::span<const Matrix> signals, const DecompositionResult& result) {
  if (static_cast<int>(signals.size()) != result.ordering.num_blocks()) {
    throw ValidationError("estimate_loadings: signal count does not match the structure");
  }
  LoadingSet out;
  for (std::size_t b = 0; b < signals.size(); ++b) {
    const int block = static_cast<int>(b) + 1;
    const Matrix& z = signals[b];
    if (z.cols() != result.num_samples()) throw ValidationError("matched samples required");
    out.block_rows.push_back(z.rows());

    const Matrix w = block_scores(result, block);
    if (w.cols() == 0) continue;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(w.transpose() * w);
    const Vector& values = eig.eigenvalues();
    const double cutoff = 1e-10 * values.maxCoeff();
    if (values.minCoeff() <= cutoff) {
      throw NumericalError("score Gram matrix of block " + std::to_string(block) + " is singular");
    }
    const Matrix gram_inv =
        eig.eigenvectors() * values.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    const Matrix u = z * w * gram_inv;

    Index at = 0;
    for (auto i : block_positions(result, block)) {
      const Index r = result.scores[i].dim();
      out.blocks.emplace(std::make_pair(block, i), u.middleCols(at, r));
      at += r;
    }
  }
  return out;
}

LoadingSet estimate_loadings(std::span<const SignalEstimate> signals, const DecompositionResult& result) {
  std::vector<Matrix> z;
  z.reserve(signals.size());
  for (const auto& s : signals) z.push_back(s.zhat);
  return estimate_loadings(z, result);
}

Matrix reconstruct(const LoadingSet& loadings, const DecompositionResult& result, int block) {
  if (block < 1 || block > loadings.num_blocks()) {
    throw ValidationError("reconstruct: unknown block " + std::to_string(block));
  }
  Matrix out = Matrix::Zero(loadings.block_rows[block - 1], result.num_samples());
  for (auto i : block_positions(result, block)) {
    if (const Matrix* u = loadings.find(block, i)) out.noalias() += *u * result.scores[i].columns().transpose();
  }
  return out;
}

Matrix block_loading_matrix(const LoadingSet& loadings, const DecompositionResult& result, int block) {
  if (block < 1 || block > loadings.num_blocks()) {
    throw ValidationError("unknown block " + std::to_string(block));
  }
  Index cols = 0;
  for (const auto& s : result.scores) cols += s.dim();
  Matrix out = Matrix::Zero(loadings.block_rows[block - 1], cols);
  Index at = 0;
  for (std::size_t i = 0; i < result.scores.size(); ++i) {
    const Index r = result.scores[i].dim();
    if (const Matrix* u = loadings.find(block, i)) out.middleCols(at, r) = *u;
    at += r;
  }
  return out;
}

Matrix block_loadings(const LoadingSet& loadings, const DecompositionResult& result, int block) {
  if (block < 1 || block > loadings.num_blocks()) {
    throw ValidationError("unknown block " + std::to_string(block));
  }
  const auto positions = block_positions(result, block);
  Index cols = 0;
  for (auto i : positions) cols += result.scores[i].dim();
  Matrix out(loadings.block_rows[block - 1], cols);
  Index at = 0;
  for (auto i : positions) {
    const Index r = result.scores[i].dim();
    out.middleCols(at, r) = *loadings.find(block, i);
    at += r;
  }
  return out;
}

}  // namespace psi
