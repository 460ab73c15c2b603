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
#include "psi/simgen.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "psi/error.hpp"

namespace psi {

std::vector<int> SimulationModel::block_ranks() const {
  std::vector<int> out;
  for (int k = 1; k <= num_blocks; ++k) out.push_back(true_structure.block_rank(k));
  return out;
}

void SimulationModel::validate() const {
  if (num_blocks < 1 || true_structure.num_blocks() != num_blocks) {
    throw ValidationError("model: block count mismatch");
  }
  if (static_cast<int>(p.size()) != num_blocks) throw ValidationError("model: one p_k per block required");
  const auto& entries = true_structure.entries();
  if (sigma2.size() != entries.size()) throw ValidationError("model: one variance list per structure entry");
  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (static_cast<int>(sigma2[e].size()) != entries[e].rank) {
      throw ValidationError("model: variance list length must equal the entry rank");
    }
    for (double s : sigma2[e]) {
      if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("model: variances must be positive");
    }
  }
  if (snr && !(*snr > 0.0)) throw ValidationError("model: snr must be positive");
  const auto ranks = block_ranks();
  for (int k = 0; k < num_blocks; ++k) {
    if (ranks[k] > std::min(n, p[k])) {
      throw ValidationError("model: rank budget of block " + std::to_string(k + 1) + " exceeds min(n, p_k)");
    }
  }
  if (true_structure.total_rank() > n) throw ValidationError("model: total rank exceeds n");
}

namespace {

SimulationModel make_model(std::string name, std::vector<std::pair<std::vector<int>, std::vector<double>>> spec,
                           Index n, Index p) {
  SimulationModel m;
  m.name = std::move(name);
  m.num_blocks = 3;
  std::vector<StructureEntry> entries;
  for (auto& [blocks, variances] : spec) {
    entries.push_back({IndexSet::of(blocks), static_cast<int>(variances.size())});
    m.sigma2.push_back(std::move(variances));
  }
  m.true_structure = PartialJointStructure(3, std::move(entries));
  m.n = n;
  m.p.assign(3, p);
  return m;
}

std::vector<double> ladder(double start, double step, int count) {
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(start + step * j);
  return out;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(a + (b - a) * j / (count - 1));
  return out;
}

Matrix gaussian(Index rows, Index cols, double sd, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, sd);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  }
  return m;
}

Matrix thin_q(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  return q;
}

}  // namespace

SimulationModel model_preset(int id, Index n, Index p) {
  SimulationModel m;
  switch (id) {
    case 1:
      m = make_model("model1", {{{1}, {1.4, 0.8}}, {{2}, {1.3, 0.7}}, {{3}, {1.2, 0.6}}}, n, p);
      break;
    case 2:
      m = make_model("model2", {{{1, 2, 3}, {1.0, 0.9}}}, n, p);
      break;
    case 3:
      m = make_model("model3", {{{1, 2}, {1.4, 0.8}}, {{1, 3}, {1.3, 0.7}}, {{2, 3}, {1.2, 0.6}}}, n, p);
      break;
    case 4:
      m = make_model("model4",
                     {{{1, 2, 3}, {1.5, 0.8}}, {{1}, {1.4, 0.7}}, {{2}, {1.3, 0.6}}, {{3}, {1.2, 0.5}}}, n, p);
      break;
    case 5:
      m = make_model("model5",
                     {{{1, 2, 3}, {1.5, 0.8}}, {{1, 2}, {1.4, 0.7}}, {{1, 3}, {1.3, 0.6}}, {{2, 3}, {1.2, 0.5}}},
                     n, p);
      break;
    case 6:
      m = make_model("model6",
                     {{{1, 2, 3}, {1.8, 0.8}},
                      {{1, 2}, {1.7, 0.7}},
                      {{1, 3}, {1.6, 0.6}},
                      {{2, 3}, {1.5, 0.5}},
                      {{1}, {1.4, 0.4}},
                      {{2}, {1.3, 0.3}},
                      {{3}, {1.2, 0.2}}},
                     n, p);
      break;
    default:
      throw ValidationError("unknown model id " + std::to_string(id) + " (expected 1..6)");
  }
  m.loading_seed = static_cast<std::uint64_t>(id);
  return m;
}

SimulationModel imbalanced_preset(ImbalancedCase which, Index n, Index p) {
  SimulationModel m;
  if (which == ImbalancedCase::JointStrong) {
    m = make_model("joint_strong",
                   {{{1, 2, 3}, linspace(15.0, 5.5, 10)},
                    {{1}, ladder(0.150, -0.009, 10)},
                    {{2}, ladder(0.147, -0.009, 10)},
                    {{3}, ladder(0.144, -0.009, 10)}},
                   n, p);
    m.loading_seed = 101;
  } else {
    m = make_model("individual_strong",
                   {{{1, 2, 3}, linspace(0.15, 0.055, 10)},
                    {{1}, ladder(15.0, -0.9, 10)},
                    {{2}, ladder(14.7, -0.9, 10)},
                    {{3}, ladder(14.4, -0.9, 10)}},
                   n, p);
    m.loading_seed = 102;
  }
  return m;
}

GroundTruth generate(const SimulationModel& model, std::uint64_t seed) {
  model.validate();
  const auto& entries = model.true_structure.entries();
  const int K = model.num_blocks;
  GroundTruth gt;

  std::mt19937_64 loading_rng(model.loading_seed);
  gt.u.assign(static_cast<std::size_t>(K), std::vector<Matrix>(entries.size()));
  for (int k = 1; k <= K; ++k) {
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (!entries[e].set.contains(k) || entries[e].rank == 0) continue;
      Matrix u(model.p[k - 1], entries[e].rank);
      for (int j = 0; j < entries[e].rank; ++j) {
        u.col(j) = gaussian(model.p[k - 1], 1, std::sqrt(model.sigma2[e][j]), loading_rng);
      }
      gt.u[k - 1][e] = std::move(u);
    }
  }

  std::mt19937_64 rng(seed);
  const Index total = model.true_structure.total_rank();
  if (model.w_generation == WGeneration::Joint) {
    const Matrix q = total > 0 ? thin_q(gaussian(model.n, total, 1.0, rng)) : Matrix(model.n, 0);
    Index at = 0;
    for (const auto& entry : entries) {
      gt.w.push_back(q.middleCols(at, entry.rank));
      at += entry.rank;
    }
  } else {
    for (const auto& entry : entries) {
      gt.w.push_back(entry.rank > 0 ? thin_q(gaussian(model.n, entry.rank, 1.0, rng)) : Matrix(model.n, 0));
    }
  }

  for (int k = 1; k <= K; ++k) {
    Matrix z = Matrix::Zero(model.p[k - 1], model.n);
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (gt.u[k - 1][e].size() > 0) z.noalias() += gt.u[k - 1][e] * gt.w[e].transpose();
    }
    Matrix x = z;
    if (model.snr) x += gaussian(model.p[k - 1], model.n, std::sqrt(1.0 / *model.snr), rng);
    gt.z.push_back(std::move(z));
    gt.x.push_back(std::move(x));
  }
  return gt;
}

int metric_accuracy(const PartialJointStructure& estimate, const PartialJointStructure& truth) {
  return same_structure(estimate, truth) ? 1 : 0;
}

double metric_rse(const GroundTruth& truth, const LoadingSet& loadings, const DecompositionResult& result) {
  const auto K = truth.z.size();
  if (K == 0) throw ValidationError("metric_rse: no blocks");
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = truth.z[k].squaredNorm();
    if (denom == 0.0) throw ValidationError("metric_rse: zero signal block " + std::to_string(k + 1));
    total += (truth.z[k] - reconstruct(loadings, result, static_cast<int>(k) + 1)).squaredNorm() / denom;
  }
  return total / static_cast<double>(K);
}

namespace {

double angle_degrees(const Vector& v, const OrthonormalBasis& basis) {
  if (basis.empty()) return 90.0;
  return principal_angle(UnitDirection::normalized(v), basis) * 180.0 / std::numbers::pi;
}

}  // namespace

MeanAngles metric_angles(const GroundTruth& truth, const SimulationModel& model, const LoadingSet& loadings,
                         const DecompositionResult& result) {
  MeanAngles out;
  const auto& entries = model.true_structure.entries();

  double sum_u = 0.0;
  int count_u = 0;
  for (int k = 1; k <= model.num_blocks; ++k) {
    const OrthonormalBasis uhat = orthonormalize(block_loadings(loadings, result, k));
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const Matrix& u = truth.u[k - 1][e];
      for (Index j = 0; j < u.cols(); ++j) {
        sum_u += angle_degrees(u.col(j), uhat);
        ++count_u;
      }
    }
  }
  if (count_u > 0) out.theta_u = sum_u / count_u;

  const OrthonormalBasis what = orthonormalize(all_scores(result));
  double sum_w = 0.0;
  int count_w = 0;
  for (const auto& w : truth.w) {
    for (Index j = 0; j < w.cols(); ++j) {
      sum_w += angle_degrees(w.col(j), what);
      ++count_w;
    }
  }
  if (count_w > 0) out.theta_w = sum_w / count_w;
  return out;
}

}  // namespace psi
