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

// Synthetic multi-block data (Models 1-6 and the imbalanced-strength
// settings) and the evaluation metrics used in the simulation study.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psi/core.hpp"
#include "psi/loading.hpp"

namespace psi {

enum class WGeneration {
  /// One stacked n x r_total Gaussian matrix orthonormalized and sliced, so
  /// all W_i are mutually orthogonal.
  Joint,
  /// Each W_i orthonormalized on its own; cross-set angles are random.
  PerSet,
};

enum class ImbalancedCase { JointStrong, IndividualStrong };

struct SimulationModel {
  std::string name;
  int num_blocks = 3;
  /// Entries carry the true ranks; sigma2[e] holds sigma^2_{e,j}, j < rank.
  PartialJointStructure true_structure;
  std::vector<std::vector<double>> sigma2;
  /// Noise variance is 1/snr; std::nullopt means noiseless.
  std::optional<double> snr;
  Index n = 200;
  std::vector<Index> p;
  /// Seed for the loadings, which stay fixed across repetitions.
  std::uint64_t loading_seed = 1;
  WGeneration w_generation = WGeneration::Joint;

  /// r_k = sum of ranks of entries containing k.
  std::vector<int> block_ranks() const;
  void validate() const;
};

struct GroundTruth {
  /// One score matrix per structure entry (n x r_e).
  std::vector<Matrix> w;
  /// u[k-1][e]: p_k x r_e loadings, or an empty matrix if k is not in S_e.
  std::vector<std::vector<Matrix>> u;
  std::vector<Matrix> z;
  std::vector<Matrix> x;

  MultiBlockDataset dataset() const { return MultiBlockDataset{x}; }
};

/// Models 1..6 with their structures and signal variances.
SimulationModel model_preset(int id, Index n = 200, Index p = 200);

/// Rank-10 joint plus three rank-10 individual components.
SimulationModel imbalanced_preset(ImbalancedCase which, Index n = 200, Index p = 100);

/// Loadings from model.loading_seed; W and E from `seed`.
GroundTruth generate(const SimulationModel& model, std::uint64_t seed);

/// 1 iff the binary multisets agree.
int metric_accuracy(const PartialJointStructure& estimate, const PartialJointStructure& truth);

/// Mean over blocks of ||Z_k - U_(k) W_(k)^T||_F^2 / ||Z_k||_F^2.
double metric_rse(const GroundTruth& truth, const LoadingSet& loadings, const DecompositionResult& result);

struct MeanAngles {
  double theta_u = 90.0;  // degrees
  double theta_w = 90.0;  // degrees
};

MeanAngles metric_angles(const GroundTruth& truth, const SimulationModel& model, const LoadingSet& loadings,
                         const DecompositionResult& result);

}  // namespace psi
