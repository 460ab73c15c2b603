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

// End-to-end run: signal extraction, identification (fixed or tuned lambda)
// and loading estimation.

#include <cstdint>
#include <optional>
#include <vector>

#include "psi/core.hpp"
#include "psi/loading.hpp"
#include "psi/tuning.hpp"

namespace psi {

struct PipelineOptions {
  /// Exactly one of ranks / variance_proportion.
  std::vector<int> ranks;
  std::optional<double> variance_proportion;
  /// Fixed lambda in radians; if absent, lambda is tuned over grid.
  std::optional<double> lambda;
  std::vector<double> grid = default_grid();
  std::optional<IndexOrdering> ordering;
  std::uint64_t seed = 0;
  bool center = false;
  int threads = 1;
};

struct PipelineOutput {
  std::vector<int> ranks;
  std::vector<SignalEstimate> signals;
  DecompositionResult result;
  LoadingSet loadings;
  std::optional<TuningResult> tuning;
};

/// Ranks from options (explicit or by cumulative variance proportion).
std::vector<int> resolve_ranks(const MultiBlockDataset& data, const PipelineOptions& options);

PipelineOutput run_pipeline(const MultiBlockDataset& data, const PipelineOptions& options);

}  // namespace psi
