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
#include "psi/pipeline.hpp"

#include "psi/error.hpp"

namespace psi {

std::vector<int> resolve_ranks(const MultiBlockDataset& data, const PipelineOptions& options) {
  const bool have_ranks = !options.ranks.empty();
  if (have_ranks == options.variance_proportion.has_value()) {
    throw ValidationError("exactly one of ranks or variance proportion is required");
  }
  if (have_ranks) {
    if (static_cast<int>(options.ranks.size()) != data.num_blocks()) {
      throw ValidationError("expected " + std::to_string(data.num_blocks()) + " ranks, got " +
                            std::to_string(options.ranks.size()));
    }
    return options.ranks;
  }
  const double q = *options.variance_proportion;
  if (!(q > 0.0 && q <= 1.0)) throw ValidationError("variance proportion must lie in (0, 1]");
  std::vector<int> out;
  for (const auto& x : data.blocks) {
    Eigen::BDCSVD<Matrix> svd(x);
    out.push_back(rank_for_variance_proportion(svd.singularValues(), q));
  }
  return out;
}

PipelineOutput run_pipeline(const MultiBlockDataset& input, const PipelineOptions& options) {
  input.validate();
  MultiBlockDataset centered;
  const MultiBlockDataset* data = &input;
  if (options.center) {
    for (const auto& x : input.blocks) centered.blocks.push_back(center_rows(x));
    data = &centered;
  }
  const IndexOrdering ordering = options.ordering ? *options.ordering : default_ordering(data->num_blocks());
  if (ordering.num_blocks() != data->num_blocks()) throw ValidationError("ordering does not match block count");

  PipelineOutput out;
  out.ranks = resolve_ranks(*data, options);
  for (std::size_t k = 0; k < data->blocks.size(); ++k) {
    out.signals.push_back(extract_signal(data->blocks[k], out.ranks[k]));
  }

  double lambda = 0.0;
  if (options.lambda) {
    lambda = *options.lambda;
  } else {
    out.tuning = select_lambda(*data, out.ranks, ordering, options.grid, options.seed, options.threads);
    lambda = out.tuning->lambda_hat;
  }
  out.result = identify(std::span<const SignalEstimate>(out.signals), ordering, lambda);
  out.loadings = estimate_loadings(std::span<const SignalEstimate>(out.signals), out.result);
  return out;
}

}  // namespace psi
