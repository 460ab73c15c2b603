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
#include <cmath>
#include <sstream>

#include "psi/cli.hpp"
#include "psi/error.hpp"
#include "psi/io.hpp"

namespace psi::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("invalid " + what + ": '" + s + "'");
  }
}

void check_grid(const GridSpec& g) {
  if (!(g.step > 0.0) || !(g.lo >= 0.0) || !(g.hi >= g.lo) || !(g.hi < 90.0)) {
    throw ValidationError("grid must satisfy 0 <= lo <= hi < 90 and step > 0");
  }
}

void check_lambda(double deg) {
  if (!(deg >= 0.0 && deg < 90.0)) throw ValidationError("lambda must lie in [0, 90) degrees");
}

}  // namespace

std::vector<int> parse_ranks(const std::string& text) {
  std::vector<int> out;
  for (const auto& field : split(text, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(field, &used);
      if (used != field.size() || v < 0) throw std::invalid_argument(field);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("invalid rank '" + field + "'");
    }
  }
  if (out.empty()) throw ValidationError("empty rank list");
  return out;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ValidationError("grid must be lo:hi:step");
  GridSpec g{to_double(parts[0], "grid"), to_double(parts[1], "grid"), to_double(parts[2], "grid")};
  check_grid(g);
  return g;
}

std::optional<double> parse_snr(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return std::nullopt;
  const double v = to_double(text, "snr");
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("snr must be positive or 'inf'");
  return v;
}

WGeneration parse_w_generation(const std::string& text) {
  if (text == "joint") return WGeneration::Joint;
  if (text == "per-set") return WGeneration::PerSet;
  throw ValidationError("w generation must be 'joint' or 'per-set'");
}

void RunConfig::validate(bool needs_lambda) const {
  if (inputs.empty()) throw ValidationError("at least one input block is required");
  if (ranks.empty() == !variance_proportion.has_value()) {
    throw ValidationError("exactly one of --ranks or --var-prop is required");
  }
  if (!ranks.empty() && ranks.size() != inputs.size()) {
    throw ValidationError("expected " + std::to_string(inputs.size()) + " ranks, got " + std::to_string(ranks.size()));
  }
  if (variance_proportion && !(*variance_proportion > 0.0 && *variance_proportion <= 1.0)) {
    throw ValidationError("--var-prop must lie in (0, 1]");
  }
  if (needs_lambda && lambda_degrees.has_value() == tune) {
    throw ValidationError("exactly one of --lambda-deg or --tune is required");
  }
  if (lambda_degrees) check_lambda(*lambda_degrees);
  check_grid(grid);
  if (repetitions < 1) throw ValidationError("--reps must be at least 1");
  if (threads < 0) throw ValidationError("--threads must be nonnegative");
}

void SimulateConfig::validate() const {
  if (repetitions < 1) throw ValidationError("--reps must be at least 1");
  if (n < 0 || p < 0) throw ValidationError("dimensions must be positive");
  if (lambda_degrees) check_lambda(*lambda_degrees);
  check_grid(grid);
  if (threads < 0) throw ValidationError("--threads must be nonnegative");
}

SimulationModel resolve_model(const SimulateConfig& config) {
  SimulationModel m;
  if (config.model == "joint_strong" || config.model == "individual_strong") {
    const auto which = config.model == "joint_strong" ? ImbalancedCase::JointStrong : ImbalancedCase::IndividualStrong;
    m = imbalanced_preset(which, config.n > 0 ? config.n : 200, config.p > 0 ? config.p : 100);
  } else {
    int id = 0;
    if (config.model.size() == 1 && config.model[0] >= '1' && config.model[0] <= '6') id = config.model[0] - '0';
    if (id == 0) throw ValidationError("unknown model '" + config.model + "'");
    m = model_preset(id, config.n > 0 ? config.n : 200, config.p > 0 ? config.p : 200);
  }
  m.snr = config.snr;
  m.w_generation = config.w_generation;
  if (config.loading_seed) m.loading_seed = *config.loading_seed;
  return m;
}

IndexOrdering resolve_ordering(const std::string& spec, int num_blocks) {
  if (spec.empty() || spec == "default") return default_ordering(num_blocks);
  return parse_ordering(io::read_text(spec), num_blocks);
}

}  // namespace psi::cli
