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

// Command-line front end: decompose, tune, simulate, generate.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psi/simgen.hpp"
#include "psi/structure.hpp"

namespace psi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct GridSpec {
  double lo = 0.0;
  double hi = 89.0;
  double step = 1.0;
};

struct RunConfig {
  std::vector<std::string> inputs;
  std::vector<int> ranks;
  std::optional<double> variance_proportion;
  std::optional<double> lambda_degrees;
  bool tune = false;
  GridSpec grid;
  std::string ordering = "default";
  std::uint64_t seed = 0;
  int repetitions = 1;
  int threads = 0;
  std::string out = ".";
  bool center = false;

  /// Checks the exactly-one rules and value ranges. `needs_lambda` is false
  /// for the tune subcommand, which always tunes.
  void validate(bool needs_lambda) const;
};

struct SimulateConfig {
  std::string model = "1";
  std::optional<double> snr;  // nullopt = noiseless
  int repetitions = 1;
  std::uint64_t seed = 0;
  long n = 0;  // 0 = preset default
  long p = 0;
  std::optional<std::uint64_t> loading_seed;
  WGeneration w_generation = WGeneration::Joint;
  std::optional<double> lambda_degrees;
  GridSpec grid;
  int threads = 0;
  std::string out = ".";

  void validate() const;
};

/// "a,b,c" -> {a,b,c}; each a nonnegative integer.
std::vector<int> parse_ranks(const std::string& text);
/// "lo:hi:step" in degrees.
GridSpec parse_grid(const std::string& text);
/// "inf", "infinity" or a positive number.
std::optional<double> parse_snr(const std::string& text);
WGeneration parse_w_generation(const std::string& text);
/// "1".."6", "joint_strong" or "individual_strong", with optional size overrides.
SimulationModel resolve_model(const SimulateConfig& config);
/// "default" or a path to an ordering file.
IndexOrdering resolve_ordering(const std::string& spec, int num_blocks);

int cmd_decompose(const RunConfig& config);
int cmd_tune(const RunConfig& config);
int cmd_simulate(const SimulateConfig& config);
int cmd_generate(const SimulateConfig& config);

/// Parses argv and dispatches; returns the process exit code. Errors are
/// reported as one line on stderr.
int run(int argc, char** argv);

}  // namespace psi::cli
