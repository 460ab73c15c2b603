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
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "psi/cli.hpp"
#include "psi/error.hpp"
#include "psi/io.hpp"
#include "psi/kernels.hpp"
#include "psi/parallel.hpp"
#include "psi/pipeline.hpp"

namespace psi::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

double to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }
double to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

/// Degrees printed with 10 significant digits so grid values stay tidy.
std::string degrees_text(double rad) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", to_degrees(rad));
  return buf;
}

double degrees_value(double rad) { return std::stod(degrees_text(rad)); }

void write_json(const fs::path& path, const ordered_json& j) { io::write_text(path, j.dump(2) + "\n"); }

MultiBlockDataset load_blocks(const std::vector<std::string>& paths) {
  MultiBlockDataset data;
  for (const auto& p : paths) data.blocks.push_back(io::read_csv_matrix(p).values);
  data.validate();
  return data;
}

std::vector<std::string> score_header(const DecompositionResult& result) {
  std::vector<std::string> header;
  for (std::size_t i = 0; i < result.scores.size(); ++i) {
    for (Index j = 0; j < result.scores[i].dim(); ++j) header.push_back(result.ordering[i].label());
  }
  return header;
}

ordered_json angles_json(const std::vector<double>& angles) {
  ordered_json a = ordered_json::array();
  for (double x : angles) a.push_back(to_degrees(x));
  return a;
}

ordered_json diagnostics_json(const PipelineOutput& out) {
  const auto& r = out.result;
  ordered_json j;
  j["lambda_degrees"] = degrees_value(r.lambda);
  j["ranks"] = out.ranks;
  j["kernels"] = std::string(kernels::isa_name(kernels::active().isa));
  j["degenerate_flag_means"] = r.diagnostics.degenerate_flag_means;
  j["accepted"] = ordered_json::array();
  for (const auto& a : r.diagnostics.accepted) {
    j["accepted"].push_back({{"index_set", r.ordering[a.stage].label()},
                             {"angles_degrees", angles_json(a.angles)},
                             {"degenerate", a.degenerate}});
  }
  j["rejected"] = ordered_json::array();
  for (const auto& c : r.diagnostics.rejected) {
    j["rejected"].push_back({{"index_set", r.ordering[c.stage].label()},
                             {"angles_degrees", angles_json(c.angles)},
                             {"nothing_to_peel", c.nothing_to_peel}});
  }
  j["signal_rows_centered"] = ordered_json::array();
  for (const auto& s : out.signals) j["signal_rows_centered"].push_back(s.row_centered);
  return j;
}

std::string curves_tsv(const TuningResult& t) {
  std::ostringstream s;
  s << "lambda_degrees\trisk\tdissimilarity\n";
  for (std::size_t g = 0; g < t.risk_curve.size(); ++g) {
    s << degrees_text(t.risk_curve[g].lambda) << '\t' << io::format_double(t.risk_curve[g].value) << '\t'
      << static_cast<long>(t.dissimilarity_curve[g].value) << '\n';
  }
  return s.str();
}

ordered_json tuning_json(const TuningResult& t) {
  ordered_json j;
  j["seed"] = t.plan.seed;
  j["lambda_tilde_degrees"] = degrees_value(t.lambda_tilde);
  j["lambda_hat_degrees"] = degrees_value(t.lambda_hat);
  j["structure_train"] = structure_to_json(t.structure_train);
  j["structure_hat"] = structure_to_json(t.structure_hat);
  return j;
}

std::vector<double> grid_radians(const GridSpec& g) { return degree_grid(g.lo, g.hi, g.step); }

void write_decomposition(const fs::path& dir, const PipelineOutput& out) {
  ordered_json s = structure_to_json(out.result.structure);
  s["lambda_degrees"] = degrees_value(out.result.lambda);
  write_json(dir / "structure.json", s);

  const auto header = score_header(out.result);
  io::write_csv_matrix(dir / "scores.csv", all_scores(out.result), header);
  for (int k = 1; k <= out.loadings.num_blocks(); ++k) {
    io::write_csv_matrix(dir / ("loadings_" + std::to_string(k) + ".csv"),
                         block_loading_matrix(out.loadings, out.result, k), header);
  }
  write_json(dir / "diagnostics.json", diagnostics_json(out));
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

ordered_json summary_stat(const std::vector<double>& v) { return {{"mean", mean(v)}, {"sd", stddev(v)}}; }

}  // namespace

int cmd_decompose(const RunConfig& config) {
  config.validate(true);
  const MultiBlockDataset data = load_blocks(config.inputs);
  io::ensure_directory(config.out);

  PipelineOptions opt;
  opt.ranks = config.ranks;
  opt.variance_proportion = config.variance_proportion;
  if (config.lambda_degrees) opt.lambda = to_radians(*config.lambda_degrees);
  opt.grid = grid_radians(config.grid);
  opt.ordering = resolve_ordering(config.ordering, data.num_blocks());
  opt.seed = config.seed;
  opt.center = config.center;
  opt.threads = resolve_threads(config.threads);

  const PipelineOutput out = run_pipeline(data, opt);
  const fs::path dir(config.out);
  write_decomposition(dir, out);
  if (out.tuning) {
    write_json(dir / "tune.json", tuning_json(*out.tuning));
    io::write_text(dir / "curves.tsv", curves_tsv(*out.tuning));
  }
  return kExitOk;
}

int cmd_tune(const RunConfig& config) {
  config.validate(false);
  MultiBlockDataset data = load_blocks(config.inputs);
  if (config.center) {
    for (auto& x : data.blocks) x = center_rows(x);
  }
  io::ensure_directory(config.out);

  PipelineOptions opt;
  opt.ranks = config.ranks;
  opt.variance_proportion = config.variance_proportion;
  const auto ranks = resolve_ranks(data, opt);
  const IndexOrdering ordering = resolve_ordering(config.ordering, data.num_blocks());
  const auto grid = grid_radians(config.grid);
  const int threads = resolve_threads(config.threads);

  const auto reps = static_cast<std::size_t>(config.repetitions);
  std::vector<TuningResult> results(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    results[rep] = select_lambda(data, ranks, ordering, grid, config.seed + rep, 1);
  });

  std::vector<PartialJointStructure> hats;
  for (const auto& t : results) hats.push_back(t.structure_hat);
  const auto [mode, count] = mode_structure(hats);

  const fs::path dir(config.out);
  ordered_json j;
  j["repetitions"] = config.repetitions;
  j["ranks"] = ranks;
  j["mode_structure"] = structure_to_json(mode);
  j["mode_count"] = count;
  j["runs"] = ordered_json::array();
  for (std::size_t rep = 0; rep < reps; ++rep) {
    ordered_json r = tuning_json(results[rep]);
    r["rep"] = rep;
    j["runs"].push_back(std::move(r));
  }
  write_json(dir / "tune.json", j);

  io::write_text(dir / "curves.tsv", curves_tsv(results.front()));
  io::ensure_directory(dir / "curves");
  for (std::size_t rep = 0; rep < reps; ++rep) {
    char name[32];
    std::snprintf(name, sizeof name, "rep_%03zu.tsv", rep);
    io::write_text(dir / "curves" / name, curves_tsv(results[rep]));
  }
  return kExitOk;
}

int cmd_simulate(const SimulateConfig& config) {
  config.validate();
  const SimulationModel model = resolve_model(config);
  model.validate();
  io::ensure_directory(config.out);
  const auto grid = grid_radians(config.grid);
  const int threads = resolve_threads(config.threads);

  struct Row {
    std::uint64_t seed = 0;
    int accuracy = 0;
    double rse = 0.0;
    MeanAngles angles;
    double wall_ms = 0.0;
    PartialJointStructure structure;
  };
  const auto reps = static_cast<std::size_t>(config.repetitions);
  std::vector<Row> rows(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    const auto start = std::chrono::steady_clock::now();
    Row& row = rows[rep];
    row.seed = config.seed + rep;
    const GroundTruth truth = generate(model, row.seed);
    PipelineOptions opt;
    opt.ranks = model.block_ranks();
    if (config.lambda_degrees) opt.lambda = to_radians(*config.lambda_degrees);
    opt.grid = grid;
    opt.seed = row.seed;
    const PipelineOutput out = run_pipeline(truth.dataset(), opt);
    row.accuracy = metric_accuracy(out.result.structure, model.true_structure);
    row.rse = metric_rse(truth, out.loadings, out.result);
    row.angles = metric_angles(truth, model, out.loadings, out.result);
    row.structure = out.result.structure;
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });

  const std::string snr_text = model.snr ? io::format_double(*model.snr) : "inf";
  std::ostringstream tsv;
  tsv << "model\tsnr\tseed\taccuracy\trse\ttheta_U\ttheta_W\twall_ms\n";
  std::vector<double> acc, rse, tu, tw;
  for (const auto& r : rows) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
    tsv << model.name << '\t' << snr_text << '\t' << r.seed << '\t' << r.accuracy << '\t' << io::format_double(r.rse)
        << '\t' << io::format_double(r.angles.theta_u) << '\t' << io::format_double(r.angles.theta_w) << '\t'
        << wall << '\n';
    acc.push_back(r.accuracy);
    rse.push_back(r.rse);
    tu.push_back(r.angles.theta_u);
    tw.push_back(r.angles.theta_w);
  }
  const fs::path dir(config.out);
  io::write_text(dir / "simulation.tsv", tsv.str());

  std::vector<PartialJointStructure> structures;
  for (const auto& r : rows) structures.push_back(r.structure);
  const auto [mode, count] = mode_structure(structures);

  ordered_json s;
  s["model"] = model.name;
  s["snr"] = snr_text;
  s["n"] = model.n;
  s["p"] = model.p;
  s["repetitions"] = config.repetitions;
  s["true_structure"] = structure_to_json(model.true_structure);
  s["accuracy_percent"] = 100.0 * mean(acc);
  s["rse"] = summary_stat(rse);
  s["theta_U"] = summary_stat(tu);
  s["theta_W"] = summary_stat(tw);
  s["mode_structure"] = structure_to_json(mode);
  s["mode_count"] = count;
  write_json(dir / "summary.json", s);
  return kExitOk;
}

int cmd_generate(const SimulateConfig& config) {
  config.validate();
  const SimulationModel model = resolve_model(config);
  const GroundTruth truth = generate(model, config.seed);
  io::ensure_directory(config.out);
  const fs::path dir(config.out);
  for (std::size_t k = 0; k < truth.x.size(); ++k) {
    io::write_csv_matrix(dir / ("X_" + std::to_string(k + 1) + ".csv"), truth.x[k]);
  }
  ordered_json j;
  j["model"] = model.name;
  j["snr"] = model.snr ? io::format_double(*model.snr) : "inf";
  j["seed"] = config.seed;
  j["loading_seed"] = model.loading_seed;
  j["n"] = model.n;
  j["p"] = model.p;
  j["structure"] = structure_to_json(model.true_structure);
  j["ranks"] = model.block_ranks();
  write_json(dir / "truth.json", j);
  return kExitOk;
}

namespace {

void add_run_options(CLI::App* app, RunConfig& cfg, std::string& ranks, std::string& grid, bool with_lambda) {
  app->add_option("blocks", cfg.inputs, "CSV block files (rows = variables, columns = samples)")->required();
  app->add_option("--ranks", ranks, "Signal ranks per block, e.g. 2,2,2");
  app->add_option("--var-prop", cfg.variance_proportion, "Rank by cumulative variance proportion in (0,1]");
  if (with_lambda) {
    app->add_option("--lambda-deg", cfg.lambda_degrees, "Angle threshold in degrees");
    app->add_flag("--tune", cfg.tune, "Select lambda by data splitting");
  }
  app->add_option("--grid", grid, "Tuning grid lo:hi:step in degrees")->default_str("0:89:1");
  app->add_option("--ordering", cfg.ordering, "'default' or a file with one index-set per line");
  app->add_option("--seed", cfg.seed, "Random seed");
  app->add_option("--reps", cfg.repetitions, "Split repetitions");
  app->add_option("--threads", cfg.threads, "Worker threads (default: PSI_THREADS or all cores)");
  app->add_option("--out", cfg.out, "Output directory");
  app->add_flag("--center", cfg.center, "Center rows of each block before fitting");
}

void add_sim_options(CLI::App* app, SimulateConfig& cfg, std::string& snr, std::string& wgen, std::string& grid,
                     bool with_lambda) {
  app->add_option("--model", cfg.model, "1..6, joint_strong or individual_strong");
  app->add_option("--snr", snr, "Signal-to-noise ratio or 'inf'")->default_str("inf");
  app->add_option("--seed", cfg.seed, "Base seed (repetition r uses seed + r)");
  app->add_option("-n,--n", cfg.n, "Number of samples");
  app->add_option("-p,--p", cfg.p, "Variables per block");
  app->add_option("--loading-seed", cfg.loading_seed, "Seed for the fixed loadings");
  app->add_option("--w-generation", wgen, "joint or per-set")->default_str("joint");
  app->add_option("--threads", cfg.threads, "Worker threads (default: PSI_THREADS or all cores)");
  app->add_option("--out", cfg.out, "Output directory");
  if (with_lambda) {
    app->add_option("--reps", cfg.repetitions, "Repetitions");
    app->add_option("--lambda-deg", cfg.lambda_degrees, "Fixed lambda in degrees (default: tune)");
    app->add_option("--grid", grid, "Tuning grid lo:hi:step in degrees")->default_str("0:89:1");
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Partially-joint structure identification for multi-block data"};
  app.require_subcommand(1);

  RunConfig decompose_cfg, tune_cfg;
  SimulateConfig simulate_cfg, generate_cfg;
  std::string d_ranks, d_grid, t_ranks, t_grid;
  std::string s_snr = "inf", s_wgen = "joint", s_grid, g_snr = "inf", g_wgen = "joint", g_grid;

  auto* decompose = app.add_subcommand("decompose", "Identify the structure of the given blocks");
  add_run_options(decompose, decompose_cfg, d_ranks, d_grid, true);
  auto* tune = app.add_subcommand("tune", "Select lambda over repeated splits");
  add_run_options(tune, tune_cfg, t_ranks, t_grid, false);
  auto* simulate = app.add_subcommand("simulate", "Run the simulation study for one model");
  add_sim_options(simulate, simulate_cfg, s_snr, s_wgen, s_grid, true);
  auto* gen = app.add_subcommand("generate", "Write one synthetic data set");
  add_sim_options(gen, generate_cfg, g_snr, g_wgen, g_grid, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    auto finish_run = [](RunConfig& cfg, const std::string& ranks, const std::string& grid) {
      if (!ranks.empty()) cfg.ranks = parse_ranks(ranks);
      if (!grid.empty()) cfg.grid = parse_grid(grid);
    };
    auto finish_sim = [](SimulateConfig& cfg, const std::string& snr, const std::string& wgen,
                         const std::string& grid) {
      cfg.snr = parse_snr(snr);
      cfg.w_generation = parse_w_generation(wgen);
      if (!grid.empty()) cfg.grid = parse_grid(grid);
    };
    if (*decompose) {
      finish_run(decompose_cfg, d_ranks, d_grid);
      return cmd_decompose(decompose_cfg);
    }
    if (*tune) {
      finish_run(tune_cfg, t_ranks, t_grid);
      return cmd_tune(tune_cfg);
    }
    if (*simulate) {
      finish_sim(simulate_cfg, s_snr, s_wgen, s_grid);
      return cmd_simulate(simulate_cfg);
    }
    finish_sim(generate_cfg, g_snr, g_wgen, g_grid);
    return cmd_generate(generate_cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == Error::Kind::Numerical ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace psi::cli
