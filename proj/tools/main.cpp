// Copyright 2026 The uadmhd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pipeline.hpp"
#include "run_config.hpp"
#include "uadmhd/uadmhd.h"

namespace {

using uadmhd::cli::ConfigError;
using uadmhd::cli::DataError;
using uadmhd::cli::RunConfig;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

// Sets `key` from a flag that was given on the command line.
void maybe_set(RunConfig& cfg, const std::string& key, const std::optional<std::string>& v) {
  if (v) cfg.set(key, *v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction-based anomaly scoring pipeline"};
  app.set_version_flag("--version", std::string(uad_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> sets;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--set", sets, "Override one config key (key=value), repeatable")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::optional<std::string> seed, cases, kind, count, variant_a, variant_b, rounds, cmp_seed;
  bool unpaired = false;
  std::string out, data, scores, results;

  auto* phantom = app.add_subcommand("phantom", "Synthetic phantom datasets");
  phantom->require_subcommand(1);
  auto* gen = phantom->add_subcommand("gen", "Generate a phantom dataset");
  gen->add_option("--out", out, "Output directory")->required();
  gen->add_option("--seed", seed, "Dataset seed");
  gen->add_option("--cases", cases, "Number of cases");

  auto* score = app.add_subcommand("score", "Score every case of a dataset");
  score->add_option("--data", data, "Dataset directory or manifest")->required();
  score->add_option("--out", out, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate score maps against ground truth");
  eval->add_option("--scores", scores, "Scores directory or manifest")->required();
  eval->add_option("--out", out, "Output CSV")->required();

  auto* compare = app.add_subcommand("compare", "Permutation test between two variants");
  compare->add_option("--results", results, "CSV written by eval")->required();
  compare->add_option("--a", variant_a, "First variant");
  compare->add_option("--b", variant_b, "Second variant");
  compare->add_option("--rounds", rounds, "Permutation rounds");
  compare->add_option("--seed", cmp_seed, "Permutation seed");
  compare->add_flag("--unpaired", unpaired, "Shuffle pooled samples instead of sign flips");
  compare->add_option("--out", out, "Also write the summary line here");

  auto* noise = app.add_subcommand("noise", "Noise field utilities");
  noise->require_subcommand(1);
  auto* preview = noise->add_subcommand("preview", "Write sample noise fields");
  preview->add_option("--out", out, "Output directory")->required();
  preview->add_option("--kind", kind, "simplex or gaussian");
  preview->add_option("--seed", seed, "Noise seed");
  preview->add_option("--count", count, "Number of fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (const auto& s : sets) cfg.apply(s);
    if (threads) cfg.override_threads(*threads);
    maybe_set(cfg, "seed", seed);
    maybe_set(cfg, "cases", cases);
    maybe_set(cfg, "noise.kind", kind);
    maybe_set(cfg, "noise.count", count);
    maybe_set(cfg, "compare.variant_a", variant_a);
    maybe_set(cfg, "compare.variant_b", variant_b);
    maybe_set(cfg, "compare.rounds", rounds);
    maybe_set(cfg, "compare.seed", cmp_seed);
    if (unpaired) cfg.set("compare.paired", "false");

    if (gen->parsed()) {
      uadmhd::cli::phantom_gen(cfg, out);
    } else if (score->parsed()) {
      uadmhd::cli::score(cfg, data, out);
    } else if (eval->parsed()) {
      uadmhd::cli::eval(cfg, scores, out);
    } else if (compare->parsed()) {
      uadmhd::cli::compare(cfg, results, out, std::cout);
    } else if (preview->parsed()) {
      uadmhd::cli::noise_preview(cfg, out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
