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

#ifndef UADMHD_TOOLS_PIPELINE_HPP_
#define UADMHD_TOOLS_PIPELINE_HPP_

#include <filesystem>
#include <iosfwd>

#include "run_config.hpp"

namespace uadmhd::cli {

/// Writes `count` cases plus a healthy population to `out_dir` and a
/// `manifest.txt` listing every file and seed.
void phantom_gen(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Scores every case of a dataset manifest (file or directory containing
/// `manifest.txt`) and writes score volumes plus `scores.txt` to `out_dir`.
void score(const RunConfig& cfg, const std::filesystem::path& dataset,
           const std::filesystem::path& out_dir);

/// Evaluates a scores manifest into a CSV with per-case and pooled rows.
void eval(const RunConfig& cfg, const std::filesystem::path& scores,
          const std::filesystem::path& out_csv);

/// Permutation test between two variants' per-case AUPRC columns of an eval
/// CSV. Prints a summary line to `log` and, if `out` is non-empty, writes it
/// there too. Returns the p-value.
double compare(const RunConfig& cfg, const std::filesystem::path& results_csv,
               const std::filesystem::path& out, std::ostream& log);

/// Writes `noise.count` noise fields as one volume (plus a PGM of the first).
void noise_preview(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace uadmhd::cli

#endif  // UADMHD_TOOLS_PIPELINE_HPP_
