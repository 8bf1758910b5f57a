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

#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "uadmhd/uadmhd.h"

namespace uadmhd::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

RunConfig::RunConfig() {
  uad_phantom_config ph;
  uad_phantom_config_default(&ph);
  uad_perturbation_config pert;
  uad_perturbation_config_default(&pert);
  uad_scoring_config sc;
  uad_scoring_config_default(&sc);

  const auto add = [this](const std::string& key, Type type, std::string value,
                          std::vector<std::string> choices = {}) {
    entries_[key] = Entry{type, std::move(value), std::move(choices)};
  };

  add("seed", Type::kU64, "42");
  add("cases", Type::kInt, "50");
  add("threads", Type::kInt, "0");
  add("pgm", Type::kBool, "true");

  add("phantom.size", Type::kInt, fmt(static_cast<std::uint64_t>(ph.size)));
  add("phantom.texture_frequency", Type::kReal, fmt(ph.texture_frequency));
  add("phantom.texture_amplitude", Type::kReal, fmt(ph.texture_amplitude));
  add("phantom.lesion_radius_min", Type::kReal, fmt(ph.lesion_radius_min));
  add("phantom.lesion_radius_max", Type::kReal, fmt(ph.lesion_radius_max));
  add("phantom.lesion_contrast_min", Type::kReal, fmt(ph.lesion_contrast_min));
  add("phantom.lesion_contrast_max", Type::kReal, fmt(ph.lesion_contrast_max));
  add("phantom.ellipse_axis_vertical", Type::kReal, fmt(ph.ellipse_axis_vertical));
  add("phantom.ellipse_axis_horizontal", Type::kReal, fmt(ph.ellipse_axis_horizontal));
  add("phantom.population", Type::kInt, "20");

  add("perturbation.bias_field_frequency", Type::kReal, fmt(pert.bias_field_frequency));
  add("perturbation.bias_amplitude", Type::kReal, fmt(pert.bias_amplitude));
  add("perturbation.pixel_noise_sigma", Type::kReal, fmt(pert.pixel_noise_sigma));
  add("perturbation.symmetry_coupling", Type::kReal, fmt(pert.symmetry_coupling));

  add("diffusion.t_max", Type::kInt, "1000");
  add("diffusion.beta_start", Type::kReal, "0.0001");
  add("diffusion.beta_end", Type::kReal, "0.02");

  add("scoring.n_reconstructions", Type::kInt, fmt(static_cast<std::uint64_t>(sc.n_reconstructions)));
  add("scoring.t_test", Type::kInt, std::to_string(sc.t_test));
  add("scoring.lambda", Type::kReal, fmt(sc.lambda));
  add("scoring.mhd_smooth_sigma", Type::kReal, fmt(sc.mhd_smooth_sigma));
  add("scoring.noise_kind", Type::kString, "simplex", {"simplex", "gaussian"});
  add("ssim.kernel_sigma", Type::kReal, fmt(sc.ssim.kernel_sigma));
  add("ssim.data_range", Type::kReal, fmt(sc.ssim.data_range));
  add("ssim.c1", Type::kReal, fmt(sc.ssim.c1));
  add("ssim.c2", Type::kReal, fmt(sc.ssim.c2));

  add("eval.mask", Type::kString, "brain", {"brain", "none"});

  add("compare.variant_a", Type::kString, "s_smhd");
  add("compare.variant_b", Type::kString, "s_mean");
  add("compare.rounds", Type::kInt, "10000");
  add("compare.seed", Type::kU64, "7");
  add("compare.paired", Type::kBool, "true");

  add("noise.kind", Type::kString, "simplex", {"simplex", "gaussian"});
  add("noise.height", Type::kInt, "192");
  add("noise.width", Type::kInt, "192");
  add("noise.count", Type::kInt, "1");
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply(line);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void RunConfig::apply(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown config key '" + key + "'");
  Entry& e = it->second;
  bool ok = true;
  switch (e.type) {
    case Type::kString:
      ok = e.choices.empty() ||
           std::find(e.choices.begin(), e.choices.end(), value) != e.choices.end();
      break;
    case Type::kReal: {
      double v;
      ok = parse_number(value, v) && std::isfinite(v);
      break;
    }
    case Type::kInt: {
      std::int64_t v;
      ok = parse_number(value, v);
      break;
    }
    case Type::kU64: {
      std::uint64_t v;
      ok = parse_number(value, v);
      break;
    }
    case Type::kBool:
      ok = value == "true" || value == "false";
      break;
  }
  if (!ok) throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
  e.value = value;
}

const RunConfig::Entry& RunConfig::lookup(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

std::string RunConfig::str(const std::string& key) const { return lookup(key).value; }

double RunConfig::real(const std::string& key) const {
  double v = 0.0;
  parse_number(lookup(key).value, v);
  return v;
}

std::int64_t RunConfig::integer(const std::string& key) const {
  std::int64_t v = 0;
  parse_number(lookup(key).value, v);
  return v;
}

std::uint64_t RunConfig::u64(const std::string& key) const {
  std::uint64_t v = 0;
  parse_number(lookup(key).value, v);
  return v;
}

bool RunConfig::flag(const std::string& key) const { return lookup(key).value == "true"; }

void RunConfig::override_threads(unsigned n) {
  set("threads", std::to_string(n));
  threads_from_flag_ = true;
}

unsigned RunConfig::threads() const {
  std::int64_t n = integer("threads");
  if (!threads_from_flag_) {
    if (const char* env = std::getenv("UADMHD_THREADS"); env && *env) {
      if (!parse_number(std::string(env), n) || n < 0) {
        throw ConfigError(std::string("invalid UADMHD_THREADS value '") + env + "'");
      }
    }
  }
  if (n < 0) throw ConfigError("threads must be >= 0");
  if (n == 0) return std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(n);
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, e] : entries_) out.emplace_back(k, e.value);
  return out;
}

}  // namespace uadmhd::cli
