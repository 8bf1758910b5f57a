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

#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "uadmhd/uadmhd.h"

namespace uadmhd::cli {

namespace fs = std::filesystem;

namespace {

struct ImageFree {
  void operator()(uad_image* p) const { uad_image_free(p); }
};
struct MaskFree {
  void operator()(uad_mask* p) const { uad_mask_free(p); }
};
struct StackFree {
  void operator()(uad_stack* p) const { uad_stack_free(p); }
};
struct ScheduleFree {
  void operator()(uad_schedule* p) const { uad_schedule_free(p); }
};
struct ReconstructorFree {
  void operator()(uad_reconstructor* p) const { uad_reconstructor_free(p); }
};
struct ScoredFree {
  void operator()(uad_scored_case* p) const { uad_scored_case_free(p); }
};

using ImagePtr = std::unique_ptr<uad_image, ImageFree>;
using MaskPtr = std::unique_ptr<uad_mask, MaskFree>;
using StackPtr = std::unique_ptr<uad_stack, StackFree>;
using SchedulePtr = std::unique_ptr<uad_schedule, ScheduleFree>;
using ReconstructorPtr = std::unique_ptr<uad_reconstructor, ReconstructorFree>;
using ScoredPtr = std::unique_ptr<uad_scored_case, ScoredFree>;

// Parameter errors can only come from configuration values here.
void check(uad_status status, const std::string& context) {
  if (status == UAD_OK) return;
  std::string msg = context + ": " + uad_last_error();
  if (status == UAD_ERR_PARAMETER) throw ConfigError(msg);
  throw DataError(msg);
}

constexpr const char* kManifestMagic = "uadmhd-manifest 1";
constexpr const char* kCsvHeader = "case_id,variant,auprc,dice_best,threshold";
const std::vector<std::string> kScoreVariants = {"s_mean", "s_mhd", "s_smhd", "cm"};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& s, double& out) {
  if (s == "nan") {
    out = std::nan("");
    return true;
  }
  if (s == "inf" || s == "-inf") {
    out = s[0] == '-' ? -HUGE_VAL : HUGE_VAL;
    return true;
  }
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::int64_t positive(const RunConfig& cfg, const std::string& key, std::int64_t min = 1) {
  const auto v = cfg.integer(key);
  if (v < min) throw ConfigError(key + " must be >= " + std::to_string(min));
  return v;
}

// Files and directories created by one subcommand. Unless committed, they are
// removed again when the run fails.
class Outputs {
 public:
  Outputs() = default;
  Outputs(const Outputs&) = delete;
  Outputs& operator=(const Outputs&) = delete;

  ~Outputs() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);
  }

  void make_dir(const fs::path& dir) {
    std::lock_guard lock(mu_);
    std::vector<fs::path> missing;
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      missing.push_back(p);
      if (p == p.parent_path()) break;
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
    dirs_.insert(dirs_.end(), missing.rbegin(), missing.rend());
  }

  const fs::path& add(const fs::path& file) {
    std::lock_guard lock(mu_);
    files_.push_back(file);
    return file;
  }

  void commit() { committed_ = true; }

 private:
  std::mutex mu_;
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
  bool committed_ = false;
};

void write_text(Outputs& outs, const fs::path& path, const std::string& text) {
  std::ofstream out(outs.add(path), std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw DataError("cannot write " + path.string());
}

// Runs f(0..n-1) on up to `threads` workers. Results must be stored by index;
// the error of the lowest failing index wins.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned extra =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1))) - 1;
  std::vector<std::thread> pool;
  pool.reserve(extra);
  for (unsigned k = 0; k < extra; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string case_dir_name(std::size_t id, std::size_t count) {
  std::size_t width = 3;
  for (std::size_t v = count; v >= 1000; v /= 10) ++width;
  std::string digits = std::to_string(id);
  return "case_" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

fs::path relative_to(const fs::path& target, const fs::path& base) {
  return fs::absolute(target).lexically_normal().lexically_relative(
      fs::absolute(base).lexically_normal());
}

struct CaseEntry {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  std::map<std::string, fs::path> files;  // resolved against the manifest directory

  const fs::path& file(const std::string& key, const fs::path& manifest) const {
    const auto it = files.find(key);
    if (it == files.end()) {
      throw DataError(manifest.string() + ": case " + std::to_string(id) + " has no '" + key +
                      "' entry");
    }
    return it->second;
  }
};

struct Manifest {
  fs::path path;
  std::map<std::string, std::vector<std::string>> header;
  std::vector<CaseEntry> cases;

  const std::vector<std::string>& field(const std::string& key) const {
    const auto it = header.find(key);
    if (it == header.end() || it->second.empty()) {
      throw DataError(path.string() + ": missing '" + key + "' line");
    }
    return it->second;
  }
};

fs::path resolve_manifest(const fs::path& p, const char* default_name) {
  std::error_code ec;
  if (fs::is_directory(p, ec)) return p / default_name;
  return p;
}

Manifest read_manifest(const fs::path& path, const std::string& kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read manifest " + path.string());
  Manifest m;
  m.path = path;
  const fs::path dir = path.parent_path();
  std::string line;
  if (!std::getline(in, line) || line != kManifestMagic) {
    throw DataError(path.string() + ": not a uadmhd manifest");
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    std::vector<std::string> rest;
    for (std::string tok; ss >> tok;) rest.push_back(tok);
    const std::string where = path.string() + ":" + std::to_string(lineno) + ": ";
    if (key != "case") {
      m.header[key] = rest;
      continue;
    }
    CaseEntry c;
    std::uint64_t id = 0;
    if (rest.size() < 2 || !parse_u64(rest[0], id) || !parse_u64(rest[1], c.seed)) {
      throw DataError(where + "malformed case line");
    }
    c.id = static_cast<std::size_t>(id);
    for (std::size_t k = 2; k < rest.size(); ++k) {
      const auto eq = rest[k].find('=');
      if (eq == std::string::npos || eq == 0) throw DataError(where + "malformed file entry");
      c.files[rest[k].substr(0, eq)] = dir / rest[k].substr(eq + 1);
    }
    m.cases.push_back(std::move(c));
  }
  const auto& k = m.field("kind");
  if (k[0] != kind) throw DataError(path.string() + ": expected a " + kind + " manifest");
  if (m.cases.empty()) throw DataError(path.string() + ": manifest lists no cases");
  return m;
}

uad_phantom_config phantom_config(const RunConfig& cfg) {
  uad_phantom_config p;
  p.size = static_cast<std::size_t>(positive(cfg, "phantom.size"));
  p.texture_frequency = cfg.real("phantom.texture_frequency");
  p.texture_amplitude = cfg.real("phantom.texture_amplitude");
  p.lesion_radius_min = cfg.real("phantom.lesion_radius_min");
  p.lesion_radius_max = cfg.real("phantom.lesion_radius_max");
  p.lesion_contrast_min = cfg.real("phantom.lesion_contrast_min");
  p.lesion_contrast_max = cfg.real("phantom.lesion_contrast_max");
  p.ellipse_axis_vertical = cfg.real("phantom.ellipse_axis_vertical");
  p.ellipse_axis_horizontal = cfg.real("phantom.ellipse_axis_horizontal");
  return p;
}

uad_perturbation_config perturbation_config(const RunConfig& cfg) {
  uad_perturbation_config p;
  p.bias_field_frequency = cfg.real("perturbation.bias_field_frequency");
  p.bias_amplitude = cfg.real("perturbation.bias_amplitude");
  p.pixel_noise_sigma = cfg.real("perturbation.pixel_noise_sigma");
  p.symmetry_coupling = cfg.real("perturbation.symmetry_coupling");
  return p;
}

uad_noise_kind noise_kind(const std::string& name) {
  return name == "gaussian" ? UAD_NOISE_GAUSSIAN : UAD_NOISE_SIMPLEX;
}

uad_scoring_config scoring_config(const RunConfig& cfg) {
  uad_scoring_config s;
  uad_scoring_config_default(&s);
  s.n_reconstructions = static_cast<std::size_t>(positive(cfg, "scoring.n_reconstructions", 2));
  s.t_test = static_cast<int>(positive(cfg, "scoring.t_test"));
  s.lambda = cfg.real("scoring.lambda");
  s.mhd_smooth_sigma = cfg.real("scoring.mhd_smooth_sigma");
  s.noise_kind = noise_kind(cfg.str("scoring.noise_kind"));
  s.ssim.kernel_sigma = cfg.real("ssim.kernel_sigma");
  s.ssim.data_range = cfg.real("ssim.data_range");
  s.ssim.c1 = cfg.real("ssim.c1");
  s.ssim.c2 = cfg.real("ssim.c2");
  s.seed = cfg.u64("seed");
  if (!(s.lambda > 0.0)) throw ConfigError("scoring.lambda must be > 0");
  if (!(s.mhd_smooth_sigma > 0.0)) throw ConfigError("scoring.mhd_smooth_sigma must be > 0");
  return s;
}

SchedulePtr make_schedule(const RunConfig& cfg) {
  uad_schedule* raw = nullptr;
  check(uad_schedule_linear(static_cast<int>(positive(cfg, "diffusion.t_max")),
                            cfg.real("diffusion.beta_start"), cfg.real("diffusion.beta_end"),
                            &raw),
        "diffusion schedule");
  return SchedulePtr(raw);
}

ImagePtr read_image(const fs::path& p) {
  uad_image* raw = nullptr;
  check(uad_read_image(p.string().c_str(), &raw), "reading " + p.string());
  return ImagePtr(raw);
}

MaskPtr read_mask(const fs::path& p) {
  uad_mask* raw = nullptr;
  check(uad_read_mask(p.string().c_str(), &raw), "reading " + p.string());
  return MaskPtr(raw);
}

void write_image(Outputs& outs, const fs::path& p, const uad_image* img) {
  check(uad_write_image(outs.add(p).string().c_str(), img), "writing " + p.string());
}

void write_mask(Outputs& outs, const fs::path& p, const uad_mask* m) {
  check(uad_write_mask(outs.add(p).string().c_str(), m), "writing " + p.string());
}

void export_pgm(Outputs& outs, const fs::path& p, const uad_image* img) {
  check(uad_export_pgm(outs.add(p).string().c_str(), img), "writing " + p.string());
}

constexpr std::uint64_t kPopulationStream = std::uint64_t{1} << 40;
constexpr std::uint64_t kSamplingStream = 2;

}  // namespace

void phantom_gen(const RunConfig& cfg, const fs::path& out_dir) {
  const auto ph = phantom_config(cfg);
  const auto count = static_cast<std::size_t>(positive(cfg, "cases"));
  const auto pop_size = static_cast<std::size_t>(positive(cfg, "phantom.population", 2));
  const std::uint64_t seed = cfg.u64("seed");

  Outputs outs;
  outs.make_dir(out_dir);

  struct Row {
    std::uint64_t seed;
    std::string dir;
  };
  std::vector<Row> rows(count);
  for (std::size_t i = 0; i < count; ++i) {
    rows[i] = Row{uad_derive_seed(seed, i), case_dir_name(i, count)};
    outs.make_dir(out_dir / rows[i].dir);
  }

  parallel_for(count, cfg.threads(), [&](std::size_t i) {
    uad_image *healthy = nullptr, *image = nullptr;
    uad_mask *brain = nullptr, *lesion = nullptr;
    check(uad_phantom_case(&ph, rows[i].seed, &healthy, &brain, &image, &lesion),
          "generating case " + std::to_string(i));
    const ImagePtr h(healthy), x(image);
    const MaskPtr b(brain), l(lesion);
    const fs::path dir = out_dir / rows[i].dir;
    write_image(outs, dir / "input.volb", x.get());
    write_image(outs, dir / "healthy.volb", h.get());
    write_mask(outs, dir / "brain_mask.volb", b.get());
    write_mask(outs, dir / "lesion_mask.volb", l.get());
  });

  uad_stack* pop = nullptr;
  check(uad_phantom_population(&ph, pop_size, uad_derive_seed(seed, kPopulationStream), &pop),
        "generating population");
  const StackPtr population(pop);
  check(uad_write_stack(outs.add(out_dir / "population.volb").string().c_str(), population.get()),
        "writing population");

  std::ostringstream m;
  m << kManifestMagic << '\n'
    << "kind dataset\n"
    << "seed " << seed << '\n'
    << "cases " << count << '\n'
    << "population population.volb\n";
  for (std::size_t i = 0; i < count; ++i) {
    const std::string& d = rows[i].dir;
    m << "case " << i << ' ' << rows[i].seed << " input=" << d << "/input.volb healthy=" << d
      << "/healthy.volb brain=" << d << "/brain_mask.volb lesion=" << d
      << "/lesion_mask.volb\n";
  }
  write_text(outs, out_dir / "manifest.txt", m.str());
  outs.commit();
}

void score(const RunConfig& cfg, const fs::path& dataset, const fs::path& out_dir) {
  const auto sc = scoring_config(cfg);
  const auto pert = perturbation_config(cfg);
  const auto sched = make_schedule(cfg);
  if (sc.t_test > uad_schedule_t_max(sched.get())) {
    throw ConfigError("scoring.t_test exceeds diffusion.t_max");
  }
  const bool pgm = cfg.flag("pgm");

  const fs::path manifest_path = resolve_manifest(dataset, "manifest.txt");
  const Manifest manifest = read_manifest(manifest_path, "dataset");
  const fs::path data_dir = manifest_path.parent_path();

  uad_stack* pop_raw = nullptr;
  const fs::path pop_path = data_dir / manifest.field("population")[0];
  check(uad_read_stack(pop_path.string().c_str(), &pop_raw), "reading " + pop_path.string());
  const StackPtr population(pop_raw);

  Outputs outs;
  outs.make_dir(out_dir);
  const std::size_t count = manifest.cases.size();
  std::vector<std::string> dirs(count);
  for (std::size_t i = 0; i < count; ++i) {
    dirs[i] = case_dir_name(manifest.cases[i].id, count);
    outs.make_dir(out_dir / dirs[i]);
  }

  parallel_for(count, cfg.threads(), [&](std::size_t i) {
    const CaseEntry& c = manifest.cases[i];
    const auto x = read_image(c.file("input", manifest_path));
    const auto healthy = read_image(c.file("healthy", manifest_path));
    const auto brain = read_mask(c.file("brain", manifest_path));

    uad_reconstructor* rec_raw = nullptr;
    check(uad_oracle_reconstructor_create(healthy.get(), brain.get(), &pert, &rec_raw),
          "case " + std::to_string(c.id) + " reconstructor");
    const ReconstructorPtr rec(rec_raw);

    uad_scoring_config case_cfg = sc;
    case_cfg.seed = uad_derive_seed(c.seed, kSamplingStream);
    uad_stack* stack_raw = nullptr;
    check(uad_sample_stack(rec.get(), x.get(), case_cfg.t_test, case_cfg.n_reconstructions,
                           sched.get(), case_cfg.noise_kind, case_cfg.seed, &stack_raw),
          "case " + std::to_string(c.id) + " reconstructions");
    const StackPtr stack(stack_raw);

    uad_scored_case* scored_raw = nullptr;
    check(uad_score_case(x.get(), stack.get(), &case_cfg, &scored_raw),
          "case " + std::to_string(c.id) + " scoring");
    const ScoredPtr scored(scored_raw);

    std::vector<ImagePtr> maps;
    for (const auto variant : {UAD_MAP_S_MEAN, UAD_MAP_S_MHD, UAD_MAP_S_SMHD}) {
      uad_image* m = nullptr;
      check(uad_scored_case_map(scored.get(), variant, &m), "case map");
      maps.emplace_back(m);
    }
    uad_image* cm = nullptr;
    check(uad_population_cm_score(x.get(), population.get(), &case_cfg, &cm),
          "case " + std::to_string(c.id) + " population baseline");
    maps.emplace_back(cm);

    const fs::path dir = out_dir / dirs[i];
    for (std::size_t v = 0; v < kScoreVariants.size(); ++v) {
      write_image(outs, dir / (kScoreVariants[v] + ".volb"), maps[v].get());
      if (pgm) export_pgm(outs, dir / (kScoreVariants[v] + ".pgm"), maps[v].get());
    }
  });

  std::ostringstream m;
  m << kManifestMagic << '\n' << "kind scores\n" << "variants";
  for (const auto& v : kScoreVariants) m << ' ' << v;
  m << '\n';
  for (std::size_t i = 0; i < count; ++i) {
    const CaseEntry& c = manifest.cases[i];
    m << "case " << c.id << ' ' << c.seed
      << " lesion=" << relative_to(c.file("lesion", manifest_path), out_dir).generic_string()
      << " brain=" << relative_to(c.file("brain", manifest_path), out_dir).generic_string();
    for (const auto& v : kScoreVariants) m << ' ' << v << '=' << dirs[i] << '/' << v << ".volb";
    m << '\n';
  }
  write_text(outs, out_dir / "scores.txt", m.str());
  outs.commit();
}

void eval(const RunConfig& cfg, const fs::path& scores, const fs::path& out_csv) {
  const bool use_brain = cfg.str("eval.mask") == "brain";
  const fs::path manifest_path = resolve_manifest(scores, "scores.txt");
  const Manifest manifest = read_manifest(manifest_path, "scores");
  const std::vector<std::string> variants = manifest.field("variants");
  const std::size_t count = manifest.cases.size();

  struct CaseData {
    std::vector<std::vector<double>> scores;  // per variant
    std::vector<std::uint8_t> labels;
    std::vector<std::uint8_t> mask;
    std::vector<std::optional<uad_eval_result>> results;
  };
  std::vector<CaseData> data(count);

  parallel_for(count, cfg.threads(), [&](std::size_t i) {
    const CaseEntry& c = manifest.cases[i];
    CaseData& d = data[i];
    const auto lesion = read_mask(c.file("lesion", manifest_path));
    const std::size_t n = uad_mask_height(lesion.get()) * uad_mask_width(lesion.get());
    d.labels.assign(uad_mask_data(lesion.get()), uad_mask_data(lesion.get()) + n);
    if (use_brain) {
      const auto brain = read_mask(c.file("brain", manifest_path));
      if (uad_mask_height(brain.get()) != uad_mask_height(lesion.get()) ||
          uad_mask_width(brain.get()) != uad_mask_width(lesion.get())) {
        throw DataError("case " + std::to_string(c.id) + ": brain and lesion masks differ in shape");
      }
      d.mask.assign(uad_mask_data(brain.get()), uad_mask_data(brain.get()) + n);
    }
    for (const auto& v : variants) {
      const auto img = read_image(c.file(v, manifest_path));
      if (uad_image_height(img.get()) != uad_mask_height(lesion.get()) ||
          uad_image_width(img.get()) != uad_mask_width(lesion.get())) {
        throw DataError("case " + std::to_string(c.id) + ": " + v +
                        " map does not match the lesion mask shape");
      }
      d.scores.emplace_back(uad_image_data(img.get()), uad_image_data(img.get()) + n);
      uad_eval_result r;
      const uad_status st = uad_evaluate(d.scores.back().data(), d.labels.data(),
                                         use_brain ? d.mask.data() : nullptr, n, &r);
      if (st == UAD_ERR_UNDEFINED_METRIC) {
        d.results.emplace_back(std::nullopt);
      } else {
        check(st, "case " + std::to_string(c.id) + " " + v);
        d.results.emplace_back(r);
      }
    }
  });

  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  const auto row = [&](const std::string& id, const std::string& variant,
                       const std::optional<uad_eval_result>& r) {
    csv << id << ',' << variant << ',';
    if (r) {
      csv << fmt(r->auprc) << ',' << fmt(r->dice_best) << ',' << fmt(r->dice_threshold) << '\n';
    } else {
      csv << "nan,nan,nan\n";
    }
  };
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t v = 0; v < variants.size(); ++v) {
      row(std::to_string(manifest.cases[i].id), variants[v], data[i].results[v]);
    }
  }
  for (std::size_t v = 0; v < variants.size(); ++v) {
    std::vector<double> s;
    std::vector<std::uint8_t> l, m;
    for (const auto& d : data) {
      s.insert(s.end(), d.scores[v].begin(), d.scores[v].end());
      l.insert(l.end(), d.labels.begin(), d.labels.end());
      m.insert(m.end(), d.mask.begin(), d.mask.end());
    }
    uad_eval_result r;
    const uad_status st =
        uad_evaluate(s.data(), l.data(), use_brain ? m.data() : nullptr, s.size(), &r);
    if (st == UAD_ERR_UNDEFINED_METRIC) {
      row("pooled", variants[v], std::nullopt);
    } else {
      check(st, "pooled " + variants[v]);
      row("pooled", variants[v], r);
    }
  }

  Outputs outs;
  if (out_csv.has_parent_path()) outs.make_dir(out_csv.parent_path());
  write_text(outs, out_csv, csv.str());
  outs.commit();
}

double compare(const RunConfig& cfg, const fs::path& results_csv, const fs::path& out,
               std::ostream& log) {
  const std::string va = cfg.str("compare.variant_a");
  const std::string vb = cfg.str("compare.variant_b");
  const auto rounds = static_cast<std::size_t>(positive(cfg, "compare.rounds"));
  const bool paired = cfg.flag("compare.paired");

  std::ifstream in(results_csv, std::ios::binary);
  if (!in) throw DataError("cannot read " + results_csv.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw DataError(results_csv.string() + ": unexpected CSV header");
  }
  std::map<std::string, std::map<std::string, double>> table;  // variant -> case -> auprc
  std::vector<std::string> order;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    double auprc = 0.0;
    if (cols.size() != 5 || !parse_double(cols[2], auprc)) {
      throw DataError(results_csv.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
    if (cols[0] == "pooled") continue;
    if (std::find(order.begin(), order.end(), cols[0]) == order.end()) order.push_back(cols[0]);
    table[cols[1]][cols[0]] = auprc;
  }
  for (const auto& v : {va, vb}) {
    if (!table.count(v)) throw DataError(results_csv.string() + ": no rows for variant " + v);
  }
  std::vector<double> a, b;
  for (const auto& id : order) {
    const auto ia = table[va].find(id);
    const auto ib = table[vb].find(id);
    if (ia == table[va].end() || ib == table[vb].end()) {
      throw DataError("case " + id + " is missing one of the compared variants");
    }
    if (std::isnan(ia->second) || std::isnan(ib->second)) {
      throw DataError("case " + id + " has an undefined AUPRC");
    }
    a.push_back(ia->second);
    b.push_back(ib->second);
  }

  double p = 1.0;
  check(uad_permutation_test(a.data(), a.size(), b.data(), b.size(), rounds,
                             cfg.u64("compare.seed"), paired ? 1 : 0, &p),
        "permutation test");
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(a.size());
  mean_b /= static_cast<double>(b.size());

  std::ostringstream summary;
  summary << "variant_a=" << va << " variant_b=" << vb << " cases=" << a.size()
          << " mean_auprc_a=" << fmt(mean_a) << " mean_auprc_b=" << fmt(mean_b)
          << " test=" << (paired ? "paired" : "unpaired") << " rounds=" << rounds
          << " p_value=" << fmt(p) << '\n';
  log << summary.str();
  if (!out.empty()) {
    Outputs outs;
    if (out.has_parent_path()) outs.make_dir(out.parent_path());
    write_text(outs, out, summary.str());
    outs.commit();
  }
  return p;
}

void noise_preview(const RunConfig& cfg, const fs::path& out_dir) {
  const auto h = static_cast<std::size_t>(positive(cfg, "noise.height"));
  const auto w = static_cast<std::size_t>(positive(cfg, "noise.width"));
  const auto count = static_cast<std::size_t>(positive(cfg, "noise.count"));
  const std::string kind = cfg.str("noise.kind");
  const std::uint64_t seed = cfg.u64("seed");

  std::vector<ImagePtr> fields(count);
  parallel_for(count, cfg.threads(), [&](std::size_t i) {
    uad_image* raw = nullptr;
    const std::uint64_t s = uad_derive_seed(seed, i);
    if (kind == "gaussian") {
      check(uad_gaussian_noise(h, w, s, &raw), "gaussian noise");
    } else {
      uad_simplex_params p;
      uad_simplex_params_default(&p);
      p.seed = s;
      check(uad_simplex_noise(h, w, &p, &raw), "simplex noise");
    }
    fields[i].reset(raw);
  });

  Outputs outs;
  outs.make_dir(out_dir);
  std::vector<const uad_image*> ptrs;
  for (const auto& f : fields) ptrs.push_back(f.get());
  uad_stack* stack_raw = nullptr;
  check(uad_stack_create(ptrs.data(), ptrs.size(), &stack_raw), "noise stack");
  const StackPtr stack(stack_raw);
  const fs::path vol = out_dir / ("noise_" + kind + ".volb");
  check(uad_write_stack(outs.add(vol).string().c_str(), stack.get()), "writing " + vol.string());
  if (cfg.flag("pgm")) export_pgm(outs, out_dir / ("noise_" + kind + ".pgm"), fields[0].get());
  outs.commit();
}

}  // namespace uadmhd::cli
