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

#ifndef UADMHD_TOOLS_RUN_CONFIG_HPP_
#define UADMHD_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace uadmhd::cli {

/// Bad flags, unknown keys, malformed values. Exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or malformed data, library failures. Exit status 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value run configuration with a fixed key set.
///
/// File syntax: one `key = value` per line, `#` starts a comment, blank lines
/// are ignored. Every key has a default; unknown keys are rejected.
class RunConfig {
 public:
  RunConfig();

  /// Applies a config file on top of the current values.
  void load_file(const std::filesystem::path& path);
  /// Applies one `key=value` assignment (as given to --set).
  void apply(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  std::string str(const std::string& key) const;
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key) const;

  /// Effective thread count: UADMHD_THREADS overrides the `threads` key;
  /// 0 means hardware concurrency.
  unsigned threads() const;
  /// A --threads flag beats both the environment and the file.
  void override_threads(unsigned n);

  /// All keys in sorted order with their current values.
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  enum class Type { kString, kReal, kInt, kU64, kBool };
  struct Entry {
    Type type;
    std::string value;
    std::vector<std::string> choices;
  };

  const Entry& lookup(const std::string& key) const;

  std::map<std::string, Entry> entries_;
  bool threads_from_flag_ = false;
};

}  // namespace uadmhd::cli

#endif  // UADMHD_TOOLS_RUN_CONFIG_HPP_
