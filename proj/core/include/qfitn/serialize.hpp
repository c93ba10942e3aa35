// Copyright 2026 The qfitn Authors
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

// JSON encoding of matrices, strategies, settings, reports and checkpoints.
//
// Complex matrices are nested row-major arrays of [re, im] pairs; real
// vectors are plain arrays. Decoding is strict: unknown keys and wrong types
// raise FormatError naming the offending field path.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfitn/linalg.hpp"
#include "qfitn/optimize.hpp"

namespace qfitn::io {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

json to_json(const Mat& m);
Mat mat_from_json(const json& j, const std::string& path);

json to_json(const RVec& v);
RVec rvec_from_json(const json& j, const std::string& path);

json to_json(const AnsatzParams& p);
AnsatzParams ansatz_from_json(const json& j, const std::string& path);

json to_json(const opt::Strategy& s);
opt::Strategy strategy_from_json(const json& j, const std::string& path);

json to_json(const opt::RunSettings& s);
/// Keys absent from `j` keep the values already in `into`.
void settings_from_json(const json& j, const std::string& path, opt::RunSettings& into);

/// Full report including the final strategy and the settings echo.
json to_json(const opt::OptimizationReport& r);

json to_json(const opt::Checkpoint& c);
/// Rejects files whose format_version differs from Checkpoint::kFormatVersion.
opt::Checkpoint checkpoint_from_json(const json& j);

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

void save_checkpoint(const std::filesystem::path& path, const opt::Checkpoint& c);
opt::Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Reads a JSON document; syntax errors become FormatError with a line number.
json read_json_file(const std::filesystem::path& path);

/// Strict reader for one JSON object: every key must be consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path);

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& at(const std::string& key);
  std::string child(const std::string& key) const { return path_ + "." + key; }

  template <class T>
  bool get(const std::string& key, T& out) {
    if (!has(key)) return false;
    const json& v = at(key);
    bool ok = false;
    if constexpr (std::is_same_v<T, bool>)
      ok = v.is_boolean();
    else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>)
      ok = v.is_number_unsigned();
    else if constexpr (std::is_integral_v<T>)
      ok = v.is_number_integer();
    else if constexpr (std::is_floating_point_v<T>)
      ok = v.is_number();
    else if constexpr (std::is_same_v<T, std::string>)
      ok = v.is_string();
    else
      ok = true;
    if (!ok) throw FormatError(child(key), std::string("wrong type (") + v.type_name() + ")");
    try {
      out = v.get<T>();
    } catch (const json::exception&) {
      throw FormatError(child(key), std::string("wrong type (") + v.type_name() + ")");
    }
    return true;
  }

  /// Throws FormatError for the first key that was never read.
  void finish() const;

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

}  // namespace qfitn::io
