// Copyright 2026 The fdc Authors
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


#pragma once

#include "fdc/dataset_io.hpp"
#include "fdc/plantlab.hpp"
#include "fdc/predictive.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace fdc::cli {

using io::Json;

/// Command-line overrides shared by every subcommand.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

/// A parsed config file plus the directory relative paths resolve against.
struct RunConfig {
  Json json;
  std::filesystem::path base_dir;
  std::filesystem::path out_dir;
  Overrides overrides;

  static RunConfig load(const std::filesystem::path& config, const std::filesystem::path& out,
                        Overrides overrides);

  const Json& at(const char* key) const;
  bool has(const char* key) const { return json.contains(key); }
  std::filesystem::path path(const Json& j) const;
  std::uint64_t seed(const Json& j, std::uint64_t fallback = 0) const;
};

template <typename T>
T value_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

/// {"preset": name} | {"A","B","C","D"} | {"tf": {"num", "den"}}
StateSpaceModel parse_plant(const Json& j);
/// {"preset": name} | {"tf": {...}} | {"entries": [[{num, den}, ...], ...]}
TransferMatrix parse_controller(const Json& j);
ClosedLoopDatasetConfig parse_dataset_config(const Json& j, std::uint64_t seed);
/// {"preset": "unstable_siso"} with optional overrides of every field.
PredictiveProblem parse_problem(const Json& j);
RecedingHorizonConfig parse_loop(const Json& j, const StateSpaceModel& plant);

/// A dataset given as a file path or as an inline generation spec.
SpectraCollection load_dataset(const RunConfig& cfg, const Json& j);

/// Dataset generation shared by gen-data and inline specs.
struct Generated {
  SpectraCollection data;
  std::optional<ClosedLoopDataset> closed_loop;
};
Generated generate_dataset(const Json& j, std::uint64_t seed);

std::string spectra_csv(const SpectraCollection& data);
std::string records_csv(const std::vector<LoopRecord>& records);

}  // namespace fdc::cli
