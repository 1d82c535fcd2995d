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


#include "config.hpp"

#include "fdc/error.hpp"
#include "fdc/presets.hpp"

#include <limits>
#include <sstream>

namespace fdc::cli {

namespace {

TransferFunction parse_tf(const Json& j) {
  return TransferFunction(j.at("num").get<std::vector<double>>(), j.at("den").get<std::vector<double>>());
}

RealVector bound(const Json& j, const char* key, Index n, double fallback) {
  if (!j.contains(key)) return RealVector::Constant(n, fallback);
  const Json& v = j.at(key);
  if (v.is_number()) return RealVector::Constant(n, v.get<double>());
  return io::vector_from_json(v);
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& config, const std::filesystem::path& out,
                          Overrides overrides) {
  RunConfig cfg;
  cfg.json = io::read_json(config);
  require(cfg.json.is_object(), ErrorCode::ConfigError, config.string() + ": expected a JSON object");
  cfg.base_dir = std::filesystem::absolute(config).parent_path();
  cfg.out_dir = out;
  cfg.overrides = overrides;
  std::filesystem::create_directories(out);
  return cfg;
}

const Json& RunConfig::at(const char* key) const {
  require(json.contains(key), ErrorCode::ConfigError, std::string("config: missing field '") + key + "'");
  return json.at(key);
}

std::filesystem::path RunConfig::path(const Json& j) const {
  const std::filesystem::path p(j.get<std::string>());
  return p.is_absolute() ? p : base_dir / p;
}

std::uint64_t RunConfig::seed(const Json& j, std::uint64_t fallback) const {
  if (overrides.seed) return *overrides.seed;
  return value_or<std::uint64_t>(j, "seed", fallback);
}

StateSpaceModel parse_plant(const Json& j) {
  if (j.contains("preset")) {
    const auto name = j.at("preset").get<std::string>();
    if (name == "batch_reactor") return presets::batch_reactor(false);
    if (name == "batch_reactor_full_state") return presets::batch_reactor(true);
    if (name == "unstable_siso") return tf_to_state_space(presets::unstable_siso_plant());
    fail(ErrorCode::ConfigError, "unknown plant preset '" + name + "'");
  }
  if (j.contains("tf")) return tf_to_state_space(parse_tf(j.at("tf")));
  const RealMatrix a = io::matrix_from_json(j.at("A"));
  const RealMatrix b = io::matrix_from_json(j.at("B"));
  const RealMatrix c = io::matrix_from_json(j.at("C"));
  const RealMatrix d = j.contains("D") ? io::matrix_from_json(j.at("D")) : RealMatrix::Zero(c.rows(), b.cols());
  return StateSpaceModel(a, b, c, d);
}

TransferMatrix parse_controller(const Json& j) {
  if (j.contains("preset")) {
    const auto name = j.at("preset").get<std::string>();
    if (name == "batch_reactor") return presets::batch_reactor_controller();
    if (name == "unstable_siso") return TransferMatrix::siso(presets::unstable_siso_controller());
    fail(ErrorCode::ConfigError, "unknown controller preset '" + name + "'");
  }
  if (j.contains("tf")) return TransferMatrix::siso(parse_tf(j.at("tf")));
  const Json& rows = j.at("entries");
  std::vector<TransferFunction> entries;
  const Index r = static_cast<Index>(rows.size());
  require(r > 0, ErrorCode::ConfigError, "controller: empty entries");
  const Index c = static_cast<Index>(rows.at(0).size());
  for (const auto& row : rows) {
    require(static_cast<Index>(row.size()) == c, ErrorCode::ConfigError, "controller: ragged entries");
    for (const auto& e : row) entries.push_back(parse_tf(e));
  }
  return TransferMatrix(r, c, std::move(entries));
}

ClosedLoopDatasetConfig parse_dataset_config(const Json& j, std::uint64_t seed) {
  ClosedLoopDatasetConfig c;
  c.amplitude = value_or(j, "amplitude", c.amplitude);
  c.grid_size = value_or<Index>(j, "grid_size", c.grid_size);
  c.noise_standard_deviation = value_or(j, "noise_std", c.noise_standard_deviation);
  c.warmup_periods = value_or<Index>(j, "warmup_periods", c.warmup_periods);
  c.periods = value_or<Index>(j, "periods", c.periods);
  c.seed = seed;
  const auto mode = value_or<std::string>(j, "dataset_mode", "frf");
  if (mode == "frf") {
    c.mode = DatasetMode::FrfRatio;
  } else if (mode == "averaged") {
    c.mode = DatasetMode::AveragedSpectra;
  } else {
    fail(ErrorCode::ConfigError, "dataset_mode must be 'frf' or 'averaged'");
  }
  return c;
}

PredictiveProblem parse_problem(const Json& j) {
  PredictiveProblem p;
  if (value_or<std::string>(j, "preset", "") == "unstable_siso") p = presets::unstable_siso_problem();
  p.horizon = value_or<Index>(j, "horizon", p.horizon);
  p.past_length = value_or<Index>(j, "past_length", p.past_length);
  if (j.contains("Q")) p.output_weight = io::matrix_from_json(j.at("Q"));
  if (j.contains("R")) p.input_weight = io::matrix_from_json(j.at("R"));
  require(p.output_weight.size() > 0 && p.input_weight.size() > 0, ErrorCode::ConfigError,
          "problem: Q and R are required without a preset");
  const double inf = std::numeric_limits<double>::infinity();
  const Index nu = p.input_weight.rows();
  const Index ny = p.output_weight.rows();
  if (j.contains("u_min") || p.u_lower.size() == 0) p.u_lower = bound(j, "u_min", nu, -inf);
  if (j.contains("u_max") || p.u_upper.size() == 0) p.u_upper = bound(j, "u_max", nu, inf);
  if (j.contains("y_min") || p.y_lower.size() == 0) p.y_lower = bound(j, "y_min", ny, -inf);
  if (j.contains("y_max") || p.y_upper.size() == 0) p.y_upper = bound(j, "y_max", ny, inf);
  if (j.contains("lambda_sigma")) {
    const Json& v = j.at("lambda_sigma");
    p.lambda_sigma = v.is_string() && v.get<std::string>() == "inf" ? inf : v.get<double>();
  }
  p.lambda_g = value_or(j, "lambda_g", p.lambda_g);
  p.validate();
  return p;
}

RecedingHorizonConfig parse_loop(const Json& j, const StateSpaceModel& plant) {
  RecedingHorizonConfig c;
  c.steps = value_or<Index>(j, "steps", c.steps);
  if (j.contains("initial_state")) {
    const Json& x = j.at("initial_state");
    if (x.is_string()) {
      require(x.get<std::string>() == "unstable_siso", ErrorCode::ConfigError,
              "initial_state: unknown preset '" + x.get<std::string>() + "'");
      c.initial_state = presets::unstable_siso_initial_state();
    } else {
      c.initial_state = io::vector_from_json(x);
    }
    require(c.initial_state.size() == plant.states(), ErrorCode::ConfigError,
            "initial_state: size does not match the plant");
  }
  const auto window = value_or<std::string>(j, "past_window", "free_response");
  if (window == "free_response") {
    c.past_window = PastWindow::FreeResponse;
  } else if (window == "zero") {
    c.past_window = PastWindow::Zero;
  } else {
    fail(ErrorCode::ConfigError, "past_window must be 'free_response' or 'zero'");
  }
  return c;
}

Generated generate_dataset(const Json& j, std::uint64_t seed) {
  const StateSpaceModel plant = parse_plant(j.at("plant"));
  const auto mode = value_or<std::string>(j, "mode", "model");
  if (mode == "model") {
    const Index m = value_or<Index>(j, "grid_size", 10);
    const bool with_state = value_or(j, "with_state", false);
    return {unit_direction_dataset(plant, FrequencyGrid(m), with_state), std::nullopt};
  }
  require(mode == "closed_loop", ErrorCode::ConfigError, "mode must be 'model' or 'closed_loop'");
  const TransferMatrix ctrl = parse_controller(j.at("controller"));
  ClosedLoopDataset ds = collect_closed_loop_dataset(plant, ctrl, parse_dataset_config(j, seed));
  SpectraCollection data = ds.data;
  return {std::move(data), std::move(ds)};
}

SpectraCollection load_dataset(const RunConfig& cfg, const Json& j) {
  if (j.is_string()) return io::read_spectra(cfg.path(j));
  require(j.is_object(), ErrorCode::ConfigError, "dataset: expected a path or a generation spec");
  return generate_dataset(j, cfg.seed(j)).data;
}

std::string spectra_csv(const SpectraCollection& data) {
  std::ostringstream os;
  const Index nu = data.input_channels();
  const Index ny = data.output_channels();
  const Index nx = data.has_state() ? data.state_channels() : 0;
  os << "e,k,omega";
  for (Index i = 1; i <= nu; ++i) os << ",U" << i << "_re,U" << i << "_im";
  for (Index i = 1; i <= nx; ++i) os << ",X" << i << "_re,X" << i << "_im";
  for (Index i = 1; i <= ny; ++i) os << ",Y" << i << "_re,Y" << i << "_im";
  os << '\n';
  auto put = [&](const Spectrum& s, Index k) {
    for (Index i = 0; i < s.channels(); ++i)
      os << ',' << io::format_double(s.samples()(i, k).real()) << ',' << io::format_double(s.samples()(i, k).imag());
  };
  for (Index e = 0; e < data.experiment_count(); ++e) {
    const Experiment& ex = data.experiments()[static_cast<std::size_t>(e)];
    for (Index k = 0; k < data.grid().size(); ++k) {
      os << e + 1 << ',' << k << ',' << io::format_double(data.grid().frequency(k));
      put(ex.input, k);
      if (ex.state) put(*ex.state, k);
      put(ex.output, k);
      os << '\n';
    }
  }
  return os.str();
}

std::string records_csv(const std::vector<LoopRecord>& records) {
  std::ostringstream os;
  require(!records.empty(), ErrorCode::InvalidInput, "records: empty");
  const Index nu = records[0].u.channels();
  const Index ny = records[0].y.channels();
  os << "e,k";
  for (Index i = 1; i <= nu; ++i) os << ",d" << i;
  for (Index i = 1; i <= nu; ++i) os << ",u" << i;
  for (Index i = 1; i <= ny; ++i) os << ",y" << i;
  os << '\n';
  for (std::size_t e = 0; e < records.size(); ++e) {
    const LoopRecord& r = records[e];
    for (Index k = 0; k < r.y.length(); ++k) {
      os << e + 1 << ',' << k;
      for (Index i = 0; i < nu; ++i) os << ',' << io::format_double(r.d.samples()(i, k));
      for (Index i = 0; i < nu; ++i) os << ',' << io::format_double(r.u.samples()(i, k));
      for (Index i = 0; i < ny; ++i) os << ',' << io::format_double(r.y.samples()(i, k));
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace fdc::cli
