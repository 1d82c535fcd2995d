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


#include "commands.hpp"

#include "fdc/error.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <vector>

namespace {

using Command = void (*)(const fdc::cli::RunConfig&);

struct Entry {
  const char* name;
  const char* help;
  Command run;
};

// Exit status 2 for bad configuration, 1 for everything else.
int report(const std::filesystem::path& out, std::string_view code, const std::string& message) {
  const fdc::io::Json err = {{"error", code}, {"message", message}};
  std::cerr << err.dump() << '\n';
  try {
    std::filesystem::create_directories(out);
    fdc::io::write_json(out / "error.json", err);
  } catch (...) {
    // The error report to stderr is enough when the output directory is unusable.
  }
  return code == "ConfigError" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Entry> commands{
      {"gen-data", "Generate a frequency-domain dataset (model or closed-loop)", fdc::cli::cmd_gen_data},
      {"check-pe", "Check collective persistency of excitation", fdc::cli::cmd_check_pe},
      {"simulate", "Data-driven simulation from a past window", fdc::cli::cmd_simulate},
      {"freqresp", "Evaluate the transfer matrix at complex frequencies", fdc::cli::cmd_freqresp},
      {"estimate-frf", "Closed-loop FRF measurement with sample variance", fdc::cli::cmd_estimate_frf},
      {"lqr", "Data-driven LQR from input-state spectra", fdc::cli::cmd_lqr},
      {"freepc", "Closed-loop run of the frequency-domain predictive controller", fdc::cli::cmd_freepc},
      {"deepc", "Closed-loop run of the Hankel-matrix predictive controller", fdc::cli::cmd_deepc},
      {"monte-carlo", "FreePC cost over many independently collected datasets", fdc::cli::cmd_monte_carlo},
  };

  CLI::App app{"Frequency-domain data-driven simulation and control"};
  app.require_subcommand(1);
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  Command selected = nullptr;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Overrides the seed in the config");
    sub->add_option("--tolerance", tolerance, "Overrides the command's numerical tolerance");
    sub->callback([&selected, run = c.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e) == 0) return 0;
    return report(out, "ConfigError", e.what());
  }

  try {
    const auto cfg = fdc::cli::RunConfig::load(config, out, {seed, tolerance});
    selected(cfg);
  } catch (const fdc::Error& e) {
    return report(out, fdc::to_string(e.code()), e.what());
  } catch (const fdc::io::Json::exception& e) {
    return report(out, "ConfigError", e.what());
  } catch (const std::exception& e) {
    return report(out, "InternalError", e.what());
  }
  return 0;
}
