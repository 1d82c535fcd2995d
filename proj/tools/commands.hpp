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

#include "config.hpp"

namespace fdc::cli {

// Each command writes its result files into cfg.out_dir and a short summary
// to stdout.
void cmd_gen_data(const RunConfig& cfg);
void cmd_check_pe(const RunConfig& cfg);
void cmd_simulate(const RunConfig& cfg);
void cmd_freqresp(const RunConfig& cfg);
void cmd_estimate_frf(const RunConfig& cfg);
void cmd_lqr(const RunConfig& cfg);
void cmd_freepc(const RunConfig& cfg);
void cmd_deepc(const RunConfig& cfg);
void cmd_monte_carlo(const RunConfig& cfg);

}  // namespace fdc::cli
