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


#include "fdc/monte_carlo.hpp"

#include "fdc/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace fdc {

MonteCarloSummary freepc_monte_carlo(const StateSpaceModel& plant, const TransferMatrix& controller,
                                     const PredictiveProblem& problem, const MonteCarloConfig& config) {
  require(config.runs >= 1, ErrorCode::InvalidInput, "monte carlo: runs must be >= 1");
  problem.validate();

  MonteCarloSummary out;
  out.runs.resize(static_cast<std::size_t>(config.runs));
  std::atomic<Index> next{0};

  auto worker = [&] {
    for (Index i = next++; i < config.runs; i = next++) {
      MonteCarloRun& run = out.runs[static_cast<std::size_t>(i)];
      run.seed = config.base_seed + static_cast<std::uint64_t>(i);
      try {
        ClosedLoopDatasetConfig dc = config.dataset;
        dc.seed = run.seed;
        const ClosedLoopDataset ds = collect_closed_loop_dataset(plant, controller, dc);
        run.cost = receding_horizon_run(Predictor::freepc(ds.data, problem), problem, plant, config.loop).cost;
        run.ok = true;
      } catch (const std::exception& e) {
        run.error = e.what();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.runs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  double sum = 0.0;
  Index ok = 0;
  for (const auto& r : out.runs) {
    if (!r.ok) continue;
    sum += r.cost;
    ++ok;
  }
  out.failures = config.runs - ok;
  if (ok > 0) {
    out.mean_cost = sum / static_cast<double>(ok);
    double sq = 0.0;
    for (const auto& r : out.runs)
      if (r.ok) sq += (r.cost - out.mean_cost) * (r.cost - out.mean_cost);
    out.cost_variance = ok > 1 ? sq / static_cast<double>(ok - 1) : 0.0;
  }
  return out;
}

}  // namespace fdc
