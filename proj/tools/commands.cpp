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

#include "fdc/behavior.hpp"
#include "fdc/error.hpp"
#include "fdc/excitation.hpp"
#include "fdc/lqr.hpp"
#include "fdc/monte_carlo.hpp"
#include "fdc/presets.hpp"

#include <cstdio>
#include <sstream>
#include <thread>

namespace fdc::cli {

namespace {

Json complex_matrix_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(row);
  }
  return out;
}

Trajectory trajectory_from_json(const Json& j, long first_index) {
  return Trajectory(io::matrix_from_json(j), first_index);
}

SignalRole parse_role(const std::string& s) {
  if (s == "input") return SignalRole::Input;
  if (s == "output") return SignalRole::Output;
  if (s == "state") return SignalRole::State;
  fail(ErrorCode::ConfigError, "role must be input, output or state");
}

std::string matrix_csv(const RealMatrix& m) {
  std::ostringstream os;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << io::format_double(m(r, c));
    os << '\n';
  }
  return os.str();
}

void run_closed_loop(const RunConfig& cfg, const Predictor& predictor, const PredictiveProblem& problem,
                     const StateSpaceModel& plant) {
  RecedingHorizonConfig loop = parse_loop(cfg.json, plant);
  if (cfg.overrides.tolerance) loop.qp.tolerance = *cfg.overrides.tolerance;
  const ClosedLoopResult r = receding_horizon_run(predictor, problem, plant, loop);
  io::write_text(cfg.out_dir / "closed_loop.csv", closed_loop_csv(r));
  io::write_json(cfg.out_dir / "summary.json",
                 {{"controller", to_string(predictor.kind)}, {"steps", r.u.length()}, {"J", r.cost}});
  std::printf("%s closed loop: %ld steps, J = %.6f\n", to_string(predictor.kind), static_cast<long>(r.u.length()),
              r.cost);
}

}  // namespace

void cmd_gen_data(const RunConfig& cfg) {
  const Generated g = generate_dataset(cfg.json, cfg.seed(cfg.json));
  io::write_spectra(cfg.out_dir / "dataset.json", g.data);
  io::write_text(cfg.out_dir / "spectra.csv", spectra_csv(g.data));
  if (g.closed_loop) {
    io::write_text(cfg.out_dir / "records.csv", records_csv(g.closed_loop->records));
  }
  std::printf("dataset: E = %ld, M = %ld, n_u = %ld, n_y = %ld%s\n", static_cast<long>(g.data.experiment_count()),
              static_cast<long>(g.data.grid().size()), static_cast<long>(g.data.input_channels()),
              static_cast<long>(g.data.output_channels()), g.data.has_state() ? ", with state" : "");
}

void cmd_check_pe(const RunConfig& cfg) {
  const SpectraCollection data = load_dataset(cfg, cfg.at("dataset"));
  const Index order = cfg.at("order").get<Index>();
  const SignalRole role = parse_role(value_or<std::string>(cfg.json, "role", "input"));
  const PeReport r = is_cpe(data.spectra(role), order, cfg.overrides.tolerance);
  io::write_json(cfg.out_dir / "pe.json", {{"order", r.requested_order},
                                           {"achieved", r.achieved},
                                           {"rank_found", r.rank_found},
                                           {"rank_required", r.rank_required},
                                           {"singular_value_margin", r.singular_value_margin}});
  std::printf("PE of order %ld: %s (rank %ld of %ld, margin %.3e)\n", static_cast<long>(order),
              r.achieved ? "achieved" : "not achieved", static_cast<long>(r.rank_found),
              static_cast<long>(r.rank_required), r.singular_value_margin);
}

void cmd_simulate(const RunConfig& cfg) {
  const SpectraCollection data = load_dataset(cfg, cfg.at("dataset"));
  BehaviorOptions opts;
  if (cfg.overrides.tolerance) opts.tolerance = *cfg.overrides.tolerance;
  opts.state_order_bound = value_or<Index>(cfg.json, "state_order_bound", 0);

  const Json& q = cfg.at("query");
  BehaviorQuery query = q.is_string() && q.get<std::string>() == "batch_reactor_reference"
                            ? presets::batch_reactor_query()
                            : BehaviorQuery(Trajectory(RealMatrix::Zero(1, 1)), Trajectory(RealMatrix::Zero(1, 1)),
                                            Trajectory(RealMatrix::Zero(1, 1)));
  if (!q.is_string()) {
    const RealMatrix pu = io::matrix_from_json(q.at("past_u"));
    const long l0 = static_cast<long>(pu.cols());
    query = BehaviorQuery(Trajectory(pu, -l0), trajectory_from_json(q.at("past_y"), -l0),
                          trajectory_from_json(q.at("future_u"), 0));
  }
  const SimulationResult r = dd_simulate(data, query, opts);

  const Index l0 = query.past_length();
  RealMatrix u(query.future_inputs.channels(), l0 + query.future_length());
  u << query.past_inputs.samples(), query.future_inputs.samples();
  io::write_trajectories(cfg.out_dir / "simulation.csv", Trajectory(u, -static_cast<long>(l0)), r.all_outputs);

  Json summary = {{"residual", r.residual}, {"weak_data", r.weak_data}};
  if (cfg.has("reference_outputs")) {
    const RealMatrix ref = io::matrix_from_json(cfg.at("reference_outputs"));
    const RealMatrix truth = ref.rightCols(query.future_length());
    const double err = (r.future_outputs.samples() - truth).norm();
    summary["absolute_error"] = err;
    summary["relative_error"] = err / truth.norm();
    std::printf("simulated %ld steps: absolute error %.4e, relative error %.4e\n",
                static_cast<long>(query.future_length()), err, err / truth.norm());
  } else if (q.is_string()) {
    const RealMatrix truth = presets::batch_reactor_reference_outputs().rightCols(query.future_length());
    const double err = (r.future_outputs.samples() - truth).norm();
    summary["absolute_error"] = err;
    summary["relative_error"] = err / truth.norm();
    std::printf("simulated %ld steps: absolute error %.4e, relative error %.4e\n",
                static_cast<long>(query.future_length()), err, err / truth.norm());
  } else {
    std::printf("simulated %ld steps, residual %.3e\n", static_cast<long>(query.future_length()), r.residual);
  }
  if (r.weak_data) std::printf("warning: data is not persistently exciting for this query\n");
  io::write_json(cfg.out_dir / "simulation.json", summary);
}

void cmd_freqresp(const RunConfig& cfg) {
  const SpectraCollection data = load_dataset(cfg, cfg.at("dataset"));
  BehaviorOptions opts;
  if (cfg.overrides.tolerance) opts.tolerance = *cfg.overrides.tolerance;
  const Index l0 = cfg.at("past_length").get<Index>();
  Json points = Json::array();
  std::ostringstream csv;
  csv << "z_re,z_im,row,col,H_re,H_im\n";
  for (const auto& p : cfg.at("points")) {
    const Complex z(p.at(0).get<double>(), p.at(1).get<double>());
    const ComplexMatrix h = transfer_matrix_at(data, z, l0, opts);
    points.push_back({{"z", {z.real(), z.imag()}}, {"H", complex_matrix_json(h)}});
    for (Index r = 0; r < h.rows(); ++r)
      for (Index c = 0; c < h.cols(); ++c)
        csv << io::format_double(z.real()) << ',' << io::format_double(z.imag()) << ',' << r + 1 << ',' << c + 1
            << ',' << io::format_double(h(r, c).real()) << ',' << io::format_double(h(r, c).imag()) << '\n';
  }
  io::write_json(cfg.out_dir / "freqresp.json", {{"points", points}});
  io::write_text(cfg.out_dir / "freqresp.csv", csv.str());
  std::printf("evaluated H at %zu points\n", points.size());
}

void cmd_estimate_frf(const RunConfig& cfg) {
  const StateSpaceModel plant = parse_plant(cfg.at("plant"));
  const TransferMatrix ctrl = parse_controller(cfg.at("controller"));
  ClosedLoopDatasetConfig dc = parse_dataset_config(cfg.json, cfg.seed(cfg.json));
  dc.mode = DatasetMode::FrfRatio;
  const ClosedLoopDataset ds = collect_closed_loop_dataset(plant, ctrl, dc);
  const FrfEstimate& frf = *ds.frf;

  Json freq = Json::array(), re = Json::array(), im = Json::array(), var = Json::array();
  std::ostringstream csv;
  csv << "k,omega,row,col,H_re,H_im,variance\n";
  for (Index k = 0; k < frf.grid.size(); ++k) {
    const ComplexMatrix& h = frf.mean[static_cast<std::size_t>(k)];
    const RealMatrix& v = frf.variance[static_cast<std::size_t>(k)];
    freq.push_back(frf.grid.frequency(k));
    re.push_back(io::matrix_to_json(h.real()));
    im.push_back(io::matrix_to_json(h.imag()));
    var.push_back(io::matrix_to_json(v));
    for (Index r = 0; r < h.rows(); ++r)
      for (Index c = 0; c < h.cols(); ++c)
        csv << k << ',' << io::format_double(frf.grid.frequency(k)) << ',' << r + 1 << ',' << c + 1 << ','
            << io::format_double(h(r, c).real()) << ',' << io::format_double(h(r, c).imag()) << ','
            << io::format_double(v(r, c)) << '\n';
  }
  io::write_json(cfg.out_dir / "frf.json",
                 {{"periods", frf.periods}, {"frequency", freq}, {"H_re", re}, {"H_im", im}, {"variance", var}});
  io::write_text(cfg.out_dir / "frf.csv", csv.str());
  io::write_spectra(cfg.out_dir / "dataset.json", ds.data);
  std::printf("FRF estimated at %ld bins from %ld periods\n", static_cast<long>(frf.grid.size()),
              static_cast<long>(frf.periods));
}

void cmd_lqr(const RunConfig& cfg) {
  const SpectraCollection data = load_dataset(cfg, cfg.at("dataset"));
  const LqrWeights w{io::matrix_from_json(cfg.at("Q")), io::matrix_from_json(cfg.at("R"))};
  SdpSettings settings;
  if (cfg.overrides.tolerance) settings.tolerance = *cfg.overrides.tolerance;
  const LqrResult r = dd_lqr(data, w, settings);
  io::write_json(cfg.out_dir / "lqr.json", {{"K", io::matrix_to_json(r.k)},
                                            {"P", io::matrix_to_json(r.p)},
                                            {"sdp_status", to_string(r.sdp.status)},
                                            {"sdp_iterations", r.sdp.iterations},
                                            {"relative_gap", r.sdp.relative_gap},
                                            {"right_inverse_error", r.right_inverse_error},
                                            {"annihilation_error", r.annihilation_error},
                                            {"weak_data", r.weak_data}});
  io::write_text(cfg.out_dir / "K.csv", matrix_csv(r.k));
  io::write_text(cfg.out_dir / "P.csv", matrix_csv(r.p));
  std::printf("LQR: trace P = %.6f, SDP %s after %d iterations\n", r.p.trace(), to_string(r.sdp.status),
              r.sdp.iterations);
}

void cmd_freepc(const RunConfig& cfg) {
  const StateSpaceModel plant = parse_plant(cfg.at("plant"));
  const PredictiveProblem problem = parse_problem(cfg.at("problem"));
  const SpectraCollection data = load_dataset(cfg, cfg.at("dataset"));
  run_closed_loop(cfg, Predictor::freepc(data, problem), problem, plant);
}

void cmd_deepc(const RunConfig& cfg) {
  const StateSpaceModel plant = parse_plant(cfg.at("plant"));
  const PredictiveProblem problem = parse_problem(cfg.at("problem"));
  const Json& td = cfg.at("time_data");
  Trajectory u, y;
  if (td.is_string()) {
    std::tie(u, y) = io::read_trajectories(cfg.path(td), plant.inputs());
  } else {
    const Index length = td.at("length").get<Index>();
    Rng rng(cfg.seed(td));
    RealMatrix excitation(plant.inputs(), length);
    for (Index k = 0; k < length; ++k) excitation.col(k) = rng.normal_vector(plant.inputs());
    if (td.contains("controller")) {
      // Injection d enters the loop u = d - C(z) y, as for the frequency-domain data.
      const ClosedLoopSetup setup{plant, parse_controller(td.at("controller")), 0, 1};
      const LoopRecord rec =
          closed_loop_collect(setup, {Trajectory(excitation)}, NoiseConfig{RealVector::Zero(plant.outputs()), 0})
              .front();
      u = rec.u;
      y = rec.y;
    } else {
      u = Trajectory(excitation);
      y = simulate(plant, RealVector::Zero(plant.states()), u).outputs;
    }
    const double noise = value_or(td, "noise_std", 0.0);
    if (noise > 0.0) {
      RealMatrix noisy = y.samples();
      for (Index k = 0; k < noisy.cols(); ++k) noisy.col(k) += noise * rng.normal_vector(noisy.rows());
      y = Trajectory(noisy);
    }
    io::write_trajectories(cfg.out_dir / "time_data.csv", u, y);
  }
  run_closed_loop(cfg, Predictor::deepc(u, y, problem), problem, plant);
}

void cmd_monte_carlo(const RunConfig& cfg) {
  const StateSpaceModel plant = parse_plant(cfg.at("plant"));
  const TransferMatrix ctrl = parse_controller(cfg.at("controller"));
  const PredictiveProblem problem = parse_problem(cfg.at("problem"));

  MonteCarloConfig mc;
  mc.runs = value_or<Index>(cfg.json, "runs", 100);
  mc.base_seed = cfg.seed(cfg.json);
  mc.threads = value_or<unsigned>(cfg.json, "threads", 1);
  if (mc.threads == 0) mc.threads = std::max(1u, std::thread::hardware_concurrency());
  mc.loop = parse_loop(cfg.json, plant);
  if (cfg.overrides.tolerance) mc.loop.qp.tolerance = *cfg.overrides.tolerance;

  std::vector<Index> periods;
  const Json& p = cfg.at("periods");
  if (p.is_array()) {
    periods = p.get<std::vector<Index>>();
  } else {
    periods.push_back(p.get<Index>());
  }

  Json results = Json::array();
  std::ostringstream csv;
  csv << "p,run,seed,ok,J\n";
  for (const Index np : periods) {
    Json ds = cfg.json;
    ds["periods"] = np;
    mc.dataset = parse_dataset_config(ds, 0);
    const MonteCarloSummary s = freepc_monte_carlo(plant, ctrl, problem, mc);
    for (std::size_t i = 0; i < s.runs.size(); ++i) {
      const auto& r = s.runs[i];
      csv << np << ',' << i << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ',' << io::format_double(r.cost) << '\n';
    }
    results.push_back({{"periods", np},
                       {"runs", mc.runs},
                       {"failures", s.failures},
                       {"mean_J", s.mean_cost},
                       {"variance_J", s.cost_variance}});
    std::printf("p = %ld: mean J = %.4f, variance %.3e over %ld runs (%ld failed)\n", static_cast<long>(np),
                s.mean_cost, s.cost_variance, static_cast<long>(mc.runs), static_cast<long>(s.failures));
  }
  io::write_json(cfg.out_dir / "summary.json", {{"base_seed", mc.base_seed}, {"results", results}});
  io::write_text(cfg.out_dir / "runs.csv", csv.str());
}

}  // namespace fdc::cli
