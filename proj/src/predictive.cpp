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

#include "fdc/predictive.hpp"

#include "fdc/dataset_io.hpp"
#include "fdc/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace fdc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RealMatrix kron_identity(const RealMatrix& w, Index copies) {
  RealMatrix out = RealMatrix::Zero(w.rows() * copies, w.cols() * copies);
  for (Index i = 0; i < copies; ++i) out.block(i * w.rows(), i * w.cols(), w.rows(), w.cols()) = w;
  return out;
}

RealVector repeat(const RealVector& v, Index copies) { return v.replicate(copies, 1); }

DataPredictor split_rows(const RealMatrix& u_rows, const RealMatrix& y_rows, Index nu, Index ny,
                         Index past) {
  DataPredictor d;
  d.up = u_rows.topRows(nu * past);
  d.uf = u_rows.bottomRows(u_rows.rows() - nu * past);
  d.yp = y_rows.topRows(ny * past);
  d.yf = y_rows.bottomRows(y_rows.rows() - ny * past);
  return d;
}

}  // namespace

void PredictiveProblem::validate() const {
  require(horizon >= 1, ErrorCode::InvalidInput, "predictive: horizon must be >= 1");
  require(past_length >= 1, ErrorCode::InvalidInput, "predictive: past length must be >= 1");
  const Index nu = inputs();
  const Index ny = outputs();
  require(nu >= 1 && ny >= 1 && input_weight.cols() == nu && output_weight.cols() == ny,
          ErrorCode::InvalidInput, "predictive: weights must be square and nonempty");
  require(u_lower.size() == nu && u_upper.size() == nu && y_lower.size() == ny &&
              y_upper.size() == ny,
          ErrorCode::InvalidInput, "predictive: one bound per channel required");
  require((u_lower.array() <= u_upper.array()).all() && (y_lower.array() <= y_upper.array()).all(),
          ErrorCode::InvalidInput, "predictive: empty input or output box");
  require(lambda_sigma > 0.0 && !std::isnan(lambda_sigma), ErrorCode::InvalidInput,
          "predictive: lambda_sigma must be > 0");
  require(lambda_g >= 0.0 && std::isfinite(lambda_g), ErrorCode::InvalidInput,
          "predictive: lambda_g must be finite and >= 0");
  Eigen::SelfAdjointEigenSolver<RealMatrix> eq(0.5 * (output_weight + output_weight.transpose()),
                                               Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<RealMatrix> er(0.5 * (input_weight + input_weight.transpose()),
                                               Eigen::EigenvaluesOnly);
  require((output_weight - output_weight.transpose()).cwiseAbs().maxCoeff() <= 1e-12 &&
              eq.eigenvalues()(0) >= -1e-12,
          ErrorCode::InvalidInput, "predictive: output weight must be symmetric PSD");
  require((input_weight - input_weight.transpose()).cwiseAbs().maxCoeff() <= 1e-12 &&
              er.eigenvalues()(0) > 0.0,
          ErrorCode::InvalidInput, "predictive: input weight must be symmetric PD");
}

DataPredictor freepc_predictor(const SpectraCollection& data, Index past_length, Index horizon) {
  require(past_length >= 0 && horizon >= 1, ErrorCode::InvalidInput,
          "freepc_predictor: invalid window lengths");
  const Index depth = past_length + horizon;
  const auto us = data.spectra(SignalRole::Input);
  const auto ys = data.spectra(SignalRole::Output);
  return split_rows(real_data_matrix(depth, us), real_data_matrix(depth, ys),
                    data.input_channels(), data.output_channels(), past_length);
}

DataPredictor deepc_predictor(const Trajectory& u, const Trajectory& y, Index past_length,
                              Index horizon) {
  require(u.length() == y.length(), ErrorCode::InvalidInput,
          "deepc_predictor: u and y lengths differ");
  const Index depth = past_length + horizon;
  return split_rows(hankel(depth, u), hankel(depth, y), u.channels(), y.channels(), past_length);
}

const char* to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::FreePC: return "freepc";
    case PredictorKind::DeePC: return "deepc";
    case PredictorKind::ModelMPC: return "model_mpc";
  }
  return "unknown";
}

Predictor Predictor::freepc(const SpectraCollection& spectra, const PredictiveProblem& problem) {
  Predictor p;
  p.kind = PredictorKind::FreePC;
  p.data = freepc_predictor(spectra, problem.past_length, problem.horizon);
  return p;
}

Predictor Predictor::deepc(const Trajectory& u, const Trajectory& y,
                           const PredictiveProblem& problem) {
  Predictor p;
  p.kind = PredictorKind::DeePC;
  p.data = deepc_predictor(u, y, problem.past_length, problem.horizon);
  return p;
}

Predictor Predictor::model_based(StateSpaceModel model) {
  Predictor p;
  p.kind = PredictorKind::ModelMPC;
  p.model = std::move(model);
  return p;
}

RealVector estimate_state(const StateSpaceModel& model, const Trajectory& past_u,
                          const Trajectory& past_y) {
  const Index n = past_u.length();
  require(past_y.length() == n && past_u.channels() == model.inputs() &&
              past_y.channels() == model.outputs(),
          ErrorCode::InvalidInput, "estimate_state: past window does not match the model");
  if (model.states() == 0) return RealVector();
  if (n == 0) return RealVector::Zero(model.states());
  // y_past = O x_{-n} + T u_past, then propagate to time 0.
  const RealMatrix o = observability_matrix(model, n);
  const RealMatrix t = toeplitz_matrix(model, n);
  const RealVector start =
      least_squares(o, RealVector(past_y.vectorized() - t * past_u.vectorized())).x;
  RealVector x = start;
  for (Index k = 0; k < n; ++k) x = model.a * x + model.b * past_u.sample(k);
  return x;
}

PredictiveQp build_predictive_qp(const Predictor& predictor, const PredictiveProblem& problem,
                                 const Trajectory& past_u, const Trajectory& past_y) {
  problem.validate();
  const Index nu = problem.inputs();
  const Index ny = problem.outputs();
  const Index t = problem.horizon;
  const Index tp = problem.past_length;
  require(past_u.length() == tp && past_y.length() == tp && past_u.channels() == nu &&
              past_y.channels() == ny,
          ErrorCode::InvalidInput, "predictive: past window must be T_bar samples of u and y");

  PredictiveQp out;
  out.nu = nu;
  out.ny = ny;
  out.horizon = t;
  const Index nuf = nu * t;
  const Index nyf = ny * t;

  const bool data_driven = predictor.kind != PredictorKind::ModelMPC;
  const Index ng = data_driven ? predictor.data.columns() : 0;
  if (data_driven) {
    const auto& d = predictor.data;
    require(d.up.rows() == nu * tp && d.uf.rows() == nuf && d.yp.rows() == ny * tp &&
                d.yf.rows() == nyf,
            ErrorCode::InvalidInput, "predictive: data predictor does not match T_bar and T");
  } else {
    require(predictor.model.inputs() == nu && predictor.model.outputs() == ny,
            ErrorCode::InvalidInput, "predictive: model does not match the weights");
  }
  const bool with_sigma = data_driven && std::isfinite(problem.lambda_sigma);
  const bool with_tg = data_driven && problem.lambda_g > 0.0;
  const Index ns = with_sigma ? ny * tp : 0;
  const Index ntg = with_tg ? ng : 0;

  out.g_offset = nuf + nyf;
  out.g_size = ng;
  out.sigma_offset = out.g_offset + ng;
  out.sigma_size = ns;
  const Index tg_offset = out.sigma_offset + ns;
  const Index ts_offset = tg_offset + ntg;
  const Index n = ts_offset + ns;

  QpProblem& qp = out.qp;
  qp.hessian = RealMatrix::Zero(n, n);
  qp.hessian.topLeftCorner(nuf, nuf) = 2.0 * kron_identity(problem.input_weight, t);
  qp.hessian.block(nuf, nuf, nyf, nyf) = 2.0 * kron_identity(problem.output_weight, t);
  qp.hessian = 0.5 * (qp.hessian + qp.hessian.transpose()).eval();
  qp.linear = RealVector::Zero(n);
  qp.linear.segment(tg_offset, ntg).setConstant(problem.lambda_g);
  if (with_sigma) qp.linear.segment(ts_offset, ns).setConstant(problem.lambda_sigma);

  if (data_driven) {
    const auto& d = predictor.data;
    const Index me = nu * tp + nuf + ny * tp + nyf;
    qp.eq_matrix = RealMatrix::Zero(me, n);
    qp.eq_rhs = RealVector::Zero(me);
    Index r = 0;
    qp.eq_matrix.block(r, out.g_offset, nu * tp, ng) = d.up;
    qp.eq_rhs.segment(r, nu * tp) = past_u.vectorized();
    r += nu * tp;
    qp.eq_matrix.block(r, out.g_offset, nuf, ng) = d.uf;
    qp.eq_matrix.block(r, 0, nuf, nuf) = -RealMatrix::Identity(nuf, nuf);
    r += nuf;
    qp.eq_matrix.block(r, out.g_offset, ny * tp, ng) = d.yp;
    if (with_sigma) qp.eq_matrix.block(r, out.sigma_offset, ns, ns) = -RealMatrix::Identity(ns, ns);
    qp.eq_rhs.segment(r, ny * tp) = past_y.vectorized();
    r += ny * tp;
    qp.eq_matrix.block(r, out.g_offset, nyf, ng) = d.yf;
    qp.eq_matrix.block(r, nuf, nyf, nyf) = -RealMatrix::Identity(nyf, nyf);
  } else {
    const auto& m = predictor.model;
    const RealVector x0 = estimate_state(m, past_u, past_y);
    qp.eq_matrix = RealMatrix::Zero(nyf, n);
    qp.eq_matrix.block(0, 0, nyf, nuf) = -toeplitz_matrix(m, t);
    qp.eq_matrix.block(0, nuf, nyf, nyf) = RealMatrix::Identity(nyf, nyf);
    qp.eq_rhs = m.states() > 0 ? RealVector(observability_matrix(m, t) * x0)
                               : RealVector::Zero(nyf);
  }

  // Boxes on u and y, then |g| <= t_g and |sigma| <= t_sigma.
  const Index mi = nuf + nyf + 2 * ntg + 2 * (with_sigma ? ns : 0);
  qp.ineq_matrix = RealMatrix::Zero(mi, n);
  qp.ineq_lower = RealVector::Constant(mi, -kInf);
  qp.ineq_upper = RealVector::Zero(mi);
  qp.ineq_matrix.topLeftCorner(nuf + nyf, nuf + nyf).setIdentity();
  qp.ineq_lower.head(nuf) = repeat(problem.u_lower, t);
  qp.ineq_upper.head(nuf) = repeat(problem.u_upper, t);
  qp.ineq_lower.segment(nuf, nyf) = repeat(problem.y_lower, t);
  qp.ineq_upper.segment(nuf, nyf) = repeat(problem.y_upper, t);
  Index r = nuf + nyf;
  auto epigraph = [&](Index var_offset, Index aux_offset, Index size) {
    for (Index i = 0; i < size; ++i) {
      qp.ineq_matrix(r, var_offset + i) = 1.0;
      qp.ineq_matrix(r, aux_offset + i) = -1.0;
      ++r;
      qp.ineq_matrix(r, var_offset + i) = -1.0;
      qp.ineq_matrix(r, aux_offset + i) = -1.0;
      ++r;
    }
  };
  if (with_tg) epigraph(out.g_offset, tg_offset, ng);
  if (with_sigma) epigraph(out.sigma_offset, ts_offset, ns);
  return out;
}

PredictiveSolution solve_predictive(const PredictiveQp& pq, const QpSettings& settings) {
  QpSettings s = settings;
  s.check_psd = false;  // block-diagonal weights were validated by the builder
  PredictiveSolution sol;
  sol.qp = qp_solve(pq.qp, s);
  if (sol.qp.status != QpStatus::Solved) {
    fail(ErrorCode::ControlFailure,
         std::string("predictive QP not solved: ") + to_string(sol.qp.status));
  }
  const RealVector& x = sol.qp.x;
  const Index nuf = pq.nu * pq.horizon;
  const Index nyf = pq.ny * pq.horizon;
  sol.u = x.head(nuf).reshaped(pq.nu, pq.horizon);
  sol.y = x.segment(nuf, nyf).reshaped(pq.ny, pq.horizon);
  sol.g = x.segment(pq.g_offset, pq.g_size);
  sol.sigma = x.segment(pq.sigma_offset, pq.sigma_size);
  sol.stage_cost = 0.5 * x.head(nuf + nyf).dot(pq.qp.hessian.topLeftCorner(nuf + nyf, nuf + nyf) *
                                                x.head(nuf + nyf));
  return sol;
}

ClosedLoopResult receding_horizon_run(const Predictor& predictor, const PredictiveProblem& problem,
                                      const StateSpaceModel& plant,
                                      const RecedingHorizonConfig& config) {
  problem.validate();
  require(config.steps >= 1, ErrorCode::InvalidInput, "receding horizon: steps must be >= 1");
  const Index nu = plant.inputs();
  const Index ny = plant.outputs();
  require(nu == problem.inputs() && ny == problem.outputs(), ErrorCode::InvalidInput,
          "receding horizon: plant does not match the problem");
  RealVector x = config.initial_state.size() == 0 ? RealVector::Zero(plant.states())
                                                  : config.initial_state;
  require(x.size() == plant.states(), ErrorCode::InvalidInput,
          "receding horizon: initial state has wrong size");

  const Index tp = problem.past_length;
  const Index steps = config.steps;
  // Columns 0..tp-1 hold the pre-history, then one column per step.
  RealMatrix u_hist = RealMatrix::Zero(nu, tp + steps);
  RealMatrix y_hist = RealMatrix::Zero(ny, tp + steps);
  if (config.past_window == PastWindow::FreeResponse && x.size() > 0 && !x.isZero(0.0)) {
    Eigen::PartialPivLU<RealMatrix> lu(plant.a);
    require(std::abs(lu.determinant()) > 0.0 && lu.rcond() > 1e-12, ErrorCode::InvalidInput,
            "receding horizon: free-response past window needs an invertible A");
    RealVector xb = x;
    for (Index i = tp - 1; i >= 0; --i) {
      xb = lu.solve(xb);
      y_hist.col(i) = plant.c * xb;
    }
  }

  ClosedLoopResult out;
  out.cumulative_cost = RealVector::Zero(steps);
  double j = 0.0;
  for (Index k = 0; k < steps; ++k) {
    const Trajectory past_u(u_hist.middleCols(k, tp), static_cast<long>(k - tp));
    const Trajectory past_y(y_hist.middleCols(k, tp), static_cast<long>(k - tp));
    PredictiveSolution sol;
    try {
      sol = solve_predictive(build_predictive_qp(predictor, problem, past_u, past_y), config.qp);
    } catch (const Error& e) {
      fail(ErrorCode::ControlFailure,
           "receding horizon: step " + std::to_string(k) + ": " + e.what());
    }
    const RealVector u = sol.u.col(0);
    const RealVector y = plant.c * x + plant.d * u;
    u_hist.col(tp + k) = u;
    y_hist.col(tp + k) = y;
    j += y.dot(problem.output_weight * y) + u.dot(problem.input_weight * u);
    out.cumulative_cost(k) = j;
    x = plant.a * x + plant.b * u;
  }
  out.u = Trajectory(u_hist.rightCols(steps));
  out.y = Trajectory(y_hist.rightCols(steps));
  out.cost = j;
  return out;
}

std::string closed_loop_csv(const ClosedLoopResult& run) {
  std::ostringstream os;
  os << 'k';
  for (Index i = 0; i < run.u.channels(); ++i) os << ",u" << (i + 1);
  for (Index i = 0; i < run.y.channels(); ++i) os << ",y" << (i + 1);
  os << ",J_cumulative\n";
  for (Index k = 0; k < run.u.length(); ++k) {
    os << k;
    for (Index i = 0; i < run.u.channels(); ++i) os << ',' << io::format_double(run.u.samples()(i, k));
    for (Index i = 0; i < run.y.channels(); ++i) os << ',' << io::format_double(run.y.samples()(i, k));
    os << ',' << io::format_double(run.cumulative_cost(k)) << '\n';
  }
  return os.str();
}

EquivalenceReport equivalence_check(const Predictor& freepc, const Predictor& deepc,
                                    PredictiveProblem problem, const Trajectory& past_u,
                                    const Trajectory& past_y, double tolerance,
                                    const QpSettings& settings) {
  problem.lambda_g = 0.0;
  problem.lambda_sigma = kInf;
  const auto a = solve_predictive(build_predictive_qp(freepc, problem, past_u, past_y), settings);
  const auto b = solve_predictive(build_predictive_qp(deepc, problem, past_u, past_y), settings);
  EquivalenceReport r;
  r.freepc_objective = a.stage_cost;
  r.deepc_objective = b.stage_cost;
  const double scale = std::max({std::abs(a.stage_cost), std::abs(b.stage_cost), 1e-300});
  r.objective_relative_difference =
      a.stage_cost == b.stage_cost ? 0.0 : std::abs(a.stage_cost - b.stage_cost) / scale;
  r.freepc_first_input = a.u.col(0);
  r.deepc_first_input = b.u.col(0);
  r.first_input_difference = (r.freepc_first_input - r.deepc_first_input).lpNorm<Eigen::Infinity>();
  r.equivalent =
      r.objective_relative_difference <= tolerance && r.first_input_difference <= tolerance;
  return r;
}

}  // namespace fdc
