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

#include "fdc/behavior.hpp"

#include "fdc/error.hpp"
#include "fdc/excitation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace fdc {

GVector GVector::from_real(const RealVector& g, Index grid_size, Index experiments) {
  const ComplexVector full = conjugate_coordinates(g, grid_size, experiments);
  const Index h = experiments * (grid_size - 1);
  return {g.head(experiments), full.segment(experiments, h)};
}

ComplexVector GVector::full() const {
  ComplexVector out(g0.size() + 2 * g1.size());
  out << g0.cast<Complex>(), g1, g1.conjugate();
  return out;
}

RealVector GVector::real() const {
  RealVector out(g0.size() + 2 * g1.size());
  out << g0, 2.0 * g1.real(), -2.0 * g1.imag();
  return out;
}

BehaviorQuery::BehaviorQuery(Trajectory past_u, Trajectory past_y, Trajectory future_u)
    : past_inputs(std::move(past_u)),
      past_outputs(std::move(past_y)),
      future_inputs(std::move(future_u)) {
  require(past_inputs.length() == past_outputs.length(), ErrorCode::InvalidInput,
          "query: past input and output windows differ in length");
  require(future_inputs.length() >= 1, ErrorCode::InvalidInput,
          "query: future horizon must be >= 1");
  require(past_inputs.length() == 0 || past_inputs.channels() == future_inputs.channels(),
          ErrorCode::InvalidInput, "query: input channel mismatch");
}

namespace {

bool weak(const SpectraCollection& data, Index order, const BehaviorOptions& options) {
  const auto inputs = data.spectra(SignalRole::Input);
  const Index max_order = data.experiment_count() * (2 * data.grid().size() - 1);
  if (order > max_order) return true;
  return !is_cpe(inputs, order, options.rank_tolerance).achieved;
}

double gate(const BehaviorOptions& options, double rhs_norm) {
  return options.tolerance * std::max(1.0, rhs_norm);
}

}  // namespace

MembershipResult is_trajectory(const SpectraCollection& data, const Trajectory& u,
                               const Trajectory& y, const BehaviorOptions& options) {
  require(u.length() == y.length() && u.length() >= 1, ErrorCode::InvalidInput,
          "is_trajectory: u and y must share a positive length");
  require(u.channels() == data.input_channels() && y.channels() == data.output_channels(),
          ErrorCode::InvalidInput, "is_trajectory: channel counts differ from the data");
  const Index depth = u.length();
  const auto us = data.spectra(SignalRole::Input);
  const auto ys = data.spectra(SignalRole::Output);
  const std::array<RealMatrix, 2> blocks{real_data_matrix(depth, us), real_data_matrix(depth, ys)};
  const RealMatrix a = vstack(blocks);
  RealVector rhs(a.rows());
  rhs << u.vectorized(), y.vectorized();
  const auto ls = least_squares(a, rhs, options.rank_tolerance);

  MembershipResult r;
  r.residual = ls.residual_norm;
  r.threshold = gate(options, rhs.norm());
  r.member = r.residual <= r.threshold;
  r.g = GVector::from_real(ls.x, data.grid().size(), data.experiment_count());
  r.weak_data = weak(data, depth + options.state_order_bound, options);
  return r;
}

SimulationResult dd_simulate(const SpectraCollection& data, const BehaviorQuery& query,
                             const BehaviorOptions& options) {
  const Index l0 = query.past_length();
  const Index l = query.future_length();
  const Index nu = data.input_channels();
  const Index ny = data.output_channels();
  require(query.future_inputs.channels() == nu, ErrorCode::InvalidInput,
          "dd_simulate: input channel count differs from the data");
  require(l0 == 0 || query.past_outputs.channels() == ny, ErrorCode::InvalidInput,
          "dd_simulate: output channel count differs from the data");

  const auto us = data.spectra(SignalRole::Input);
  const auto ys = data.spectra(SignalRole::Output);
  const RealMatrix u_data = real_data_matrix(l0 + l, us);
  const RealMatrix y_data = real_data_matrix(l0 + l, ys);

  RealMatrix a(u_data.rows() + ny * l0, u_data.cols());
  a.topRows(u_data.rows()) = u_data;
  if (l0 > 0) a.bottomRows(ny * l0) = y_data.topRows(ny * l0);
  RealVector rhs(a.rows());
  if (l0 > 0) {
    rhs << query.past_inputs.vectorized(), query.future_inputs.vectorized(),
        query.past_outputs.vectorized();
  } else {
    rhs = query.future_inputs.vectorized();
  }
  const auto ls = least_squares(a, rhs, options.rank_tolerance);
  const double threshold = gate(options, rhs.norm());
  if (!(ls.residual_norm <= threshold)) {
    fail(ErrorCode::InconsistentPast,
         "dd_simulate: past window is not a trajectory of the data (residual " +
             std::to_string(ls.residual_norm) + " > " + std::to_string(threshold) + ")");
  }

  const RealVector y_all = y_data * ls.x;
  SimulationResult r;
  r.all_outputs = Trajectory::from_vectorized(y_all, ny, -static_cast<long>(l0));
  r.future_outputs = Trajectory::from_vectorized(y_all.tail(ny * l), ny, 0);
  r.g = GVector::from_real(ls.x, data.grid().size(), data.experiment_count());
  r.residual = ls.residual_norm;
  r.weak_data = weak(data, l0 + l + options.state_order_bound, options);
  return r;
}

FrequencyResponseResult freq_response_eval(const SpectraCollection& data, Complex z,
                                           const ComplexVector& u_z, Index past_length,
                                           const BehaviorOptions& options) {
  const Index nu = data.input_channels();
  const Index ny = data.output_channels();
  require(u_z.size() == nu, ErrorCode::InvalidInput, "freq_response_eval: U_z has wrong size");
  require(past_length >= 0, ErrorCode::InvalidInput, "freq_response_eval: L0 must be >= 0");
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::InvalidInput,
          "freq_response_eval: z must be finite");
  require_finite(u_z, "U_z");

  const Index depth = past_length + 1;
  const auto us = data.spectra(SignalRole::Input);
  const auto ys = data.spectra(SignalRole::Output);
  const ComplexMatrix psi_u = build_data_matrix(depth, us).complex_form;
  const ComplexMatrix psi_y = build_data_matrix(depth, ys).complex_form;
  const ComplexVector w = vandermonde_column(depth, z);

  const Index cols = ny + psi_u.cols();
  ComplexMatrix a = ComplexMatrix::Zero(nu * depth + ny * depth, cols);
  a.block(0, ny, nu * depth, psi_u.cols()) = psi_u;
  for (Index i = 0; i < depth; ++i) {
    a.block(nu * depth + i * ny, 0, ny, ny) = -w(i) * ComplexMatrix::Identity(ny, ny);
  }
  a.block(nu * depth, ny, ny * depth, psi_y.cols()) = psi_y;
  ComplexVector rhs = ComplexVector::Zero(a.rows());
  for (Index i = 0; i < depth; ++i) rhs.segment(i * nu, nu) = w(i) * u_z;

  // Column scaling keeps the Y_z block comparable to the data block.
  const double data_scale = std::max(psi_y.norm(), psi_u.norm());
  const double w_scale = w.norm();
  RealVector scale = RealVector::Ones(cols);
  if (data_scale > 0.0 && w_scale > 0.0) scale.head(ny).setConstant(data_scale / w_scale);
  const ComplexMatrix as = a * scale.cast<Complex>().asDiagonal();

  const auto s = svd(as);
  const double smax = s.singular_values.size() > 0 ? s.singular_values(0) : 0.0;
  const double tol = options.rank_tolerance.value_or(1e-10 * smax);
  const auto ls = least_squares(as, rhs, tol);
  const ComplexVector x = scale.cast<Complex>().asDiagonal() * ls.x;
  const double threshold = gate(options, rhs.norm());
  if (!(ls.residual_norm <= threshold)) {
    fail(ErrorCode::EvaluationFailed,
         "freq_response_eval: system is inconsistent (residual " +
             std::to_string(ls.residual_norm) + "); z may be an eigenvalue or data insufficient");
  }
  // Y_z is unique iff no kernel direction of the system moves it.
  const ComplexMatrix kernel = kernel_basis(as, tol);
  if (kernel.cols() > 0) {
    const double leak = kernel.topRows(ny).norm();
    if (leak > 1e-6) {
      fail(ErrorCode::EvaluationFailed,
           "freq_response_eval: Y_z is not unique; z may be an eigenvalue of A or L0 too small");
    }
  }
  FrequencyResponseResult r;
  r.y = x.head(ny);
  r.residual = ls.residual_norm;
  r.weak_data = weak(data, depth + options.state_order_bound, options);
  return r;
}

ComplexMatrix transfer_matrix_at(const SpectraCollection& data, Complex z, Index past_length,
                                 const BehaviorOptions& options) {
  const Index nu = data.input_channels();
  ComplexMatrix h(data.output_channels(), nu);
  for (Index i = 0; i < nu; ++i) {
    h.col(i) = freq_response_eval(data, z, ComplexVector::Unit(nu, i), past_length, options).y;
  }
  return h;
}

}  // namespace fdc
