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

#include "fdc/lqr.hpp"

#include "fdc/error.hpp"
#include "fdc/excitation.hpp"

#include <string>

namespace fdc {

void LqrWeights::validate() const {
  require(q.rows() == q.cols() && r.rows() == r.cols() && q.rows() > 0 && r.rows() > 0,
          ErrorCode::InvalidInput, "lqr: Q and R must be square and nonempty");
  require_finite(q, "Q");
  require_finite(r, "R");
  const double qs = std::max(1.0, q.cwiseAbs().maxCoeff());
  const double rs = std::max(1.0, r.cwiseAbs().maxCoeff());
  require((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * qs, ErrorCode::InvalidInput,
          "lqr: Q is not symmetric");
  require((r - r.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * rs, ErrorCode::InvalidInput,
          "lqr: R is not symmetric");
  Eigen::SelfAdjointEigenSolver<RealMatrix> eq(q, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<RealMatrix> er(r, Eigen::EigenvaluesOnly);
  require(eq.eigenvalues()(0) >= -1e-12 * qs, ErrorCode::InvalidInput,
          "lqr: Q is not positive semidefinite");
  require(er.eigenvalues()(0) > 1e-12 * rs, ErrorCode::InvalidInput,
          "lqr: R is not positive definite");
}

LqrResult dd_lqr(const SpectraCollection& data, const LqrWeights& weights,
                 const SdpSettings& settings) {
  weights.validate();
  require(data.has_state(), ErrorCode::InvalidInput, "lqr: data must contain state spectra");
  const Index nx = data.state_channels();
  const Index nu = data.input_channels();
  require(weights.q.rows() == nx && weights.r.rows() == nu, ErrorCode::InvalidInput,
          "lqr: weight sizes do not match the data");

  const auto xs = data.spectra(SignalRole::State);
  const auto us = data.spectra(SignalRole::Input);
  const RealMatrix x01 = real_data_matrix(2, xs);
  const RealMatrix x0 = x01.topRows(nx);
  const RealMatrix x1 = x01.bottomRows(nx);
  const RealMatrix u = real_data_matrix(1, us);

  LqrResult out;
  {
    const Index max_order = data.experiment_count() * (2 * data.grid().size() - 1);
    out.weak_data = nx + 1 > max_order || !is_cpe(us, nx + 1).achieved;
  }

  const RealMatrix s0 = x0.transpose() * weights.q * x0 + u.transpose() * weights.r * u;
  const auto basis = symmetric_basis(nx);
  std::vector<RealMatrix> coeffs;
  coeffs.reserve(basis.size());
  for (const auto& e : basis) {
    coeffs.push_back(x1.transpose() * e * x1 - x0.transpose() * e * x0);
  }
  const SdpProblem sdp = trace_max_problem(s0, coeffs, nx);
  out.sdp = sdp_solve(sdp, settings);
  switch (out.sdp.status) {
    case SdpStatus::Solved: break;
    case SdpStatus::Infeasible: fail(ErrorCode::Infeasible, "lqr: SDP is infeasible");
    case SdpStatus::MaxIterations: fail(ErrorCode::MaxIterations, "lqr: SDP hit the iteration limit");
    case SdpStatus::NumericalFailure: fail(ErrorCode::NumericalFailure, "lqr: SDP numerical failure");
  }
  out.p = symmetric_from_coordinates(out.sdp.y, nx);

  RealMatrix s = s0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += out.sdp.y(static_cast<Index>(i)) * coeffs[i];
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(s);
  const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  Index dim = 0;
  while (dim < s.rows() && es.eigenvalues()(dim) <= 1e-7 * lmax) ++dim;
  const RealMatrix kernel = es.eigenvectors().leftCols(dim);
  out.kernel_dimension = dim;

  const RealMatrix x0n = x0 * kernel;
  require(dim >= nx && rank(x0n) == nx, ErrorCode::DegenerateData,
          "lqr: kernel of S(P) too small to build a right inverse of X0 (dimension " +
              std::to_string(dim) + ")");
  const RealMatrix right_inverse = kernel * pseudo_inverse(x0n);
  out.k = u * right_inverse;
  out.right_inverse_error = (x0 * right_inverse - RealMatrix::Identity(nx, nx)).norm();
  out.annihilation_error = (s * right_inverse).norm();
  return out;
}

}  // namespace fdc
