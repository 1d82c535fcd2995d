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

#include "fdc/excitation.hpp"

#include "fdc/error.hpp"

#include <string>

namespace fdc {

PeReport row_rank_report(const RealMatrix& m, Index order, std::optional<double> tolerance) {
  PeReport r;
  r.requested_order = order;
  r.rank_required = m.rows();
  const RealVector s = Eigen::JacobiSVD<RealMatrix>(m).singularValues();
  require(s.allFinite(), ErrorCode::InvalidInput, "PE test: non-finite data");
  r.rank_found = numerical_rank(s, m.rows(), m.cols(), tolerance).rank;
  r.achieved = r.rank_found == r.rank_required;
  r.singular_value_margin = r.rank_required <= s.size() ? s(r.rank_required - 1) : 0.0;
  return r;
}

PeReport is_pe_time(const Trajectory& traj, Index order, std::optional<double> tolerance) {
  require(order >= 1 && order <= traj.length(), ErrorCode::InvalidInput,
          "PE order " + std::to_string(order) + " outside [1, N]");
  return row_rank_report(hankel(order, traj), order, tolerance);
}

PeReport is_cpe(std::span<const Spectrum> spectra, Index order, std::optional<double> tolerance) {
  require(!spectra.empty(), ErrorCode::InvalidInput, "CPE test: no spectra");
  const Index m = spectra.front().grid().size();
  const Index cols = static_cast<Index>(spectra.size()) * (2 * m - 1);
  require(order >= 1 && order <= cols, ErrorCode::InvalidInput,
          "PE order " + std::to_string(order) + " cannot hold with E(2M-1) = " +
              std::to_string(cols) + " columns");
  return row_rank_report(real_data_matrix(order, spectra), order, tolerance);
}

PeReport is_pe_freq(const Spectrum& spectrum, Index order, std::optional<double> tolerance) {
  return is_cpe(std::span<const Spectrum>(&spectrum, 1), order, tolerance);
}

}  // namespace fdc
