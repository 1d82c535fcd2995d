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

#include "fdc/core.hpp"

#include <optional>
#include <span>

namespace fdc {

/// Outcome of a persistence-of-excitation rank test.
struct PeReport {
  Index requested_order = 0;
  bool achieved = false;
  Index rank_found = 0;
  Index rank_required = 0;
  /// Smallest of the rank_required leading singular values; zero when the
  /// matrix has fewer columns than required rows.
  double singular_value_margin = 0.0;
};

/// Hankel matrix of depth `order` has full row rank.
PeReport is_pe_time(const Trajectory& traj, Index order,
                    std::optional<double> tolerance = std::nullopt);

/// [F_L(V_0..V_{M-1}) | conj F_L(V_1..V_{M-1})] has full row rank.
PeReport is_pe_freq(const Spectrum& spectrum, Index order,
                    std::optional<double> tolerance = std::nullopt);

/// Collective variant over E experiments.
PeReport is_cpe(std::span<const Spectrum> spectra, Index order,
                std::optional<double> tolerance = std::nullopt);

/// Row-rank report for an arbitrary real matrix.
PeReport row_rank_report(const RealMatrix& m, Index order, std::optional<double> tolerance);

}  // namespace fdc
