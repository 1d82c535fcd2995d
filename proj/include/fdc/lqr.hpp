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
#include "fdc/sdp.hpp"

namespace fdc {

struct LqrWeights {
  RealMatrix q;  // n_x x n_x, symmetric PSD
  RealMatrix r;  // n_u x n_u, symmetric PD

  /// Throws InvalidInput on asymmetry, an indefinite Q or a singular R.
  void validate() const;
};

struct LqrResult {
  RealMatrix k;  // u = K x
  RealMatrix p;
  SdpResult sdp;
  /// ||X0 X0^+ - I|| and ||S(P) X0^+|| for the right inverse built from ker S(P).
  double right_inverse_error = 0.0;
  double annihilation_error = 0.0;
  Index kernel_dimension = 0;
  bool weak_data = false;
};

/// Infinite-horizon LQR from input-state spectra: maximize trace P subject to
/// Delta' diag(Q - P, P, R) Delta >= 0 and P >= 0, then K = U X0^+.
LqrResult dd_lqr(const SpectraCollection& data, const LqrWeights& weights,
                 const SdpSettings& settings = {});

}  // namespace fdc
