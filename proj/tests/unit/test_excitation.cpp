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


#include "fdc/error.hpp"
#include "fdc/excitation.hpp"
#include "fdc/plantlab.hpp"
#include "fdc/presets.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fdc;

namespace {

Spectrum random_spectrum(std::mt19937_64& rng, Index channels, Index m) {
  ComplexMatrix s = oracle::random_matrix(rng, channels, m).cast<Complex>() +
                    Complex(0, 1) * oracle::random_matrix(rng, channels, m).cast<Complex>();
  s.col(0) = s.col(0).real().cast<Complex>();
  return Spectrum(FrequencyGrid(m), s);
}

}  // namespace

TEST_CASE("time-domain PE") {
  const Trajectory constant(RealMatrix::Constant(1, 10, 2.0));
  CHECK(is_pe_time(constant, 1).achieved);
  const PeReport two = is_pe_time(constant, 2);
  CHECK_FALSE(two.achieved);
  CHECK(two.rank_found == 1);
  CHECK(two.rank_required == 2);

  std::mt19937_64 rng(21);
  const Trajectory noise(oracle::random_matrix(rng, 1, 20));
  const PeReport r = is_pe_time(noise, 8);
  CHECK(r.achieved);
  CHECK(r.rank_found == 8);
  CHECK(r.singular_value_margin > 0.0);
}

TEST_CASE("frequency-domain PE") {
  const Spectrum dc(FrequencyGrid(1), ComplexMatrix::Ones(1, 1));
  CHECK(is_pe_freq(dc, 1).achieved);
  CHECK_THROWS_AS(is_pe_freq(dc, 2), Error);

  const Spectrum flat(FrequencyGrid(10), ComplexMatrix::Ones(1, 10));
  CHECK(is_pe_freq(flat, 19).achieved);

  const Spectrum zero(FrequencyGrid(10), ComplexMatrix::Zero(1, 10));
  const PeReport z = is_pe_freq(zero, 3);
  CHECK_FALSE(z.achieved);
  CHECK(z.rank_found == 0);
}

TEST_CASE("collective PE reductions") {
  std::mt19937_64 rng(22);
  const Spectrum a = random_spectrum(rng, 2, 6);
  for (Index order = 1; order <= 5; ++order) {
    const std::vector<Spectrum> one{a};
    const std::vector<Spectrum> padded{a, Spectrum(FrequencyGrid(6), ComplexMatrix::Zero(2, 6))};
    const PeReport single = is_pe_freq(a, order);
    CHECK(is_cpe(one, order).achieved == single.achieved);
    CHECK(is_cpe(one, order).rank_found == single.rank_found);
    CHECK(is_cpe(padded, order).rank_found == single.rank_found);
  }
}

TEST_CASE("unit directions on the batch reactor grid are collectively PE of order 10") {
  const SpectraCollection data =
      unit_direction_dataset(presets::batch_reactor(), FrequencyGrid(10), false);
  const PeReport r = is_cpe(data.spectra(SignalRole::Input), 10);
  CHECK(r.achieved);
  CHECK(r.rank_required == 20);
}

TEST_CASE("PE is monotone in the order") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = 2 + trial % 5;
    ComplexMatrix s = ComplexMatrix::Zero(1, m);
    // Excite a random subset of bins so the achieved order varies.
    for (Index k = 0; k < m; ++k)
      if (rng() % 2 == 0) s(0, k) = k == 0 ? Complex(1.0, 0.0) : std::polar(1.0, 0.1 * static_cast<double>(k));
    const Spectrum sp(FrequencyGrid(m), s);
    bool previous = true;
    for (Index order = 1; order <= 2 * m - 1; ++order) {
      const bool now = is_pe_freq(sp, order).achieved;
      if (!previous) CHECK_FALSE(now);
      previous = now;
    }
  }
}

TEST_CASE("a DC-only spectrum contributes one order per channel") {
  const Spectrum dc(FrequencyGrid(1), ComplexMatrix::Constant(1, 1, 3.0));
  CHECK(is_pe_freq(dc, 1).rank_found == 1);
}

TEST_CASE("complex and real-form ranks agree") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const Spectrum sp = random_spectrum(rng, 1, 4);
    const std::vector<Spectrum> one{sp};
    const DataMatrix d = build_data_matrix(5, one);
    CHECK(rank(d.real_form) == rank(d.complex_form));
    CHECK(is_pe_freq(sp, 5).rank_found == rank(d.complex_form));
  }
}
