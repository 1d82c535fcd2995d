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


#include "fdc/core.hpp"
#include "fdc/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
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

TEST_CASE("trajectory vectorization") {
  RealMatrix s(2, 3);
  s << 1, 2, 3, 4, 5, 6;
  const Trajectory t(s, -1);
  RealVector v(6);
  v << 1, 4, 2, 5, 3, 6;
  CHECK(t.vectorized() == v);
  const Trajectory back = Trajectory::from_vectorized(v, 2, -1);
  CHECK(back.samples() == s);
  CHECK(back.first_index() == -1);
  CHECK(t.window(1, 2).samples() == s.rightCols(2));
  CHECK_THROWS_AS(Trajectory(RealMatrix(2, 0)), Error);
}

TEST_CASE("frequency grid") {
  const FrequencyGrid grid(4);
  CHECK(grid.frequency(0) == 0.0);
  CHECK(grid.frequency(2) == doctest::Approx(std::numbers::pi / 2));
  CHECK(std::abs(grid.unit_power(1, 4) - Complex(-1, 0)) <= 1e-15);
  CHECK(std::abs(grid.unit_power(3, 1000001) - std::polar(1.0, 3.0 * std::numbers::pi * 1000001 / 4)) <= 1e-9);
  CHECK(std::abs(grid.unit_power(2, -1) - Complex(0, -1)) <= 1e-15);
  CHECK_THROWS_AS(FrequencyGrid(0), Error);
}

TEST_CASE("spectrum requires a real DC bin") {
  ComplexMatrix s = ComplexMatrix::Ones(1, 3);
  s(0, 0) = Complex(1, 0.5);
  CHECK_THROWS_AS(Spectrum(FrequencyGrid(3), s), Error);
}

TEST_CASE("hankel") {
  RealMatrix s(1, 4);
  s << 1, 2, 3, 4;
  RealMatrix expected(2, 3);
  expected << 1, 2, 3, 2, 3, 4;
  CHECK(hankel(2, Trajectory(s)) == expected);
  const RealMatrix whole = hankel(4, Trajectory(s));
  CHECK(whole.cols() == 1);
  CHECK(whole.col(0) == Trajectory(s).vectorized());

  std::mt19937_64 rng(1);
  const Trajectory t(oracle::random_matrix(rng, 2, 6));
  const RealMatrix h = hankel(3, t);
  REQUIRE(h.rows() == 6);
  REQUIRE(h.cols() == 4);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 4; ++j)
      for (Index c = 0; c < 2; ++c) CHECK(h(2 * i + c, j) == t.samples()(c, i + j));
}

TEST_CASE("vandermonde column") {
  CHECK(vandermonde_column(3, 1.0) == ComplexVector::Ones(3));
  const ComplexVector v = vandermonde_column(3, 2.0);
  CHECK(v(2) == Complex(4, 0));
  const ComplexVector w = vandermonde_column(4, std::polar(1.0, std::numbers::pi / 2));
  ComplexVector expected(4);
  expected << 1, Complex(0, 1), -1, Complex(0, -1);
  CHECK((w - expected).norm() <= 1e-15);
}

TEST_CASE("f matrix") {
  std::mt19937_64 rng(2);
  const Spectrum sp = random_spectrum(rng, 2, 2);
  CHECK(f_matrix(1, sp, 0) == sp.samples());

  const ComplexMatrix f = f_matrix(2, sp, 0);
  REQUIRE(f.cols() == 2);
  CHECK((f.col(1).head(2) - sp.sample(1)).norm() <= 1e-15);
  CHECK((f.col(1).tail(2) - Complex(0, 1) * sp.sample(1)).norm() <= 1e-15);

  const Spectrum dc(FrequencyGrid(1), ComplexMatrix::Constant(2, 1, 3.0));
  const ComplexMatrix fd = f_matrix(3, dc, 0);
  CHECK(fd.cols() == 1);
  CHECK(fd == ComplexMatrix::Constant(6, 1, 3.0));
}

TEST_CASE("cal f matrix column ordering") {
  std::mt19937_64 rng(4);
  const std::vector<Spectrum> one{random_spectrum(rng, 1, 3)};
  CHECK(cal_f_matrix(2, one, 0) == f_matrix(2, one[0], 0));

  const std::vector<Spectrum> two{random_spectrum(rng, 2, 3), random_spectrum(rng, 2, 3)};
  const ComplexMatrix f = cal_f_matrix(2, two, 0);
  REQUIRE(f.cols() == 6);
  for (Index k = 0; k < 3; ++k)
    for (Index e = 0; e < 2; ++e)
      CHECK((f.col(2 * k + e) - f_matrix(2, two[static_cast<std::size_t>(e)], 0).col(k)).norm() <= 1e-15);

  const std::vector<Spectrum> zero_second{two[0],
                                          Spectrum(FrequencyGrid(3), ComplexMatrix::Zero(2, 3))};
  const ComplexMatrix fz = cal_f_matrix(2, zero_second, 0);
  for (Index k = 0; k < 3; ++k) CHECK(fz.col(2 * k + 1).norm() == 0.0);
}

TEST_CASE("data matrix real form is the complex form times T_Re") {
  std::mt19937_64 rng(6);
  const std::vector<Spectrum> sp{random_spectrum(rng, 2, 5), random_spectrum(rng, 2, 5)};
  const DataMatrix d = build_data_matrix(3, sp);
  CHECK(d.complex_form.rows() == 6);
  CHECK(d.complex_form.cols() == 2 * 9);
  const ComplexMatrix prod = d.complex_form * t_re_transform(5, 2);
  CHECK(prod.imag().cwiseAbs().maxCoeff() <= 1e-10 * prod.cwiseAbs().maxCoeff());
  CHECK((prod.real() - d.real_form).norm() <= 1e-12 * d.real_form.norm());
  CHECK(real_data_matrix(3, sp) == d.real_form);
  CHECK(rank(d.real_form) == rank(d.complex_form));

  const std::vector<Spectrum> dc{Spectrum(FrequencyGrid(1), ComplexMatrix::Constant(1, 1, 2.0))};
  const DataMatrix m1 = build_data_matrix(2, dc);
  CHECK(m1.real_form == m1.complex_form.real());
}

TEST_CASE("T_Re round trip and conjugate structure") {
  CHECK(t_re_transform(1, 1) == ComplexMatrix::Ones(1, 1));
  const ComplexMatrix t = t_re_transform(5, 2);
  CHECK((t * t.inverse() - ComplexMatrix::Identity(18, 18)).norm() <= 1e-12);

  std::mt19937_64 rng(8);
  const RealVector g = oracle::random_matrix(rng, 18, 1).col(0);
  const ComplexVector big = conjugate_coordinates(g, 5, 2);
  CHECK((big - t * g.cast<Complex>()).norm() <= 1e-12);
  CHECK((big.segment(2, 8) - big.tail(8).conjugate()).norm() <= 1e-12);
  CHECK((real_coordinates(big, 5, 2) - g).norm() <= 1e-12);
}

TEST_CASE("batch reactor sized data matrix") {
  std::mt19937_64 rng(10);
  std::vector<Experiment> ex;
  for (int e = 0; e < 2; ++e)
    ex.push_back({random_spectrum(rng, 2, 10), random_spectrum(rng, 2, 10), std::nullopt});
  const SpectraCollection data(FrequencyGrid(10), ex);
  const std::vector<SignalRole> roles{SignalRole::Input, SignalRole::Output};
  const DataMatrix d = build_data_matrix(6, data, roles);
  CHECK(d.real_form.rows() == 24);
  CHECK(d.real_form.cols() == 38);
}
