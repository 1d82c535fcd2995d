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

#include <Eigen/Dense>

#include <complex>
#include <optional>

namespace fdc {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Thin SVD factors. Columns of `u` and `v` are full (square) so that the
/// trailing columns of `v` span the kernel.
template <typename Matrix>
struct SvdResult {
  Matrix u;
  RealVector singular_values;  // nonincreasing
  Matrix v;
};

template <typename Vector>
struct LeastSquaresResult {
  Vector x;
  double residual_norm = 0.0;
  Index rank = 0;
};

/// Throws InvalidInput when any entry is NaN or infinite.
template <typename Matrix>
void require_finite(const Matrix& m, const char* what);

/// max(rows, cols) * sigma_max * 2^-52.
double default_rank_tolerance(Index rows, Index cols, double sigma_max);

template <typename Matrix>
SvdResult<Matrix> svd(const Matrix& m);

template <typename Matrix>
Index rank(const Matrix& m, std::optional<double> tolerance = std::nullopt);

/// Minimum-norm least-squares solution of A x = b.
template <typename Matrix>
LeastSquaresResult<Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>> least_squares(
    const Matrix& a, const Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>& b,
    std::optional<double> tolerance = std::nullopt);

/// Orthonormal basis of ker(m), one column per kernel dimension.
template <typename Matrix>
Matrix kernel_basis(const Matrix& m, std::optional<double> tolerance = std::nullopt);

/// Orthonormal basis of the column space of m.
template <typename Matrix>
Matrix range_basis(const Matrix& m, std::optional<double> tolerance = std::nullopt);

template <typename Matrix>
Matrix pseudo_inverse(const Matrix& m, std::optional<double> tolerance = std::nullopt);

/// Singular values that exceed the tolerance, and the tolerance actually used.
struct NumericalRank {
  Index rank = 0;
  double tolerance = 0.0;
};

NumericalRank numerical_rank(const RealVector& singular_values, Index rows, Index cols,
                             std::optional<double> tolerance);

}  // namespace fdc
