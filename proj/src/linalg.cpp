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

#include "fdc/linalg.hpp"

#include "fdc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fdc {

template <typename Matrix>
void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorCode::InvalidInput, std::string(what) + ": non-finite entries");
}

double default_rank_tolerance(Index rows, Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max * std::ldexp(1.0, -52);
}

NumericalRank numerical_rank(const RealVector& singular_values, Index rows, Index cols,
                             std::optional<double> tolerance) {
  const double smax = singular_values.size() > 0 ? singular_values(0) : 0.0;
  NumericalRank r;
  r.tolerance = tolerance.value_or(default_rank_tolerance(rows, cols, smax));
  for (Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > r.tolerance) ++r.rank;
  }
  return r;
}

template <typename Matrix>
SvdResult<Matrix> svd(const Matrix& m) {
  require(m.rows() > 0 && m.cols() > 0, ErrorCode::InvalidInput, "svd: empty matrix");
  require_finite(m, "svd");
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

template <typename Matrix>
Index rank(const Matrix& m, std::optional<double> tolerance) {
  const auto s = svd(m);
  return numerical_rank(s.singular_values, m.rows(), m.cols(), tolerance).rank;
}

template <typename Matrix>
LeastSquaresResult<Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>> least_squares(
    const Matrix& a, const Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>& b,
    std::optional<double> tolerance) {
  using Vector = Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>;
  require(a.rows() == b.rows(), ErrorCode::InvalidInput,
          "least_squares: A has " + std::to_string(a.rows()) + " rows but b has " +
              std::to_string(b.rows()));
  require_finite(b, "least_squares");
  const auto s = svd(a);
  const auto nr = numerical_rank(s.singular_values, a.rows(), a.cols(), tolerance);
  Vector coeffs = s.u.leftCols(nr.rank).adjoint() * b;
  for (Index i = 0; i < nr.rank; ++i) coeffs(i) /= s.singular_values(i);
  LeastSquaresResult<Vector> out;
  out.x = s.v.leftCols(nr.rank) * coeffs;
  out.residual_norm = (a * out.x - b).norm();
  out.rank = nr.rank;
  return out;
}

template <typename Matrix>
Matrix kernel_basis(const Matrix& m, std::optional<double> tolerance) {
  const auto s = svd(m);
  const auto nr = numerical_rank(s.singular_values, m.rows(), m.cols(), tolerance);
  return s.v.rightCols(m.cols() - nr.rank);
}

template <typename Matrix>
Matrix range_basis(const Matrix& m, std::optional<double> tolerance) {
  const auto s = svd(m);
  const auto nr = numerical_rank(s.singular_values, m.rows(), m.cols(), tolerance);
  return s.u.leftCols(nr.rank);
}

template <typename Matrix>
Matrix pseudo_inverse(const Matrix& m, std::optional<double> tolerance) {
  const auto s = svd(m);
  const auto nr = numerical_rank(s.singular_values, m.rows(), m.cols(), tolerance);
  Matrix vs = s.v.leftCols(nr.rank);
  for (Index i = 0; i < nr.rank; ++i) vs.col(i) /= s.singular_values(i);
  return vs * s.u.leftCols(nr.rank).adjoint();
}

#define FDC_INSTANTIATE(M)                                                                   \
  template void require_finite<M>(const M&, const char*);                                   \
  template SvdResult<M> svd<M>(const M&);                                                    \
  template Index rank<M>(const M&, std::optional<double>);                                   \
  template LeastSquaresResult<Eigen::Matrix<M::Scalar, Eigen::Dynamic, 1>> least_squares<M>( \
      const M&, const Eigen::Matrix<M::Scalar, Eigen::Dynamic, 1>&, std::optional<double>);  \
  template M kernel_basis<M>(const M&, std::optional<double>);                               \
  template M range_basis<M>(const M&, std::optional<double>);                                \
  template M pseudo_inverse<M>(const M&, std::optional<double>);

FDC_INSTANTIATE(RealMatrix)
FDC_INSTANTIATE(ComplexMatrix)
#undef FDC_INSTANTIATE

template void require_finite<RealVector>(const RealVector&, const char*);
template void require_finite<ComplexVector>(const ComplexVector&, const char*);

}  // namespace fdc
