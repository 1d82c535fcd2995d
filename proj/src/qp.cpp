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

#include "fdc/qp.hpp"

#include "fdc/error.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fdc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inf_norm(const RealVector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

// Largest alpha in (0, 1] keeping v + alpha dv >= 0.
double max_step(const RealVector& v, const RealVector& dv) {
  double alpha = 1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

}  // namespace

const char* to_string(QpStatus status) {
  switch (status) {
    case QpStatus::Solved: return "solved";
    case QpStatus::Infeasible: return "infeasible";
    case QpStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

double KktResiduals::max() const {
  return std::max({primal_equality, inequality_violation, stationarity, complementarity});
}

void QpProblem::validate(bool check_psd) const {
  const Index n = variables();
  require(n >= 1, ErrorCode::InvalidInput, "qp: no variables");
  require(hessian.rows() == n && hessian.cols() == n, ErrorCode::InvalidInput,
          "qp: Hessian must be n x n");
  require(eq_matrix.cols() == n || eq_matrix.size() == 0, ErrorCode::InvalidInput,
          "qp: equality matrix has wrong column count");
  require(eq_matrix.rows() == eq_rhs.size(), ErrorCode::InvalidInput,
          "qp: equality rhs size mismatch");
  require(ineq_matrix.cols() == n || ineq_matrix.size() == 0, ErrorCode::InvalidInput,
          "qp: inequality matrix has wrong column count");
  require(ineq_matrix.rows() == ineq_lower.size() && ineq_matrix.rows() == ineq_upper.size(),
          ErrorCode::InvalidInput, "qp: inequality bounds size mismatch");
  require_finite(hessian, "qp Hessian");
  require_finite(linear, "qp linear term");
  require_finite(eq_matrix, "qp equality matrix");
  require_finite(eq_rhs, "qp equality rhs");
  require_finite(ineq_matrix, "qp inequality matrix");
  for (Index i = 0; i < ineq_lower.size(); ++i) {
    require(!std::isnan(ineq_lower(i)) && !std::isnan(ineq_upper(i)) && ineq_lower(i) != kInf &&
                ineq_upper(i) != -kInf,
            ErrorCode::InvalidInput, "qp: invalid inequality bound");
  }
  const double hscale = std::max(1.0, hessian.cwiseAbs().maxCoeff());
  require((hessian - hessian.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * hscale,
          ErrorCode::InvalidInput, "qp: Hessian is not symmetric");
  if (check_psd) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(hessian, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -1e-10 * hscale, ErrorCode::InvalidInput,
            "qp: Hessian is not positive semidefinite");
  }
}

KktResiduals kkt_residuals(const QpProblem& p, const RealVector& x, const RealVector& y,
                           const RealVector& lambda) {
  KktResiduals r;
  if (p.eq_rhs.size() > 0) r.primal_equality = inf_norm(p.eq_matrix * x - p.eq_rhs);
  RealVector grad = p.hessian * x + p.linear;
  if (p.eq_rhs.size() > 0) grad += p.eq_matrix.transpose() * y;
  if (p.ineq_lower.size() > 0) {
    const RealVector cx = p.ineq_matrix * x;
    grad += p.ineq_matrix.transpose() * lambda;
    for (Index i = 0; i < cx.size(); ++i) {
      r.inequality_violation =
          std::max({r.inequality_violation, p.ineq_lower(i) - cx(i), cx(i) - p.ineq_upper(i)});
      double c = 0.0;
      if (lambda(i) > 0.0) c = lambda(i) * std::abs(p.ineq_upper(i) - cx(i));
      if (lambda(i) < 0.0) c = -lambda(i) * std::abs(cx(i) - p.ineq_lower(i));
      r.complementarity = std::max(r.complementarity, c);
    }
  }
  r.stationarity = inf_norm(grad);
  return r;
}

QpResult qp_solve(const QpProblem& problem, const QpSettings& settings) {
  problem.validate(settings.check_psd);
  const Index n = problem.variables();
  QpResult result;
  result.x = RealVector::Zero(n);
  result.eq_multipliers = RealVector::Zero(problem.eq_rhs.size());
  result.ineq_multipliers = RealVector::Zero(problem.ineq_lower.size());

  // Split bounds into equalities (l == u) and one-sided rows G x <= h.
  std::vector<Index> eq_from_ineq;
  std::vector<std::pair<Index, double>> one_sided;  // (row, sign): sign * C_i x <= sign * bound
  for (Index i = 0; i < problem.ineq_lower.size(); ++i) {
    const double lo = problem.ineq_lower(i);
    const double hi = problem.ineq_upper(i);
    if (lo > hi) {
      result.status = QpStatus::Infeasible;
      return result;
    }
    if (lo == hi) {
      eq_from_ineq.push_back(i);
      continue;
    }
    if (hi != kInf) one_sided.emplace_back(i, 1.0);
    if (lo != -kInf) one_sided.emplace_back(i, -1.0);
  }

  const Index me_raw = problem.eq_rhs.size() + static_cast<Index>(eq_from_ineq.size());
  RealMatrix a_raw(me_raw, n);
  RealVector b_raw(me_raw);
  if (problem.eq_rhs.size() > 0) {
    a_raw.topRows(problem.eq_rhs.size()) = problem.eq_matrix;
    b_raw.head(problem.eq_rhs.size()) = problem.eq_rhs;
  }
  for (std::size_t j = 0; j < eq_from_ineq.size(); ++j) {
    const Index row = problem.eq_rhs.size() + static_cast<Index>(j);
    a_raw.row(row) = problem.ineq_matrix.row(eq_from_ineq[j]);
    b_raw(row) = problem.ineq_lower(eq_from_ineq[j]);
  }

  // Drop linearly dependent equality rows; inconsistent ones mean infeasible.
  std::vector<Index> kept_rows;
  if (me_raw > 0) {
    Eigen::ColPivHouseholderQR<RealMatrix> qr(a_raw.transpose());
    const double amax = a_raw.cwiseAbs().maxCoeff();
    qr.setThreshold(1e-11 * std::max<double>(static_cast<double>(std::max(n, me_raw)), 1.0));
    const Index r = amax > 0.0 ? qr.rank() : 0;
    for (Index i = 0; i < r; ++i) kept_rows.push_back(qr.colsPermutation().indices()(i));
    std::sort(kept_rows.begin(), kept_rows.end());
    if (r < me_raw) {
      RealMatrix ak(r, n);
      RealVector bk(r);
      for (Index i = 0; i < r; ++i) {
        ak.row(i) = a_raw.row(kept_rows[static_cast<std::size_t>(i)]);
        bk(i) = b_raw(kept_rows[static_cast<std::size_t>(i)]);
      }
      const RealVector x0 = r > 0 ? RealVector(least_squares(ak, bk).x) : RealVector::Zero(n);
      if (inf_norm(a_raw * x0 - b_raw) > 1e-8 * std::max(1.0, inf_norm(b_raw))) {
        result.status = QpStatus::Infeasible;
        return result;
      }
    }
  }
  const Index me = static_cast<Index>(kept_rows.size());
  RealMatrix a(me, n);
  RealVector b(me);
  for (Index i = 0; i < me; ++i) {
    a.row(i) = a_raw.row(kept_rows[static_cast<std::size_t>(i)]);
    b(i) = b_raw(kept_rows[static_cast<std::size_t>(i)]);
  }

  const Index mi = static_cast<Index>(one_sided.size());
  Eigen::SparseMatrix<double> g(mi, n);
  RealVector h(mi);
  {
    std::vector<Eigen::Triplet<double>> trips;
    for (Index r = 0; r < mi; ++r) {
      const auto [row, sign] = one_sided[static_cast<std::size_t>(r)];
      for (Index j = 0; j < n; ++j) {
        const double v = problem.ineq_matrix(row, j);
        if (v != 0.0) trips.emplace_back(r, j, sign * v);
      }
      h(r) = sign > 0 ? problem.ineq_upper(row) : -problem.ineq_lower(row);
    }
    g.setFromTriplets(trips.begin(), trips.end());
  }
  const Eigen::SparseMatrix<double> gt = g.transpose();

  const RealMatrix& hess = problem.hessian;
  const RealVector& c = problem.linear;
  const double reg = 1e-10 * std::max(1.0, hess.cwiseAbs().maxCoeff());
  const Index nk = n + me;

  // The regularized matrix is factored; refinement runs against the exact one.
  Eigen::PartialPivLU<RealMatrix> lu;
  RealMatrix kkt(nk, nk);
  auto factor = [&](const RealVector& w) {
    kkt.setZero();
    kkt.topLeftCorner(n, n) = hess;
    if (mi > 0) {
      const Eigen::SparseMatrix<double> gwg = gt * w.asDiagonal() * g;
      kkt.topLeftCorner(n, n) += RealMatrix(gwg);
    }
    if (me > 0) {
      kkt.topRightCorner(n, me) = a.transpose();
      kkt.bottomLeftCorner(me, n) = a;
    }
    RealMatrix shifted = kkt;
    shifted.topLeftCorner(n, n).diagonal().array() += reg;
    shifted.bottomRightCorner(me, me).diagonal().array() -= reg;
    lu.compute(shifted);
  };
  auto solve = [&](const RealVector& rhs) {
    RealVector sol = lu.solve(rhs);
    for (int it = 0; it < 3; ++it) sol += lu.solve(rhs - kkt * sol);
    return sol;
  };

  // Initial point: least-norm primal and dual problems sharing one factorization,
  // then shifted into the positive orthant.
  RealVector x(n), y(me), s(mi), z(mi);
  {
    factor(RealVector::Ones(mi));
    RealVector rhs = RealVector::Zero(nk);
    if (mi > 0) rhs.head(n) = gt * h;
    rhs.tail(me) = b;
    const RealVector primal = solve(rhs);
    x = primal.head(n);
    rhs.setZero();
    rhs.head(n) = -c;
    const RealVector dual = solve(rhs);
    y = dual.tail(me);
    if (mi > 0) {
      s = h - g * x;
      z = g * dual.head(n);
      auto shift = [](RealVector& v) {
        const double lo = v.minCoeff();
        if (lo <= 0.0) v.array() += 1.0 - lo;
      };
      shift(s);
      shift(z);
    }
  }

  const double b_scale = 1.0 + inf_norm(b);
  const double h_scale = 1.0 + inf_norm(h);
  const double c_scale = 1.0 + inf_norm(c);
  const double tol = settings.tolerance;

  QpStatus status = QpStatus::MaxIterations;
  int iter = 0;
  for (; iter <= settings.max_iterations; ++iter) {
    RealVector r_d = hess * x + c;
    if (me > 0) r_d += a.transpose() * y;
    if (mi > 0) r_d += gt * z;
    const RealVector r_p = me > 0 ? RealVector(a * x - b) : RealVector();
    const RealVector r_i = mi > 0 ? RealVector(g * x + s - h) : RealVector();
    const double mu = mi > 0 ? s.dot(z) / static_cast<double>(mi) : 0.0;

    const bool primal_ok = inf_norm(r_p) <= tol * b_scale && inf_norm(r_i) <= tol * h_scale;
    const bool dual_ok = inf_norm(r_d) <= tol * c_scale;
    const double comp = mi > 0 ? (s.cwiseProduct(z)).maxCoeff() : 0.0;
    if (primal_ok && dual_ok && comp <= tol) {
      status = QpStatus::Solved;
      break;
    }
    // Certificate of primal infeasibility: huge duals with A'y + G'z ~ 0 and b'y + h'z < 0.
    if (mi > 0) {
      const double dual_size = inf_norm(z) + inf_norm(y);
      if (dual_size > 1e10) {
        RealVector at = gt * z;
        if (me > 0) at += a.transpose() * y;
        const double cert = (me > 0 ? b.dot(y) : 0.0) + h.dot(z);
        if (inf_norm(at) <= 1e-6 * dual_size && cert < -1e-6 * dual_size) {
          status = QpStatus::Infeasible;
          break;
        }
      }
    }
    if (iter == settings.max_iterations) break;

    const RealVector w = mi > 0 ? RealVector(z.cwiseQuotient(s)) : RealVector();
    factor(w);

    auto direction = [&](const RealVector& r_c, RealVector& dx, RealVector& dy, RealVector& ds,
                         RealVector& dz) {
      RealVector rhs(nk);
      rhs.head(n) = -r_d;
      if (mi > 0) rhs.head(n) += gt * ((r_c - z.cwiseProduct(r_i)).cwiseQuotient(s));
      if (me > 0) rhs.tail(me) = -r_p;
      const RealVector sol = solve(rhs);
      dx = sol.head(n);
      dy = sol.tail(me);
      if (mi > 0) {
        ds = -r_i - g * dx;
        dz = (-r_c - z.cwiseProduct(ds)).cwiseQuotient(s);
      }
    };

    RealVector dx, dy, ds, dz;
    if (mi == 0) {
      direction(RealVector(), dx, dy, ds, dz);
      x += dx;
      y += dy;
      continue;
    }
    // Predictor.
    direction(s.cwiseProduct(z), dx, dy, ds, dz);
    const double ap = max_step(s, ds);
    const double ad = max_step(z, dz);
    const double mu_aff = (s + ap * ds).dot(z + ad * dz) / static_cast<double>(mi);
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
    // Corrector.
    const RealVector r_c =
        s.cwiseProduct(z) + ds.cwiseProduct(dz) - RealVector::Constant(mi, sigma * mu);
    direction(r_c, dx, dy, ds, dz);
    const double step_p = std::min(1.0, 0.99 * max_step(s, ds));
    const double step_d = std::min(1.0, 0.99 * max_step(z, dz));
    const double step = std::min(step_p, step_d);
    x += step * dx;
    y += step * dy;
    s += step * ds;
    z += step * dz;
  }

  result.status = status;
  result.iterations = iter;
  result.x = x;
  result.objective = 0.5 * x.dot(hess * x) + c.dot(x);
  // Map multipliers back to the caller's rows.
  RealVector y_raw = RealVector::Zero(me_raw);
  for (Index i = 0; i < me; ++i) y_raw(kept_rows[static_cast<std::size_t>(i)]) = y(i);
  result.eq_multipliers = y_raw.head(problem.eq_rhs.size());
  for (std::size_t j = 0; j < eq_from_ineq.size(); ++j) {
    result.ineq_multipliers(eq_from_ineq[j]) =
        y_raw(problem.eq_rhs.size() + static_cast<Index>(j));
  }
  for (Index r = 0; r < mi; ++r) {
    const auto [row, sign] = one_sided[static_cast<std::size_t>(r)];
    result.ineq_multipliers(row) += sign * z(r);
  }
  result.residuals =
      kkt_residuals(problem, result.x, result.eq_multipliers, result.ineq_multipliers);
  return result;
}

}  // namespace fdc
