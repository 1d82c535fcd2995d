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

#include "fdc/sdp.hpp"

#include "fdc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace fdc {

namespace {

using Blocks = std::vector<RealMatrix>;

RealMatrix sym(const RealMatrix& m) { return 0.5 * (m + m.transpose()); }

double frob_dot(const RealMatrix& a, const RealMatrix& b) { return a.cwiseProduct(b).sum(); }

double min_eigenvalue(const RealMatrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Largest alpha <= 1 with m + alpha dm >= 0, given m > 0.
std::optional<double> max_psd_step(const RealMatrix& m, const RealMatrix& dm) {
  Eigen::LLT<RealMatrix> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const RealMatrix linv_dm = llt.matrixL().solve(dm);
  const RealMatrix w = llt.matrixL().solve(linv_dm.transpose());
  const double lmin = min_eigenvalue(w);
  if (lmin >= -1.0) return 1.0;
  return -1.0 / lmin;
}

struct Reduced {
  std::vector<LmiBlock> blocks;
  std::vector<RealMatrix> bases;  // columns span the kept face of each block
};

Reduced reduce(const SdpProblem& p, bool enabled) {
  Reduced r;
  for (const auto& blk : p.blocks) {
    const Index n = blk.constant.rows();
    RealMatrix v = RealMatrix::Identity(n, n);
    if (enabled && n > 0) {
      RealMatrix all(n, n * static_cast<Index>(1 + blk.coefficients.size()));
      all.leftCols(n) = blk.constant;
      for (std::size_t i = 0; i < blk.coefficients.size(); ++i) {
        all.middleCols(n * static_cast<Index>(i + 1), n) = blk.coefficients[i];
      }
      const auto s = svd(all);
      const double smax = s.singular_values.size() > 0 ? s.singular_values(0) : 0.0;
      Index rank = 0;
      while (rank < s.singular_values.size() && s.singular_values(rank) > 1e-10 * smax) ++rank;
      v = s.u.leftCols(rank);
    }
    LmiBlock out;
    out.constant = sym(v.transpose() * blk.constant * v);
    for (const auto& a : blk.coefficients) out.coefficients.push_back(sym(v.transpose() * a * v));
    r.blocks.push_back(std::move(out));
    r.bases.push_back(std::move(v));
  }
  return r;
}

}  // namespace

const char* to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::Solved: return "solved";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::MaxIterations: return "max_iterations";
    case SdpStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

void SdpProblem::validate() const {
  const Index m = variables();
  require(m >= 1, ErrorCode::InvalidInput, "sdp: no variables");
  require(!blocks.empty(), ErrorCode::InvalidInput, "sdp: no blocks");
  require_finite(objective, "sdp objective");
  for (const auto& b : blocks) {
    const Index n = b.constant.rows();
    require(b.constant.cols() == n, ErrorCode::InvalidInput, "sdp: block constant not square");
    require(static_cast<Index>(b.coefficients.size()) == m, ErrorCode::InvalidInput,
            "sdp: one coefficient matrix per variable required");
    require_finite(b.constant, "sdp block constant");
    const double scale = std::max(1.0, b.constant.cwiseAbs().maxCoeff());
    require((b.constant - b.constant.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
            ErrorCode::InvalidInput, "sdp: block constant not symmetric");
    for (const auto& a : b.coefficients) {
      require(a.rows() == n && a.cols() == n, ErrorCode::InvalidInput,
              "sdp: coefficient size mismatch");
      require_finite(a, "sdp coefficient");
      const double as = std::max(1.0, a.cwiseAbs().maxCoeff());
      require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * as, ErrorCode::InvalidInput,
              "sdp: coefficient not symmetric");
    }
  }
}

SdpResult sdp_solve(const SdpProblem& problem, const SdpSettings& settings) {
  problem.validate();
  const Index m = problem.variables();
  const RealVector& b = problem.objective;
  const Reduced red = reduce(problem, settings.facial_reduction);
  const auto& blocks = red.blocks;
  const std::size_t nb = blocks.size();

  auto a_op = [&](const Blocks& x) {  // A(X)_i = sum_j <A_ji, X_j>
    RealVector v = RealVector::Zero(m);
    for (std::size_t j = 0; j < nb; ++j)
      for (Index i = 0; i < m; ++i)
        v(i) += frob_dot(blocks[j].coefficients[static_cast<std::size_t>(i)], x[j]);
    return v;
  };
  auto at_op = [&](const RealVector& y) {
    Blocks out;
    for (const auto& blk : blocks) {
      RealMatrix s = RealMatrix::Zero(blk.constant.rows(), blk.constant.cols());
      for (Index i = 0; i < m; ++i) s += y(i) * blk.coefficients[static_cast<std::size_t>(i)];
      out.push_back(std::move(s));
    }
    return out;
  };

  Index total_dim = 0;
  double c_norm = 0.0;
  double a_norm = 0.0;
  for (const auto& blk : blocks) {
    total_dim += blk.constant.rows();
    c_norm += blk.constant.squaredNorm();
    for (const auto& a : blk.coefficients) a_norm = std::max(a_norm, a.norm());
  }
  c_norm = std::sqrt(c_norm);
  const double b_norm = b.norm();

  SdpResult result;
  result.y = RealVector::Zero(m);
  if (total_dim == 0) {
    // Every block vanished: the constraints are trivially satisfied.
    result.status = b_norm == 0.0 ? SdpStatus::Solved : SdpStatus::Infeasible;
    return result;
  }

  // Infeasible start with scaled identities.
  double xi = std::max(10.0, std::sqrt(static_cast<double>(total_dim)));
  for (Index i = 0; i < m; ++i) {
    double ai = 0.0;
    for (const auto& blk : blocks) ai += blk.coefficients[static_cast<std::size_t>(i)].squaredNorm();
    xi = std::max(xi, static_cast<double>(total_dim) * (1.0 + std::abs(b(i))) / (1.0 + std::sqrt(ai)));
  }
  const double eta = std::max({10.0, std::sqrt(static_cast<double>(total_dim)), c_norm, a_norm});
  Blocks x, z;
  for (const auto& blk : blocks) {
    const Index n = blk.constant.rows();
    x.push_back(xi * RealMatrix::Identity(n, n));
    z.push_back(eta * RealMatrix::Identity(n, n));
  }
  RealVector y = RealVector::Zero(m);

  const double tol = settings.tolerance;
  SdpStatus status = SdpStatus::MaxIterations;
  double best_err = std::numeric_limits<double>::infinity();
  RealVector best_y = y;
  int iter = 0;
  for (; iter <= settings.max_iterations; ++iter) {
    const Blocks aty = at_op(y);
    Blocks r_d(nb);
    double rd_norm = 0.0;
    double pobj = 0.0;
    double mu = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      r_d[j] = blocks[j].constant - z[j] - aty[j];
      rd_norm += r_d[j].squaredNorm();
      pobj += frob_dot(blocks[j].constant, x[j]);
      mu += frob_dot(x[j], z[j]);
    }
    rd_norm = std::sqrt(rd_norm);
    mu /= static_cast<double>(total_dim);
    const RealVector r_p = b - a_op(x);
    const double dobj = b.dot(y);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pinf = r_p.norm() / (1.0 + b_norm);
    const double dinf = rd_norm / (1.0 + c_norm);
    const double err = std::max({gap, pinf, dinf});
    if (err < best_err) {
      best_err = err;
      best_y = y;
      result.relative_gap = gap;
      result.primal_infeasibility = pinf;
      result.dual_infeasibility = dinf;
    }
    if (err <= tol) {
      status = SdpStatus::Solved;
      break;
    }
    // A diverging primal iterate with A(X) ~ 0 and <C, X> < 0 certifies
    // that no y satisfies the inequalities.
    double x_norm = 0.0;
    for (const auto& xj : x) x_norm += xj.squaredNorm();
    x_norm = std::sqrt(x_norm);
    if (x_norm > 1e12 && a_op(x).norm() <= 1e-8 * x_norm && pobj < -1e-8 * x_norm) {
      status = SdpStatus::Infeasible;
      break;
    }
    if (iter == settings.max_iterations) break;

    Blocks z_inv(nb);
    bool ok = true;
    for (std::size_t j = 0; j < nb; ++j) {
      Eigen::LLT<RealMatrix> llt(z[j]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      z_inv[j] = sym(llt.solve(RealMatrix::Identity(z[j].rows(), z[j].cols())));
    }
    if (!ok) {
      status = SdpStatus::NumericalFailure;
      break;
    }

    // Schur complement M_ik = sum_j tr(A_ji X_j A_jk Z_j^-1).
    RealMatrix schur = RealMatrix::Zero(m, m);
    for (std::size_t j = 0; j < nb; ++j) {
      for (Index i = 0; i < m; ++i) {
        const RealMatrix t = x[j] * blocks[j].coefficients[static_cast<std::size_t>(i)] * z_inv[j];
        for (Index k = i; k < m; ++k) {
          const double v = frob_dot(t, blocks[j].coefficients[static_cast<std::size_t>(k)]);
          schur(i, k) += v;
          if (k != i) schur(k, i) += v;
        }
      }
    }
    Eigen::LDLT<RealMatrix> schur_ldlt(sym(schur));
    if (schur_ldlt.info() != Eigen::Success) {
      status = SdpStatus::NumericalFailure;
      break;
    }

    auto direction = [&](double target, const Blocks* corr, Blocks& dx, Blocks& dz, RealVector& dy) {
      RealVector rhs = b;
      Blocks g(nb);  // X R_d Z^-1 - target Z^-1 (+ correction)
      for (std::size_t j = 0; j < nb; ++j) {
        g[j] = x[j] * r_d[j] * z_inv[j] - target * z_inv[j];
        if (corr != nullptr) g[j] += (*corr)[j] * z_inv[j];
      }
      rhs += a_op(g);
      dy = schur_ldlt.solve(rhs);
      const Blocks atdy = at_op(dy);
      dx.resize(nb);
      dz.resize(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        dz[j] = r_d[j] - atdy[j];
        RealMatrix d = target * z_inv[j] - x[j] - x[j] * dz[j] * z_inv[j];
        if (corr != nullptr) d -= (*corr)[j] * z_inv[j];
        dx[j] = sym(d);
      }
    };
    auto step_length = [&](const Blocks& dx, const Blocks& dz) -> std::optional<std::pair<double, double>> {
      double ap = 1.0, ad = 1.0;
      for (std::size_t j = 0; j < nb; ++j) {
        const auto sp = max_psd_step(x[j], dx[j]);
        const auto sd = max_psd_step(z[j], dz[j]);
        if (!sp || !sd) return std::nullopt;
        ap = std::min(ap, *sp);
        ad = std::min(ad, *sd);
      }
      return std::make_pair(ap, ad);
    };

    Blocks dx, dz;
    RealVector dy;
    direction(0.0, nullptr, dx, dz, dy);
    const auto aff = step_length(dx, dz);
    if (!aff) {
      status = SdpStatus::NumericalFailure;
      break;
    }
    double mu_aff = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      mu_aff += frob_dot(x[j] + aff->first * dx[j], z[j] + aff->second * dz[j]);
    }
    mu_aff /= static_cast<double>(total_dim);
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
    Blocks corr(nb);
    for (std::size_t j = 0; j < nb; ++j) corr[j] = dx[j] * dz[j];
    direction(sigma * mu, &corr, dx, dz, dy);
    const auto st = step_length(dx, dz);
    if (!st) {
      status = SdpStatus::NumericalFailure;
      break;
    }
    const double ap = std::min(1.0, 0.95 * st->first);
    const double ad = std::min(1.0, 0.95 * st->second);
    for (std::size_t j = 0; j < nb; ++j) {
      x[j] = sym(x[j] + ap * dx[j]);
      z[j] = sym(z[j] + ad * dz[j]);
    }
    y += ad * dy;
    if (std::max(ap, ad) < 1e-12) {
      status = SdpStatus::NumericalFailure;
      break;
    }
  }

  // Stalling close to the optimum is accepted at a looser level.
  if ((status == SdpStatus::NumericalFailure || status == SdpStatus::MaxIterations) &&
      best_err <= std::sqrt(tol)) {
    status = SdpStatus::Solved;
  }
  result.status = status;
  result.iterations = iter;
  result.y = status == SdpStatus::Solved ? best_y : y;
  result.objective = b.dot(result.y);
  for (const auto& blk : problem.blocks) {
    RealMatrix s = blk.constant;
    for (Index i = 0; i < m; ++i) s -= result.y(i) * blk.coefficients[static_cast<std::size_t>(i)];
    result.min_eigenvalues.push_back(min_eigenvalue(s));
  }
  return result;
}

std::vector<RealMatrix> symmetric_basis(Index n) {
  std::vector<RealMatrix> basis;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      RealMatrix e = RealMatrix::Zero(n, n);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

RealMatrix symmetric_from_coordinates(const RealVector& y, Index n) {
  require(y.size() == n * (n + 1) / 2, ErrorCode::InvalidInput,
          "symmetric_from_coordinates: size mismatch");
  RealMatrix p(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      p(i, j) = y(k);
      p(j, i) = y(k);
      ++k;
    }
  }
  return p;
}

SdpProblem trace_max_problem(const RealMatrix& s0, const std::vector<RealMatrix>& s_coeffs,
                             Index n) {
  const auto basis = symmetric_basis(n);
  require(s_coeffs.size() == basis.size(), ErrorCode::InvalidInput,
          "trace_max_problem: need one coefficient per basis element");
  SdpProblem p;
  p.objective = RealVector::Zero(static_cast<Index>(basis.size()));
  LmiBlock lmi{sym(s0), {}};
  LmiBlock pos{RealMatrix::Zero(n, n), {}};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    p.objective(static_cast<Index>(i)) = basis[i].trace();
    lmi.coefficients.push_back(-sym(s_coeffs[i]));
    pos.coefficients.push_back(-basis[i]);
  }
  p.blocks = {std::move(lmi), std::move(pos)};
  return p;
}

}  // namespace fdc
