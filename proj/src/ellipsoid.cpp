/*
 * Copyright 2026 the gridbeam authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gridbeam/ellipsoid.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gridbeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MaximizeResult maximize(const SubgradientOracle& oracle,
                        const Eigen::VectorXd& lower,
                        const Eigen::VectorXd& upper,
                        const EllipsoidOptions& options) {
  const int n = static_cast<int>(lower.size());
  if (upper.size() != n) {
    throw std::invalid_argument("ellipsoid: bound vectors differ in length");
  }

  std::vector<int> free_idx;
  Eigen::VectorXd point = lower;  // frozen coordinates keep their fixed value
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lower[j])) {
      throw std::invalid_argument("ellipsoid: lower bounds must be finite");
    }
    if (upper[j] < lower[j]) {
      std::ostringstream oss;
      oss << "ellipsoid: empty box in coordinate " << j << " (" << lower[j]
          << " > " << upper[j] << ")";
      throw std::invalid_argument(oss.str());
    }
    if (upper[j] > lower[j]) free_idx.push_back(j);
  }
  const int d = static_cast<int>(free_idx.size());

  MaximizeResult result;
  result.best_value = -kInf;

  const auto assemble = [&](const Eigen::VectorXd& c) {
    Eigen::VectorXd z = point;
    for (int t = 0; t < d; ++t) z[free_idx[t]] = c[t];
    return z;
  };

  // Single-point box: one evaluation decides everything.
  if (d == 0) {
    const SubgradientOracleResult res = oracle(point);
    result.oracle_calls = 1;
    result.best_point = point;
    if (!res.is_feasibility_cut) {
      result.best_value = res.value;
      result.converged = true;
    } else {
      result.detail = "single-point box rejected by the oracle";
    }
    return result;
  }

  Eigen::VectorXd lo(d), hi(d);
  for (int t = 0; t < d; ++t) {
    lo[t] = lower[free_idx[t]];
    const double u = upper[free_idx[t]];
    hi[t] = std::isfinite(u) ? u : lo[t] + options.unbounded_extent;
  }

  // Initial ball: centered at the box midpoint with the half-diagonal as
  // radius, so the whole box is contained.
  Eigen::VectorXd c = 0.5 * (lo + hi);
  const double radius = 0.5 * (hi - lo).norm();
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(d, d) * (radius * radius);

  const long max_iter =
      options.max_iter > 0 ? options.max_iter : 2000L * d * d;

  bool degenerate = false;
  for (long iter = 0; iter < max_iter; ++iter) {
    result.iterations = iter + 1;

    // Cut selection: a box violation yields a coordinate cut without
    // consulting the oracle; both cut kinds keep { z : a.(z - c) <= 0 }.
    Eigen::VectorXd a;
    int violated = -1;
    for (int t = 0; t < d; ++t) {
      if (c[t] < lower[free_idx[t]] || c[t] > upper[free_idx[t]]) {
        violated = t;
        break;
      }
    }
    if (violated >= 0) {
      a = Eigen::VectorXd::Zero(d);
      a[violated] = c[violated] < lower[free_idx[violated]] ? -1.0 : 1.0;
    } else {
      const SubgradientOracleResult res = oracle(assemble(c));
      ++result.oracle_calls;
      if (static_cast<int>(res.subgradient.size()) != n) {
        throw std::invalid_argument(
            "ellipsoid: oracle subgradient has the wrong length");
      }
      Eigen::VectorXd g(d);
      for (int t = 0; t < d; ++t) g[t] = res.subgradient[free_idx[t]];

      if (res.is_feasibility_cut) {
        a = g;
      } else {
        if (res.value > result.best_value) {
          result.best_value = res.value;
          result.best_point = assemble(c);
        }
        const double width2 = g.dot(A * g);
        result.final_width = width2 > 0.0 ? std::sqrt(width2) : 0.0;
        if (result.final_width <= options.tol) {
          result.converged = true;
          break;
        }
        if (options.early_stop &&
            options.early_stop(result.best_value, result.best_point)) {
          result.converged = true;
          result.stopped_early = true;
          break;
        }
        a = -g;
      }
    }

    const double denom2 = a.dot(A * a);
    if (!std::isfinite(denom2) || denom2 <= 0.0) {
      degenerate = true;
      break;
    }
    if (d == 1) {
      // One free coordinate: the ellipsoid is an interval and a central
      // cut halves it.
      const double r = std::sqrt(A(0, 0));
      c[0] -= (a[0] > 0.0 ? 1.0 : -1.0) * 0.5 * r;
      A(0, 0) = 0.25 * r * r;
    } else {
      const Eigen::VectorXd atil = (A * a) / std::sqrt(denom2);
      const double dd = static_cast<double>(d);
      c -= atil / (dd + 1.0);
      A = (dd * dd / (dd * dd - 1.0)) *
          (A - (2.0 / (dd + 1.0)) * (atil * atil.transpose()));
      A = 0.5 * (A + A.transpose());
    }
    if (!A.allFinite() || !c.allFinite()) {
      degenerate = true;
      break;
    }
  }

  if (result.best_value == -kInf) {
    // Never saw an objective value: fall back to the clamped center.
    for (int t = 0; t < d; ++t) {
      c[t] = std::min(std::max(c[t], lower[free_idx[t]]), upper[free_idx[t]]);
    }
    result.best_point = assemble(c);
    result.detail = degenerate ? "degenerate before any evaluation"
                               : "no objective evaluation inside the box";
  } else if (degenerate) {
    result.detail = "ellipsoid degenerated; returning the incumbent";
  } else if (!result.converged) {
    result.detail = "iteration budget exhausted";
  }
  return result;
}

}  // namespace gridbeam
