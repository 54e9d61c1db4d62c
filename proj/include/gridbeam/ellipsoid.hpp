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

/// \file ellipsoid.hpp
/// Ellipsoid method for maximizing a concave, possibly nondifferentiable
/// function over a box, driven by a subgradient oracle.

#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

namespace gridbeam {

/// One oracle answer at a query point c.
///
/// For an objective evaluation, `subgradient` g supports the concave
/// objective from above: f(z) <= value + g.(z - c) for all z, so the
/// maximizer lies in { z : g.(z - c) >= 0 }.  For a feasibility cut,
/// `subgradient` separates c from the feasible set, which lies in
/// { z : g.(z - c) <= 0 }, and `value` is ignored.
struct SubgradientOracleResult {
  double value = 0.0;
  Eigen::VectorXd subgradient;
  bool is_feasibility_cut = false;
};

using SubgradientOracle =
    std::function<SubgradientOracleResult(const Eigen::VectorXd&)>;

struct EllipsoidOptions {
  /// Stop once sqrt(g' A g) <= tol at an evaluated point; this quantity
  /// bounds the remaining objective gap max_box f - f(best).
  double tol = 1e-7;

  /// Iteration budget; 0 picks 2000 * d^2 for d free dimensions.
  long max_iter = 0;

  /// Coordinates with an infinite upper bound are searched within
  /// [lower, lower + unbounded_extent] when sizing the initial ellipsoid;
  /// only the real bounds generate feasibility cuts.
  double unbounded_extent = 1e4;

  /// Optional caller stop: checked after each objective evaluation with
  /// the incumbent; returning true ends the search with stopped_early set.
  std::function<bool(double best_value, const Eigen::VectorXd& best_point)>
      early_stop;
};

/// Search state, exposed for tests and diagnostics.
///
/// The ellipsoid is { center + shape^{1/2} u : |u| <= 1 } over the free
/// (nonzero-width) coordinates; `shape` stays symmetric positive definite
/// until numerical degeneration, which ends the search gracefully.
struct EllipsoidState {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;
  long iteration = 0;
};

struct MaximizeResult {
  Eigen::VectorXd best_point;  ///< always inside the box
  double best_value = 0.0;
  bool converged = false;      ///< tol reached, or early_stop fired
  bool stopped_early = false;  ///< early_stop fired
  long iterations = 0;
  long oracle_calls = 0;
  double final_width = 0.0;  ///< sqrt(g' A g) at the last evaluation
  std::string detail;        ///< set on degeneration or budget exhaustion
};

/// Maximize a concave function over { z : lower <= z <= upper }.
///
/// Zero-width coordinates (upper[j] == lower[j]) are frozen at their
/// fixed value and removed from the search; upper[j] may be +infinity.
/// The incumbent value is monotone nondecreasing over oracle calls and
/// the returned point satisfies the bounds exactly.  If the box is a
/// single point, that point is evaluated and returned.
///
/// Throws std::invalid_argument on inconsistent bounds.
MaximizeResult maximize(const SubgradientOracle& oracle,
                        const Eigen::VectorXd& lower,
                        const Eigen::VectorXd& upper,
                        const EllipsoidOptions& options = {});

}  // namespace gridbeam
