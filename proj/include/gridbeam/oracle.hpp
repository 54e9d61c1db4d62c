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

/// \file oracle.hpp
/// Independent reference computations for cross-checking the solvers on
/// instances small enough to settle by brute force or by hand-derivable
/// closed forms.  Everything here deliberately avoids the production
/// solver machinery.

#pragma once

#include <functional>

#include "gridbeam/model.hpp"

#include <Eigen/Dense>

namespace gridbeam {

struct GridSearchResult {
  Eigen::Vector2d tx_power = Eigen::Vector2d::Zero();
  double cost = 0.0;
  bool feasible = false;
  double grid_step = 0.0;
};

/// Exhaustive grid search over the two per-BS powers for a cluster of two
/// single-antenna base stations serving one terminal.  The receiver sees
/// the coherently combined signal, so the SNR at powers (p1, p2) is
/// (|h1| sqrt(p1) + |h2| sqrt(p2))^2 / noise.  The scan covers
/// [0, min(p_max_i, solo_i)] per axis, where solo_i is the power at which
/// BS i alone meets the target; since the bill is nondecreasing in each
/// power, no optimum lies beyond.  Throws std::invalid_argument unless
/// n_bs == 2, n_ant == 1, n_mt == 1.
GridSearchResult grid_search_two_bs(const ProblemInstance& instance,
                                    double grid_step = 1e-3);

/// Closed forms for a single terminal: with a diagonal per-BS weighting
/// the uplink power, beam direction, downlink power, and dual value all
/// have explicit formulas (matrix inversion reduces to elementwise
/// division).  Throws std::invalid_argument unless n_mt == 1.
struct SingleUserSolution {
  double lambda = 0.0;            ///< uplink fixed point
  Eigen::VectorXcd direction;     ///< unit-norm beam direction
  double power = 0.0;             ///< downlink scaling
  BeamformingSolution beams;
  Eigen::VectorXd tx_power;       ///< per BS
  double dual_value = 0.0;
  Eigen::VectorXd subgradient_mu;
  Eigen::VectorXd subgradient_nu;
};

SingleUserSolution single_user_closed_forms(const ProblemInstance& instance,
                                            const Eigen::VectorXd& mu,
                                            const Eigen::VectorXd& nu);

/// Central-difference check of an analytic (sub)gradient at a point where
/// f is differentiable: returns max_i |fd_i - analytic_i| / max(1, |analytic_i|).
double finite_diff_subgradient_check(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& analytic_subgradient, const Eigen::VectorXd& point,
    double step);

}  // namespace gridbeam
