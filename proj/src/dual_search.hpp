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

/// \file dual_search.hpp
/// Outer dual loop shared by the general and ZF solvers: ellipsoid search
/// over the tariff-bracketed multiplier box, primal tracking of every
/// cap-respecting iterate, schedule recovery, and gap classification.
/// Internal to the library.

#pragma once

#include <functional>
#include <string>

#include "gridbeam/duality_solver.hpp"
#include "gridbeam/model.hpp"

#include <Eigen/Dense>

namespace gridbeam::detail {

/// Thrown by an inner solver to end the search with a definite verdict.
struct AbortSolve {
  SolveStatus status;
  std::string detail;
};

/// What an inner minimum-power solver reports at one dual point.
struct InnerEval {
  double value = 0.0;
  Eigen::VectorXd sub_mu;
  Eigen::VectorXd sub_nu;
  BeamformingSolution beams;
  Eigen::VectorXd tx_power;
};

using InnerSolver =
    std::function<InnerEval(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu)>;

/// Run the dual ascent for either solver family.  The inner solver may
/// throw AbortSolve; its verdict is passed through in the outcome.
SolveOutcome run_dual_search(const ProblemInstance& instance,
                             const SolveOptions& options,
                             const InnerSolver& inner);

}  // namespace gridbeam::detail
