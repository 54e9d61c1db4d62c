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

/// \file baselines.hpp
/// Conventional reference schemes: beamform for minimum radiated sum
/// power, ignoring tariffs and harvests, then settle the bill at the true
/// prices.  Implemented by running the joint solvers on a copy of the
/// instance with all tariffs set to one, which collapses the
/// supply-balance multipliers and prices every BS's power equally, and
/// re-costing the resulting schedule.  When all true tariffs are already
/// equal the conventional and joint schemes coincide.
///
/// In the returned outcome, dual_mu/dual_nu/dual_value/duality_gap
/// describe the surrogate minimum-power solve, while cost is the bill at
/// the instance's actual tariffs.

#pragma once

#include "gridbeam/duality_solver.hpp"
#include "gridbeam/model.hpp"

namespace gridbeam {

/// Minimum-sum-power beams from the general solver, costed at the true
/// tariffs.  The beams do not depend on prices or harvests.
SolveOutcome conventional_optimal(const ProblemInstance& instance,
                                  const SolveOptions& options = {});

/// Same scheme restricted to zero-forcing beams.
SolveOutcome conventional_zf(const ProblemInstance& instance,
                             const SolveOptions& options = {});

}  // namespace gridbeam
