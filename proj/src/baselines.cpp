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

#include "gridbeam/baselines.hpp"

#include <algorithm>

#include "gridbeam/zf_solver.hpp"

namespace gridbeam {

namespace {

/// Copy with every tariff forced to one; feasibility is untouched since
/// prices never enter the constraints.
ProblemInstance equal_price_copy(const ProblemInstance& instance) {
  ProblemInstance flat = instance;
  flat.energy.price_buy.setOnes();
  flat.energy.price_sell.setOnes();
  flat.energy.price_floor = std::min(instance.energy.price_floor, 1.0);
  flat.energy.price_cap = std::max(instance.energy.price_cap, 1.0);
  return flat;
}

/// The surrogate solve already settled the schedule (it only depends on
/// consumption and harvest); only the bill needs the true tariffs.
SolveOutcome recost(SolveOutcome out, const ProblemInstance& instance) {
  if (out.status == SolveStatus::Converged) {
    out.cost = total_cost(instance.energy, out.schedule);
  }
  return out;
}

}  // namespace

SolveOutcome conventional_optimal(const ProblemInstance& instance,
                                  const SolveOptions& options) {
  instance.validate();
  return recost(solve_joint(equal_price_copy(instance), options), instance);
}

SolveOutcome conventional_zf(const ProblemInstance& instance,
                             const SolveOptions& options) {
  instance.validate();
  return recost(solve_zf(equal_price_copy(instance), options), instance);
}

}  // namespace gridbeam
