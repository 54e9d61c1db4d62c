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

/// \file feasibility.hpp
/// Decide whether the SINR targets are reachable under the per-BS power
/// caps, before any money enters the picture.
///
/// The check minimizes the radiated sum power subject to the SINR targets
/// and caps, again by dual search over the cap multipliers.  Any dual
/// iterate whose beams respect every cap is a feasibility witness; a dual
/// value exceeding the total power budget certifies infeasibility by weak
/// duality since a feasible schedule needs at most sum(p_max).

#pragma once

#include <optional>
#include <string>

#include "gridbeam/duality_solver.hpp"
#include "gridbeam/model.hpp"

namespace gridbeam {

enum class FeasibilityVerdict {
  Feasible,
  Infeasible,
  NotConverged,
  /// ZF only: the dimension rule n_mt <= n_bs * n_ant fails or the
  /// channel stack is rank deficient, so no ZF beams exist at all.
  StructurallyInfeasible,
};

const char* to_string(FeasibilityVerdict verdict);

struct FeasibilityReport {
  FeasibilityVerdict verdict = FeasibilityVerdict::NotConverged;

  /// SINR-tight beams respecting every cap; present iff Feasible.
  std::optional<BeamformingSolution> witness;

  /// Best achieved min_i (p_max[i] - tx_power[i]) over the search, i.e.
  /// the witness's worst cap slack.  Negative when no iterate fit under
  /// the caps; -infinity when the targets are unreachable outright.
  double margin = 0.0;

  long iterations = 0;
  std::string detail;
};

/// Feasibility of the general (fully cooperative) beamforming problem.
FeasibilityReport check_feasible(const ProblemInstance& instance,
                                 const SolveOptions& options = {});

/// Feasibility within the zero-forcing family: the witness additionally
/// nulls all cross-terminal interference.
FeasibilityReport check_zf_feasible(const ProblemInstance& instance,
                                    const SolveOptions& options = {});

}  // namespace gridbeam
