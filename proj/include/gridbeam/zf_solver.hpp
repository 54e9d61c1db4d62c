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

/// \file zf_solver.hpp
/// Zero-forcing variant of the joint solver.
///
/// Each terminal's beam is confined to the orthogonal complement of every
/// other terminal's channel, so interference vanishes, SINR turns into
/// SNR, and the weighted inner problem has a closed form: one Hermitian
/// solve per terminal instead of a power iteration.  Suboptimal versus
/// the general solver, cheaper per dual step, and only available when
/// n_mt <= n_bs * n_ant with linearly independent channels.

#pragma once

#include <vector>

#include "gridbeam/duality_solver.hpp"
#include "gridbeam/model.hpp"

#include <Eigen/Dense>

namespace gridbeam {

/// Orthonormal basis of the subspace orthogonal to all other terminals'
/// channels; columns span { w : h_l^H w = 0 for all l != k }.
struct NullSpaceBasis {
  Eigen::MatrixXcd basis;  ///< stacked_dim x (stacked_dim - n_mt + 1)
};

/// Basis for terminal k, via SVD of the other terminals' channel stack.
/// Throws std::runtime_error when that stack has too many rows or is
/// rank deficient (singular value ratio below rank_tol), and for n_mt == 1
/// returns the identity basis.
NullSpaceBasis null_space_basis(const ChannelSet& channels, int k,
                                double rank_tol = 1e-10);

/// Bases for every terminal.
std::vector<NullSpaceBasis> all_null_space_bases(const ChannelSet& channels,
                                                 double rank_tol = 1e-10);

/// Minimizer of the weighted power form among ZF beams meeting every
/// SNR target with equality; one Hermitian solve per terminal.
BeamformingSolution zf_closed_form(const ChannelSet& channels,
                                   const QosTargets& qos,
                                   const WeightedNoise& noise,
                                   const std::vector<NullSpaceBasis>& bases);

/// Dual function data of the ZF-restricted problem at (mu, nu).
struct ZfDualEvaluation {
  double value = 0.0;
  Eigen::VectorXd subgradient_mu;
  Eigen::VectorXd subgradient_nu;
  BeamformingSolution beams;
  Eigen::VectorXd tx_power;
};

ZfDualEvaluation zf_dual_oracle(const ProblemInstance& instance,
                                const std::vector<NullSpaceBasis>& bases,
                                const Eigen::VectorXd& mu,
                                const Eigen::VectorXd& nu);

/// Full joint solve restricted to ZF beams.  Structural failure (dimension
/// rule or rank-deficient channels) and cap infeasibility both come back
/// as status Infeasible with an explanatory detail line.
SolveOutcome solve_zf(const ProblemInstance& instance,
                      const SolveOptions& options = {});

}  // namespace gridbeam
