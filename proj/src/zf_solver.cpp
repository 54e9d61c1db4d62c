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

#include "gridbeam/zf_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dual_search.hpp"
#include "gridbeam/feasibility.hpp"

namespace gridbeam {

namespace {

/// Relative singular-value cutoff below which a channel stack counts as
/// rank deficient.
constexpr double kDefaultRankTol = 1e-10;

/// True when the full channel stack cannot support zero forcing; fills
/// `why` with the violated rule.
bool zf_structural_defect(const ChannelSet& channels, std::string* why) {
  const int dim = static_cast<int>(channels.h.rows());
  const int k_mt = channels.n_mt();
  if (k_mt > dim) {
    std::ostringstream oss;
    oss << "n_mt (" << k_mt << ") exceeds the stacked antenna dimension ("
        << dim << ")";
    *why = oss.str();
    return true;
  }
  if (k_mt > 1) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(channels.h);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) / sv(0) < kDefaultRankTol) {
      *why = "the terminal channel stack is rank deficient";
      return true;
    }
  } else if (!(channels.h.col(0).norm() > 0.0)) {
    *why = "the terminal channel is zero";
    return true;
  }
  return false;
}

}  // namespace

NullSpaceBasis null_space_basis(const ChannelSet& channels, int k,
                                double rank_tol) {
  const int dim = static_cast<int>(channels.h.rows());
  const int k_mt = channels.n_mt();
  if (k < 0 || k >= k_mt) {
    throw std::invalid_argument("null_space_basis: terminal index out of range");
  }
  NullSpaceBasis out;
  if (k_mt == 1) {
    out.basis = Eigen::MatrixXcd::Identity(dim, dim);
    return out;
  }
  if (k_mt - 1 >= dim) {
    std::ostringstream oss;
    oss << "null_space_basis: " << k_mt - 1
        << " interfering channels leave no null space in dimension " << dim;
    throw std::runtime_error(oss.str());
  }

  // Rows are the other terminals' conjugated channels; the right singular
  // vectors beyond the rank span the interference-free subspace.
  Eigen::MatrixXcd stack(k_mt - 1, dim);
  int row = 0;
  for (int l = 0; l < k_mt; ++l) {
    if (l != k) stack.row(row++) = channels.h.col(l).adjoint();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stack, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(sv.size() - 1) / sv(0) < rank_tol) {
    throw std::runtime_error(
        "null_space_basis: interfering channel stack is rank deficient");
  }
  out.basis = svd.matrixV().rightCols(dim - (k_mt - 1));

  // A terminal whose own channel lies in the interferers' span keeps no
  // usable component: exact arithmetic would give a zero projection, and
  // rounding leaves only noise that downstream solves would blow up on.
  const double own = channels.h.col(k).norm();
  if ((out.basis.adjoint() * channels.h.col(k)).norm() < rank_tol * own) {
    std::ostringstream oss;
    oss << "null_space_basis: terminal " << k
        << "'s channel is orthogonal to its interference-free subspace";
    throw std::runtime_error(oss.str());
  }
  return out;
}

std::vector<NullSpaceBasis> all_null_space_bases(const ChannelSet& channels,
                                                 double rank_tol) {
  std::vector<NullSpaceBasis> bases;
  bases.reserve(channels.n_mt());
  for (int k = 0; k < channels.n_mt(); ++k) {
    bases.push_back(null_space_basis(channels, k, rank_tol));
  }
  return bases;
}

BeamformingSolution zf_closed_form(const ChannelSet& channels,
                                   const QosTargets& qos,
                                   const WeightedNoise& noise,
                                   const std::vector<NullSpaceBasis>& bases) {
  noise.validate();
  const int k_mt = channels.n_mt();
  if (static_cast<int>(bases.size()) != k_mt) {
    throw std::invalid_argument("zf_closed_form: one basis per terminal required");
  }
  const Eigen::VectorXd diag = noise.antenna_diagonal();
  BeamformingSolution beams;
  beams.w.resize(channels.h.rows(), k_mt);
  for (int k = 0; k < k_mt; ++k) {
    const Eigen::MatrixXcd& v = bases[k].basis;
    const Eigen::MatrixXcd weighted =
        diag.cast<Complex>().asDiagonal() * v;
    const Eigen::MatrixXcd quad = v.adjoint() * weighted;
    const Eigen::VectorXcd c = v.adjoint() * channels.h.col(k);
    const Eigen::LLT<Eigen::MatrixXcd> llt(quad);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error(
          "zf_closed_form: weighted form failed to factorize");
    }
    const Eigen::VectorXcd y = llt.solve(c);
    // q = c^H quad^{-1} c is real and positive unless the channel is
    // orthogonal to its own interference-free subspace.
    const double q = std::real(c.dot(y));
    if (!(q > 0.0)) {
      std::ostringstream oss;
      oss << "zf_closed_form: terminal " << k
          << "'s channel is orthogonal to its interference-free subspace";
      throw std::runtime_error(oss.str());
    }
    const double amplitude =
        std::sqrt(qos.sinr_min[k] * qos.noise_power[k]) / q;
    beams.w.col(k) = amplitude * (v * y);
  }
  return beams;
}

ZfDualEvaluation zf_dual_oracle(const ProblemInstance& instance,
                                const std::vector<NullSpaceBasis>& bases,
                                const Eigen::VectorXd& mu,
                                const Eigen::VectorXd& nu) {
  const ClusterConfig& cluster = instance.cluster;
  ZfDualEvaluation ev;
  const WeightedNoise noise = make_weighted_noise(cluster, mu, nu);
  ev.beams = zf_closed_form(instance.channels, instance.qos, noise, bases);
  ev.tx_power = per_bs_tx_power(cluster, ev.beams);
  ev.value = noise.bs_weight.dot(ev.tx_power) +
             mu.dot(cluster.p_circuit - instance.energy.harvest) -
             nu.dot(cluster.p_max);
  ev.subgradient_mu = ev.tx_power / cluster.pa_efficiency + cluster.p_circuit -
                      instance.energy.harvest;
  ev.subgradient_nu = ev.tx_power - cluster.p_max;
  return ev;
}

SolveOutcome solve_zf(const ProblemInstance& instance,
                      const SolveOptions& options) {
  instance.validate();
  std::string why;
  if (zf_structural_defect(instance.channels, &why)) {
    SolveOutcome out;
    out.status = SolveStatus::Infeasible;
    out.detail = "zero forcing unavailable: " + why;
    return out;
  }
  if (options.feasibility_precheck) {
    const FeasibilityReport feas = check_zf_feasible(instance, options);
    if (feas.verdict != FeasibilityVerdict::Feasible) {
      SolveOutcome out;
      out.status = feas.verdict == FeasibilityVerdict::NotConverged
                       ? SolveStatus::NotConverged
                       : SolveStatus::Infeasible;
      out.detail = "ZF feasibility pre-pass: " + feas.detail;
      return out;
    }
  }

  const std::vector<NullSpaceBasis> bases =
      all_null_space_bases(instance.channels);
  const detail::InnerSolver inner =
      [&](const Eigen::VectorXd& mu,
          const Eigen::VectorXd& nu) -> detail::InnerEval {
    const ZfDualEvaluation ev = zf_dual_oracle(instance, bases, mu, nu);
    return {ev.value, ev.subgradient_mu, ev.subgradient_nu, ev.beams,
            ev.tx_power};
  };
  return detail::run_dual_search(instance, options, inner);
}

}  // namespace gridbeam
