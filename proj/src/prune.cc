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

#include <algorithm>
#include <cmath>
#include <limits>

#include "latcomb/algorithms.h"
#include "latcomb/errors.h"

namespace latcomb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Keeps arcs whose best complete path costs at most `limit`.
Wfst PruneAbove(const Wfst &fst, const std::vector<double> &alpha,
                const std::vector<double> &beta, const ParamVector &params,
                double limit) {
  Wfst out;
  out.SetInputSymbols(fst.input_symbols());
  out.SetOutputSymbols(fst.output_symbols());
  out.AddStates(fst.num_states());
  out.SetInitial(fst.initial());
  for (StateId s = 0; s < static_cast<StateId>(fst.num_states()); ++s) {
    if (alpha[s] + beta[s] > limit) continue;
    for (const Arc &arc : fst.arcs(s)) {
      const double through = alpha[s] +
                             Scalarize(arc.weight, params).value() +
                             beta[arc.nextstate];
      if (through <= limit) out.AddArc(s, arc);
    }
    if (fst.is_final(s) &&
        alpha[s] + Scalarize(fst.final_weight(s), params).value() <= limit) {
      out.SetFinal(s, fst.final_weight(s));
    }
  }
  return Connect(out);
}

}  // namespace

Wfst PruneToNodeBudget(const Wfst &fst, size_t budget,
                       const ParamVector &params) {
  auto order = TopologicalOrder(fst);
  if (!order) throw ContractError("prune: machine must be acyclic");
  if (!params.all_finite()) {
    throw ContractError("prune: parameters must be finite");
  }
  if (!fst.has_state(fst.initial())) {
    throw ContractError("prune: machine has no initial state");
  }

  const PathWitness best_path = ShortestPath(fst, params);
  const size_t path_states = best_path.steps.size() + 1;
  if (budget < path_states) {
    throw ContractError("prune: budget " + std::to_string(budget) +
                        " is below the " + std::to_string(path_states) +
                        " states of the shortest path");
  }
  if (fst.num_states() <= budget) return fst;

  const auto n = static_cast<StateId>(fst.num_states());
  std::vector<double> alpha(n, kInf), beta(n, kInf);
  alpha[fst.initial()] = 0.0;
  for (StateId s : *order) {
    if (alpha[s] == kInf) continue;
    for (const Arc &arc : fst.arcs(s)) {
      alpha[arc.nextstate] =
          std::min(alpha[arc.nextstate],
                   alpha[s] + Scalarize(arc.weight, params).value());
    }
  }
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    const StateId s = *it;
    if (fst.is_final(s)) {
      beta[s] = std::min(beta[s], Scalarize(fst.final_weight(s), params).value());
    }
    for (const Arc &arc : fst.arcs(s)) {
      beta[s] = std::min(beta[s], Scalarize(arc.weight, params).value() +
                                      beta[arc.nextstate]);
    }
  }
  const double best = beta[fst.initial()];
  const double tolerance = 1e-9 * std::max(1.0, std::fabs(best));

  // Candidate thresholds: the best complete-path cost through each arc.
  std::vector<double> thresholds{0.0};
  for (StateId s = 0; s < n; ++s) {
    if (alpha[s] == kInf) continue;
    for (const Arc &arc : fst.arcs(s)) {
      const double through = alpha[s] +
                             Scalarize(arc.weight, params).value() +
                             beta[arc.nextstate];
      if (through < kInf) thresholds.push_back(std::max(0.0, through - best));
    }
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  // Largest threshold whose pruned machine fits; kept states grow
  // monotonically with the threshold.
  size_t lo = 0, hi = thresholds.size();
  Wfst fitted;
  bool have_fit = false;
  while (lo < hi) {
    const size_t mid = lo + (hi - lo) / 2;
    Wfst pruned =
        PruneAbove(fst, alpha, beta, params, best + thresholds[mid] + tolerance);
    if (pruned.num_states() <= budget) {
      fitted = std::move(pruned);
      have_fit = true;
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (have_fit) return fitted;

  // Even the tied optimal paths exceed the budget: keep only the best one.
  Wfst single = best_path.ToFst();
  single.SetInputSymbols(fst.input_symbols());
  single.SetOutputSymbols(fst.output_symbols());
  return single;
}

}  // namespace latcomb
