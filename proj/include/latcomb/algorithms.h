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
//
// Generic algorithms over Wfst. All functions are pure: inputs are const
// and the result is a fresh machine or value.

#ifndef LATCOMB_ALGORITHMS_H_
#define LATCOMB_ALGORITHMS_H_

#include <cstddef>
#include <vector>

#include "latcomb/semiring.h"
#include "latcomb/wfst.h"

namespace latcomb {

// One arc of a complete path.
struct PathStep {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  FeatureWeight weight;

  friend bool operator==(const PathStep &, const PathStep &) = default;
};

// A complete initial-to-final path. `total` is the Times-product of all
// step weights and `final_weight`.
struct PathWitness {
  std::vector<PathStep> steps;
  FeatureWeight final_weight;
  FeatureWeight total;

  // Recomputes `total` from the steps.
  FeatureWeight ComputeTotal() const;
  // Linear machine spelling this path.
  Wfst ToFst() const;
};

// Removes states that are not both accessible and coaccessible. State ids
// are renumbered in increasing order of the surviving originals.
Wfst Connect(const Wfst &fst);

// Weighted composition with the three-state epsilon-matching filter.
// Throws ContractError when both machines carry symbol tables and the
// output table of `first` differs from the input table of `second`.
Wfst Compose(const Wfst &first, const Wfst &second);

// Splices a copy of `sub` in place of every arc whose input and output
// labels are both `label`. The copy is entered by an epsilon arc carrying
// the replaced arc's weight and left by epsilon arcs carrying `sub`'s final
// weights.
Wfst Replace(const Wfst &root, Label label, const Wfst &sub);

// Single best path under `params`. Acyclic machines are relaxed in
// topological order; cyclic machines require every arc and final weight
// to scalarize nonnegatively and use Dijkstra. Throws ContractError on a
// violated precondition and NoPathError if no complete path exists.
PathWitness ShortestPath(const Wfst &fst, const ParamVector &params);

// Best distance from the initial state to each state (forward) or from each
// state to a final state (backward), as full feature weights.
std::vector<FeatureWeight> ShortestDistance(const Wfst &fst,
                                            const ParamVector &params,
                                            bool backward = false);

// The `n` cheapest paths in increasing order. With `unique`, paths whose
// output strings repeat an earlier one are skipped.
std::vector<PathWitness> NShortestPaths(const Wfst &fst, size_t n,
                                        const ParamVector &params,
                                        bool unique = false);

// Threshold pruning of an acyclic machine down to at most `budget` states.
// The shortest path always survives. Throws ContractError if the machine is
// cyclic or `budget` is smaller than the number of states on the shortest
// path.
Wfst PruneToNodeBudget(const Wfst &fst, size_t budget,
                       const ParamVector &params);

// Multiplies feature `id` on every arc and final weight by `factor`.
// Throws ContractError if `id` is not a reserved feature.
Wfst ScaleWeights(const Wfst &fst, FeatureId id, double factor);

// Label sequences of a path with epsilons dropped. The input side of a
// path through the combined machine is the NMT hypothesis, the output side
// the Hiero hypothesis.
std::vector<Label> InputLabels(const PathWitness &path);
std::vector<Label> OutputLabels(const PathWitness &path);
// Per step: the output label where the input label is UNK, the input label
// otherwise; epsilons dropped.
std::vector<Label> UnkProjection(const PathWitness &path);

}  // namespace latcomb

#endif  // LATCOMB_ALGORITHMS_H_
