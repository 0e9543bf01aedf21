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
// Brute-force reference implementations. Nothing here calls the semiring
// operations or the FST algorithms: paths are enumerated by plain DFS and
// edit distances come from table-filling DPs, so a bug in the composition
// stack cannot hide behind a shared helper.

#ifndef LATCOMB_ORACLE_H_
#define LATCOMB_ORACLE_H_

#include <cstddef>
#include <map>
#include <vector>

#include "latcomb/edit_model.h"
#include "latcomb/pipeline.h"
#include "latcomb/semiring.h"
#include "latcomb/wfst.h"

namespace latcomb::oracle {

inline constexpr size_t kDefaultMaxPaths = 10000;

struct ScoredHypothesis {
  std::vector<Label> input;   // epsilons removed
  std::vector<Label> output;  // epsilons removed
  std::map<FeatureId, double> features;
  double score = 0.0;  // inner product of features with the parameters

  const std::vector<Label> &tokens() const { return output; }
};

// Every complete path of an acyclic machine, in DFS order. Throws
// ContractError on a cycle or when more than `limit` paths exist.
std::vector<ScoredHypothesis> EnumeratePaths(const Wfst &fst,
                                             const ParamVector &params,
                                             size_t limit = kDefaultMaxPaths);

// Classic unit-cost Levenshtein distance.
int Levenshtein(const std::vector<Label> &x, const std::vector<Label> &y);

// One aligned pair; kEpsilon marks an insertion or deletion.
struct AlignedPair {
  Label input;
  Label output;

  friend bool operator==(const AlignedPair &, const AlignedPair &) = default;
};

struct EditAlignment {
  double cost = 0.0;
  int edit_count = 0;
  int sub_count = 0;
  int unk_ext_count = 0;
  std::vector<AlignedPair> pairs;

  FeatureWeight features() const;
  // Input side with UNK runs expanded.
  std::vector<Label> ExpandedInput() const;
  // Input side with each UNK replaced by its aligned output word.
  std::vector<Label> Combined() const;
};

// Modified edit distance of `x` (may contain UNK) against `y` (may not).
// Each UNK of `x` may first be expanded into a run of 1..max_unk_run UNKs,
// each extra copy costing lambda_ins. Every copy is then matched as in the
// modified edit transducer: UNK -> out-of-vocabulary word is free,
// UNK -> vocabulary word costs lambda_sub, and any other substitution,
// insertion or deletion (including deleting a UNK) costs lambda_edit.
// Ties in cost go to fewer edits, then fewer substitutions, then fewer
// extensions. Throws ContractError if `y` contains UNK.
EditAlignment DpEditAlignment(const std::vector<Label> &x,
                              const std::vector<Label> &y,
                              const EditCostModel &model, int max_unk_run);
FeatureWeight DpEditDistance(const std::vector<Label> &x,
                             const std::vector<Label> &y,
                             const EditCostModel &model, int max_unk_run);

struct OracleResult {
  std::vector<Label> t_nmt;       // the NMT path as written in N
  std::vector<Label> t_nmt_expanded;
  std::vector<Label> t_hiero;
  std::vector<Label> t_comb;
  double cost = 0.0;
  std::map<FeatureId, double> features;
  EditAlignment alignment;
  // Every (t_nmt, t_hiero) pair whose feature vector equals the winner's.
  std::vector<std::pair<std::vector<Label>, std::vector<Label>>> ties;
};

// Exhaustive minimization over all pairs of paths of `nmt` and `hiero`.
// Pairs are ordered by scalarized cost, then by the dense feature vector
// compared lexicographically in ascending id order.
OracleResult BruteForceCombine(const Wfst &nmt, const Wfst &hiero,
                               const CombinationParams &params,
                               size_t max_paths = kDefaultMaxPaths);

// True if `expanded` is `original` with each UNK repeated 1..max_unk_run
// times.
bool IsUnkExpansion(const std::vector<Label> &expanded,
                    const std::vector<Label> &original, int max_unk_run);

}  // namespace latcomb::oracle

#endif  // LATCOMB_ORACLE_H_
