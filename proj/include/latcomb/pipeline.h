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
// Loose coupling of an NMT lattice N and a Hiero lattice H:
//
//   H' = PruneToNodeBudget(H)
//   N' = Replace(N, UNK, U)
//   C  = (N' o E) o H'
//   t_comb = UnkProjection(ShortestPath(C))
//
// The best path of C minimizes
//   d_edit(t_N, t_H) + lambda_nmt * S_N(t_N) + lambda_hiero * S_H(t_H)
// over all pairs of hypotheses. Reading the scores as negative log
// probabilities, exp(-total_cost) factors into exp(-d_edit) times
// P_N^lambda_nmt times P_H^lambda_hiero, so the same pair maximizes
// similarity times joint probability.

#ifndef LATCOMB_PIPELINE_H_
#define LATCOMB_PIPELINE_H_

#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "latcomb/algorithms.h"
#include "latcomb/edit_model.h"
#include "latcomb/semiring.h"
#include "latcomb/wfst.h"

namespace latcomb {

struct CombinationParams {
  double lambda_nmt = 1.0;
  double lambda_hiero = 1.0;
  double lambda_sub = 1.0;
  double lambda_edit = 2.0;
  double lambda_ins = 1.0;
  int max_unk_run = 3;
  size_t hiero_node_budget = 100000;
  // Soft limit on NMT lattice paths; exceeding it only warns.
  size_t nmt_path_warning = 20;
  std::set<Label> nmt_vocab;

  // Throws ContractError on any violated constraint.
  void Check() const;
  ParamVector ToParamVector() const;
  EditCostModel ToEditModel() const;
};

struct EditStats {
  int type1_fills = 0;     // UNK -> out-of-vocabulary word (free)
  int unk_extensions = 0;  // UNK arcs taken in U beyond the first
  int type2_subs = 0;      // UNK -> in-vocabulary word
  int type3_edits = 0;     // all other substitutions, insertions, deletions

  bool exact_match() const {
    return unk_extensions == 0 && type2_subs == 0 && type3_edits == 0;
  }
  friend bool operator==(const EditStats &, const EditStats &) = default;
};

struct CombinationResult {
  std::string source_id;
  std::vector<Label> t_comb;
  std::vector<Label> t_nmt;    // input side, may contain UNK
  std::vector<Label> t_hiero;  // output side
  double total_cost = 0.0;
  FeatureWeight feature_vector;
  EditStats stats;
  PathWitness path;
  std::vector<std::string> warnings;
};

// Runs the full combination. Throws ContractError for empty or malformed
// lattices and NoPathError if nothing aligns.
CombinationResult Combine(const Wfst &nmt, const Wfst &hiero,
                          const CombinationParams &params,
                          const std::string &source_id = "");

// Classifies each step of a path through C. Throws ContractError if a step
// does not fit the model or the counts disagree with the path's features.
EditStats DecomposeAlignment(const PathWitness &path,
                             const EditCostModel &model);

// Number of complete paths, saturating at `cap`.
size_t CountPaths(const Wfst &fst, size_t cap);

struct CorpusReport {
  size_t sentences = 0;
  double avg_unk_extensions = 0.0;
  double avg_type2_subs = 0.0;
  double avg_type3_edits = 0.0;
  double pct_unk_extensions = 0.0;
  double pct_type2_subs = 0.0;
  double pct_type3_edits = 0.0;
  double pct_exact_match = 0.0;
  // Sentences whose t_hiero equals the Hiero 1-best.
  double pct_hiero_unchanged = 0.0;
  // n -> percentage of sentences whose t_hiero is in the unique n-best list
  // of H under the Hiero score alone.
  std::map<size_t, double> nbest_membership;
};

// `hiero` must be parallel to `results`; it may be empty when `n_values`
// is empty, in which case pct_hiero_unchanged is not computed.
CorpusReport BuildCorpusReport(const std::vector<CombinationResult> &results,
                               const std::vector<Wfst> &hiero,
                               const std::vector<size_t> &n_values);

// Line-oriented "key=value" form.
void WriteReportKeyValue(const CorpusReport &report, std::ostream &os);
// Tab-separated table with one header line and one row per edit class.
void WriteReportTable(const CorpusReport &report, std::ostream &os);

}  // namespace latcomb

#endif  // LATCOMB_PIPELINE_H_
