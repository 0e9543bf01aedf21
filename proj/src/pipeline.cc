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

#include "latcomb/pipeline.h"

#include <cmath>

#include "latcomb/errors.h"

namespace latcomb {

void CombinationParams::Check() const {
  const double lambdas[] = {lambda_nmt, lambda_hiero, lambda_sub, lambda_edit,
                            lambda_ins};
  for (double l : lambdas) {
    if (!std::isfinite(l)) throw ContractError("lambdas must be finite");
  }
  if (lambda_nmt < 0.0) throw ContractError("lambda_nmt must be >= 0");
  if (lambda_hiero < 0.0) throw ContractError("lambda_hiero must be >= 0");
  if (lambda_ins < 0.0) throw ContractError("lambda_ins must be >= 0");
  if (lambda_sub < 0.0) throw ContractError("lambda_sub must be >= 0");
  if (!(lambda_edit > lambda_sub)) {
    throw ContractError("lambda_edit must be greater than lambda_sub");
  }
  if (max_unk_run < 1) throw ContractError("max_unk_run must be >= 1");
  if (hiero_node_budget < 1) {
    throw ContractError("hiero_node_budget must be >= 1");
  }
}

ParamVector CombinationParams::ToParamVector() const {
  return ParamVector::Named(lambda_nmt, lambda_hiero, lambda_edit, lambda_sub,
                            lambda_ins);
}

EditCostModel CombinationParams::ToEditModel() const {
  return EditCostModel(nmt_vocab, lambda_sub, lambda_edit, lambda_ins);
}

size_t CountPaths(const Wfst &fst, size_t cap) {
  auto order = TopologicalOrder(fst);
  if (!order) return cap;
  if (!fst.has_state(fst.initial())) return 0;
  std::vector<size_t> count(fst.num_states(), 0);
  count[fst.initial()] = 1;
  size_t total = 0;
  for (StateId s : *order) {
    if (count[s] == 0) continue;
    if (fst.is_final(s)) total = std::min(cap, total + count[s]);
    for (const Arc &arc : fst.arcs(s)) {
      count[arc.nextstate] = std::min(cap, count[arc.nextstate] + count[s]);
    }
  }
  return total;
}

namespace {

bool OnlyFeature(const FeatureWeight &w, FeatureId id) {
  if (w.is_zero()) return true;
  for (const auto &entry : w.entries()) {
    if (entry.first != id) return false;
  }
  return true;
}

void RequireLattice(const Wfst &fst, LatticeKind kind) {
  const char *name = kind == LatticeKind::kNmt ? "NMT" : "Hiero";
  const FeatureId score = kind == LatticeKind::kNmt ? kNmtScore : kHieroScore;
  for (const Diagnostic &d : Validate(fst, kind)) {
    if (d.severity == Diagnostic::Severity::kError) {
      throw ContractError(std::string(name) + " lattice: " + d.message);
    }
  }
  for (StateId s = 0; s < static_cast<StateId>(fst.num_states()); ++s) {
    bool ok = OnlyFeature(fst.final_weight(s), score);
    for (const Arc &arc : fst.arcs(s)) ok = ok && OnlyFeature(arc.weight, score);
    if (!ok) {
      throw ContractError(std::string(name) + " lattice: state " +
                          std::to_string(s) + " carries features other than " +
                          std::to_string(score));
    }
  }
  if (CountPaths(fst, 1) == 0) {
    throw ContractError(std::string(name) + " lattice is empty");
  }
}

}  // namespace

CombinationResult Combine(const Wfst &nmt, const Wfst &hiero,
                          const CombinationParams &params,
                          const std::string &source_id) {
  params.Check();
  RequireLattice(nmt, LatticeKind::kNmt);
  RequireLattice(hiero, LatticeKind::kHiero);
  const EditCostModel model = params.ToEditModel();

  CombinationResult result;
  result.source_id = source_id;
  const size_t nmt_paths = CountPaths(nmt, params.nmt_path_warning + 1);
  if (nmt_paths > params.nmt_path_warning) {
    result.warnings.push_back("NMT lattice has more than " +
                              std::to_string(params.nmt_path_warning) +
                              " paths");
  }

  Wfst pruned_hiero = Connect(hiero);
  if (pruned_hiero.num_states() > params.hiero_node_budget) {
    pruned_hiero =
        PruneToNodeBudget(pruned_hiero, params.hiero_node_budget,
                          ParamVector::Only(kHieroScore));
  }

  const Wfst extended =
      Replace(nmt, kUnk, BuildUnkInsertionFst(params.max_unk_run));
  const Wfst edit =
      BuildModifiedEditFst(model, CollectAlphabet(nmt, pruned_hiero));
  const Wfst combined = Compose(Compose(extended, edit), pruned_hiero);

  const ParamVector p = params.ToParamVector();
  result.path = ShortestPath(combined, p);
  result.t_comb = UnkProjection(result.path);
  result.t_nmt = InputLabels(result.path);
  result.t_hiero = OutputLabels(result.path);
  result.feature_vector = result.path.total;
  result.total_cost = Scalarize(result.feature_vector, p).value();
  result.stats = DecomposeAlignment(result.path, model);
  return result;
}

EditStats DecomposeAlignment(const PathWitness &path,
                             const EditCostModel &model) {
  EditStats stats;
  double extensions = 0.0;
  for (const PathStep &step : path.steps) {
    const Label in = step.ilabel;
    const Label out = step.olabel;
    if (out == kUnk) {
      throw ContractError("alignment emits UNK on the Hiero side");
    }
    extensions += step.weight.get(kUnkExtCount);
    if (in == kEpsilon && out == kEpsilon) continue;
    if (in == kUnk) {
      if (out == kEpsilon) {
        ++stats.type3_edits;
      } else if (model.InVocab(out)) {
        ++stats.type2_subs;
      } else {
        ++stats.type1_fills;
      }
    } else if (in != out) {
      ++stats.type3_edits;
    }
  }
  stats.unk_extensions = static_cast<int>(std::lround(extensions));

  const FeatureWeight &total = path.total;
  auto agrees = [](double feature, int count) {
    return std::fabs(feature - count) < 1e-9;
  };
  if (std::fabs(extensions - stats.unk_extensions) > 1e-9 ||
      !agrees(total.get(kUnkExtCount), stats.unk_extensions) ||
      !agrees(total.get(kSubCount), stats.type2_subs) ||
      !agrees(total.get(kEditCount), stats.type3_edits)) {
    throw ContractError(
        "alignment classification disagrees with the path features " +
        ToString(total));
  }
  return stats;
}

}  // namespace latcomb
