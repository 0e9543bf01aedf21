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

#include "latcomb/edit_model.h"

#include <cmath>

#include "latcomb/errors.h"

namespace latcomb {

EditCostModel::EditCostModel(std::set<Label> nmt_vocab, double lambda_sub,
                             double lambda_edit, double lambda_ins)
    : nmt_vocab_(std::move(nmt_vocab)),
      lambda_sub_(lambda_sub),
      lambda_edit_(lambda_edit),
      lambda_ins_(lambda_ins) {
  if (!std::isfinite(lambda_sub) || !std::isfinite(lambda_edit) ||
      !std::isfinite(lambda_ins)) {
    throw ContractError("edit costs must be finite");
  }
  if (lambda_sub < 0.0) throw ContractError("lambda_sub must be >= 0");
  if (!(lambda_edit > lambda_sub)) {
    throw ContractError("lambda_edit must be greater than lambda_sub");
  }
  if (lambda_ins < 0.0) throw ContractError("lambda_ins must be >= 0");
  if (nmt_vocab_.count(kUnk)) {
    throw ContractError("UNK cannot be an NMT vocabulary word");
  }
  if (nmt_vocab_.count(kEpsilon)) {
    throw ContractError("epsilon cannot be an NMT vocabulary word");
  }
}

ParamVector EditCostModel::ToParams() const {
  return ParamVector::Named(0.0, 0.0, lambda_edit_, lambda_sub_, lambda_ins_);
}

Wfst BuildStandardEditFst(const std::set<Label> &alphabet) {
  if (alphabet.empty()) throw ContractError("edit flower: empty alphabet");
  if (alphabet.count(kEpsilon)) {
    throw ContractError("edit flower: alphabet contains epsilon");
  }
  const FeatureWeight edit = FeatureWeight::Unit(kEditCount);
  Wfst fst;
  const StateId s = fst.AddState();
  fst.SetInitial(s);
  fst.SetFinal(s);
  for (Label a : alphabet) {
    for (Label b : alphabet) {
      fst.AddArc(s, Arc(a, b, a == b ? FeatureWeight::One() : edit, s));
    }
    fst.AddArc(s, Arc(a, kEpsilon, edit, s));
    fst.AddArc(s, Arc(kEpsilon, a, edit, s));
  }
  return fst;
}

Wfst BuildModifiedEditFst(const EditCostModel &model,
                          const std::set<Label> &alphabet) {
  std::set<Label> words = alphabet;
  words.erase(kUnk);
  if (words.count(kEpsilon)) {
    throw ContractError("edit flower: alphabet contains epsilon");
  }

  const FeatureWeight edit = FeatureWeight::Unit(kEditCount);
  const FeatureWeight sub = FeatureWeight::Unit(kSubCount);
  Wfst fst;
  const StateId s = fst.AddState();
  fst.SetInitial(s);
  fst.SetFinal(s);
  for (Label w : words) {
    fst.AddArc(s, Arc(kUnk, w, model.InVocab(w) ? sub : FeatureWeight::One(),
                      s));
  }
  fst.AddArc(s, Arc(kUnk, kEpsilon, edit, s));
  for (Label a : words) {
    for (Label b : words) {
      fst.AddArc(s, Arc(a, b, a == b ? FeatureWeight::One() : edit, s));
    }
    fst.AddArc(s, Arc(a, kEpsilon, edit, s));
    fst.AddArc(s, Arc(kEpsilon, a, edit, s));
  }
  return fst;
}

Wfst BuildUnkInsertionFst(int max_run) {
  if (max_run < 1) {
    throw ContractError("UNK insertion: max_run must be at least 1");
  }
  Wfst fst;
  fst.AddStates(max_run + 1);
  fst.SetInitial(0);
  for (StateId s = 0; s < max_run; ++s) {
    fst.AddArc(s, Arc(kUnk, kUnk,
                      s == 0 ? FeatureWeight::One()
                             : FeatureWeight::Unit(kUnkExtCount),
                      s + 1));
    fst.SetFinal(s + 1);
  }
  return fst;
}

std::set<Label> CollectAlphabet(const Wfst &a, const Wfst &b) {
  std::set<Label> out;
  for (const Wfst *fst : {&a, &b}) {
    for (StateId s = 0; s < static_cast<StateId>(fst->num_states()); ++s) {
      for (const Arc &arc : fst->arcs(s)) {
        out.insert(arc.ilabel);
        out.insert(arc.olabel);
      }
    }
  }
  out.erase(kEpsilon);
  out.erase(kUnk);
  return out;
}

}  // namespace latcomb
