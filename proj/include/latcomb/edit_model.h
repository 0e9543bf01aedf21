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
// Edit-distance transducers. Costs are recorded as feature counts
// (kEditCount, kSubCount, kUnkExtCount) and priced by the ParamVector at
// search time, so the lambdas below only matter through ToParams().
//
// Edit classes of the modified transducer:
//   match        a:a                       One()
//   Type I       UNK:w, w outside vocab    One()
//   Type II      UNK:w, w inside vocab     kSubCount = 1
//   Type III     everything else           kEditCount = 1
// The output tape never carries UNK and there is no epsilon:UNK arc.

#ifndef LATCOMB_EDIT_MODEL_H_
#define LATCOMB_EDIT_MODEL_H_

#include <set>

#include "latcomb/semiring.h"
#include "latcomb/wfst.h"

namespace latcomb {

class EditCostModel {
 public:
  // Throws ContractError unless lambda_edit > lambda_sub >= 0,
  // lambda_ins >= 0, all finite, and UNK/epsilon are not in `nmt_vocab`.
  EditCostModel(std::set<Label> nmt_vocab, double lambda_sub,
                double lambda_edit, double lambda_ins);

  bool InVocab(Label label) const { return nmt_vocab_.count(label) > 0; }
  const std::set<Label> &nmt_vocab() const { return nmt_vocab_; }
  double lambda_sub() const { return lambda_sub_; }
  double lambda_edit() const { return lambda_edit_; }
  double lambda_ins() const { return lambda_ins_; }

  // Edit-cost part of the parameter vector (model-score entries are 0).
  ParamVector ToParams() const;

 private:
  std::set<Label> nmt_vocab_;
  double lambda_sub_;
  double lambda_edit_;
  double lambda_ins_;
};

// Single-state flower over `alphabet` with a kEditCount = 1 arc for every
// substitution, deletion and insertion. Throws ContractError on an empty
// alphabet or one containing epsilon.
Wfst BuildStandardEditFst(const std::set<Label> &alphabet);

// The modified flower over `alphabet` plus UNK on the input tape. UNK in
// `alphabet` is ignored (it is always present on the input side only), so
// an empty alphabet still yields the UNK deletion arc.
Wfst BuildModifiedEditFst(const EditCostModel &model,
                          const std::set<Label> &alphabet);

// Chain accepting UNK^k for 1 <= k <= max_run. The first UNK arc is free,
// each further one carries kUnkExtCount = 1.
Wfst BuildUnkInsertionFst(int max_run = 3);

// Non-epsilon labels on either tape of the given machines, without UNK.
std::set<Label> CollectAlphabet(const Wfst &a, const Wfst &b);

}  // namespace latcomb

#endif  // LATCOMB_EDIT_MODEL_H_
