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

#include "latcomb/algorithms.h"
#include "latcomb/errors.h"

namespace latcomb {

Wfst Replace(const Wfst &root, Label label, const Wfst &sub) {
  if (label == kEpsilon) {
    throw ContractError("replace: cannot replace the epsilon label");
  }
  if (!root.has_state(root.initial())) {
    throw ContractError("replace: root machine has no initial state");
  }
  if (!sub.has_state(sub.initial())) {
    throw ContractError("replace: substituted machine has no initial state");
  }
  bool sub_has_final = false;
  for (StateId s = 0; s < static_cast<StateId>(sub.num_states()); ++s) {
    sub_has_final = sub_has_final || sub.is_final(s);
  }
  if (!sub_has_final) {
    throw ContractError("replace: substituted machine has no final state");
  }

  Wfst out;
  out.SetInputSymbols(root.input_symbols());
  out.SetOutputSymbols(root.output_symbols());
  const auto n = static_cast<StateId>(root.num_states());
  out.AddStates(n);
  out.SetInitial(root.initial());
  const auto m = static_cast<StateId>(sub.num_states());

  for (StateId s = 0; s < n; ++s) {
    if (root.is_final(s)) out.SetFinal(s, root.final_weight(s));
    for (const Arc &arc : root.arcs(s)) {
      if (arc.ilabel != label || arc.olabel != label) {
        out.AddArc(s, arc);
        continue;
      }
      const StateId base = out.AddStates(m);
      out.AddArc(s, Arc(kEpsilon, kEpsilon, arc.weight, base + sub.initial()));
      for (StateId q = 0; q < m; ++q) {
        for (const Arc &inner : sub.arcs(q)) {
          out.AddArc(base + q, Arc(inner.ilabel, inner.olabel, inner.weight,
                                   base + inner.nextstate));
        }
        if (sub.is_final(q)) {
          out.AddArc(base + q, Arc(kEpsilon, kEpsilon, sub.final_weight(q),
                                   arc.nextstate));
        }
      }
    }
  }
  return out;
}

}  // namespace latcomb
