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

FeatureWeight PathWitness::ComputeTotal() const {
  FeatureWeight w = FeatureWeight::One();
  for (const PathStep &step : steps) w = Times(w, step.weight);
  return Times(w, final_weight);
}

Wfst PathWitness::ToFst() const {
  Wfst fst;
  StateId s = fst.AddState();
  fst.SetInitial(s);
  for (const PathStep &step : steps) {
    StateId t = fst.AddState();
    fst.AddArc(s, Arc(step.ilabel, step.olabel, step.weight, t));
    s = t;
  }
  fst.SetFinal(s, final_weight);
  return fst;
}

Wfst Connect(const Wfst &fst) {
  const auto n = static_cast<StateId>(fst.num_states());
  if (!fst.has_state(fst.initial())) return Wfst();

  std::vector<bool> acc(n, false);
  std::vector<StateId> stack{fst.initial()};
  acc[fst.initial()] = true;
  std::vector<std::vector<StateId>> reverse(n);
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const Arc &arc : fst.arcs(s)) {
      reverse[arc.nextstate].push_back(s);
      if (!acc[arc.nextstate]) {
        acc[arc.nextstate] = true;
        stack.push_back(arc.nextstate);
      }
    }
  }
  std::vector<bool> coacc(n, false);
  for (StateId s = 0; s < n; ++s) {
    if (acc[s] && fst.is_final(s)) {
      coacc[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : reverse[s]) {
      if (!coacc[p]) {
        coacc[p] = true;
        stack.push_back(p);
      }
    }
  }

  Wfst out;
  out.SetInputSymbols(fst.input_symbols());
  out.SetOutputSymbols(fst.output_symbols());
  if (!coacc[fst.initial()]) {
    // Empty language: keep a lone non-final initial state.
    out.SetInitial(out.AddState());
    return out;
  }
  std::vector<StateId> remap(n, kNoState);
  for (StateId s = 0; s < n; ++s) {
    if (acc[s] && coacc[s]) remap[s] = out.AddState();
  }
  for (StateId s = 0; s < n; ++s) {
    if (remap[s] == kNoState) continue;
    for (const Arc &arc : fst.arcs(s)) {
      if (remap[arc.nextstate] == kNoState) continue;
      out.AddArc(remap[s], Arc(arc.ilabel, arc.olabel, arc.weight,
                               remap[arc.nextstate]));
    }
    if (fst.is_final(s)) out.SetFinal(remap[s], fst.final_weight(s));
  }
  out.SetInitial(remap[fst.initial()]);
  return out;
}

Wfst ScaleWeights(const Wfst &fst, FeatureId id, double factor) {
  if (id < 0 || id >= kNumFeatures) {
    throw ContractError("unknown feature id " + std::to_string(id));
  }
  Wfst out = fst;
  for (StateId s = 0; s < static_cast<StateId>(out.num_states()); ++s) {
    for (Arc &arc : out.mutable_arcs(s)) {
      arc.weight = ScaleFeature(arc.weight, id, factor);
    }
    if (out.is_final(s)) {
      out.SetFinal(s, ScaleFeature(out.final_weight(s), id, factor));
    }
  }
  return out;
}

std::vector<Label> InputLabels(const PathWitness &path) {
  std::vector<Label> out;
  for (const PathStep &step : path.steps) {
    if (step.ilabel != kEpsilon) out.push_back(step.ilabel);
  }
  return out;
}

std::vector<Label> OutputLabels(const PathWitness &path) {
  std::vector<Label> out;
  for (const PathStep &step : path.steps) {
    if (step.olabel != kEpsilon) out.push_back(step.olabel);
  }
  return out;
}

std::vector<Label> UnkProjection(const PathWitness &path) {
  std::vector<Label> out;
  for (const PathStep &step : path.steps) {
    const Label l = step.ilabel == kUnk ? step.olabel : step.ilabel;
    if (l != kEpsilon) out.push_back(l);
  }
  return out;
}

}  // namespace latcomb
