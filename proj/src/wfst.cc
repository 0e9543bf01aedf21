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

#include "latcomb/wfst.h"

#include <algorithm>
#include <tuple>

#include "latcomb/errors.h"

namespace latcomb {

StateId Wfst::AddState() {
  states_.emplace_back();
  return static_cast<StateId>(states_.size() - 1);
}

StateId Wfst::AddStates(size_t n) {
  const auto first = static_cast<StateId>(states_.size());
  states_.resize(states_.size() + n);
  return first;
}

void Wfst::AddArc(StateId source, Arc arc) {
  if (!has_state(source)) {
    throw StructuralError("arc from unknown state " + std::to_string(source));
  }
  if (!has_state(arc.nextstate)) {
    throw StructuralError("arc to unknown state " +
                          std::to_string(arc.nextstate));
  }
  states_[source].arcs.push_back(std::move(arc));
}

void Wfst::SetInitial(StateId s) {
  if (!has_state(s)) {
    throw StructuralError("initial state " + std::to_string(s) +
                          " does not exist");
  }
  initial_ = s;
}

void Wfst::SetFinal(StateId s, FeatureWeight weight) {
  if (!has_state(s)) {
    throw StructuralError("final state " + std::to_string(s) +
                          " does not exist");
  }
  states_[s].final = std::move(weight);
}

size_t Wfst::num_arcs() const {
  size_t n = 0;
  for (const auto &st : states_) n += st.arcs.size();
  return n;
}

std::vector<Arc> &Wfst::mutable_arcs(StateId s) {
  if (!has_state(s)) {
    throw StructuralError("unknown state " + std::to_string(s));
  }
  return states_[s].arcs;
}

const Wfst::State &Wfst::state(StateId s) const {
  if (!has_state(s)) {
    throw StructuralError("unknown state " + std::to_string(s));
  }
  return states_[s];
}

void Wfst::SortArcs(bool by_output) {
  for (auto &st : states_) {
    std::stable_sort(st.arcs.begin(), st.arcs.end(),
                     [by_output](const Arc &a, const Arc &b) {
                       if (by_output) {
                         return std::tie(a.olabel, a.ilabel, a.nextstate) <
                                std::tie(b.olabel, b.ilabel, b.nextstate);
                       }
                       return std::tie(a.ilabel, a.olabel, a.nextstate) <
                              std::tie(b.ilabel, b.olabel, b.nextstate);
                     });
  }
}

Wfst StringAcceptor(std::span<const Label> labels,
                    const FeatureWeight &final_weight) {
  Wfst fst;
  StateId s = fst.AddState();
  fst.SetInitial(s);
  for (Label l : labels) {
    StateId t = fst.AddState();
    fst.AddArc(s, Arc(l, l, FeatureWeight::One(), t));
    s = t;
  }
  fst.SetFinal(s, final_weight);
  return fst;
}

std::optional<std::vector<StateId>> TopologicalOrder(const Wfst &fst) {
  const auto n = static_cast<StateId>(fst.num_states());
  std::vector<int> indegree(n, 0);
  for (StateId s = 0; s < n; ++s) {
    for (const Arc &arc : fst.arcs(s)) {
      if (fst.has_state(arc.nextstate)) ++indegree[arc.nextstate];
    }
  }
  std::vector<StateId> order;
  order.reserve(n);
  for (StateId s = 0; s < n; ++s) {
    if (indegree[s] == 0) order.push_back(s);
  }
  for (size_t head = 0; head < order.size(); ++head) {
    for (const Arc &arc : fst.arcs(order[head])) {
      if (!fst.has_state(arc.nextstate)) continue;
      if (--indegree[arc.nextstate] == 0) order.push_back(arc.nextstate);
    }
  }
  if (order.size() != static_cast<size_t>(n)) return std::nullopt;
  return order;
}

bool IsAcyclic(const Wfst &fst) { return TopologicalOrder(fst).has_value(); }

std::vector<StateId> FindCycle(const Wfst &fst) {
  const auto n = static_cast<StateId>(fst.num_states());
  enum Color : uint8_t { kWhite, kGray, kBlack };
  std::vector<Color> color(n, kWhite);
  std::vector<StateId> parent(n, kNoState);
  // Explicit stack of (state, next arc index).
  std::vector<std::pair<StateId, size_t>> stack;
  for (StateId root = 0; root < n; ++root) {
    if (color[root] != kWhite) continue;
    stack.emplace_back(root, 0);
    color[root] = kGray;
    while (!stack.empty()) {
      auto &[s, next] = stack.back();
      auto arcs = fst.arcs(s);
      if (next == arcs.size()) {
        color[s] = kBlack;
        stack.pop_back();
        continue;
      }
      const StateId t = arcs[next++].nextstate;
      if (!fst.has_state(t)) continue;
      if (color[t] == kGray) {
        std::vector<StateId> cycle;
        for (StateId u = s; u != t; u = parent[u]) cycle.push_back(u);
        cycle.push_back(t);
        std::reverse(cycle.begin(), cycle.end());
        cycle.push_back(t);
        return cycle;
      }
      if (color[t] == kWhite) {
        color[t] = kGray;
        parent[t] = s;
        stack.emplace_back(t, 0);
      }
    }
  }
  return {};
}

namespace {

std::vector<bool> Accessible(const Wfst &fst) {
  std::vector<bool> seen(fst.num_states(), false);
  if (!fst.has_state(fst.initial())) return seen;
  std::vector<StateId> stack{fst.initial()};
  seen[fst.initial()] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const Arc &arc : fst.arcs(s)) {
      if (fst.has_state(arc.nextstate) && !seen[arc.nextstate]) {
        seen[arc.nextstate] = true;
        stack.push_back(arc.nextstate);
      }
    }
  }
  return seen;
}

std::vector<bool> Coaccessible(const Wfst &fst) {
  const auto n = static_cast<StateId>(fst.num_states());
  std::vector<std::vector<StateId>> reverse(n);
  for (StateId s = 0; s < n; ++s) {
    for (const Arc &arc : fst.arcs(s)) {
      if (fst.has_state(arc.nextstate)) reverse[arc.nextstate].push_back(s);
    }
  }
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack;
  for (StateId s = 0; s < n; ++s) {
    if (fst.is_final(s)) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : reverse[s]) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<Diagnostic> Validate(const Wfst &fst, LatticeKind kind) {
  using Sev = Diagnostic::Severity;
  using Code = Diagnostic::Code;
  std::vector<Diagnostic> out;
  const auto n = static_cast<StateId>(fst.num_states());
  const bool lattice = kind != LatticeKind::kGeneric;

  if (!fst.has_state(fst.initial())) {
    out.push_back({Sev::kError, Code::kNoInitialState, "no initial state"});
  }
  for (StateId s = 0; s < n; ++s) {
    auto arcs = fst.arcs(s);
    for (size_t i = 0; i < arcs.size(); ++i) {
      const Arc &arc = arcs[i];
      const int index = static_cast<int>(i);
      if (!fst.has_state(arc.nextstate)) {
        out.push_back({Sev::kError, Code::kDanglingArc,
                       "arc from state " + std::to_string(s) +
                           " to nonexistent state " +
                           std::to_string(arc.nextstate),
                       s, index});
      }
      if (lattice && arc.ilabel != arc.olabel) {
        out.push_back({Sev::kError, Code::kNotAcceptor,
                       "arc from state " + std::to_string(s) +
                           " has ilabel " + std::to_string(arc.ilabel) +
                           " != olabel " + std::to_string(arc.olabel),
                       s, index});
      }
      if (kind == LatticeKind::kHiero &&
          (arc.ilabel == kUnk || arc.olabel == kUnk)) {
        out.push_back({Sev::kError, Code::kUnkInHiero,
                       "hiero lattice contains UNK on arc from state " +
                           std::to_string(s),
                       s, index});
      }
      const auto &isyms = fst.input_symbols();
      const auto &osyms = fst.output_symbols();
      if (isyms && !isyms->HasLabel(arc.ilabel)) {
        out.push_back({Sev::kError, Code::kUnknownSymbol,
                       "unknown input label " + std::to_string(arc.ilabel),
                       s, index});
      }
      if (osyms && !osyms->HasLabel(arc.olabel)) {
        out.push_back({Sev::kError, Code::kUnknownSymbol,
                       "unknown output label " + std::to_string(arc.olabel),
                       s, index});
      }
    }
  }

  auto cycle = FindCycle(fst);
  if (!cycle.empty()) {
    std::string path;
    for (StateId s : cycle) {
      if (!path.empty()) path += " -> ";
      path += std::to_string(s);
    }
    int arc_index = -1;
    auto arcs = fst.arcs(cycle[0]);
    for (size_t i = 0; i < arcs.size(); ++i) {
      if (arcs[i].nextstate == cycle[1]) {
        arc_index = static_cast<int>(i);
        break;
      }
    }
    out.push_back({lattice ? Sev::kError : Sev::kWarning, Code::kCycle,
                   "cycle through states " + path, cycle[0], arc_index});
  }

  const auto acc = Accessible(fst);
  const auto coacc = Coaccessible(fst);
  for (StateId s = 0; s < n; ++s) {
    if (!acc[s]) {
      out.push_back({Sev::kWarning, Code::kUnreachableState,
                     "state " + std::to_string(s) + " is unreachable", s});
    } else if (!coacc[s]) {
      out.push_back({Sev::kWarning, Code::kDeadState,
                     "state " + std::to_string(s) +
                         " cannot reach a final state",
                     s});
    }
  }
  return out;
}

bool HasErrors(std::span<const Diagnostic> diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic &d) {
                       return d.severity == Diagnostic::Severity::kError;
                     });
}

const char *ToString(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::kGeneric:
      return "generic";
    case LatticeKind::kNmt:
      return "nmt";
    case LatticeKind::kHiero:
      return "hiero";
  }
  return "unknown";
}

}  // namespace latcomb
