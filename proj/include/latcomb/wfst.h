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
// Mutable weighted transducer over FeatureWeight. States are dense ids
// 0..n-1; each state owns its outgoing arcs. Algorithms take const
// references and return new machines.

#ifndef LATCOMB_WFST_H_
#define LATCOMB_WFST_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latcomb/semiring.h"
#include "latcomb/symbol_table.h"

namespace latcomb {

using StateId = int32_t;
inline constexpr StateId kNoState = -1;

struct Arc {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  FeatureWeight weight;
  StateId nextstate = kNoState;

  Arc() = default;
  Arc(Label ilabel, Label olabel, FeatureWeight weight, StateId nextstate)
      : ilabel(ilabel),
        olabel(olabel),
        weight(std::move(weight)),
        nextstate(nextstate) {}

  friend bool operator==(const Arc &, const Arc &) = default;
};

class Wfst {
 public:
  Wfst() = default;

  StateId AddState();
  // Adds `n` states and returns the id of the first.
  StateId AddStates(size_t n);
  // Throws StructuralError if `source` or `arc.nextstate` is unknown.
  void AddArc(StateId source, Arc arc);
  void SetInitial(StateId s);
  void SetFinal(StateId s, FeatureWeight weight = FeatureWeight::One());

  StateId initial() const { return initial_; }
  size_t num_states() const { return states_.size(); }
  size_t num_arcs() const;
  size_t num_arcs(StateId s) const { return state(s).arcs.size(); }
  bool is_final(StateId s) const { return !state(s).final.is_zero(); }
  const FeatureWeight &final_weight(StateId s) const {
    return state(s).final;
  }
  std::span<const Arc> arcs(StateId s) const { return state(s).arcs; }
  // Unchecked access for in-place rewrites; callers keep targets valid.
  std::vector<Arc> &mutable_arcs(StateId s);
  bool has_state(StateId s) const {
    return s >= 0 && static_cast<size_t>(s) < states_.size();
  }

  const std::shared_ptr<const SymbolTable> &input_symbols() const {
    return isymbols_;
  }
  const std::shared_ptr<const SymbolTable> &output_symbols() const {
    return osymbols_;
  }
  void SetInputSymbols(std::shared_ptr<const SymbolTable> syms) {
    isymbols_ = std::move(syms);
  }
  void SetOutputSymbols(std::shared_ptr<const SymbolTable> syms) {
    osymbols_ = std::move(syms);
  }

  // Sorts each state's arcs by (ilabel, olabel, nextstate), or by olabel
  // first when `by_output` is set. Stable for equal keys.
  void SortArcs(bool by_output = false);

 private:
  struct State {
    std::vector<Arc> arcs;
    FeatureWeight final = FeatureWeight::Zero();
  };
  const State &state(StateId s) const;

  std::vector<State> states_;
  StateId initial_ = kNoState;
  std::shared_ptr<const SymbolTable> isymbols_;
  std::shared_ptr<const SymbolTable> osymbols_;
};

// Linear acceptor for `labels` with all weights One().
Wfst StringAcceptor(std::span<const Label> labels,
                    const FeatureWeight &final_weight = FeatureWeight::One());

// Topological order of all states, or nullopt if the machine has a cycle.
std::optional<std::vector<StateId>> TopologicalOrder(const Wfst &fst);
bool IsAcyclic(const Wfst &fst);
// States of some directed cycle in order (first state repeated at the end),
// or empty if acyclic.
std::vector<StateId> FindCycle(const Wfst &fst);

enum class LatticeKind { kGeneric, kNmt, kHiero };

struct Diagnostic {
  enum class Severity { kWarning, kError };
  enum class Code {
    kNoInitialState,
    kDanglingArc,
    kUnreachableState,
    kDeadState,
    kCycle,
    kNotAcceptor,
    kUnkInHiero,
    kUnknownSymbol,
  };

  Severity severity;
  Code code;
  std::string message;
  StateId state = kNoState;
  // Index into arcs(state), or -1 when the diagnostic is about the state.
  int arc_index = -1;
};

// Structural checks. Cycles are errors for translation lattices and
// warnings for generic machines. Unreachable and dead states are warnings.
std::vector<Diagnostic> Validate(const Wfst &fst,
                                 LatticeKind kind = LatticeKind::kGeneric);
bool HasErrors(std::span<const Diagnostic> diagnostics);

const char *ToString(LatticeKind kind);

}  // namespace latcomb

#endif  // LATCOMB_WFST_H_
