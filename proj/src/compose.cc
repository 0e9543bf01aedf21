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
// Composition with the epsilon-matching filter. An epsilon on the output
// of the first machine and an epsilon on the input of the second can be
// consumed separately or together; the filter admits exactly one
// interleaving per logical path:
//
//   filter 0: any move
//   filter 1: only second-machine epsilon moves or a real match
//   filter 2: only first-machine epsilon moves or a real match
//
// A simultaneous epsilon move is only allowed from filter state 0.

#include <cstdint>
#include <deque>
#include <unordered_map>

#include "latcomb/algorithms.h"
#include "latcomb/errors.h"

namespace latcomb {
namespace {

struct Triple {
  StateId s1;
  StateId s2;
  uint8_t filter;

  friend bool operator==(const Triple &, const Triple &) = default;
};

struct TripleHash {
  size_t operator()(const Triple &t) const {
    uint64_t h = static_cast<uint32_t>(t.s1);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<uint32_t>(t.s2);
    h = h * 0x9E3779B97F4A7C15ULL ^ t.filter;
    return static_cast<size_t>(h ^ (h >> 29));
  }
};

class Composer {
 public:
  Composer(const Wfst &first, const Wfst &second)
      : first_(first), second_(second) {
    first_.SortArcs(/*by_output=*/true);
    second_.SortArcs(/*by_output=*/false);
  }

  Wfst Run() {
    out_.SetInputSymbols(first_.input_symbols());
    out_.SetOutputSymbols(second_.output_symbols());
    out_.SetInitial(StateFor({first_.initial(), second_.initial(), 0}));
    while (!queue_.empty()) {
      const Triple t = queue_.front();
      queue_.pop_front();
      Expand(t);
    }
    return Connect(out_);
  }

 private:
  StateId StateFor(const Triple &t) {
    auto [it, inserted] = ids_.try_emplace(t, kNoState);
    if (inserted) {
      it->second = out_.AddState();
      queue_.push_back(t);
    }
    return it->second;
  }

  void Expand(const Triple &t) {
    const StateId source = ids_.at(t);
    auto arcs1 = first_.arcs(t.s1);
    auto arcs2 = second_.arcs(t.s2);

    size_t i = 0;
    for (; i < arcs1.size() && arcs1[i].olabel == kEpsilon; ++i) {
      const Arc &a1 = arcs1[i];
      if (t.filter != 1) {
        Add(source, {a1.nextstate, t.s2, 2},
            Arc(a1.ilabel, kEpsilon, a1.weight, kNoState));
      }
      if (t.filter == 0) {
        for (size_t j = 0; j < arcs2.size() && arcs2[j].ilabel == kEpsilon;
             ++j) {
          const Arc &a2 = arcs2[j];
          Add(source, {a1.nextstate, a2.nextstate, 0},
              Arc(a1.ilabel, a2.olabel, Times(a1.weight, a2.weight),
                  kNoState));
        }
      }
    }

    size_t j = 0;
    for (; j < arcs2.size() && arcs2[j].ilabel == kEpsilon; ++j) {
      if (t.filter != 2) {
        const Arc &a2 = arcs2[j];
        Add(source, {t.s1, a2.nextstate, 1},
            Arc(kEpsilon, a2.olabel, a2.weight, kNoState));
      }
    }

    // Merge-join on the shared label.
    while (i < arcs1.size() && j < arcs2.size()) {
      const Label l1 = arcs1[i].olabel;
      const Label l2 = arcs2[j].ilabel;
      if (l1 < l2) {
        ++i;
      } else if (l2 < l1) {
        ++j;
      } else {
        size_t j_end = j;
        while (j_end < arcs2.size() && arcs2[j_end].ilabel == l1) ++j_end;
        for (; i < arcs1.size() && arcs1[i].olabel == l1; ++i) {
          const Arc &a1 = arcs1[i];
          for (size_t k = j; k < j_end; ++k) {
            const Arc &a2 = arcs2[k];
            Add(source, {a1.nextstate, a2.nextstate, 0},
                Arc(a1.ilabel, a2.olabel, Times(a1.weight, a2.weight),
                    kNoState));
          }
        }
        j = j_end;
      }
    }

    if (first_.is_final(t.s1) && second_.is_final(t.s2)) {
      out_.SetFinal(source, Times(first_.final_weight(t.s1),
                                  second_.final_weight(t.s2)));
    }
  }

  void Add(StateId source, const Triple &dest, Arc arc) {
    arc.nextstate = StateFor(dest);
    out_.AddArc(source, std::move(arc));
  }

  Wfst first_;
  Wfst second_;
  Wfst out_;
  std::unordered_map<Triple, StateId, TripleHash> ids_;
  std::deque<Triple> queue_;
};

}  // namespace

Wfst Compose(const Wfst &first, const Wfst &second) {
  const auto &mid_out = first.output_symbols();
  const auto &mid_in = second.input_symbols();
  if (mid_out && mid_in && mid_out != mid_in && !(*mid_out == *mid_in)) {
    throw ContractError(
        "compose: output symbols of the first machine differ from input "
        "symbols of the second");
  }
  if (!first.has_state(first.initial()) ||
      !second.has_state(second.initial())) {
    throw ContractError("compose: operand has no initial state");
  }
  return Composer(first, second).Run();
}

}  // namespace latcomb
