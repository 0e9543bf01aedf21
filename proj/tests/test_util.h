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
// Seeded generators shared by the unit and acceptance tests. Random reals
// are drawn on a dyadic grid (multiples of 1/8) so that sums of a few dozen
// of them are exact in binary floating point and ties are real ties.

#ifndef LATCOMB_TESTS_TEST_UTIL_H_
#define LATCOMB_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "latcomb/pipeline.h"
#include "latcomb/semiring.h"
#include "latcomb/wfst.h"

namespace latcomb::testing {

using Rng = std::mt19937_64;

inline int UniformInt(Rng &rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool Coin(Rng &rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

// Multiple of 1/denom in [lo, hi].
inline double Dyadic(Rng &rng, double lo, double hi, int denom = 8) {
  const int a = static_cast<int>(lo * denom);
  const int b = static_cast<int>(hi * denom);
  return static_cast<double>(UniformInt(rng, a, b)) / denom;
}

inline FeatureWeight RandomWeight(Rng &rng, double lo = -4.0,
                                  double hi = 4.0) {
  std::vector<FeatureWeight::Entry> entries;
  for (FeatureId id = 0; id < kNumFeatures; ++id) {
    if (Coin(rng, 0.6)) entries.emplace_back(id, Dyadic(rng, lo, hi));
  }
  return FeatureWeight(std::move(entries));
}

inline std::vector<Label> RandomString(Rng &rng, int max_len, Label lo,
                                       Label hi, int min_len = 0) {
  std::vector<Label> s(UniformInt(rng, min_len, max_len));
  for (auto &l : s) l = UniformInt(rng, lo, hi);
  return s;
}

struct LatticeShape {
  int min_states = 2;
  int max_states = 8;
  double extra_arc_prob = 0.3;
  double extra_final_prob = 0.15;
  // Labels are drawn from [label_lo, label_hi]; UNK (1) is used with
  // probability unk_prob when allowed.
  Label label_lo = 2;
  Label label_hi = 6;
  double unk_prob = 0.0;
  FeatureId score = kNmtScore;
  double score_lo = 0.0;
  double score_hi = 3.0;
  size_t max_paths = 20;
};

// Random acyclic acceptor whose arcs go from lower to higher state ids.
// Every state lies on a complete path and the path count is at most
// shape.max_paths.
inline Wfst RandomLattice(Rng &rng, const LatticeShape &shape) {
  auto label = [&] {
    if (shape.unk_prob > 0.0 && Coin(rng, shape.unk_prob)) return kUnk;
    return static_cast<Label>(
        UniformInt(rng, shape.label_lo, shape.label_hi));
  };
  auto weight = [&] {
    const double v = Dyadic(rng, shape.score_lo, shape.score_hi);
    return FeatureWeight::Unit(shape.score, v);
  };
  for (;;) {
    const int n = UniformInt(rng, shape.min_states, shape.max_states);
    Wfst fst;
    fst.AddStates(n);
    fst.SetInitial(0);
    for (int s = 0; s + 1 < n; ++s) {
      const Label l = label();
      fst.AddArc(s, Arc(l, l, weight(), s + 1));
      for (int t = s + 1; t < n; ++t) {
        if (Coin(rng, shape.extra_arc_prob / (t - s))) {
          const Label m = label();
          fst.AddArc(s, Arc(m, m, weight(), t));
        }
      }
    }
    fst.SetFinal(n - 1, FeatureWeight::One());
    for (int s = 1; s + 1 < n; ++s) {
      if (Coin(rng, shape.extra_final_prob)) fst.SetFinal(s, weight());
    }
    if (CountPaths(fst, shape.max_paths + 1) <= shape.max_paths) return fst;
  }
}

// Random parameters on the dyadic grid with lambda_edit > lambda_sub.
inline CombinationParams RandomParams(Rng &rng) {
  CombinationParams p;
  p.lambda_nmt = Dyadic(rng, 0.0, 2.0, 4);
  p.lambda_hiero = Dyadic(rng, 0.0, 2.0, 4);
  p.lambda_sub = Dyadic(rng, 0.0, 3.0, 4);
  p.lambda_edit = p.lambda_sub + Dyadic(rng, 0.25, 3.0, 4);
  p.lambda_ins = Dyadic(rng, 0.0, 2.0, 4);
  return p;
}

// Random subset of [lo, hi].
inline std::set<Label> RandomVocab(Rng &rng, Label lo, Label hi,
                                   double p = 0.5) {
  std::set<Label> vocab;
  for (Label l = lo; l <= hi; ++l) {
    if (Coin(rng, p)) vocab.insert(l);
  }
  return vocab;
}

// Old state ids in the order the text format first mentions them, which is
// the numbering the reader assigns.
inline std::vector<StateId> FirstMention(const std::string &text) {
  std::vector<StateId> order;
  std::set<StateId> seen;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string t; fields >> t;) f.push_back(t);
    if (f.empty() || f[0][0] == '#') continue;
    const size_t states = f.size() >= 4 ? 2 : 1;
    for (size_t i = 0; i < states; ++i) {
      const StateId s = std::stoi(f[i]);
      if (seen.insert(s).second) order.push_back(s);
    }
  }
  return order;
}

// True if b is a with state order[k] renamed to k. Arcs are compared as
// multisets per state.
inline bool SameUpToRenumbering(const Wfst &a, const Wfst &b,
                                const std::vector<StateId> &order) {
  if (a.num_states() != b.num_states() || order.size() != a.num_states()) {
    return false;
  }
  std::map<StateId, StateId> rename;
  for (size_t k = 0; k < order.size(); ++k) {
    rename[order[k]] = static_cast<StateId>(k);
  }
  if (rename.at(a.initial()) != b.initial()) return false;
  using Key = std::tuple<Label, Label, StateId, std::string>;
  for (const StateId s : order) {
    const StateId t = rename.at(s);
    if (!(a.final_weight(s) == b.final_weight(t))) return false;
    std::vector<Key> x, y;
    for (const Arc &arc : a.arcs(s)) {
      x.emplace_back(arc.ilabel, arc.olabel, rename.at(arc.nextstate),
                     ToString(arc.weight));
    }
    for (const Arc &arc : b.arcs(t)) {
      y.emplace_back(arc.ilabel, arc.olabel, arc.nextstate,
                     ToString(arc.weight));
    }
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return false;
  }
  return true;
}

}  // namespace latcomb::testing

#endif  // LATCOMB_TESTS_TEST_UTIL_H_
