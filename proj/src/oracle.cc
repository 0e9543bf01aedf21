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

#include "latcomb/oracle.h"

#include <algorithm>
#include <tuple>

#include "latcomb/errors.h"

namespace latcomb::oracle {
namespace {

double Dot(const std::map<FeatureId, double> &features,
           const ParamVector &params) {
  double total = 0.0;
  for (const auto &[id, value] : features) total += params[id] * value;
  return total;
}

// -1, 0, 1 comparing dense vectors in ascending id order.
int CompareDense(const std::map<FeatureId, double> &a,
                 const std::map<FeatureId, double> &b) {
  std::vector<FeatureId> ids;
  for (const auto &e : a) ids.push_back(e.first);
  for (const auto &e : b) ids.push_back(e.first);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (FeatureId id : ids) {
    auto ia = a.find(id);
    auto ib = b.find(id);
    const double va = ia == a.end() ? 0.0 : ia->second;
    const double vb = ib == b.end() ? 0.0 : ib->second;
    if (va < vb) return -1;
    if (vb < va) return 1;
  }
  return 0;
}

class PathEnumerator {
 public:
  PathEnumerator(const Wfst &fst, const ParamVector &params, size_t limit)
      : fst_(fst), params_(params), limit_(limit) {}

  std::vector<ScoredHypothesis> Run() {
    if (!fst_.has_state(fst_.initial())) return {};
    on_path_.assign(fst_.num_states(), false);
    Visit(fst_.initial());
    return std::move(out_);
  }

 private:
  void Visit(StateId s) {
    if (on_path_[s]) {
      throw ContractError("enumerate paths: cycle through state " +
                          std::to_string(s));
    }
    on_path_[s] = true;
    if (fst_.is_final(s)) Emit(fst_.final_weight(s));
    for (const Arc &arc : fst_.arcs(s)) {
      if (arc.weight.is_zero()) continue;
      steps_.push_back(&arc);
      Visit(arc.nextstate);
      steps_.pop_back();
    }
    on_path_[s] = false;
  }

  void Emit(const FeatureWeight &final_weight) {
    if (out_.size() == limit_) {
      throw ContractError("enumerate paths: more than " +
                          std::to_string(limit_) + " paths");
    }
    ScoredHypothesis h;
    auto add = [&h](const FeatureWeight &w) {
      for (const auto &[id, value] : w.entries()) h.features[id] += value;
    };
    for (const Arc *arc : steps_) {
      if (arc->ilabel != kEpsilon) h.input.push_back(arc->ilabel);
      if (arc->olabel != kEpsilon) h.output.push_back(arc->olabel);
      add(arc->weight);
    }
    add(final_weight);
    h.score = Dot(h.features, params_);
    out_.push_back(std::move(h));
  }

  const Wfst &fst_;
  const ParamVector &params_;
  size_t limit_;
  std::vector<bool> on_path_;
  std::vector<const Arc *> steps_;
  std::vector<ScoredHypothesis> out_;
};

struct Cost {
  double scalar = 0.0;
  int edit = 0;
  int sub = 0;
  int ext = 0;

  bool operator<(const Cost &o) const {
    return std::tie(scalar, edit, sub, ext) <
           std::tie(o.scalar, o.edit, o.sub, o.ext);
  }
};

struct Cell {
  Cost cost;
  int prev_row = -1;
  int prev_j = -1;
  Label in = kEpsilon;
  Label out = kEpsilon;
  bool select = false;  // row-merge pointer, contributes no pair
};

}  // namespace

std::vector<ScoredHypothesis> EnumeratePaths(const Wfst &fst,
                                             const ParamVector &params,
                                             size_t limit) {
  return PathEnumerator(fst, params, limit).Run();
}

int Levenshtein(const std::vector<Label> &x, const std::vector<Label> &y) {
  std::vector<int> prev(y.size() + 1), cur(y.size() + 1);
  for (size_t j = 0; j <= y.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= x.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= y.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

FeatureWeight EditAlignment::features() const {
  return FeatureWeight({{kEditCount, static_cast<double>(edit_count)},
                        {kSubCount, static_cast<double>(sub_count)},
                        {kUnkExtCount, static_cast<double>(unk_ext_count)}});
}

std::vector<Label> EditAlignment::ExpandedInput() const {
  std::vector<Label> out;
  for (const auto &p : pairs) {
    if (p.input != kEpsilon) out.push_back(p.input);
  }
  return out;
}

std::vector<Label> EditAlignment::Combined() const {
  std::vector<Label> out;
  for (const auto &p : pairs) {
    const Label l = p.input == kUnk ? p.output : p.input;
    if (l != kEpsilon) out.push_back(l);
  }
  return out;
}

EditAlignment DpEditAlignment(const std::vector<Label> &x,
                              const std::vector<Label> &y,
                              const EditCostModel &model, int max_unk_run) {
  if (std::find(y.begin(), y.end(), kUnk) != y.end()) {
    throw ContractError("edit DP: the Hiero side may not contain UNK");
  }
  if (max_unk_run < 1) throw ContractError("edit DP: max_unk_run < 1");
  const double l_edit = model.lambda_edit();
  const double l_sub = model.lambda_sub();
  const double l_ins = model.lambda_ins();
  const size_t m = y.size();

  auto plus_edit = [&](Cost c) {
    c.scalar += l_edit;
    ++c.edit;
    return c;
  };
  std::vector<std::vector<Cell>> rows;

  // Row 0: insertions only.
  rows.emplace_back(m + 1);
  for (size_t j = 1; j <= m; ++j) {
    rows[0][j] = {plus_edit(rows[0][j - 1].cost), 0, static_cast<int>(j - 1),
                  kEpsilon, y[j - 1]};
  }

  // Builds the row after consuming one input token from row `from`.
  // `extension` prices the extra UNK copy on cross-row moves.
  auto step_row = [&](int from, Label token, bool extension) {
    std::vector<Cell> row(m + 1);
    const std::vector<Cell> &prev = rows[from];
    auto cross = [&](Cost c) {
      if (extension) {
        c.scalar += l_ins;
        ++c.ext;
      }
      return c;
    };
    for (size_t j = 0; j <= m; ++j) {
      Cell best{plus_edit(cross(prev[j].cost)), from, static_cast<int>(j),
                token, kEpsilon};
      if (j > 0) {
        const Label w = y[j - 1];
        Cost c = cross(prev[j - 1].cost);
        if (token == kUnk) {
          if (model.InVocab(w)) {
            c.scalar += l_sub;
            ++c.sub;
          }
        } else if (token != w) {
          c = plus_edit(c);
        }
        if (c < best.cost) {
          best = {c, from, static_cast<int>(j - 1), token, w};
        }
        Cost ins = plus_edit(row[j - 1].cost);
        if (ins < best.cost) {
          best = {ins, static_cast<int>(rows.size()), static_cast<int>(j - 1),
                  kEpsilon, w};
        }
      }
      row[j] = best;
    }
    rows.push_back(std::move(row));
    return static_cast<int>(rows.size() - 1);
  };

  int current = 0;
  for (Label token : x) {
    if (token != kUnk) {
      current = step_row(current, token, false);
      continue;
    }
    std::vector<int> copies;
    int from = current;
    for (int c = 1; c <= max_unk_run; ++c) {
      from = step_row(from, kUnk, c > 1);
      copies.push_back(from);
    }
    std::vector<Cell> merged(m + 1);
    for (size_t j = 0; j <= m; ++j) {
      Cell best;
      bool have = false;
      for (int r : copies) {
        if (!have || rows[r][j].cost < best.cost) {
          best = {rows[r][j].cost, r, static_cast<int>(j), kEpsilon, kEpsilon,
                  true};
          have = true;
        }
      }
      merged[j] = best;
    }
    rows.push_back(std::move(merged));
    current = static_cast<int>(rows.size() - 1);
  }

  EditAlignment result;
  const Cell &last = rows[current][m];
  result.cost = last.cost.scalar;
  result.edit_count = last.cost.edit;
  result.sub_count = last.cost.sub;
  result.unk_ext_count = last.cost.ext;
  int r = current;
  int j = static_cast<int>(m);
  while (!(r == 0 && j == 0)) {
    const Cell &cell = rows[r][j];
    if (!cell.select) result.pairs.push_back({cell.in, cell.out});
    r = cell.prev_row;
    j = cell.prev_j;
  }
  std::reverse(result.pairs.begin(), result.pairs.end());
  return result;
}

FeatureWeight DpEditDistance(const std::vector<Label> &x,
                             const std::vector<Label> &y,
                             const EditCostModel &model, int max_unk_run) {
  return DpEditAlignment(x, y, model, max_unk_run).features();
}

OracleResult BruteForceCombine(const Wfst &nmt, const Wfst &hiero,
                               const CombinationParams &params,
                               size_t max_paths) {
  params.Check();
  const EditCostModel model = params.ToEditModel();
  const ParamVector p = params.ToParamVector();
  const auto nmt_paths = EnumeratePaths(nmt, p, max_paths);
  const auto hiero_paths = EnumeratePaths(hiero, p, max_paths);
  if (nmt_paths.empty() || hiero_paths.empty()) {
    throw NoPathError("oracle: a lattice has no complete path");
  }

  OracleResult best;
  bool have = false;
  for (const auto &n : nmt_paths) {
    for (const auto &h : hiero_paths) {
      EditAlignment a = DpEditAlignment(n.output, h.output, model,
                                        params.max_unk_run);
      std::map<FeatureId, double> features = n.features;
      for (const auto &[id, value] : h.features) features[id] += value;
      if (a.edit_count) features[kEditCount] += a.edit_count;
      if (a.sub_count) features[kSubCount] += a.sub_count;
      if (a.unk_ext_count) features[kUnkExtCount] += a.unk_ext_count;
      std::erase_if(features, [](const auto &e) { return e.second == 0.0; });
      const double cost = Dot(features, p);

      int order = 0;
      if (have) {
        if (cost < best.cost) {
          order = -1;
        } else if (best.cost < cost) {
          order = 1;
        } else {
          order = CompareDense(features, best.features);
        }
      }
      if (!have || order < 0) {
        best.t_nmt = n.output;
        best.t_nmt_expanded = a.ExpandedInput();
        best.t_hiero = h.output;
        best.t_comb = a.Combined();
        best.cost = cost;
        best.features = std::move(features);
        best.alignment = std::move(a);
        best.ties = {{n.output, h.output}};
        have = true;
      } else if (order == 0) {
        best.ties.emplace_back(n.output, h.output);
      }
    }
  }
  return best;
}

bool IsUnkExpansion(const std::vector<Label> &expanded,
                    const std::vector<Label> &original, int max_unk_run) {
  // reachable[j]: the first i original tokens can produce expanded[0, j).
  std::vector<bool> reachable(expanded.size() + 1, false);
  reachable[0] = true;
  for (Label token : original) {
    std::vector<bool> next(expanded.size() + 1, false);
    for (size_t j = 0; j < expanded.size(); ++j) {
      if (!reachable[j]) continue;
      if (token != kUnk) {
        if (expanded[j] == token) next[j + 1] = true;
        continue;
      }
      for (int run = 1; run <= max_unk_run && j + run <= expanded.size();
           ++run) {
        if (expanded[j + run - 1] != kUnk) break;
        next[j + run] = true;
      }
    }
    reachable = std::move(next);
  }
  return reachable[expanded.size()];
}

}  // namespace latcomb::oracle
