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

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

#include "latcomb/algorithms.h"
#include "latcomb/errors.h"

namespace latcomb {
namespace {

struct Predecessor {
  StateId state = kNoState;
  int arc = -1;
};

// Throws unless the machine is acyclic or every weight is nonnegative
// under `params`. Returns the topological order when acyclic.
std::optional<std::vector<StateId>> CheckSearchable(const Wfst &fst,
                                                    const ParamVector &params,
                                                    const char *op) {
  if (!params.all_finite()) {
    throw ContractError(std::string(op) + ": parameters must be finite");
  }
  auto order = TopologicalOrder(fst);
  if (order) return order;
  for (StateId s = 0; s < static_cast<StateId>(fst.num_states()); ++s) {
    for (const Arc &arc : fst.arcs(s)) {
      if (Scalarize(arc.weight, params).value() < 0.0) {
        throw ContractError(std::string(op) +
                            ": cyclic machine has a negative-cost arc from "
                            "state " +
                            std::to_string(s));
      }
    }
    if (fst.is_final(s) && Scalarize(fst.final_weight(s), params).value() < 0) {
      throw ContractError(std::string(op) +
                          ": cyclic machine has a negative final weight at "
                          "state " +
                          std::to_string(s));
    }
  }
  return std::nullopt;
}

// Single-source best distances with predecessor arcs. `graph` maps each
// state to (weight, target, arc index) triples; for the backward direction
// it is the reversed machine.
struct Edge {
  const FeatureWeight *weight;
  StateId target;
  int arc;
};

void Relax(const std::vector<std::vector<Edge>> &graph,
           const std::optional<std::vector<StateId>> &order,
           const std::vector<std::pair<StateId, FeatureWeight>> &sources,
           const ParamVector &params, std::vector<FeatureWeight> *dist,
           std::vector<Predecessor> *pred) {
  const size_t n = graph.size();
  dist->assign(n, FeatureWeight::Zero());
  if (pred) pred->assign(n, Predecessor{});
  for (const auto &[s, w] : sources) {
    (*dist)[s] = Plus((*dist)[s], w, params);
  }
  // On exact ties the lowest (state, arc) predecessor wins regardless of
  // the visiting order, so deleting arcs that are on no chosen path (as
  // pruning does) cannot change the chosen path.
  auto relax_from = [&](StateId s) {
    const FeatureWeight &ds = (*dist)[s];
    if (ds.is_zero()) return false;
    for (const Edge &e : graph[s]) {
      FeatureWeight cand = Times(ds, *e.weight);
      FeatureWeight &dt = (*dist)[e.target];
      if (NaturalLess(cand, dt, params)) {
        dt = std::move(cand);
        if (pred) (*pred)[e.target] = {s, e.arc};
      } else if (pred && !NaturalLess(dt, cand, params)) {
        Predecessor &p = (*pred)[e.target];
        if (std::tie(s, e.arc) < std::tie(p.state, p.arc)) p = {s, e.arc};
      }
    }
    return true;
  };

  if (order) {
    for (StateId s : *order) relax_from(s);
    return;
  }

  // Dijkstra. Entries are compared by the semiring order, then by state.
  auto cmp = [&](StateId a, StateId b) {
    if (NaturalLess((*dist)[a], (*dist)[b], params)) return true;
    if (NaturalLess((*dist)[b], (*dist)[a], params)) return false;
    return a < b;
  };
  std::set<StateId, decltype(cmp)> frontier(cmp);
  std::vector<bool> done(n, false);
  for (const auto &[s, w] : sources) frontier.insert(s);
  while (!frontier.empty()) {
    const StateId s = *frontier.begin();
    frontier.erase(frontier.begin());
    done[s] = true;
    const FeatureWeight &ds = (*dist)[s];
    for (const Edge &e : graph[s]) {
      if (done[e.target]) continue;
      FeatureWeight cand = Times(ds, *e.weight);
      if (NaturalLess(cand, (*dist)[e.target], params)) {
        frontier.erase(e.target);
        (*dist)[e.target] = std::move(cand);
        if (pred) (*pred)[e.target] = {s, e.arc};
        frontier.insert(e.target);
      }
    }
  }
}

std::vector<std::vector<Edge>> ForwardGraph(const Wfst &fst) {
  std::vector<std::vector<Edge>> g(fst.num_states());
  for (StateId s = 0; s < static_cast<StateId>(fst.num_states()); ++s) {
    auto arcs = fst.arcs(s);
    g[s].reserve(arcs.size());
    for (size_t i = 0; i < arcs.size(); ++i) {
      g[s].push_back({&arcs[i].weight, arcs[i].nextstate, static_cast<int>(i)});
    }
  }
  return g;
}

std::vector<std::vector<Edge>> BackwardGraph(const Wfst &fst) {
  std::vector<std::vector<Edge>> g(fst.num_states());
  for (StateId s = 0; s < static_cast<StateId>(fst.num_states()); ++s) {
    auto arcs = fst.arcs(s);
    for (size_t i = 0; i < arcs.size(); ++i) {
      g[arcs[i].nextstate].push_back(
          {&arcs[i].weight, s, static_cast<int>(i)});
    }
  }
  return g;
}

}  // namespace

std::vector<FeatureWeight> ShortestDistance(const Wfst &fst,
                                            const ParamVector &params,
                                            bool backward) {
  auto order = CheckSearchable(fst, params, "shortest distance");
  std::vector<FeatureWeight> dist;
  if (!fst.has_state(fst.initial())) {
    dist.assign(fst.num_states(), FeatureWeight::Zero());
    return dist;
  }
  if (!backward) {
    Relax(ForwardGraph(fst), order, {{fst.initial(), FeatureWeight::One()}},
          params, &dist, nullptr);
    return dist;
  }
  std::vector<std::pair<StateId, FeatureWeight>> sources;
  for (StateId s = 0; s < static_cast<StateId>(fst.num_states()); ++s) {
    if (fst.is_final(s)) sources.emplace_back(s, fst.final_weight(s));
  }
  if (order) std::reverse(order->begin(), order->end());
  Relax(BackwardGraph(fst), order, sources, params, &dist, nullptr);
  return dist;
}

PathWitness ShortestPath(const Wfst &fst, const ParamVector &params) {
  auto order = CheckSearchable(fst, params, "shortest path");
  if (!fst.has_state(fst.initial())) {
    throw NoPathError("shortest path: machine has no initial state");
  }
  std::vector<FeatureWeight> dist;
  std::vector<Predecessor> pred;
  Relax(ForwardGraph(fst), order, {{fst.initial(), FeatureWeight::One()}},
        params, &dist, &pred);

  StateId best_final = kNoState;
  FeatureWeight best = FeatureWeight::Zero();
  for (StateId s = 0; s < static_cast<StateId>(fst.num_states()); ++s) {
    if (!fst.is_final(s) || dist[s].is_zero()) continue;
    FeatureWeight total = Times(dist[s], fst.final_weight(s));
    if (NaturalLess(total, best, params)) {
      best = std::move(total);
      best_final = s;
    }
  }
  if (best_final == kNoState) {
    throw NoPathError("shortest path: no path from the initial state to a "
                      "final state");
  }

  PathWitness path;
  path.final_weight = fst.final_weight(best_final);
  path.total = best;
  for (StateId s = best_final; pred[s].arc >= 0; s = pred[s].state) {
    const Arc &arc = fst.arcs(pred[s].state)[pred[s].arc];
    path.steps.push_back({arc.ilabel, arc.olabel, arc.weight});
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

std::vector<PathWitness> NShortestPaths(const Wfst &fst, size_t n,
                                        const ParamVector &params,
                                        bool unique) {
  std::vector<PathWitness> out;
  if (n == 0) return out;
  const auto to_final = ShortestDistance(fst, params, /*backward=*/true);
  if (!fst.has_state(fst.initial()) || to_final[fst.initial()].is_zero()) {
    throw NoPathError("n-best: no path from the initial state to a final "
                      "state");
  }

  // Best-first search over partial paths; the exact distance to a final
  // state is the heuristic, so complete paths pop in cost order.
  struct Node {
    StateId state;
    int parent;  // index into `nodes`, -1 at the root
    int arc;     // arc taken from the parent's state; -1 at the root
    bool complete;
    FeatureWeight cost;  // accumulated weight from the initial state
  };
  std::vector<Node> nodes;
  struct Entry {
    FeatureWeight priority;
    size_t seq;
    int node;
  };
  auto cmp = [&params](const Entry &a, const Entry &b) {
    if (NaturalLess(b.priority, a.priority, params)) return true;
    if (NaturalLess(a.priority, b.priority, params)) return false;
    return a.seq > b.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  size_t seq = 0;

  nodes.push_back({fst.initial(), -1, -1, false, FeatureWeight::One()});
  heap.push({to_final[fst.initial()], seq++, 0});
  std::set<std::vector<Label>> seen;

  while (!heap.empty() && out.size() < n) {
    const Entry top = heap.top();
    heap.pop();
    const Node node = nodes[top.node];
    if (node.complete) {
      PathWitness path;
      path.final_weight = fst.final_weight(node.state);
      path.total = top.priority;
      for (int k = top.node; nodes[k].parent >= 0; k = nodes[k].parent) {
        if (nodes[k].arc < 0) continue;
        const Arc &arc = fst.arcs(nodes[nodes[k].parent].state)[nodes[k].arc];
        path.steps.push_back({arc.ilabel, arc.olabel, arc.weight});
      }
      std::reverse(path.steps.begin(), path.steps.end());
      if (unique && !seen.insert(OutputLabels(path)).second) continue;
      out.push_back(std::move(path));
      continue;
    }
    auto arcs = fst.arcs(node.state);
    for (size_t i = 0; i < arcs.size(); ++i) {
      const Arc &arc = arcs[i];
      if (to_final[arc.nextstate].is_zero()) continue;
      FeatureWeight cost = Times(node.cost, arc.weight);
      FeatureWeight priority = Times(cost, to_final[arc.nextstate]);
      nodes.push_back({arc.nextstate, top.node, static_cast<int>(i), false,
                       std::move(cost)});
      heap.push({std::move(priority), seq++,
                 static_cast<int>(nodes.size() - 1)});
    }
    if (fst.is_final(node.state)) {
      FeatureWeight priority = Times(node.cost, fst.final_weight(node.state));
      nodes.push_back({node.state, top.node, -1, true, node.cost});
      heap.push({std::move(priority), seq++,
                 static_cast<int>(nodes.size() - 1)});
    }
  }
  return out;
}

}  // namespace latcomb
