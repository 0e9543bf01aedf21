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
// End-to-end acceptance checks. Prints one PASS or FAIL line per criterion
// and exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "latcomb/algorithms.h"
#include "latcomb/cli.h"
#include "latcomb/edit_model.h"
#include "latcomb/errors.h"
#include "latcomb/io.h"
#include "latcomb/oracle.h"
#include "latcomb/pipeline.h"
#include "test_util.h"

namespace latcomb {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

// Collects the first few failure messages of a criterion.
class Check {
 public:
  void Expect(bool ok, const std::string &what) {
    ++checks_;
    if (ok) return;
    if (failures_++ < 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  std::string Summary() const {
    std::ostringstream os;
    if (ok()) {
      os << checks_ << " checks";
    } else {
      os << failures_ << " of " << checks_ << " checks failed: " << messages_;
    }
    return os.str();
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string messages_;
};

std::string Str(const std::vector<Label> &v) {
  std::string s;
  for (Label l : v) s += (s.empty() ? "" : " ") + std::to_string(l);
  return "[" + s + "]";
}

std::map<FeatureId, double> ToMap(const FeatureWeight &w) {
  return {w.entries().begin(), w.entries().end()};
}

double Cost(const Wfst &c, const ParamVector &p) {
  return Scalarize(ShortestPath(c, p).total, p).value();
}

// 1. Standard flower against classic Levenshtein.
void EditDistanceOracle(Check &check, double &limit) {
  limit = 30.0;
  Rng rng(101);
  const ParamVector unit = ParamVector::Uniform(1.0);
  for (int i = 0; i < 1000; ++i) {
    const Label hi = 2 + testing::UniformInt(rng, 0, 4);
    const auto x = testing::RandomString(rng, 15, 2, hi);
    const auto y = testing::RandomString(rng, 15, 2, hi);
    std::set<Label> alphabet;
    for (Label l = 2; l <= hi; ++l) alphabet.insert(l);
    const Wfst c = Compose(Compose(StringAcceptor(x), BuildStandardEditFst(alphabet)),
                           StringAcceptor(y));
    const double got = Cost(c, unit);
    const int want = oracle::Levenshtein(x, y);
    check.Expect(got == want, Str(x) + " vs " + Str(y) + ": " +
                                  FormatDouble(got) + " != " +
                                  std::to_string(want));
  }
}

// 2. Modified flower (and U) against the modified DP.
void ModifiedEditOracle(Check &check, double &) {
  Rng rng(202);
  for (int setting = 0; setting < 5; ++setting) {
    CombinationParams lambdas = testing::RandomParams(rng);
    // Off-grid values too; the tolerance covers rounding.
    lambdas.lambda_sub += 0.1 * setting;
    lambdas.lambda_edit += 0.3 * setting;
    for (int i = 0; i < 200; ++i) {
      const EditCostModel model(testing::RandomVocab(rng, 2, 7),
                                lambdas.lambda_sub, lambdas.lambda_edit,
                                lambdas.lambda_ins);
      const ParamVector p = model.ToParams();
      std::vector<Label> x = testing::RandomString(rng, 8, 2, 7);
      const int unks = testing::UniformInt(rng, 1, 3);
      for (int k = 0; k < unks; ++k) {
        x.insert(x.begin() + testing::UniformInt(rng, 0, x.size()), kUnk);
      }
      const auto y = testing::RandomString(rng, 10, 2, 7);
      std::set<Label> alphabet;
      for (Label l = 2; l <= 7; ++l) alphabet.insert(l);
      const Wfst e = BuildModifiedEditFst(model, alphabet);
      const Wfst xa = StringAcceptor(x);
      const Wfst ya = StringAcceptor(y);

      const double plain = Cost(Compose(Compose(xa, e), ya), p);
      const double dp1 = oracle::DpEditAlignment(x, y, model, 1).cost;
      check.Expect(std::fabs(plain - dp1) <= 1e-9,
                   "E: " + Str(x) + " vs " + Str(y) + ": " +
                       FormatDouble(plain) + " != " + FormatDouble(dp1));

      const Wfst extended = Replace(xa, kUnk, BuildUnkInsertionFst(3));
      const double runs = Cost(Compose(Compose(extended, e), ya), p);
      const double dp3 = oracle::DpEditAlignment(x, y, model, 3).cost;
      check.Expect(std::fabs(runs - dp3) <= 1e-9,
                   "U,E: " + Str(x) + " vs " + Str(y) + ": " +
                       FormatDouble(runs) + " != " + FormatDouble(dp3));
    }
  }
}

// 3. Full combination against exhaustive minimization, ties included.
void EndToEndOracle(Check &check, double &limit) {
  limit = 300.0;
  Rng rng(303);
  testing::LatticeShape ns;
  ns.max_states = 7;
  ns.unk_prob = 0.3;
  ns.label_hi = 7;
  ns.max_paths = 20;
  testing::LatticeShape hs;
  hs.score = kHieroScore;
  hs.min_states = 3;
  hs.max_states = 10;
  hs.extra_arc_prob = 0.6;
  hs.label_hi = 9;
  hs.max_paths = 200;
  int tied = 0;
  for (int i = 0; i < 500; ++i) {
    const Wfst n = testing::RandomLattice(rng, ns);
    const Wfst h = testing::RandomLattice(rng, hs);
    CombinationParams params = testing::RandomParams(rng);
    params.nmt_vocab = testing::RandomVocab(rng, 2, 9);
    const CombinationResult r = Combine(n, h, params);
    const oracle::OracleResult o = oracle::BruteForceCombine(n, h, params);
    const std::string tag = "instance " + std::to_string(i);
    check.Expect(std::fabs(r.total_cost - o.cost) <= 1e-9,
                 tag + ": cost " + FormatDouble(r.total_cost) + " vs " +
                     FormatDouble(o.cost));
    check.Expect(ToMap(r.feature_vector) == o.features,
                 tag + ": feature vector " + ToString(r.feature_vector));
    bool among = false;
    for (const auto &[tn, th] : o.ties) {
      among = among || (th == r.t_hiero &&
                        oracle::IsUnkExpansion(r.t_nmt, tn, params.max_unk_run));
    }
    check.Expect(among, tag + ": selected pair is not an optimal pair");
    tied += o.ties.size() > 1;
  }
  check.Expect(tied > 0, "no instance exercised a tie");
}

// 4. Fills spanning two or three Hiero words.
void UnkRuns(Check &check, double &) {
  SymbolTable t;
  std::vector<Label> vocab_words, oov;
  for (int k = 0; k < 6; ++k) {
    vocab_words.push_back(t.AddSymbol("v" + std::to_string(k)));
    oov.push_back(t.AddSymbol("o" + std::to_string(k)));
  }
  CombinationParams params;
  params.lambda_sub = 2.0;
  params.lambda_edit = 5.0;
  params.lambda_ins = 0.5;
  params.nmt_vocab = {vocab_words.begin(), vocab_words.end()};
  Rng rng(404);
  for (int i = 0; i < 40; ++i) {
    const int span = 2 + i % 2;
    std::vector<Label> x, y;
    const int before = testing::UniformInt(rng, 0, 2);
    const int after = testing::UniformInt(rng, 0, 2);
    for (int k = 0; k < before; ++k) {
      x.push_back(vocab_words[k]);
      y.push_back(vocab_words[k]);
    }
    x.push_back(kUnk);
    for (int k = 0; k < span; ++k) y.push_back(oov[(i + k) % oov.size()]);
    for (int k = 0; k < after; ++k) {
      x.push_back(vocab_words[3 + k]);
      y.push_back(vocab_words[3 + k]);
    }
    const Wfst n = StringAcceptor(x, FeatureWeight{{kNmtScore, 1.0}});
    const Wfst h = StringAcceptor(y, FeatureWeight{{kHieroScore, 1.0}});
    const std::string tag = Str(x) + " -> " + Str(y);

    params.max_unk_run = 3;
    const CombinationResult three = Combine(n, h, params);
    check.Expect(three.t_comb == y, tag + ": wrong fill " + Str(three.t_comb));
    check.Expect(three.stats.type2_subs == 0 && three.stats.type3_edits == 0,
                 tag + ": fill needed edits");
    check.Expect(three.stats.unk_extensions == span - 1,
                 tag + ": extensions " +
                     std::to_string(three.stats.unk_extensions));

    params.max_unk_run = 1;
    const CombinationResult one = Combine(n, h, params);
    check.Expect(one.total_cost > three.total_cost,
                 tag + ": cost did not increase with single UNK runs");
    check.Expect(one.stats.type2_subs + one.stats.type3_edits > 0,
                 tag + ": zero-distance alignment with single UNK runs");
    // Exhaustive DP: no single-run alignment is edit free.
    const oracle::EditAlignment best = oracle::DpEditAlignment(
        x, y, params.ToEditModel(), 1);
    check.Expect(best.edit_count + best.sub_count > 0,
                 tag + ": DP found a free single-run alignment");
  }
}

// 5. Semiring laws and the scalarization homomorphism.
void SemiringLaws(Check &check, double &) {
  Rng rng(505);
  auto weight = [&] {
    if (testing::Coin(rng, 0.05)) return FeatureWeight::Zero();
    if (testing::Coin(rng, 0.05)) return FeatureWeight::One();
    if (testing::Coin(rng, 0.5)) return testing::RandomWeight(rng, -2, 2);
    std::vector<FeatureWeight::Entry> e;
    for (FeatureId id = 0; id < kNumFeatures; ++id) {
      if (testing::Coin(rng, 0.6)) {
        e.emplace_back(id,
                       std::uniform_real_distribution<double>(-10, 10)(rng));
      }
    }
    return FeatureWeight(std::move(e));
  };
  const double tol = 1e-12;
  auto same = [&](const FeatureWeight &a, const FeatureWeight &b) {
    return ApproxEqual(a, b, tol);
  };
  const FeatureWeight zero = FeatureWeight::Zero();
  const FeatureWeight one = FeatureWeight::One();
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> lambdas;
    for (int k = 0; k < kNumFeatures; ++k) {
      lambdas.push_back(testing::Dyadic(rng, -1, 2, 4));
    }
    const ParamVector p(lambdas);
    const FeatureWeight a = weight(), b = weight(), c = weight();
    const std::string tag = "(" + ToString(a) + " | " + ToString(b) + " | " +
                            ToString(c) + ")";
    check.Expect(Plus(a, b, p) == Plus(b, a, p), "plus commutative " + tag);
    check.Expect(same(Plus(Plus(a, b, p), c, p), Plus(a, Plus(b, c, p), p)),
                 "plus associative " + tag);
    check.Expect(Plus(a, a, p) == a, "plus idempotent " + tag);
    check.Expect(same(Times(Times(a, b), c), Times(a, Times(b, c))),
                 "times associative " + tag);
    check.Expect(same(Times(a, Plus(b, c, p)),
                      Plus(Times(a, b), Times(a, c), p)),
                 "left distributive " + tag);
    check.Expect(same(Times(Plus(a, b, p), c),
                      Plus(Times(a, c), Times(b, c), p)),
                 "right distributive " + tag);
    check.Expect(Times(a, zero).is_zero() && Times(zero, a).is_zero(),
                 "zero annihilates " + tag);
    check.Expect(Plus(a, zero, p) == a && Plus(zero, a, p) == a &&
                     Times(a, one) == a && Times(one, a) == a,
                 "identities " + tag);

    const double sa = Scalarize(a, p).value(), sb = Scalarize(b, p).value();
    const double sab = Scalarize(Times(a, b), p).value();
    check.Expect(a.is_zero() || b.is_zero()
                     ? std::isinf(sab)
                     : std::fabs(sab - (sa + sb)) <=
                           tol * std::max(1.0, std::fabs(sa) + std::fabs(sb)),
                 "times homomorphism " + tag);
    check.Expect(Scalarize(Plus(a, b, p), p).value() == std::min(sa, sb),
                 "plus homomorphism " + tag);
  }
}

// 6. Acyclicity of C and shortest-path preservation under pruning.
void StructuralInvariants(Check &check, double &) {
  Rng rng(606);
  testing::LatticeShape ns;
  ns.unk_prob = 0.3;
  testing::LatticeShape hs;
  hs.score = kHieroScore;
  hs.max_states = 12;
  hs.max_paths = 200;
  for (int i = 0; i < 200; ++i) {
    const Wfst n = testing::RandomLattice(rng, ns);
    const Wfst h = testing::RandomLattice(rng, hs);
    const CombinationParams params = testing::RandomParams(rng);
    const Wfst e = BuildModifiedEditFst(
        EditCostModel(testing::RandomVocab(rng, 2, 6), params.lambda_sub,
                      params.lambda_edit, params.lambda_ins),
        CollectAlphabet(n, h));
    const Wfst c = Compose(
        Compose(Replace(n, kUnk, BuildUnkInsertionFst(3)), e), h);
    check.Expect(IsAcyclic(c), "composition " + std::to_string(i) +
                                   " has a cycle");
  }

  testing::LatticeShape big;
  big.score = kHieroScore;
  big.min_states = 20;
  big.max_states = 80;
  big.extra_arc_prob = 1.0;
  big.max_paths = static_cast<size_t>(-1);
  const ParamVector p = ParamVector::Only(kHieroScore);
  for (int i = 0; i < 200; ++i) {
    const Wfst h = testing::RandomLattice(rng, big);
    const PathWitness best = ShortestPath(h, p);
    const size_t floor = best.steps.size() + 1;
    const size_t budget = static_cast<size_t>(testing::UniformInt(
        rng, static_cast<int>(floor), static_cast<int>(h.num_states())));
    const Wfst pruned = PruneToNodeBudget(h, budget, p);
    const PathWitness after = ShortestPath(pruned, p);
    const std::string tag = "prune " + std::to_string(i);
    check.Expect(pruned.num_states() <= budget, tag + ": over budget");
    check.Expect(OutputLabels(after) == OutputLabels(best),
                 tag + ": best string changed");
    check.Expect(after.total == best.total, tag + ": best cost changed");
  }
}

// Replaces every maximal UNK run of the input side by the output words
// aligned to it; other positions keep the input word.
std::vector<Label> FillFromSteps(const PathWitness &path) {
  std::vector<Label> out;
  for (const PathStep &s : path.steps) {
    if (s.ilabel == kUnk) {
      if (s.olabel != kEpsilon) out.push_back(s.olabel);
    } else if (s.ilabel != kEpsilon) {
      out.push_back(s.ilabel);
    }
  }
  return out;
}

// 7. t_comb is t_nmt with UNKs replaced by their aligned Hiero spans.
void UnkProjectionSemantics(Check &check, double &) {
  Rng rng(707);
  testing::LatticeShape ns;
  ns.unk_prob = 0.35;
  ns.max_paths = 10;
  testing::LatticeShape hs;
  hs.score = kHieroScore;
  hs.label_hi = 9;
  hs.max_paths = 50;
  int zero_edit = 0;
  for (int i = 0; i < 200; ++i) {
    const Wfst n = testing::RandomLattice(rng, ns);
    Wfst h = testing::RandomLattice(rng, hs);
    if (i % 4 == 0) {
      // Put an UNK-free NMT string into H so exact matches occur.
      const auto paths = oracle::EnumeratePaths(n, ParamVector::Uniform());
      for (const auto &path : paths) {
        if (std::find(path.output.begin(), path.output.end(), kUnk) !=
            path.output.end()) {
          continue;
        }
        StateId s = h.initial();
        for (Label l : path.output) {
          const StateId next = h.AddState();
          h.AddArc(s, Arc(l, l, {}, next));
          s = next;
        }
        h.SetFinal(s);
        break;
      }
    }
    CombinationParams params = testing::RandomParams(rng);
    params.nmt_vocab = testing::RandomVocab(rng, 2, 9);
    const CombinationResult r = Combine(n, h, params);
    const std::string tag = "instance " + std::to_string(i);

    check.Expect(r.t_comb == FillFromSteps(r.path),
                 tag + ": t_comb " + Str(r.t_comb));
    const oracle::EditAlignment a = oracle::DpEditAlignment(
        r.t_nmt, r.t_hiero, params.ToEditModel(), 1);
    const FeatureWeight edit_part = FeatureWeight(
        {{kEditCount, r.feature_vector.get(kEditCount)},
         {kSubCount, r.feature_vector.get(kSubCount)}});
    check.Expect(std::fabs(a.cost - Scalarize(edit_part,
                                              params.ToParamVector())
                                        .value()) <= 1e-9,
                 tag + ": path alignment is not optimal for its pair");
    // Non-UNK NMT words survive in order.
    std::vector<Label> kept;
    for (Label l : r.t_nmt) {
      if (l != kUnk) kept.push_back(l);
    }
    size_t j = 0;
    for (Label l : r.t_comb) {
      if (j < kept.size() && kept[j] == l) ++j;
    }
    check.Expect(j == kept.size(), tag + ": NMT words lost");

    const oracle::OracleResult o = oracle::BruteForceCombine(n, h, params);
    std::vector<Label> filled;
    for (const auto &pair : o.alignment.pairs) {
      if (pair.input == kUnk) {
        if (pair.output != kEpsilon) filled.push_back(pair.output);
      } else if (pair.input != kEpsilon) {
        filled.push_back(pair.input);
      }
    }
    check.Expect(filled == o.t_comb, tag + ": oracle t_comb " + Str(o.t_comb));

    if (r.stats.exact_match() && r.stats.type1_fills == 0) {
      ++zero_edit;
      check.Expect(r.t_comb == r.t_nmt && r.t_nmt == r.t_hiero,
                   tag + ": zero-edit strings differ");
    }
  }
  check.Expect(zero_edit >= 20,
               "only " + std::to_string(zero_edit) + " zero-edit cases");
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "latcomb");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path FreshDir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("latcomb_accept_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 8. The worked example through both CLI commands.
void WorkedExample(Check &check, double &) {
  const std::string data = LATCOMB_DATA_DIR "/worked_example/";
  const fs::path dir = FreshDir("worked");
  for (const std::string cmd : {"combine", "oracle-combine"}) {
    const fs::path report = dir / (cmd + ".txt");
    const CliRun r = Cli({cmd, "--nmt-lattice", data + "nmt.fst",
                          "--hiero-lattice", data + "hiero.fst", "--vocab",
                          data + "vocab.txt", "--params", data + "params.cfg",
                          "--symbols", data + "symbols.txt", "--report",
                          report.string()});
    check.Expect(r.code == 0, cmd + " exit " + std::to_string(r.code) +
                                  " " + r.err);
    check.Expect(r.out == "die regionale Politik\n", cmd + " printed " + r.out);
    const std::string text = Slurp(report);
    const auto pos = text.find("total_cost=");
    const double cost =
        pos == std::string::npos ? -1 : std::stod(text.substr(pos + 11));
    check.Expect(cost == 3.0, cmd + " total cost " + FormatDouble(cost));
  }
}

// 9. Edit breakdown table and n-best membership on a synthetic corpus.
void ReportMachinery(Check &check, double &) {
  const fs::path dir = FreshDir("corpus");
  fs::create_directories(dir / "nmt");
  fs::create_directories(dir / "hiero");
  SymbolTable t;
  std::vector<Label> v, o;
  for (int k = 0; k < 10; ++k) v.push_back(t.AddSymbol("v" + std::to_string(k)));
  for (int k = 0; k < 10; ++k) o.push_back(t.AddSymbol("o" + std::to_string(k)));
  const Label distractor = t.AddSymbol("zz");
  {
    std::ofstream syms(dir / "symbols.txt");
    WriteSymbolTable(t, syms);
    std::ofstream vocab(dir / "vocab.txt");
    for (int k = 0; k < 10; ++k) vocab << "v" << k << '\n';
    std::ofstream params(dir / "params.cfg");
    params << "lambda_nmt=1\nlambda_hiero=1\nlambda_sub=2\nlambda_edit=5\n"
              "lambda_ins=1\n";
  }
  // Category i % 5: exact match, Type I fill, two-word fill (one
  // extension), in-vocabulary fill (Type II), two inserted words (two
  // Type III). Odd sentences get a Hiero 1-best
  // distractor that is too far from every NMT string to be chosen.
  for (int i = 0; i < 50; ++i) {
    const Label p1 = v[i % 10], p2 = v[(i + 3) % 10], z = v[(i + 5) % 10];
    const Label a = o[i % 10], b = o[(i + 1) % 10];
    std::vector<Label> x, y;
    switch (i % 5) {
      case 0: x = y = {p1, p2, z}; break;
      case 1: x = {p1, kUnk, p2}; y = {p1, a, p2}; break;
      case 2: x = {p1, kUnk, p2}; y = {p1, a, b, p2}; break;
      case 3: x = {p1, kUnk, p2}; y = {p1, z, p2}; break;
      case 4: x = {p1, p2}; y = {p1, a, b, p2}; break;
    }
    Wfst n = StringAcceptor(x);
    n.mutable_arcs(0)[0].weight = FeatureWeight{{kNmtScore, 1.0}};
    Wfst h = StringAcceptor(y);
    h.mutable_arcs(0)[0].weight = FeatureWeight{{kHieroScore, 1.0}};
    if (i % 2) {
      StateId s = h.initial();
      for (int k = 0; k < 5; ++k) {
        const StateId next = h.AddState();
        h.AddArc(s, Arc(distractor, distractor, {}, next));
        s = next;
      }
      h.SetFinal(s);
    }
    char id[8];
    std::snprintf(id, sizeof(id), "%04d", i);
    WriteLattice(n, (dir / "nmt" / (std::string(id) + ".nmt.fst")).string());
    WriteLattice(h,
                 (dir / "hiero" / (std::string(id) + ".hiero.fst")).string());
  }
  const std::vector<std::string> common = {
      "--nmt-dir", (dir / "nmt").string(), "--hiero-dir",
      (dir / "hiero").string(), "--vocab", (dir / "vocab.txt").string(),
      "--params", (dir / "params.cfg").string(), "--symbols",
      (dir / "symbols.txt").string()};

  auto args = common;
  args.insert(args.begin(), "stats");
  const CliRun stats = Cli(args);
  check.Expect(stats.code == 0, "stats exit " + std::to_string(stats.code) +
                                    " " + stats.err);
  const std::string expected =
      "component\tavg_per_sentence\tpct_affected\n"
      "unk_insertions\t0.2\t20\n"
      "type2_substitutions\t0.2\t20\n"
      "type3_edits\t0.4\t20\n";
  check.Expect(stats.out == expected, "stats printed:\n" + stats.out);

  args = common;
  args.insert(args.begin(), "combine");
  args.push_back("--report");
  args.push_back((dir / "report.txt").string());
  args.push_back("--nbest");
  for (const char *n : {"1", "2", "5", "10"}) args.push_back(n);
  const CliRun combine = Cli(args);
  check.Expect(combine.code == 0, "combine exit " + combine.err);
  const std::string report = Slurp(dir / "report.txt");
  for (const char *line :
       {"sentences=50\n", "hiero_unchanged.pct=50\n",
        "nbest_membership.1.pct=50\n", "nbest_membership.2.pct=100\n",
        "nbest_membership.10.pct=100\n", "exact_match.pct=40\n"}) {
    check.Expect(report.find(line) != std::string::npos,
                 std::string("report lacks ") + line);
  }

  // Monotone membership on random corpora.
  Rng rng(909);
  testing::LatticeShape ns;
  ns.unk_prob = 0.3;
  testing::LatticeShape hs;
  hs.score = kHieroScore;
  hs.max_states = 10;
  hs.extra_arc_prob = 0.8;
  hs.max_paths = 300;
  std::vector<size_t> n_values;
  for (size_t k = 1; k <= 64; k *= 2) n_values.push_back(k);
  for (int corpus = 0; corpus < 10; ++corpus) {
    std::vector<CombinationResult> results;
    std::vector<Wfst> hiero;
    CombinationParams params = testing::RandomParams(rng);
    params.nmt_vocab = testing::RandomVocab(rng, 2, 6);
    for (int s = 0; s < 10; ++s) {
      const Wfst n = testing::RandomLattice(rng, ns);
      hiero.push_back(testing::RandomLattice(rng, hs));
      results.push_back(Combine(n, hiero.back(), params));
    }
    const CorpusReport r = BuildCorpusReport(results, hiero, n_values);
    double prev = -1.0;
    for (const auto &[n, pct] : r.nbest_membership) {
      check.Expect(pct >= prev, "membership decreases at n=" +
                                    std::to_string(n));
      prev = pct;
    }
  }
}

// 10. Write then read through files.
void RoundTrip(Check &check, double &) {
  const fs::path dir = FreshDir("roundtrip");
  Rng rng(1010);
  for (int i = 0; i < 100; ++i) {
    const int states = testing::UniformInt(rng, 1, 15);
    Wfst f;
    f.AddStates(states);
    f.SetInitial(testing::UniformInt(rng, 0, states - 1));
    for (int s = 0; s < states; ++s) {
      const int arcs = testing::UniformInt(rng, 0, 3);
      for (int k = 0; k < arcs; ++k) {
        std::vector<FeatureWeight::Entry> w;
        for (FeatureId id = 0; id < kNumFeatures; ++id) {
          if (testing::Coin(rng, 0.4)) {
            w.emplace_back(id,
                           std::uniform_real_distribution<double>(-50, 50)(rng));
          }
        }
        f.AddArc(s, Arc(testing::UniformInt(rng, 0, 9),
                        testing::UniformInt(rng, 0, 9),
                        FeatureWeight(std::move(w)),
                        testing::UniformInt(rng, 0, states - 1)));
      }
      if (testing::Coin(rng, 0.3)) f.SetFinal(s, testing::RandomWeight(rng));
    }
    // Isolated states are not representable; drop them.
    Wfst g;
    {
      std::vector<bool> used(states, false);
      used[f.initial()] = true;
      for (int s = 0; s < states; ++s) {
        if (f.is_final(s) || f.num_arcs(s)) used[s] = true;
        for (const Arc &arc : f.arcs(s)) used[arc.nextstate] = true;
      }
      std::vector<StateId> id(states, kNoState);
      for (int s = 0; s < states; ++s) {
        if (used[s]) id[s] = g.AddState();
      }
      g.SetInitial(id[f.initial()]);
      for (int s = 0; s < states; ++s) {
        if (!used[s]) continue;
        if (f.is_final(s)) g.SetFinal(id[s], f.final_weight(s));
        for (const Arc &arc : f.arcs(s)) {
          g.AddArc(id[s], Arc(arc.ilabel, arc.olabel, arc.weight,
                              id[arc.nextstate]));
        }
      }
    }
    const fs::path path = dir / ("l" + std::to_string(i) + ".fst");
    WriteLattice(g, path.string());
    const std::string text = Slurp(path);
    const Wfst back =
        ReadLattice(path.string(), nullptr, LatticeKind::kGeneric);
    check.Expect(testing::SameUpToRenumbering(g, back,
                                              testing::FirstMention(text)),
                 "lattice " + std::to_string(i) + " changed:\n" + text);
  }
}

struct Criterion {
  int id;
  const char *name;
  std::function<void(Check &, double &)> run;
};

}  // namespace
}  // namespace latcomb

int main() {
  using namespace latcomb;
  const std::vector<Criterion> criteria = {
      {1, "edit distance through the standard flower equals Levenshtein",
       EditDistanceOracle},
      {2, "modified edit transducer equals the modified DP",
       ModifiedEditOracle},
      {3, "combination equals exhaustive minimization, ties agree",
       EndToEndOracle},
      {4, "UNK runs fill two and three word spans", UnkRuns},
      {5, "semiring laws and scalarization homomorphism", SemiringLaws},
      {6, "composition acyclic, pruning keeps the best path",
       StructuralInvariants},
      {7, "UNK projection fills UNKs with aligned Hiero spans",
       UnkProjectionSemantics},
      {8, "worked example via combine and oracle-combine", WorkedExample},
      {9, "edit breakdown table and monotone n-best membership",
       ReportMachinery},
      {10, "lattice write/read round trip", RoundTrip},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    Check check;
    double limit = 0.0;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(check, limit);
    } catch (const std::exception &e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    if (limit > 0.0) {
      check.Expect(seconds < limit, "took " + FormatDouble(seconds) +
                                        " s, limit " + FormatDouble(limit));
    }
    failed += !check.ok();
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.2f s", seconds);
    std::cout << (check.ok() ? "PASS" : "FAIL") << "  criterion " << c.id
              << ": " << c.name << " (" << check.Summary() << ", " << timing
              << ")" << std::endl;
  }
  return failed ? 1 : 0;
}
