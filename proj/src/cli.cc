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

#include "latcomb/cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "latcomb/algorithms.h"
#include "latcomb/edit_model.h"
#include "latcomb/errors.h"
#include "latcomb/io.h"
#include "latcomb/oracle.h"
#include "latcomb/pipeline.h"

namespace latcomb {
namespace {

namespace fs = std::filesystem;

constexpr const char *kNmtSuffix = ".nmt.fst";
constexpr const char *kHieroSuffix = ".hiero.fst";

struct CombineOptions {
  std::string nmt_lattice;
  std::string hiero_lattice;
  std::string nmt_dir;
  std::string hiero_dir;
  std::string vocab;
  std::string params;
  std::string symbols;
  std::string report;
  std::string table;
  std::vector<size_t> n_values{1, 10, 100, 1000};
  size_t max_paths = oracle::kDefaultMaxPaths;
  unsigned jobs = 0;
};

struct MachineOptions {
  std::vector<std::string> inputs;
  std::string symbols;
  std::string params;
  std::string output;
  std::string kind = "generic";
  size_t n = 1;
  bool unique = false;
  size_t budget = 0;
};

struct EditFstOptions {
  std::string vocab;
  std::string symbols;
  std::string output;
  double lambda_sub = 1.0;
  double lambda_edit = 2.0;
  double lambda_ins = 0.0;
  bool standard = false;
};

std::shared_ptr<const SymbolTable> LoadSymbols(const std::string &path) {
  if (path.empty()) return nullptr;
  return std::make_shared<const SymbolTable>(ReadSymbolTable(path));
}

std::string Render(const std::vector<Label> &labels,
                   const SymbolTable *symbols) {
  if (symbols) return symbols->Render(labels);
  std::string text;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) text += ' ';
    text += std::to_string(labels[i]);
  }
  return text;
}

ParamVector LoadParamVector(const std::string &path) {
  if (path.empty()) return ParamVector::Uniform(1.0);
  return ReadParams(path).ToParamVector();
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
template <typename Fn>
void WithOutput(const std::string &path, std::ostream &fallback, Fn &&fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ParseError(path, 0, "cannot open file for writing");
  fn(file);
}

struct SentenceFiles {
  std::string id;
  std::string nmt;
  std::string hiero;
};

// Pairs "<id>.nmt.fst" with "<id>.hiero.fst" by stem, sorted by id.
std::vector<SentenceFiles> PairCorpus(const std::string &nmt_dir,
                                      const std::string &hiero_dir) {
  auto strip = [](const std::string &name, const std::string &suffix)
      -> std::optional<std::string> {
    if (name.size() <= suffix.size() ||
        name.compare(name.size() - suffix.size(), suffix.size(), suffix)) {
      return std::nullopt;
    }
    return name.substr(0, name.size() - suffix.size());
  };
  auto list = [&](const std::string &dir, const std::string &suffix) {
    if (!fs::is_directory(dir)) {
      throw ParseError(dir, 0, "not a directory");
    }
    std::vector<std::pair<std::string, std::string>> found;
    for (const auto &entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      if (auto stem = strip(entry.path().filename().string(), suffix)) {
        found.emplace_back(*stem, entry.path().string());
      }
    }
    std::sort(found.begin(), found.end());
    return found;
  };
  const auto nmt = list(nmt_dir, kNmtSuffix);
  const auto hiero = list(hiero_dir, kHieroSuffix);
  std::vector<SentenceFiles> pairs;
  size_t j = 0;
  for (const auto &[id, path] : nmt) {
    while (j < hiero.size() && hiero[j].first < id) ++j;
    if (j == hiero.size() || hiero[j].first != id) {
      throw ParseError(path, 0,
                       "no matching " + id + kHieroSuffix + " in " + hiero_dir);
    }
    pairs.push_back({id, path, hiero[j].second});
  }
  if (pairs.size() != hiero.size()) {
    for (const auto &[id, path] : hiero) {
      auto it = std::find_if(pairs.begin(), pairs.end(),
                             [&](const SentenceFiles &f) { return f.id == id; });
      if (it == pairs.end()) {
        throw ParseError(path, 0,
                         "no matching " + id + kNmtSuffix + " in " + nmt_dir);
      }
    }
  }
  if (pairs.empty()) {
    throw ParseError(nmt_dir, 0, std::string("no *") + kNmtSuffix + " files");
  }
  return pairs;
}

// Runs fn(i) for i in [0, n) on a small thread pool. The first exception
// (by index) is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(size_t n, unsigned jobs, Fn &&fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<size_t>(jobs, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto &t : threads) t.join();
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct CombineInputs {
  std::shared_ptr<const SymbolTable> symbols;
  CombinationParams params;
};

CombineInputs LoadCombineInputs(const CombineOptions &o) {
  CombineInputs in;
  in.symbols = LoadSymbols(o.symbols);
  in.params = ReadParams(o.params);
  in.params.nmt_vocab = ReadVocab(o.vocab, *in.symbols);
  return in;
}

void WriteSentenceReport(std::ostream &os, const std::string &id,
                         const std::string &t_comb, const std::string &t_nmt,
                         const std::string &t_hiero, double cost,
                         const FeatureWeight &features, int type1,
                         int extensions, int type2, int type3) {
  os << "source_id=" << id << '\n'
     << "t_comb=" << t_comb << '\n'
     << "t_nmt=" << t_nmt << '\n'
     << "t_hiero=" << t_hiero << '\n'
     << "total_cost=" << FormatDouble(cost) << '\n'
     << "feature_vector=" << ToString(features) << '\n'
     << "type1_fills=" << type1 << '\n'
     << "unk_insertions=" << extensions << '\n'
     << "type2_substitutions=" << type2 << '\n'
     << "type3_edits=" << type3 << '\n'
     << "exact_match="
     << (extensions == 0 && type2 == 0 && type3 == 0 ? "true" : "false")
     << '\n';
}

void CheckCombineMode(const CombineOptions &o) {
  const bool single = !o.nmt_lattice.empty() || !o.hiero_lattice.empty();
  const bool corpus = !o.nmt_dir.empty() || !o.hiero_dir.empty();
  if (single == corpus) {
    throw CLI::ValidationError(
        "give either --nmt-lattice/--hiero-lattice or --nmt-dir/--hiero-dir");
  }
  if (single && (o.nmt_lattice.empty() || o.hiero_lattice.empty())) {
    throw CLI::ValidationError("--nmt-lattice and --hiero-lattice go together");
  }
  if (corpus && (o.nmt_dir.empty() || o.hiero_dir.empty())) {
    throw CLI::ValidationError("--nmt-dir and --hiero-dir go together");
  }
}

void EmitWarnings(const std::string &id, const std::vector<std::string> &w,
                  std::ostream &err) {
  for (const auto &msg : w) {
    err << "warning: " << (id.empty() ? "" : id + ": ") << msg << '\n';
  }
}

int RunCombine(const CombineOptions &o, bool table_to_stdout,
               std::ostream &out, std::ostream &err) {
  const CombineInputs in = LoadCombineInputs(o);
  const SymbolTable &syms = *in.symbols;

  if (!o.nmt_lattice.empty()) {
    const Wfst nmt = ReadLattice(o.nmt_lattice, in.symbols, LatticeKind::kNmt);
    const Wfst hiero =
        ReadLattice(o.hiero_lattice, in.symbols, LatticeKind::kHiero);
    const CombinationResult r = Combine(nmt, hiero, in.params);
    EmitWarnings("", r.warnings, err);
    if (table_to_stdout) {
      WriteReportTable(BuildCorpusReport({r}, {}, {}), out);
      return kExitOk;
    }
    out << syms.Render(r.t_comb) << '\n';
    if (!o.report.empty()) {
      WithOutput(o.report, out, [&](std::ostream &os) {
        WriteSentenceReport(os, "", syms.Render(r.t_comb),
                            syms.Render(r.t_nmt), syms.Render(r.t_hiero),
                            r.total_cost, r.feature_vector,
                            r.stats.type1_fills, r.stats.unk_extensions,
                            r.stats.type2_subs, r.stats.type3_edits);
      });
    }
    return kExitOk;
  }

  const auto files = PairCorpus(o.nmt_dir, o.hiero_dir);
  std::vector<CombinationResult> results(files.size());
  std::vector<Wfst> hiero(files.size());
  ParallelFor(files.size(), o.jobs, [&](size_t i) {
    const Wfst nmt = ReadLattice(files[i].nmt, in.symbols, LatticeKind::kNmt);
    hiero[i] = ReadLattice(files[i].hiero, in.symbols, LatticeKind::kHiero);
    try {
      results[i] = Combine(nmt, hiero[i], in.params, files[i].id);
    } catch (const NoPathError &e) {
      throw NoPathError(files[i].id + ": " + e.what());
    } catch (const ContractError &e) {
      throw ContractError(files[i].id + ": " + e.what());
    }
  });
  for (const auto &r : results) EmitWarnings(r.source_id, r.warnings, err);

  if (table_to_stdout) {
    WriteReportTable(BuildCorpusReport(results, {}, {}), out);
    return kExitOk;
  }
  for (const auto &r : results) {
    out << r.source_id << '\t' << syms.Render(r.t_comb) << '\n';
  }
  if (!o.report.empty()) {
    const CorpusReport report = BuildCorpusReport(results, hiero, o.n_values);
    WithOutput(o.report, out,
               [&](std::ostream &os) { WriteReportKeyValue(report, os); });
  }
  if (!o.table.empty()) {
    const CorpusReport report = BuildCorpusReport(results, {}, {});
    WithOutput(o.table, out,
               [&](std::ostream &os) { WriteReportTable(report, os); });
  }
  return kExitOk;
}

int RunOracleCombine(const CombineOptions &o, std::ostream &out) {
  const CombineInputs in = LoadCombineInputs(o);
  const SymbolTable &syms = *in.symbols;
  const Wfst nmt = ReadLattice(o.nmt_lattice, in.symbols, LatticeKind::kNmt);
  const Wfst hiero =
      ReadLattice(o.hiero_lattice, in.symbols, LatticeKind::kHiero);
  const oracle::OracleResult r =
      oracle::BruteForceCombine(nmt, hiero, in.params, o.max_paths);
  out << syms.Render(r.t_comb) << '\n';
  if (!o.report.empty()) {
    int type1 = 0;
    for (const auto &pair : r.alignment.pairs) {
      type1 += pair.input == kUnk && pair.output != kEpsilon &&
               !in.params.nmt_vocab.count(pair.output);
    }
    std::vector<FeatureWeight::Entry> entries(r.features.begin(),
                                              r.features.end());
    WithOutput(o.report, out, [&](std::ostream &os) {
      WriteSentenceReport(os, "", syms.Render(r.t_comb),
                          syms.Render(r.t_nmt_expanded), syms.Render(r.t_hiero),
                          r.cost, FeatureWeight(std::move(entries)), type1,
                          r.alignment.unk_ext_count, r.alignment.sub_count,
                          r.alignment.edit_count);
    });
  }
  return kExitOk;
}

int RunBuildEditFst(const EditFstOptions &o, std::ostream &out) {
  const SymbolTable symbols = ReadSymbolTable(o.symbols);
  std::set<Label> alphabet;
  for (Label l : symbols.Labels()) {
    if (l != kEpsilon && l != kUnk) alphabet.insert(l);
  }
  Wfst fst;
  if (o.standard) {
    fst = BuildStandardEditFst(alphabet);
  } else {
    if (o.vocab.empty()) {
      throw CLI::ValidationError("--vocab is required without --standard");
    }
    const EditCostModel model(ReadVocab(o.vocab, symbols), o.lambda_sub,
                              o.lambda_edit, o.lambda_ins);
    fst = BuildModifiedEditFst(model, alphabet);
  }
  WithOutput(o.output, out, [&](std::ostream &os) { WriteLattice(fst, os); });
  return kExitOk;
}

LatticeKind ParseKind(const std::string &kind) {
  if (kind == "nmt") return LatticeKind::kNmt;
  if (kind == "hiero") return LatticeKind::kHiero;
  return LatticeKind::kGeneric;
}

void WritePathLine(std::ostream &os, const PathWitness &path,
                   const ParamVector &p, const SymbolTable *symbols) {
  os << FormatDouble(Scalarize(path.total, p).value()) << '\t'
     << ToString(path.total) << '\t' << Render(InputLabels(path), symbols)
     << '\t' << Render(OutputLabels(path), symbols) << '\n';
}

int RunValidate(const MachineOptions &o, std::ostream &out) {
  const auto symbols = LoadSymbols(o.symbols);
  const LatticeKind kind = ParseKind(o.kind);
  LatticeSource src = ParseLatticeFile(o.inputs.front());
  src.fst.SetInputSymbols(symbols);
  src.fst.SetOutputSymbols(symbols);
  const auto diagnostics = Validate(src.fst, kind);
  for (const Diagnostic &d : diagnostics) {
    out << src.file << ':' << src.LineOf(d) << ": "
        << (d.severity == Diagnostic::Severity::kError ? "error" : "warning")
        << ": " << d.message << '\n';
  }
  if (HasErrors(diagnostics)) return kExitDataError;
  out << src.file << ": ok (" << ToString(kind) << ", "
      << src.fst.num_states() << " states, " << src.fst.num_arcs()
      << " arcs)\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Lattice combination through a modified edit-distance "
               "transducer"};
  app.name("latcomb");
  app.require_subcommand(1);

  CombineOptions combine_opts;
  auto add_combine_flags = [&](CLI::App *sub, bool corpus) {
    sub->add_option("--nmt-lattice", combine_opts.nmt_lattice,
                    "NMT lattice file");
    sub->add_option("--hiero-lattice", combine_opts.hiero_lattice,
                    "Hiero lattice file");
    if (corpus) {
      sub->add_option("--nmt-dir", combine_opts.nmt_dir,
                      "directory of <id>.nmt.fst files");
      sub->add_option("--hiero-dir", combine_opts.hiero_dir,
                      "directory of <id>.hiero.fst files");
      sub->add_option("-j,--jobs", combine_opts.jobs,
                      "worker threads (0 = hardware concurrency)");
    }
    sub->add_option("--vocab", combine_opts.vocab, "NMT vocabulary file")
        ->required();
    sub->add_option("--params", combine_opts.params, "parameter file")
        ->required();
    sub->add_option("--symbols", combine_opts.symbols, "symbol table file")
        ->required();
  };

  CLI::App *combine =
      app.add_subcommand("combine", "combine an NMT and a Hiero lattice");
  add_combine_flags(combine, true);
  combine->add_option("--report", combine_opts.report,
                      "key=value report file");
  combine->add_option("--table", combine_opts.table,
                      "corpus mode: tab-separated edit breakdown file");
  combine->add_option("--nbest", combine_opts.n_values,
                      "corpus mode: n values for the n-best membership "
                      "report");

  CLI::App *oracle_combine = app.add_subcommand(
      "oracle-combine", "exhaustive reference combination (debugging)");
  add_combine_flags(oracle_combine, false);
  oracle_combine->add_option("--report", combine_opts.report,
                             "key=value report file");
  oracle_combine->add_option("--max-paths", combine_opts.max_paths,
                             "path limit per lattice");

  CLI::App *stats = app.add_subcommand(
      "stats", "tab-separated edit breakdown over a corpus");
  add_combine_flags(stats, true);

  EditFstOptions edit_opts;
  CLI::App *build = app.add_subcommand(
      "build-edit-fst", "emit the edit transducer over a symbol table");
  build->add_option("--symbols", edit_opts.symbols, "symbol table file")
      ->required();
  build->add_option("--vocab", edit_opts.vocab, "NMT vocabulary file");
  build->add_option("--lambda-sub", edit_opts.lambda_sub,
                    "cost of UNK -> vocabulary word");
  build->add_option("--lambda-edit", edit_opts.lambda_edit,
                    "cost of any other edit");
  build->add_option("--lambda-ins", edit_opts.lambda_ins,
                    "cost of each extra UNK");
  build->add_flag("--standard", edit_opts.standard,
                  "plain Levenshtein transducer");
  build->add_option("-o,--output", edit_opts.output, "output file");

  MachineOptions m;
  auto add_machine_flags = [&](CLI::App *sub, size_t inputs) {
    sub->add_option("inputs", m.inputs, "lattice file(s)")
        ->required()
        ->expected(static_cast<int>(inputs));
    sub->add_option("--symbols", m.symbols, "symbol table file");
  };
  CLI::App *compose = app.add_subcommand("compose", "compose two machines");
  add_machine_flags(compose, 2);
  compose->add_option("-o,--output", m.output, "output file");

  CLI::App *shortest =
      app.add_subcommand("shortest-path", "single best path");
  add_machine_flags(shortest, 1);
  shortest->add_option("--params", m.params, "parameter file");

  CLI::App *nbest = app.add_subcommand("nbest", "n best paths");
  add_machine_flags(nbest, 1);
  nbest->add_option("--params", m.params, "parameter file");
  nbest->add_option("-n", m.n, "number of paths")->check(CLI::PositiveNumber);
  nbest->add_flag("--unique", m.unique, "skip repeated output strings");

  CLI::App *prune =
      app.add_subcommand("prune", "threshold pruning to a state budget");
  add_machine_flags(prune, 1);
  prune->add_option("--params", m.params, "parameter file");
  prune->add_option("--budget", m.budget, "maximum number of states")
      ->required()
      ->check(CLI::PositiveNumber);
  prune->add_option("-o,--output", m.output, "output file");

  CLI::App *validate = app.add_subcommand("validate", "check a lattice file");
  add_machine_flags(validate, 1);
  validate->add_option("--kind", m.kind, "generic, nmt or hiero")
      ->check(CLI::IsMember({"generic", "nmt", "hiero"}));

  try {
    app.parse(argc, argv);
    if (combine->parsed() || stats->parsed() || oracle_combine->parsed()) {
      CheckCombineMode(combine_opts);
    }
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    if (e.get_name() != "ValidationError") err << app.help();
    return kExitUsage;
  }

  try {
    if (combine->parsed()) return RunCombine(combine_opts, false, out, err);
    if (stats->parsed()) return RunCombine(combine_opts, true, out, err);
    if (oracle_combine->parsed()) return RunOracleCombine(combine_opts, out);
    if (build->parsed()) return RunBuildEditFst(edit_opts, out);
    if (validate->parsed()) return RunValidate(m, out);

    const auto symbols = LoadSymbols(m.symbols);
    auto read = [&](const std::string &path) {
      return ReadLattice(path, symbols, LatticeKind::kGeneric);
    };
    if (compose->parsed()) {
      const Wfst c = Compose(read(m.inputs[0]), read(m.inputs[1]));
      WithOutput(m.output, out, [&](std::ostream &os) { WriteLattice(c, os); });
      return kExitOk;
    }
    const Wfst fst = read(m.inputs[0]);
    const ParamVector p = LoadParamVector(m.params);
    if (shortest->parsed()) {
      WritePathLine(out, ShortestPath(fst, p), p, symbols.get());
    } else if (nbest->parsed()) {
      for (const auto &path : NShortestPaths(fst, m.n, p, m.unique)) {
        WritePathLine(out, path, p, symbols.get());
      }
    } else if (prune->parsed()) {
      const Wfst pruned = PruneToNodeBudget(fst, m.budget, p);
      WithOutput(m.output, out,
                 [&](std::ostream &os) { WriteLattice(pruned, os); });
    }
    return kExitOk;
  } catch (const CLI::ValidationError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NoPathError &e) {
    err << "error: no path: " << e.what() << '\n';
    return kExitNoPath;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace latcomb
