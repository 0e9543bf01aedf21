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

#include "latcomb/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <tuple>
#include <unordered_map>

#include "latcomb/errors.h"

namespace latcomb {
namespace {

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

bool IsBlankOrComment(const std::string &line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

template <typename T>
std::optional<T> ParseNumber(const std::string &text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

std::string Trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

int LatticeSource::LineOf(const Diagnostic &d) const {
  if (d.state >= 0 && static_cast<size_t>(d.state) < arc_lines.size()) {
    if (d.arc_index >= 0 &&
        static_cast<size_t>(d.arc_index) < arc_lines[d.state].size()) {
      return arc_lines[d.state][d.arc_index];
    }
    if (final_lines[d.state] > 0) return final_lines[d.state];
    if (!arc_lines[d.state].empty()) return arc_lines[d.state].front();
  }
  return last_line > 0 ? 1 : 0;
}

LatticeSource ParseLattice(std::istream &in, const std::string &file) {
  LatticeSource src;
  src.file = file;
  std::unordered_map<int64_t, StateId> ids;
  auto state_for = [&](const std::string &token, int line) {
    auto value = ParseNumber<int64_t>(token);
    if (!value || *value < 0) {
      throw ParseError(file, line, "invalid state id '" + token + "'");
    }
    auto [it, inserted] = ids.try_emplace(*value, kNoState);
    if (inserted) {
      it->second = src.fst.AddState();
      src.arc_lines.emplace_back();
      src.final_lines.push_back(0);
      if (it->second == 0) src.fst.SetInitial(0);
    }
    return it->second;
  };
  auto label_for = [&](const std::string &token, int line) {
    auto value = ParseNumber<Label>(token);
    if (!value || *value < 0) {
      throw ParseError(file, line, "invalid label '" + token + "'");
    }
    return *value;
  };
  auto weight_for = [&](const std::string &token, int line) {
    try {
      return ParseFeatureWeight(token);
    } catch (const ContractError &e) {
      throw ParseError(file, line, e.what());
    }
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlankOrComment(line)) continue;
    const auto fields = SplitWords(line);
    if (fields.size() == 4 || fields.size() == 5) {
      const StateId src_state = state_for(fields[0], line_no);
      const StateId dst_state = state_for(fields[1], line_no);
      const Label il = label_for(fields[2], line_no);
      const Label ol = label_for(fields[3], line_no);
      FeatureWeight w = fields.size() == 5 ? weight_for(fields[4], line_no)
                                           : FeatureWeight::One();
      src.fst.AddArc(src_state, Arc(il, ol, std::move(w), dst_state));
      src.arc_lines[src_state].push_back(line_no);
    } else if (fields.size() == 1 || fields.size() == 2) {
      const StateId s = state_for(fields[0], line_no);
      FeatureWeight w = fields.size() == 2 ? weight_for(fields[1], line_no)
                                           : FeatureWeight::One();
      if (src.final_lines[s] > 0) {
        throw ParseError(file, line_no,
                         "duplicate final weight for state " + fields[0] +
                             " (first on line " +
                             std::to_string(src.final_lines[s]) + ")");
      }
      src.fst.SetFinal(s, std::move(w));
      src.final_lines[s] = line_no;
    } else {
      throw ParseError(file, line_no,
                       "expected 'src dst ilabel olabel [weight]' or "
                       "'state [weight]', got " +
                           std::to_string(fields.size()) + " fields");
    }
  }
  src.last_line = line_no;
  if (src.fst.num_states() == 0) {
    throw ParseError(file, std::max(line_no, 1),
                     "no initial state (empty lattice)");
  }
  return src;
}

LatticeSource ParseLatticeFile(const std::string &path) {
  auto in = OpenInput(path);
  return ParseLattice(in, path);
}

Wfst ReadLattice(std::istream &in, const std::string &file,
                 std::shared_ptr<const SymbolTable> symbols,
                 LatticeKind kind) {
  LatticeSource src = ParseLattice(in, file);
  src.fst.SetInputSymbols(symbols);
  src.fst.SetOutputSymbols(symbols);
  for (const Diagnostic &d : Validate(src.fst, kind)) {
    if (d.severity == Diagnostic::Severity::kError) {
      throw ParseError(file, src.LineOf(d),
                       std::string(ToString(kind)) + " lattice: " + d.message);
    }
  }
  return std::move(src.fst);
}

Wfst ReadLattice(const std::string &path,
                 std::shared_ptr<const SymbolTable> symbols,
                 LatticeKind kind) {
  auto in = OpenInput(path);
  return ReadLattice(in, path, std::move(symbols), kind);
}

void WriteLattice(const Wfst &fst, std::ostream &out) {
  if (!fst.has_state(fst.initial())) {
    throw ContractError("write lattice: machine has no initial state");
  }
  std::vector<StateId> order{fst.initial()};
  for (StateId s = 0; s < static_cast<StateId>(fst.num_states()); ++s) {
    if (s != fst.initial()) order.push_back(s);
  }
  for (StateId s : order) {
    std::vector<const Arc *> arcs;
    for (const Arc &arc : fst.arcs(s)) arcs.push_back(&arc);
    std::stable_sort(arcs.begin(), arcs.end(), [](const Arc *a, const Arc *b) {
      return std::tie(a->ilabel, a->olabel, a->nextstate) <
             std::tie(b->ilabel, b->olabel, b->nextstate);
    });
    for (const Arc *arc : arcs) {
      out << s << ' ' << arc->nextstate << ' ' << arc->ilabel << ' '
          << arc->olabel;
      if (!arc->weight.is_one()) out << ' ' << ToString(arc->weight);
      out << '\n';
    }
    if (fst.is_final(s)) {
      out << s;
      if (!fst.final_weight(s).is_one()) {
        out << ' ' << ToString(fst.final_weight(s));
      }
      out << '\n';
    } else if (arcs.empty() && s == fst.initial()) {
      // A lone non-final initial state still needs a mention; an INF final
      // weight is the same as not final.
      out << s << " INF\n";
    }
  }
}

void WriteLattice(const Wfst &fst, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot open file for writing");
  WriteLattice(fst, out);
}

SymbolTable ReadSymbolTable(std::istream &in, const std::string &file) {
  SymbolTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::string word, id_text;
    if (auto tab = line.rfind('\t'); tab != std::string::npos) {
      word = line.substr(0, tab);
      id_text = Trim(line.substr(tab + 1));
    } else {
      const auto fields = SplitWords(line);
      if (fields.size() != 2) {
        throw ParseError(file, line_no, "expected 'word<TAB>id'");
      }
      word = fields[0];
      id_text = fields[1];
    }
    auto id = ParseNumber<Label>(id_text);
    if (!id || *id < 0) {
      throw ParseError(file, line_no, "invalid symbol id '" + id_text + "'");
    }
    try {
      table.AddSymbol(word, *id);
    } catch (const ContractError &e) {
      throw ParseError(file, line_no, e.what());
    }
  }
  return table;
}

SymbolTable ReadSymbolTable(const std::string &path) {
  auto in = OpenInput(path);
  return ReadSymbolTable(in, path);
}

void WriteSymbolTable(const SymbolTable &symbols, std::ostream &out) {
  for (Label l : symbols.Labels()) out << symbols.WordOf(l) << '\t' << l << '\n';
}

std::set<Label> ReadVocab(std::istream &in, const std::string &file,
                          const SymbolTable &symbols) {
  std::set<Label> vocab;
  std::map<std::string, int> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string word = Trim(line);
    if (word.empty()) continue;
    if (word == kUnkWord) {
      throw ParseError(file, line_no, "UNK may not be listed in the vocabulary");
    }
    if (word == kEpsilonWord) {
      throw ParseError(file, line_no,
                       "<eps> may not be listed in the vocabulary");
    }
    if (auto [it, inserted] = seen.emplace(word, line_no); !inserted) {
      throw ParseError(file, line_no,
                       "duplicate vocabulary word '" + word +
                           "' (first on line " + std::to_string(it->second) +
                           ")");
    }
    if (auto label = symbols.Find(word)) vocab.insert(*label);
  }
  return vocab;
}

std::set<Label> ReadVocab(const std::string &path, const SymbolTable &symbols) {
  auto in = OpenInput(path);
  return ReadVocab(in, path, symbols);
}

CombinationParams ReadParams(std::istream &in, const std::string &file) {
  CombinationParams params;
  std::map<std::string, int> seen;
  std::string line;
  int line_no = 0;
  auto real = [&](const std::string &key, const std::string &value) {
    auto v = ParseNumber<double>(value);
    if (!v || !std::isfinite(*v)) {
      throw ParseError(file, line_no,
                       "invalid value '" + value + "' for " + key);
    }
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlankOrComment(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(file, line_no, "expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      throw ParseError(file, line_no, "duplicate key " + key);
    }
    if (key == "lambda_nmt") {
      params.lambda_nmt = real(key, value);
    } else if (key == "lambda_hiero") {
      params.lambda_hiero = real(key, value);
    } else if (key == "lambda_sub") {
      params.lambda_sub = real(key, value);
    } else if (key == "lambda_edit") {
      params.lambda_edit = real(key, value);
    } else if (key == "lambda_ins") {
      params.lambda_ins = real(key, value);
    } else if (key == "max_unk_run") {
      auto v = ParseNumber<int>(value);
      if (!v || *v < 1) {
        throw ParseError(file, line_no, "max_unk_run must be an integer >= 1");
      }
      params.max_unk_run = *v;
    } else if (key == "hiero_node_budget") {
      auto v = ParseNumber<size_t>(value);
      if (!v || *v < 1) {
        throw ParseError(file, line_no,
                         "hiero_node_budget must be an integer >= 1");
      }
      params.hiero_node_budget = *v;
    } else {
      throw ParseError(file, line_no, "unknown key " + key);
    }
  }
  for (const char *key : {"lambda_nmt", "lambda_hiero", "lambda_sub",
                          "lambda_edit", "lambda_ins"}) {
    if (!seen.count(key)) {
      throw ParseError(file, std::max(line_no, 1),
                       std::string("missing required key ") + key);
    }
  }
  auto line_of = [&](const char *key) { return seen.at(key); };
  if (!(params.lambda_edit > params.lambda_sub)) {
    throw ParseError(file,
                     std::max(line_of("lambda_edit"), line_of("lambda_sub")),
                     "lambda_edit must be greater than lambda_sub: other "
                     "edits must cost more than UNK -> in-vocabulary "
                     "substitutions");
  }
  for (const char *key :
       {"lambda_nmt", "lambda_hiero", "lambda_sub", "lambda_ins"}) {
    const double v = key == std::string("lambda_nmt")     ? params.lambda_nmt
                     : key == std::string("lambda_hiero") ? params.lambda_hiero
                     : key == std::string("lambda_sub")   ? params.lambda_sub
                                                          : params.lambda_ins;
    if (v < 0.0) {
      throw ParseError(file, line_of(key), std::string(key) + " must be >= 0");
    }
  }
  return params;
}

CombinationParams ReadParams(const std::string &path) {
  auto in = OpenInput(path);
  return ReadParams(in, path);
}

}  // namespace latcomb
