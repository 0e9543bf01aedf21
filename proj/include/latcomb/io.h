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
// Text formats.
//
// Lattice: one line per arc or final state, '#' starts a comment line.
//   src dst ilabel olabel [weight]
//   state [weight]
// The first state mentioned is initial. States are renumbered densely in
// order of first mention. A missing weight is One(); weights use the
// FeatureWeight text form ("0:1.5,2:2", "INF").
//
// Symbol table: "word<TAB>id" per line. Ids 0 and 1 are always <eps> and
// UNK.
//
// Vocabulary: one NMT in-vocabulary word per line.
//
// Parameters: "key=value" per line with keys lambda_nmt, lambda_hiero,
// lambda_sub, lambda_edit, lambda_ins (required) and max_unk_run,
// hiero_node_budget (optional).

#ifndef LATCOMB_IO_H_
#define LATCOMB_IO_H_

#include <istream>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "latcomb/pipeline.h"
#include "latcomb/symbol_table.h"
#include "latcomb/wfst.h"

namespace latcomb {

// A parsed machine with the source line of every arc and final weight.
struct LatticeSource {
  Wfst fst;
  std::string file;
  std::vector<std::vector<int>> arc_lines;
  std::vector<int> final_lines;
  int last_line = 0;

  // Best source line for a diagnostic.
  int LineOf(const Diagnostic &d) const;
};

// Parses the format only; no semantic checks. Throws ParseError.
LatticeSource ParseLattice(std::istream &in, const std::string &file);
LatticeSource ParseLatticeFile(const std::string &path);

// Parses and enforces the contract for `kind`: labels known to `symbols`
// (when given), acceptor form and acyclicity for translation lattices, and
// no UNK in Hiero lattices. Throws ParseError naming the offending line.
Wfst ReadLattice(const std::string &path,
                 std::shared_ptr<const SymbolTable> symbols,
                 LatticeKind kind);
Wfst ReadLattice(std::istream &in, const std::string &file,
                 std::shared_ptr<const SymbolTable> symbols,
                 LatticeKind kind);

// Deterministic output: the initial state first, then the remaining states
// ascending; arcs by (ilabel, olabel, target). Throws ContractError if the
// machine has no initial state.
void WriteLattice(const Wfst &fst, std::ostream &out);
void WriteLattice(const Wfst &fst, const std::string &path);

SymbolTable ReadSymbolTable(std::istream &in, const std::string &file);
SymbolTable ReadSymbolTable(const std::string &path);
void WriteSymbolTable(const SymbolTable &symbols, std::ostream &out);

// Labels of the listed words. Words missing from `symbols` cannot occur in
// any lattice and are skipped.
std::set<Label> ReadVocab(std::istream &in, const std::string &file,
                          const SymbolTable &symbols);
std::set<Label> ReadVocab(const std::string &path, const SymbolTable &symbols);

// Lambdas and budgets; nmt_vocab is left empty.
CombinationParams ReadParams(std::istream &in, const std::string &file);
CombinationParams ReadParams(const std::string &path);

}  // namespace latcomb

#endif  // LATCOMB_IO_H_
