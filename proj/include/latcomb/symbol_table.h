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

#ifndef LATCOMB_SYMBOL_TABLE_H_
#define LATCOMB_SYMBOL_TABLE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace latcomb {

using Label = int32_t;

// Fixed in every table.
inline constexpr Label kEpsilon = 0;
inline constexpr Label kUnk = 1;
inline constexpr std::string_view kEpsilonWord = "<eps>";
inline constexpr std::string_view kUnkWord = "UNK";

// Bijective word <-> label mapping. Labels need not be dense.
class SymbolTable {
 public:
  SymbolTable();

  // Returns the label of `word`, assigning the next free label if new.
  Label AddSymbol(std::string_view word);
  // Registers `word` under `label`. Throws ContractError if either side is
  // already bound to something else, or if a reserved label is rebound.
  void AddSymbol(std::string_view word, Label label);

  std::optional<Label> Find(std::string_view word) const;
  std::optional<std::string> FindWord(Label label) const;
  bool HasLabel(Label label) const { return words_.count(label) > 0; }

  // Throws ContractError for unknown entries.
  Label LabelOf(std::string_view word) const;
  const std::string &WordOf(Label label) const;

  size_t size() const { return words_.size(); }
  // All labels, ascending.
  std::vector<Label> Labels() const;

  std::vector<Label> ToLabels(std::span<const std::string> words) const;
  std::vector<std::string> ToWords(std::span<const Label> labels) const;
  // Space-joined words.
  std::string Render(std::span<const Label> labels) const;

  friend bool operator==(const SymbolTable &a, const SymbolTable &b) {
    return a.words_ == b.words_;
  }

 private:
  std::unordered_map<std::string, Label> labels_;
  std::unordered_map<Label, std::string> words_;
  Label next_ = 2;
};

// Splits on ASCII whitespace.
std::vector<std::string> SplitWords(std::string_view text);

}  // namespace latcomb

#endif  // LATCOMB_SYMBOL_TABLE_H_
