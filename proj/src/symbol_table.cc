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

#include "latcomb/symbol_table.h"

#include <algorithm>

#include "latcomb/errors.h"

namespace latcomb {

SymbolTable::SymbolTable() {
  AddSymbol(kEpsilonWord, kEpsilon);
  AddSymbol(kUnkWord, kUnk);
}

Label SymbolTable::AddSymbol(std::string_view word) {
  if (auto it = labels_.find(std::string(word)); it != labels_.end()) {
    return it->second;
  }
  while (words_.count(next_)) ++next_;
  const Label label = next_++;
  AddSymbol(word, label);
  return label;
}

void SymbolTable::AddSymbol(std::string_view word, Label label) {
  const std::string key(word);
  if (label < 0) throw ContractError("negative label for '" + key + "'");
  if (key.empty()) throw ContractError("empty symbol");
  auto lit = labels_.find(key);
  auto wit = words_.find(label);
  if (lit != labels_.end() && wit != words_.end() && lit->second == label) {
    return;
  }
  if (lit != labels_.end()) {
    throw ContractError("symbol '" + key + "' already has label " +
                        std::to_string(lit->second));
  }
  if (wit != words_.end()) {
    throw ContractError("label " + std::to_string(label) +
                        " already bound to '" + wit->second + "'");
  }
  labels_.emplace(key, label);
  words_.emplace(label, key);
}

std::optional<Label> SymbolTable::Find(std::string_view word) const {
  auto it = labels_.find(std::string(word));
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> SymbolTable::FindWord(Label label) const {
  auto it = words_.find(label);
  if (it == words_.end()) return std::nullopt;
  return it->second;
}

Label SymbolTable::LabelOf(std::string_view word) const {
  auto it = labels_.find(std::string(word));
  if (it == labels_.end()) {
    throw ContractError("unknown symbol '" + std::string(word) + "'");
  }
  return it->second;
}

const std::string &SymbolTable::WordOf(Label label) const {
  auto it = words_.find(label);
  if (it == words_.end()) {
    throw ContractError("unknown label " + std::to_string(label));
  }
  return it->second;
}

std::vector<Label> SymbolTable::Labels() const {
  std::vector<Label> out;
  out.reserve(words_.size());
  for (const auto &entry : words_) out.push_back(entry.first);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Label> SymbolTable::ToLabels(
    std::span<const std::string> words) const {
  std::vector<Label> out;
  out.reserve(words.size());
  for (const auto &w : words) out.push_back(LabelOf(w));
  return out;
}

std::vector<std::string> SymbolTable::ToWords(
    std::span<const Label> labels) const {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (Label l : labels) out.push_back(WordOf(l));
  return out;
}

std::string SymbolTable::Render(std::span<const Label> labels) const {
  std::string out;
  for (Label l : labels) {
    if (!out.empty()) out += ' ';
    out += WordOf(l);
  }
  return out;
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace latcomb
