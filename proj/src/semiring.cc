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

#include "latcomb/semiring.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "latcomb/errors.h"

namespace latcomb {

ParamVector ParamVector::Only(FeatureId id, double value) {
  ParamVector p;
  p.set(id, value);
  return p;
}

void ParamVector::set(FeatureId id, double value) {
  if (id < 0) throw ContractError("negative feature id");
  if (static_cast<size_t>(id) >= values_.size()) values_.resize(id + 1, 0.0);
  values_[id] = value;
}

bool ParamVector::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool ParamVector::all_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v >= 0.0; });
}

FeatureWeight::FeatureWeight(std::initializer_list<Entry> entries)
    : entries_(entries) {
  Canonicalize();
}

FeatureWeight::FeatureWeight(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  Canonicalize();
}

FeatureWeight FeatureWeight::Zero() {
  FeatureWeight w;
  w.zero_ = true;
  return w;
}

double FeatureWeight::get(FeatureId id) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), id,
      [](const Entry &e, FeatureId key) { return e.first < key; });
  return it != entries_.end() && it->first == id ? it->second : 0.0;
}

void FeatureWeight::Canonicalize() {
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry &a, const Entry &b) {
                     return a.first < b.first;
                   });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (const Entry &e : entries_) {
    if (e.first < 0) throw ContractError("negative feature id");
    if (!merged.empty() && merged.back().first == e.first) {
      merged.back().second += e.second;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const Entry &e) {
    return std::fabs(e.second) < kCanonicalEpsilon;
  });
  entries_ = std::move(merged);
}

TropicalWeight Scalarize(const FeatureWeight &w, const ParamVector &p) {
  if (w.is_zero()) return TropicalWeight::Zero();
  double total = 0.0;
  for (const auto &[id, value] : w.entries()) total += p[id] * value;
  return TropicalWeight(total);
}

namespace {

// Dense lexicographic comparison: -1, 0 or 1.
int CompareDense(const FeatureWeight &a, const FeatureWeight &b) {
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    double va = 0.0, vb = 0.0;
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      va = (ia++)->second;
    } else if (ia == ea || ib->first < ia->first) {
      vb = (ib++)->second;
    } else {
      va = (ia++)->second;
      vb = (ib++)->second;
    }
    if (va < vb) return -1;
    if (vb < va) return 1;
  }
  return 0;
}

}  // namespace

bool NaturalLess(const FeatureWeight &a, const FeatureWeight &b,
                 const ParamVector &p) {
  if (a.is_zero()) return false;
  if (b.is_zero()) return true;
  const double sa = Scalarize(a, p).value();
  const double sb = Scalarize(b, p).value();
  if (sa < sb) return true;
  if (sb < sa) return false;
  return CompareDense(a, b) < 0;
}

FeatureWeight Plus(const FeatureWeight &a, const FeatureWeight &b,
                   const ParamVector &p) {
  return NaturalLess(b, a, p) ? b : a;
}

FeatureWeight Times(const FeatureWeight &a, const FeatureWeight &b) {
  if (a.is_zero() || b.is_zero()) return FeatureWeight::Zero();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  std::vector<FeatureWeight::Entry> sum;
  sum.reserve(a.entries().size() + b.entries().size());
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      sum.push_back(*ia++);
    } else if (ia == ea || ib->first < ia->first) {
      sum.push_back(*ib++);
    } else {
      sum.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return FeatureWeight(std::move(sum));
}

FeatureWeight ScaleFeature(const FeatureWeight &w, FeatureId id,
                           double factor) {
  if (w.is_zero()) return w;
  std::vector<FeatureWeight::Entry> scaled(w.entries().begin(),
                                           w.entries().end());
  for (auto &e : scaled) {
    if (e.first == id) e.second *= factor;
  }
  return FeatureWeight(std::move(scaled));
}

bool ApproxEqual(const FeatureWeight &a, const FeatureWeight &b,
                 double tolerance) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() == b.is_zero();
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    double va = 0.0, vb = 0.0;
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      va = (ia++)->second;
    } else if (ia == ea || ib->first < ia->first) {
      vb = (ib++)->second;
    } else {
      va = (ia++)->second;
      vb = (ib++)->second;
    }
    if (std::fabs(va - vb) > tolerance) return false;
  }
  return true;
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, end);
}

std::string ToString(const FeatureWeight &w) {
  if (w.is_zero()) return "INF";
  std::string out;
  for (const auto &[id, value] : w.entries()) {
    if (!out.empty()) out += ',';
    out += std::to_string(id);
    out += ':';
    out += FormatDouble(value);
  }
  return out;
}

FeatureWeight ParseFeatureWeight(std::string_view text) {
  if (text == "INF") return FeatureWeight::Zero();
  std::vector<FeatureWeight::Entry> entries;
  if (text.empty()) return FeatureWeight();
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ContractError("malformed weight entry '" + std::string(item) +
                          "' (expected id:value)");
    }
    FeatureId id = 0;
    double value = 0.0;
    std::string_view id_text = item.substr(0, colon);
    std::string_view value_text = item.substr(colon + 1);
    auto r1 = std::from_chars(id_text.data(), id_text.data() + id_text.size(),
                              id);
    auto r2 = std::from_chars(value_text.data(),
                              value_text.data() + value_text.size(), value);
    if (r1.ec != std::errc() || r1.ptr != id_text.data() + id_text.size() ||
        id < 0) {
      throw ContractError("malformed feature id in '" + std::string(item) +
                          "'");
    }
    if (r2.ec != std::errc() ||
        r2.ptr != value_text.data() + value_text.size() ||
        !std::isfinite(value)) {
      throw ContractError("malformed feature value in '" + std::string(item) +
                          "'");
    }
    for (const auto &e : entries) {
      if (e.first == id) {
        throw ContractError("duplicate feature id " + std::to_string(id));
      }
    }
    entries.emplace_back(id, value);
    pos = comma + 1;
  }
  return FeatureWeight(std::move(entries));
}

std::ostream &operator<<(std::ostream &os, const FeatureWeight &w) {
  const std::string text = ToString(w);
  return os << (text.empty() ? "{}" : text);
}

}  // namespace latcomb
