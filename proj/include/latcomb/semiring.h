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
// Weight algebra: the scalar tropical semiring and the tropical sparse
// tuple vector semiring.
//
// A FeatureWeight is a sparse vector of feature values. Times adds vectors
// componentwise. Plus keeps the operand whose inner product with a
// ParamVector is smaller; the ParamVector is passed at call time so one
// machine can be searched under several parameter settings.
//
// Ties in Plus are broken by comparing the two vectors lexicographically
// in dense form: feature values are compared in ascending id order, an
// absent id counting as 0.0, and the smaller value wins. This order is
// translation invariant (a < b implies a + c < b + c), so Times
// distributes over Plus including on ties.

#ifndef LATCOMB_SEMIRING_H_
#define LATCOMB_SEMIRING_H_

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace latcomb {

using FeatureId = int32_t;

// Reserved feature ids.
inline constexpr FeatureId kNmtScore = 0;
inline constexpr FeatureId kHieroScore = 1;
inline constexpr FeatureId kEditCount = 2;    // Type III edits
inline constexpr FeatureId kSubCount = 3;     // Type II substitutions
inline constexpr FeatureId kUnkExtCount = 4;  // extra UNK arcs taken in U
inline constexpr int kNumFeatures = 5;

// Entries with magnitude below this are dropped from canonical form.
inline constexpr double kCanonicalEpsilon = 1e-15;

class TropicalWeight {
 public:
  constexpr TropicalWeight() : value_(0.0) {}
  constexpr explicit TropicalWeight(double value) : value_(value) {}

  static constexpr TropicalWeight Zero() {
    return TropicalWeight(std::numeric_limits<double>::infinity());
  }
  static constexpr TropicalWeight One() { return TropicalWeight(0.0); }

  constexpr double value() const { return value_; }
  constexpr bool is_zero() const {
    return value_ == std::numeric_limits<double>::infinity();
  }

  friend constexpr TropicalWeight Plus(TropicalWeight a, TropicalWeight b) {
    return a.value_ <= b.value_ ? a : b;
  }
  friend constexpr TropicalWeight Times(TropicalWeight a, TropicalWeight b) {
    return TropicalWeight(a.value_ + b.value_);
  }
  friend constexpr bool operator==(TropicalWeight, TropicalWeight) = default;

 private:
  double value_;
};

// Per-feature multipliers. Ids beyond the stored range multiply by 0.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::vector<double> values)
      : values_(std::move(values)) {}

  static ParamVector Named(double nmt, double hiero, double edit, double sub,
                           double ins) {
    return ParamVector({nmt, hiero, edit, sub, ins});
  }
  // Unit multiplier on every reserved feature.
  static ParamVector Uniform(double value = 1.0) {
    return ParamVector(std::vector<double>(kNumFeatures, value));
  }
  // Multiplier 1 on `id`, 0 elsewhere.
  static ParamVector Only(FeatureId id, double value = 1.0);

  double operator[](FeatureId id) const {
    return id >= 0 && static_cast<size_t>(id) < values_.size() ? values_[id]
                                                               : 0.0;
  }
  void set(FeatureId id, double value);
  size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;
  bool all_nonnegative() const;

 private:
  std::vector<double> values_;
};

class FeatureWeight {
 public:
  using Entry = std::pair<FeatureId, double>;

  // The empty vector, i.e. the semiring one.
  FeatureWeight() = default;
  // Builds a canonical weight from unsorted entries; duplicate ids add up.
  FeatureWeight(std::initializer_list<Entry> entries);
  explicit FeatureWeight(std::vector<Entry> entries);

  static FeatureWeight Zero();
  static FeatureWeight One() { return FeatureWeight(); }
  static FeatureWeight Unit(FeatureId id, double value = 1.0) {
    return FeatureWeight({{id, value}});
  }

  bool is_zero() const { return zero_; }
  bool is_one() const { return !zero_ && entries_.empty(); }
  // Value of feature `id`; 0.0 if absent. Undefined for Zero().
  double get(FeatureId id) const;
  std::span<const Entry> entries() const { return entries_; }

  // Exact structural equality of the canonical forms.
  friend bool operator==(const FeatureWeight &a,
                         const FeatureWeight &b) = default;

 private:
  void Canonicalize();

  std::vector<Entry> entries_;
  bool zero_ = false;
};

// Inner product with `p`; +infinity for Zero().
TropicalWeight Scalarize(const FeatureWeight &w, const ParamVector &p);

// Strict total order used by Plus: scalarization first, then the dense
// lexicographic tie rule. Zero() is greater than every other weight.
bool NaturalLess(const FeatureWeight &a, const FeatureWeight &b,
                 const ParamVector &p);

FeatureWeight Plus(const FeatureWeight &a, const FeatureWeight &b,
                   const ParamVector &p);
FeatureWeight Times(const FeatureWeight &a, const FeatureWeight &b);

// Multiplies feature `id` by `factor`.
FeatureWeight ScaleFeature(const FeatureWeight &w, FeatureId id,
                           double factor);

// Componentwise comparison within `tolerance`; both-Zero compares equal.
bool ApproxEqual(const FeatureWeight &a, const FeatureWeight &b,
                 double tolerance);

// Text form: "0:1.5,2:2"; "" is One(), "INF" is Zero().
std::string ToString(const FeatureWeight &w);
// Throws ContractError on malformed text.
FeatureWeight ParseFeatureWeight(std::string_view text);

std::ostream &operator<<(std::ostream &os, const FeatureWeight &w);

// Shortest decimal form of a double that parses back exactly.
std::string FormatDouble(double value);

}  // namespace latcomb

#endif  // LATCOMB_SEMIRING_H_
