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

#include "latcomb/errors.h"
#include "latcomb/pipeline.h"

namespace latcomb {

CorpusReport BuildCorpusReport(const std::vector<CombinationResult> &results,
                               const std::vector<Wfst> &hiero,
                               const std::vector<size_t> &n_values) {
  if (results.empty()) throw ContractError("report: no results");
  if (!hiero.empty() && hiero.size() != results.size()) {
    throw ContractError("report: " + std::to_string(hiero.size()) +
                        " Hiero lattices for " +
                        std::to_string(results.size()) + " results");
  }
  if (!n_values.empty() && hiero.empty()) {
    throw ContractError("report: n-best membership needs the Hiero lattices");
  }

  CorpusReport report;
  report.sentences = results.size();
  const double n = static_cast<double>(results.size());
  size_t ext = 0, sub = 0, edit = 0, exact = 0;
  for (const auto &r : results) {
    report.avg_unk_extensions += r.stats.unk_extensions;
    report.avg_type2_subs += r.stats.type2_subs;
    report.avg_type3_edits += r.stats.type3_edits;
    ext += r.stats.unk_extensions > 0;
    sub += r.stats.type2_subs > 0;
    edit += r.stats.type3_edits > 0;
    exact += r.stats.exact_match();
  }
  report.avg_unk_extensions /= n;
  report.avg_type2_subs /= n;
  report.avg_type3_edits /= n;
  report.pct_unk_extensions = 100.0 * ext / n;
  report.pct_type2_subs = 100.0 * sub / n;
  report.pct_type3_edits = 100.0 * edit / n;
  report.pct_exact_match = 100.0 * exact / n;

  if (hiero.empty()) return report;

  const ParamVector hiero_only = ParamVector::Only(kHieroScore);
  const size_t max_n =
      n_values.empty() ? 0 : *std::max_element(n_values.begin(), n_values.end());
  size_t unchanged = 0;
  std::vector<size_t> found(n_values.size(), 0);
  for (size_t i = 0; i < results.size(); ++i) {
    const auto &t_hiero = results[i].t_hiero;
    const PathWitness best = ShortestPath(hiero[i], hiero_only);
    unchanged += OutputLabels(best) == t_hiero;
    if (max_n == 0) continue;
    const auto nbest = NShortestPaths(hiero[i], max_n, hiero_only, true);
    size_t rank = nbest.size();
    for (size_t k = 0; k < nbest.size(); ++k) {
      if (OutputLabels(nbest[k]) == t_hiero) {
        rank = k;
        break;
      }
    }
    for (size_t j = 0; j < n_values.size(); ++j) {
      found[j] += rank < n_values[j];
    }
  }
  report.pct_hiero_unchanged = 100.0 * unchanged / n;
  for (size_t j = 0; j < n_values.size(); ++j) {
    report.nbest_membership[n_values[j]] = 100.0 * found[j] / n;
  }
  return report;
}

void WriteReportKeyValue(const CorpusReport &report, std::ostream &os) {
  os << "sentences=" << report.sentences << '\n'
     << "unk_insertions.avg_per_sentence="
     << FormatDouble(report.avg_unk_extensions) << '\n'
     << "unk_insertions.pct_affected="
     << FormatDouble(report.pct_unk_extensions) << '\n'
     << "type2_substitutions.avg_per_sentence="
     << FormatDouble(report.avg_type2_subs) << '\n'
     << "type2_substitutions.pct_affected="
     << FormatDouble(report.pct_type2_subs) << '\n'
     << "type3_edits.avg_per_sentence=" << FormatDouble(report.avg_type3_edits)
     << '\n'
     << "type3_edits.pct_affected=" << FormatDouble(report.pct_type3_edits)
     << '\n'
     << "exact_match.pct=" << FormatDouble(report.pct_exact_match) << '\n'
     << "hiero_unchanged.pct=" << FormatDouble(report.pct_hiero_unchanged)
     << '\n';
  for (const auto &[n, pct] : report.nbest_membership) {
    os << "nbest_membership." << n << ".pct=" << FormatDouble(pct) << '\n';
  }
}

void WriteReportTable(const CorpusReport &report, std::ostream &os) {
  os << "component\tavg_per_sentence\tpct_affected\n"
     << "unk_insertions\t" << FormatDouble(report.avg_unk_extensions) << '\t'
     << FormatDouble(report.pct_unk_extensions) << '\n'
     << "type2_substitutions\t" << FormatDouble(report.avg_type2_subs) << '\t'
     << FormatDouble(report.pct_type2_subs) << '\n'
     << "type3_edits\t" << FormatDouble(report.avg_type3_edits) << '\t'
     << FormatDouble(report.pct_type3_edits) << '\n';
}

}  // namespace latcomb
