#include "slumber/interact.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "slumber/error.hpp"

namespace slumber {

std::string normalize_ipc(std::string_view code) {
  std::string out;
  out.reserve(code.size());
  for (unsigned char c : code) {
    if (std::isspace(c)) continue;
    out.push_back(static_cast<char>(std::toupper(c)));
  }
  return out;
}

WipoField map_ipc_to_wipo(std::string_view ipc_code,
                          std::span<const ConcordanceEntry> concordance) {
  const auto symbol = normalize_ipc(ipc_code);
  const ConcordanceEntry* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& e : concordance) {
    auto prefix = normalize_ipc(e.ipc_prefix);
    if (prefix.empty() || (best && prefix.size() <= best_len)) continue;
    if (symbol.starts_with(prefix)) {
      best = &e;
      best_len = prefix.size();
    }
  }
  if (!best) throw Error(ErrorKind::UnmappedIpc, std::string(ipc_code));
  return {best->wipo_field_id, best->wipo_field_name, best->sector};
}

std::vector<std::string> top_level_fields(const PaperRecord& paper) {
  std::vector<std::string> out;
  for (const auto& f : paper.fields_of_study)
    if (f.level == 0 && std::find(out.begin(), out.end(), f.name) == out.end())
      out.push_back(f.name);
  return out;
}

double FieldDistribution::percent(const std::string& field) const {
  if (total_papers == 0) return 0.0;
  auto it = counts.find(field);
  if (it == counts.end()) return 0.0;
  return 100.0 * static_cast<double>(it->second) / static_cast<double>(total_papers);
}

FieldDistribution field_distribution(std::span<const PaperRecord> papers) {
  FieldDistribution d;
  d.total_papers = papers.size();
  for (const auto& p : papers) {
    d.total_assignments += p.fields_of_study.size();
    auto top = top_level_fields(p);
    if (top.empty()) {
      ++d.counts[kUnclassified];
      continue;
    }
    for (const auto& f : top) ++d.counts[f];
  }
  return d;
}

InteractionBuild interaction_matrix(
    std::span<const PaperRecord> cohort,
    const std::map<std::string, PatentIndicators>& indicators,
    const std::map<std::string, PatentFamilyRecord>& families,
    std::span<const ConcordanceEntry> concordance) {
  InteractionBuild out;
  auto& m = out.matrix;
  for (const auto& paper : cohort) {
    auto ind = indicators.find(paper.paper_id);
    if (ind == indicators.end() || ind->second.n_families == 0 ||
        !ind->second.earliest_family_id)
      continue;
    auto fam = families.find(*ind->second.earliest_family_id);
    if (fam == families.end()) {
      out.warnings.push_back("UnresolvedFamily: " + *ind->second.earliest_family_id +
                             " for paper " + paper.paper_id);
      continue;
    }
    std::set<int> wipo_ids;
    for (const auto& code : fam->second.ipc_codes) {
      try {
        auto w = map_ipc_to_wipo(code, concordance);
        wipo_ids.insert(w.id);
        m.wipo_fields.emplace(w.id, w);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnmappedIpc) throw;
        out.warnings.push_back(std::string(e.what()) + " in family " +
                               fam->second.family_id);
      }
    }
    for (const auto& field : top_level_fields(paper)) {
      for (int id : wipo_ids) {
        ++m.cells[{field, id}];
        ++m.row_totals[field];
        ++m.column_totals[id];
        ++m.total;
      }
    }
  }
  return out;
}

}  // namespace slumber
