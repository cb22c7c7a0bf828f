#include "slumber/patent.hpp"

#include <algorithm>
#include <set>

#include "slumber/error.hpp"

namespace slumber {

std::string_view to_string(TimingClass c) {
  switch (c) {
    case TimingClass::Earlier: return "Earlier";
    case TimingClass::Same: return "Same";
    case TimingClass::Later: return "Later";
  }
  return "";
}

PatentIndicators compute_indicators(
    const PaperRecord& paper, const CurveProfile& profile,
    std::span<const PatentCitationLink> links,
    const std::map<std::string, PatentFamilyRecord>& families) {
  PatentIndicators ind;
  ind.paper_id = paper.paper_id;
  ind.pub_year = paper.pub_year;
  ind.turning_year = profile.turning_year;

  std::set<std::string> family_ids;
  for (const auto& l : links)
    if (l.paper_id == paper.paper_id) family_ids.insert(l.family_id);

  const PatentFamilyRecord* earliest = nullptr;
  Year latest = 0;
  for (const auto& id : family_ids) {
    auto it = families.find(id);
    if (it == families.end()) throw Error(ErrorKind::UnresolvedFamily, id);
    const auto& f = it->second;
    // ids iterate in ascending order, so strict < keeps the smaller id on ties
    if (!earliest || f.earliest_priority_year < earliest->earliest_priority_year)
      earliest = &f;
    for (auto y : f.filing_years) latest = std::max(latest, y);
    latest = std::max(latest, f.earliest_priority_year);
  }
  ind.n_families = family_ids.size();
  if (!earliest) return ind;

  const Year first = earliest->earliest_priority_year;
  ind.earliest_family_id = earliest->family_id;
  ind.earliest_filing_year = first;
  ind.latest_filing_year = latest;
  ind.durability_years = latest - first;
  ind.forward_cites_of_earliest = earliest->forward_citation_count;
  ind.first_citation_lag = first - paper.pub_year;
  ind.relative_timing = first - profile.turning_year;
  return ind;
}

TimingClass timing_classification(const PatentIndicators& ind) {
  if (ind.n_families == 0 || !ind.relative_timing)
    throw Error(ErrorKind::NoPatentCitations, ind.paper_id);
  if (*ind.relative_timing < 0) return TimingClass::Earlier;
  if (*ind.relative_timing == 0) return TimingClass::Same;
  return TimingClass::Later;
}

PatentFlags patent_flags(const PatentIndicators& ind) {
  return {ind.n_families >= 1, ind.n_families >= 1 && ind.forward_cites_of_earliest >= 1,
          ind.n_families >= 1 && ind.durability_years >= 1};
}

std::vector<LagPoint> lag_series(std::span<const PatentIndicators> indicators,
                                 LagMode mode) {
  std::vector<LagPoint> out;
  for (const auto& ind : indicators) {
    if (ind.n_families == 0 || !ind.earliest_filing_year) continue;
    int lag = mode == LagMode::PubToFirstPatent
                  ? *ind.earliest_filing_year - ind.pub_year
                  : ind.turning_year - *ind.earliest_filing_year;
    out.push_back({ind.paper_id, ind.pub_year, lag});
  }
  std::sort(out.begin(), out.end(), [](const LagPoint& a, const LagPoint& b) {
    if (a.pub_year != b.pub_year) return a.pub_year < b.pub_year;
    return a.paper_id < b.paper_id;
  });
  return out;
}

}  // namespace slumber
