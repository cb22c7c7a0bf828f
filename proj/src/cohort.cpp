#include "slumber/cohort.hpp"

#include <algorithm>
#include <cmath>

#include "slumber/error.hpp"

namespace slumber {

void CohortConfig::validate() const {
  if (pub_year_min > pub_year_max)
    throw Error(ErrorKind::InvalidConfig, "pub_year_min > pub_year_max");
  if (pub_year_max >= window_end)
    throw Error(ErrorKind::InvalidConfig, "pub_year_max must precede window_end");
  if (min_total_citations < 1)
    throw Error(ErrorKind::InvalidConfig, "min_total_citations must be positive");
  if (!(fraction > 0.0 && fraction <= 0.5))
    throw Error(ErrorKind::InvalidConfig, "fraction must lie in (0, 0.5]");
}

bool is_eligible(const CurveProfile& p, const CohortConfig& c) {
  return p.base_year >= c.pub_year_min && p.base_year <= c.pub_year_max &&
         p.total_citations >= c.min_total_citations;
}

std::size_t cohort_size(std::size_t eligible, double fraction) {
  // Guard against 0.01 * 20000 landing a hair above 200 in binary.
  double raw = fraction * static_cast<double>(eligible);
  double nearest = std::round(raw);
  if (std::abs(raw - nearest) < 1e-9) raw = nearest;
  return std::min(eligible, static_cast<std::size_t>(std::ceil(raw)));
}

CohortResult select_cohorts(std::span<const CurveProfile> profiles,
                            const CohortConfig& config) {
  config.validate();
  std::vector<const CurveProfile*> eligible;
  for (const auto& p : profiles)
    if (is_eligible(p, config)) eligible.push_back(&p);
  if (eligible.empty())
    throw Error(ErrorKind::EmptyEligibleSet, "no paper passes the eligibility filter");

  // Exact comparison keeps the ranking independent of float rounding.
  std::sort(eligible.begin(), eligible.end(),
            [](const CurveProfile* a, const CurveProfile* b) {
              __extension__ typedef __int128 Wide;
              Wide lhs = Wide{a->bcp_exact.num} * b->bcp_exact.den;
              Wide rhs = Wide{b->bcp_exact.num} * a->bcp_exact.den;
              if (lhs != rhs) return lhs > rhs;
              return a->paper_id < b->paper_id;
            });

  CohortResult r;
  r.eligible_count = eligible.size();
  r.ranked.reserve(eligible.size());
  for (const auto* p : eligible) r.ranked.push_back({p->paper_id, p->bcp});

  const auto k = cohort_size(eligible.size(), config.fraction);
  for (std::size_t i = 0; i < k; ++i) r.dr_set.push_back(r.ranked[i].paper_id);
  for (std::size_t i = r.ranked.size() - k; i < r.ranked.size(); ++i)
    r.ir_set.push_back(r.ranked[i].paper_id);
  return r;
}

std::map<std::string, double> citation_percentile(
    std::span<const std::pair<std::string, std::int64_t>> totals) {
  std::map<std::string, double> out;
  const auto n = totals.size();
  if (n == 0) return out;
  if (n == 1) {
    out[totals[0].first] = 100.0;
    return out;
  }
  std::vector<std::int64_t> sorted;
  sorted.reserve(n);
  for (const auto& [id, total] : totals) sorted.push_back(total);
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [id, total] : totals) {
    auto smaller = std::lower_bound(sorted.begin(), sorted.end(), total) - sorted.begin();
    out[id] = 100.0 * static_cast<double>(smaller) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace slumber
