#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slumber/curve.hpp"
#include "slumber/model.hpp"

namespace slumber {

struct CohortConfig {
  Year pub_year_min = 1970;
  Year pub_year_max = 2005;
  Year window_end = 2015;
  std::int64_t min_total_citations = 200;
  double fraction = 0.01;  // (0, 0.5]

  /// Throws Error(InvalidConfig) when a field breaks its bounds.
  void validate() const;
};

struct RankedPaper {
  std::string paper_id;
  double bcp = 0.0;
};

struct CohortResult {
  std::size_t eligible_count = 0;
  std::vector<RankedPaper> ranked;  // Bcp descending, ties by paper_id
  std::vector<std::string> dr_set;  // head of the ranking, in rank order
  std::vector<std::string> ir_set;  // tail of the ranking, in rank order
};

bool is_eligible(const CurveProfile& profile, const CohortConfig& config);

/// Delayed-recognition cohort = top ceil(fraction * N) by Bcp, instant
/// cohort = bottom ceil(fraction * N). Ineligible profiles are dropped.
/// Throws Error(EmptyEligibleSet) when nothing qualifies.
CohortResult select_cohorts(std::span<const CurveProfile> profiles,
                            const CohortConfig& config);

std::size_t cohort_size(std::size_t eligible, double fraction);

/// 100 * (#papers with a strictly smaller total) / (N - 1); a lone paper
/// gets 100.
std::map<std::string, double> citation_percentile(
    std::span<const std::pair<std::string, std::int64_t>> totals);

}  // namespace slumber
