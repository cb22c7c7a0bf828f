#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slumber/curve.hpp"
#include "slumber/model.hpp"

namespace slumber {

/// Patent-linkage measures for one paper. The "first patent citing year" is
/// the earliest priority year among the citing families.
struct PatentIndicators {
  std::string paper_id;
  Year pub_year = 0;
  Year turning_year = 0;
  std::size_t n_families = 0;
  std::optional<std::string> earliest_family_id;
  std::optional<Year> earliest_filing_year;
  std::optional<Year> latest_filing_year;
  int durability_years = 0;
  std::int64_t forward_cites_of_earliest = 0;
  std::optional<int> first_citation_lag;  // earliest filing - pub year
  std::optional<int> relative_timing;     // earliest filing - turning year
};

enum class TimingClass { Earlier, Same, Later };
std::string_view to_string(TimingClass c);

/// Links for other papers are ignored and repeated families count once.
/// Throws Error(UnresolvedFamily) for a family missing from `families`.
PatentIndicators compute_indicators(
    const PaperRecord& paper, const CurveProfile& profile,
    std::span<const PatentCitationLink> links,
    const std::map<std::string, PatentFamilyRecord>& families);

/// Throws Error(NoPatentCitations) when the paper has no citing family.
TimingClass timing_classification(const PatentIndicators& indicators);

/// Yes/no outcomes that feed the DR vs IR comparison.
struct PatentFlags {
  bool cited_by_patents = false;            // n_families >= 1
  bool earliest_has_forward_cites = false;  // forward cites of earliest >= 1
  bool durable = false;                     // durability >= 1 year
};
PatentFlags patent_flags(const PatentIndicators& indicators);

enum class LagMode {
  PubToFirstPatent,       // earliest filing - pub year
  FirstPatentToTurning,   // turning year - earliest filing
};

struct LagPoint {
  std::string paper_id;
  Year pub_year = 0;
  int lag = 0;
};

/// Papers without patent citations are skipped; output is sorted by
/// publication year, then paper id.
std::vector<LagPoint> lag_series(std::span<const PatentIndicators> indicators,
                                 LagMode mode);

}  // namespace slumber
