#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "slumber/curve.hpp"
#include "slumber/error.hpp"
#include "slumber/patent.hpp"
#include "slumber/stats.hpp"

using namespace slumber;

namespace {

CurveProfile profile_with_turning(const std::string& id, Year pub, Year turning) {
  CurveProfile p;
  p.paper_id = id;
  p.base_year = pub;
  p.turning_year = turning;
  p.turning_t = turning - pub;
  return p;
}

PatentIndicators indicators_for(Year pub, Year turning, std::vector<PatentFamilyRecord> fams,
                                const std::string& id = "p") {
  PaperRecord paper{id, pub, "", "", "", {}};
  std::map<std::string, PatentFamilyRecord> by_id;
  std::vector<PatentCitationLink> links;
  for (auto& f : fams) {
    links.push_back({id, f.family_id});
    by_id[f.family_id] = f;
  }
  return compute_indicators(paper, profile_with_turning(id, pub, turning), links, by_id);
}

}  // namespace

TEST_CASE("compute_indicators: two families, earliest by priority") {
  auto ind = indicators_for(1970, 1987,
                            {{"f1", 1986, {1986, 1994}, 64, {}}, {"f2", 2002, {2002}, 50, {}}});
  CHECK(ind.n_families == 2);
  CHECK(ind.earliest_filing_year == 1986);
  CHECK(ind.earliest_family_id == "f1");
  CHECK(ind.forward_cites_of_earliest == 64);
  CHECK(ind.first_citation_lag == 16);
  CHECK(ind.latest_filing_year == 2002);
  CHECK(ind.durability_years == 16);
}

TEST_CASE("compute_indicators: no families and single-year citing") {
  auto none = indicators_for(1990, 1995, {});
  CHECK(none.n_families == 0);
  CHECK_FALSE(none.earliest_filing_year.has_value());
  CHECK_FALSE(none.latest_filing_year.has_value());
  CHECK_FALSE(none.first_citation_lag.has_value());
  CHECK_FALSE(none.relative_timing.has_value());
  CHECK_THROWS_AS(timing_classification(none), Error);

  auto one = indicators_for(1980, 1985, {{"f", 1990, {1990}, 0, {}}});
  CHECK(one.durability_years == 0);
  CHECK_FALSE(patent_flags(one).durable);
  CHECK_FALSE(patent_flags(one).earliest_has_forward_cites);
  CHECK(patent_flags(one).cited_by_patents);
}

TEST_CASE("compute_indicators: ties, duplicates and missing families") {
  PaperRecord paper{"p", 1980, "", "", "", {}};
  std::map<std::string, PatentFamilyRecord> fams{{"fb", {"fb", 1990, {1990}, 1, {}}},
                                                 {"fa", {"fa", 1990, {1990}, 7, {}}}};
  std::vector<PatentCitationLink> links{{"p", "fb"}, {"p", "fa"}, {"p", "fa"}, {"q", "fb"}};
  auto ind = compute_indicators(paper, profile_with_turning("p", 1980, 1985), links, fams);
  CHECK(ind.n_families == 2);
  CHECK(ind.earliest_family_id == "fa");
  CHECK(ind.forward_cites_of_earliest == 7);

  links.push_back({"p", "missing"});
  try {
    compute_indicators(paper, profile_with_turning("p", 1980, 1985), links, fams);
    FAIL("expected UnresolvedFamily");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnresolvedFamily);
  }
}

TEST_CASE("timing_classification") {
  auto earlier = indicators_for(1975, 1982, {{"f", 1980, {1980}, 0, {}}});
  CHECK(timing_classification(earlier) == TimingClass::Earlier);
  CHECK(earlier.relative_timing == -2);
  auto same = indicators_for(1975, 1982, {{"f", 1982, {1982}, 0, {}}});
  CHECK(timing_classification(same) == TimingClass::Same);
  auto later = indicators_for(1975, 1982, {{"f", 1990, {1990}, 0, {}}});
  CHECK(timing_classification(later) == TimingClass::Later);
}

TEST_CASE("lag_series: modes, exclusion and order") {
  std::vector<PatentIndicators> inds{
      indicators_for(1976, 1982, {{"f1", 1980, {1980}, 0, {}}}, "b"),
      indicators_for(1975, 1990, {}, "c"),
      indicators_for(1970, 1990, {{"f2", 1985, {1985}, 0, {}}}, "a"),
  };
  auto m1 = lag_series(inds, LagMode::PubToFirstPatent);
  REQUIRE(m1.size() == 2);
  CHECK(m1[0].paper_id == "a");
  CHECK(m1[0].lag == 15);
  CHECK(m1[1].lag == 4);
  auto m2 = lag_series(inds, LagMode::FirstPatentToTurning);
  CHECK(m2[1].paper_id == "b");
  CHECK(m2[1].lag == 2);
}

TEST_CASE("lag summaries match reference ranges") {
  // 99 DR lags: min 0, max 41, median 14
  std::vector<double> dr{0, 14, 41};
  for (int i = 1; i <= 48; ++i) dr.push_back(i % 14);
  for (int i = 0; i < 48; ++i) dr.push_back(15 + i % 27);
  REQUIRE(dr.size() == 99);
  auto s = stats::summary_stats(dr);
  CHECK(s.min == 0);
  CHECK(s.max == 41);
  CHECK(s.median == 14);

  // 70 IR lags: min -28, max 16, median 4.5
  std::vector<double> ir{-28, 16, 4, 5};
  for (int i = 0; i < 33; ++i) ir.push_back(-27 + i % 31);
  for (int i = 0; i < 33; ++i) ir.push_back(6 + i % 10);
  REQUIRE(ir.size() == 70);
  auto t = stats::summary_stats(ir);
  CHECK(t.min == -28);
  CHECK(t.max == 16);
  CHECK(t.median == 4.5);
}

TEST_CASE("property: added families move the filing span outward") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 200; ++round) {
    std::vector<PatentFamilyRecord> fams;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      Year prio = 1980 + static_cast<Year>(rng() % 30);
      std::vector<Year> filings{prio};
      if (rng() % 2) filings.push_back(prio + static_cast<Year>(rng() % 6));
      fams.push_back({"f" + std::to_string(i), prio, filings, static_cast<std::int64_t>(rng() % 3), {}});
    }
    auto before = indicators_for(1975, 1990, {fams.begin(), fams.end() - 1});
    auto after = indicators_for(1975, 1990, fams);
    CHECK(after.n_families == static_cast<std::size_t>(n));
    if (before.n_families == 0) continue;
    CHECK(*after.earliest_filing_year <= *before.earliest_filing_year);
    CHECK(*after.latest_filing_year >= *before.latest_filing_year);
    CHECK(after.durability_years >= before.durability_years);
    CHECK((timing_classification(after) == TimingClass::Earlier) == (*after.relative_timing < 0));
  }
}
