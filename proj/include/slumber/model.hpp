#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slumber {

using Year = int;

struct FieldOfStudy {
  std::string name;
  int level = 0;  // 0 is the top level, 5 the deepest

  bool operator==(const FieldOfStudy&) const = default;
};

struct PaperRecord {
  std::string paper_id;
  Year pub_year = 0;
  std::string title;
  std::string doi;
  std::string pmid;
  std::vector<FieldOfStudy> fields_of_study;

  bool operator==(const PaperRecord&) const = default;
};

struct CitationCountRow {
  std::string paper_id;
  Year year = 0;
  std::int64_t count = 0;

  bool operator==(const CitationCountRow&) const = default;
};

struct PatentFamilyRecord {
  std::string family_id;
  Year earliest_priority_year = 0;
  std::vector<Year> filing_years;  // never empty
  std::int64_t forward_citation_count = 0;
  std::vector<std::string> ipc_codes;

  bool operator==(const PatentFamilyRecord&) const = default;
};

struct PatentCitationLink {
  std::string paper_id;
  std::string family_id;

  bool operator==(const PatentCitationLink&) const = default;
  auto operator<=>(const PatentCitationLink&) const = default;
};

struct ConcordanceEntry {
  std::string ipc_prefix;
  int wipo_field_id = 0;  // 1..35
  std::string wipo_field_name;
  std::string sector;

  bool operator==(const ConcordanceEntry&) const = default;
};

struct CitationContextRecord {
  std::string citing_id;
  std::string cited_paper_id;
  Year year = 0;
  std::string sentence;

  bool operator==(const CitationContextRecord&) const = default;
};

/// Dense yearly citation counts; counts[t] is the number of citations
/// received t years after publication (t = 0 is the publication year).
struct CitationSeries {
  std::string paper_id;
  Year base_year = 0;
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;

  int t_max() const { return static_cast<int>(counts.size()) - 1; }
  Year end_year() const { return base_year + t_max(); }
};

struct Dataset {
  std::map<std::string, PaperRecord> papers;
  std::map<std::string, CitationSeries> series;
  std::map<std::string, PatentFamilyRecord> patents;
  std::vector<PatentCitationLink> links;
  std::vector<ConcordanceEntry> concordance;
  std::optional<std::vector<CitationContextRecord>> contexts;
  Year window_end = 0;
};

}  // namespace slumber
