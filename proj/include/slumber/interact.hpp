#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slumber/model.hpp"
#include "slumber/patent.hpp"

namespace slumber {

struct WipoField {
  int id = 0;  // 1..35
  std::string name;
  std::string sector;

  bool operator==(const WipoField&) const = default;
};

/// Uppercased with all whitespace removed: "c12n 15/09" -> "C12N15/09".
std::string normalize_ipc(std::string_view code);

/// Longest concordance prefix matching the normalized symbol. Entries are
/// expected in load_concordance order; the order is not relied on for
/// correctness, only for speed. Throws Error(UnmappedIpc).
WipoField map_ipc_to_wipo(std::string_view ipc_code,
                          std::span<const ConcordanceEntry> concordance);

inline constexpr const char* kUnclassified = "unclassified";

struct FieldDistribution {
  std::map<std::string, std::size_t> counts;  // level-0 field -> papers
  std::size_t total_assignments = 0;          // all (paper, field) pairs, any level
  std::size_t total_papers = 0;

  double percent(const std::string& field) const;
};

/// Papers per distinct level-0 field; a paper with several sub-fields under
/// one top-level field counts once. Papers without a level-0 field are
/// counted under "unclassified".
FieldDistribution field_distribution(std::span<const PaperRecord> papers);

struct InteractionMatrix {
  std::map<std::pair<std::string, int>, std::int64_t> cells;
  std::map<std::string, std::int64_t> row_totals;  // by field of study
  std::map<int, std::int64_t> column_totals;       // by WIPO field id
  std::map<int, WipoField> wipo_fields;
  std::int64_t total = 0;

  bool empty() const { return cells.empty(); }
};

struct InteractionBuild {
  InteractionMatrix matrix;
  std::vector<std::string> warnings;  // unmapped IPC codes, skipped papers
};

/// Pairs each level-0 field of a paper with each distinct WIPO field of the
/// paper's earliest citing family. Unit weight per pair. Unmapped IPC codes
/// are skipped and reported as warnings.
InteractionBuild interaction_matrix(
    std::span<const PaperRecord> cohort,
    const std::map<std::string, PatentIndicators>& indicators,
    const std::map<std::string, PatentFamilyRecord>& families,
    std::span<const ConcordanceEntry> concordance);

/// Distinct level-0 field names in first-seen order.
std::vector<std::string> top_level_fields(const PaperRecord& paper);

}  // namespace slumber
