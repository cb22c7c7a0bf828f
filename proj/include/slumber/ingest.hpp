#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include "slumber/model.hpp"

namespace slumber {

enum class InputFormat { Csv, Jsonl };

// Parsers validate every row and throw slumber::Error with kind
// DuplicateId, MalformedRow (message carries the line number) or
// MissingColumn. Records come back in file order.
std::vector<PaperRecord> parse_papers(std::istream& in,
                                      InputFormat format = InputFormat::Csv);
std::vector<CitationCountRow> parse_citations(std::istream& in);
std::vector<PatentFamilyRecord> parse_patent_records(
    std::istream& in, InputFormat format = InputFormat::Csv);
std::vector<PatentCitationLink> parse_links(std::istream& in);
std::vector<CitationContextRecord> parse_contexts(std::istream& in);

/// Tab-separated concordance. Output is ordered by descending prefix
/// length, then lexicographically, so the first prefix hit for a symbol is
/// the longest one. Throws FieldIdOutOfRange for ids outside 1..35.
std::vector<ConcordanceEntry> load_concordance(std::istream& in);

/// Dense zero-filled series over [pub_year, window_end]. Throws
/// RowOutOfWindow for rows outside that range and DuplicateId when a year
/// appears twice.
CitationSeries build_series(const PaperRecord& paper,
                            std::span<const CitationCountRow> rows,
                            Year window_end);

// Canonical writers; parse(write(x)) == x.
void write_papers(std::ostream& out, std::span<const PaperRecord> papers);
void write_citations(std::ostream& out, std::span<const CitationCountRow> rows);
void write_patents(std::ostream& out, std::span<const PatentFamilyRecord> families);
void write_links(std::ostream& out, std::span<const PatentCitationLink> links);
void write_concordance(std::ostream& out, std::span<const ConcordanceEntry> entries);
void write_contexts(std::ostream& out, std::span<const CitationContextRecord> contexts);

std::string pack_fields(std::span<const FieldOfStudy> fields);
std::vector<FieldOfStudy> unpack_fields(std::string_view cell);

/// File names inside a dataset directory.
namespace dataset_files {
inline constexpr const char* kPapers = "papers.csv";
inline constexpr const char* kCitations = "citations.csv";
inline constexpr const char* kPatents = "patents.csv";
inline constexpr const char* kLinks = "links.csv";
inline constexpr const char* kConcordance = "concordance.tsv";
inline constexpr const char* kContexts = "contexts.jsonl";
}  // namespace dataset_files

/// Reads a dataset directory. contexts.jsonl is optional; every other file
/// is required (Error(Io) when absent). Citation rows after window_end are
/// outside the observation window and are dropped; the count is kept in
/// the result so validation can report it.
struct LoadedDataset {
  Dataset dataset;
  std::size_t clipped_rows = 0;
};
LoadedDataset load_dataset(const std::filesystem::path& dir, Year window_end);

// Validation -----------------------------------------------------------------

enum class Severity { Warning, Error };

struct ValidationIssue {
  Severity severity = Severity::Error;
  std::string entity_id;
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

using ValidationReport = std::vector<ValidationIssue>;

/// Checks every Dataset invariant. Issues are returned, never thrown.
ValidationReport validate_dataset(const Dataset& dataset);
bool has_errors(const ValidationReport& report);

// Citation contexts ----------------------------------------------------------

struct FlaggedContext {
  CitationContextRecord record;
  std::vector<std::string> matched_terms;
};

const std::vector<std::string>& default_negative_terms();

/// Case-insensitive whole-word matching. A term may span several words;
/// whitespace runs compare equal to a single space.
std::vector<FlaggedContext> flag_citation_contexts(
    std::span<const CitationContextRecord> contexts,
    std::span<const std::string> terms);

}  // namespace slumber
