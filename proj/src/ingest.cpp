#include "slumber/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "slumber/csv.hpp"
#include "slumber/error.hpp"
#include "slumber/format.hpp"

namespace slumber {
namespace {

using nlohmann::json;

constexpr Year kMinYear = 1800;

Year current_year() {
  using namespace std::chrono;
  return static_cast<int>(
      year_month_day{floor<days>(system_clock::now())}.year());
}

[[noreturn]] void malformed(std::size_t line, const std::string& reason) {
  throw Error(ErrorKind::MalformedRow,
              "line " + std::to_string(line) + ": " + reason);
}

std::int64_t require_int(std::string_view text, std::size_t line,
                         const char* what) {
  auto v = parse_int(text);
  if (!v) malformed(line, std::string(what) + " is not an integer: '" +
                              std::string(text) + "'");
  return *v;
}

Year require_year(std::string_view text, std::size_t line, const char* what) {
  auto y = require_int(text, line, what);
  if (y < kMinYear || y > 9999)
    malformed(line, std::string(what) + " out of range: " + std::to_string(y));
  return static_cast<Year>(y);
}

std::int64_t require_count(std::string_view text, std::size_t line,
                           const char* what) {
  auto v = require_int(text, line, what);
  if (v < 0) malformed(line, std::string(what) + " is negative");
  return v;
}

// Optional column lookup; returns npos when absent.
std::size_t optional_column(const csv::Table& t, std::string_view name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  return std::string::npos;
}

const std::string& cell_at(const csv::Row& row, std::size_t col) {
  static const std::string empty;
  if (col == std::string::npos || col >= row.cells.size()) return empty;
  return row.cells[col];
}

void check_width(const csv::Table& t, const csv::Row& row) {
  if (row.cells.size() != t.header.size())
    malformed(row.line, "expected " + std::to_string(t.header.size()) +
                            " cells, found " + std::to_string(row.cells.size()));
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (!lines.empty() && lines.front().starts_with("\xEF\xBB\xBF"))
    lines.front().erase(0, 3);
  return lines;
}

json parse_json_line(const std::string& text, std::size_t line) {
  if (!csv::valid_utf8(text)) malformed(line, "invalid UTF-8");
  try {
    auto j = json::parse(text);
    if (!j.is_object()) malformed(line, "expected a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    malformed(line, e.what());
  }
}

template <typename T>
T json_field(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) throw Error(ErrorKind::MissingColumn, key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    malformed(line, std::string("bad value for ") + key);
  }
}

std::string json_optional_string(const json& j, const char* key,
                                 std::size_t line) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  return json_field<std::string>(j, key, line);
}

void check_paper(const PaperRecord& p, std::size_t line) {
  if (p.paper_id.empty()) malformed(line, "empty paper_id");
  if (p.pub_year < kMinYear || p.pub_year > current_year())
    malformed(line, "pub_year out of range: " + std::to_string(p.pub_year));
  for (const auto& f : p.fields_of_study) {
    if (f.name.empty()) malformed(line, "empty field of study name");
    if (f.level < 0 || f.level > 5)
      malformed(line, "field of study level outside 0-5: " +
                          std::to_string(f.level));
  }
}

void check_family(const PatentFamilyRecord& f, std::size_t line) {
  if (f.family_id.empty()) malformed(line, "empty family_id");
  if (f.filing_years.empty()) malformed(line, "empty filing_years");
  if (f.forward_citation_count < 0)
    malformed(line, "negative forward_citation_count");
}

std::vector<FieldOfStudy> unpack_fields_at(std::string_view cell,
                                           std::size_t line) {
  std::vector<FieldOfStudy> out;
  for (const auto& item : csv::split_packed(cell)) {
    auto at = item.rfind('@');
    if (at == std::string::npos)
      malformed(line, "field of study without @level: '" + item + "'");
    auto level = parse_int(std::string_view(item).substr(at + 1));
    if (!level) malformed(line, "bad field of study level in '" + item + "'");
    if (*level < 0 || *level > 5)
      malformed(line, "field of study level outside 0-5: " +
                          std::to_string(*level));
    out.push_back({item.substr(0, at), static_cast<int>(*level)});
  }
  return out;
}

}  // namespace

std::string pack_fields(std::span<const FieldOfStudy> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(';');
    out += fields[i].name + "@" + std::to_string(fields[i].level);
  }
  return out;
}

std::vector<FieldOfStudy> unpack_fields(std::string_view cell) {
  return unpack_fields_at(cell, 0);
}

// Papers ---------------------------------------------------------------------

std::vector<PaperRecord> parse_papers(std::istream& in, InputFormat format) {
  std::vector<PaperRecord> out;
  std::set<std::string> seen;
  auto accept = [&](PaperRecord p, std::size_t line) {
    check_paper(p, line);
    if (!seen.insert(p.paper_id).second)
      throw Error(ErrorKind::DuplicateId, p.paper_id);
    out.push_back(std::move(p));
  };

  if (format == InputFormat::Csv) {
    auto t = csv::read(in);
    auto c_id = t.column("paper_id");
    auto c_year = t.column("pub_year");
    auto c_title = optional_column(t, "title");
    auto c_doi = optional_column(t, "doi");
    auto c_pmid = optional_column(t, "pmid");
    auto c_fos = optional_column(t, "fields_of_study");
    for (const auto& row : t.rows) {
      check_width(t, row);
      PaperRecord p;
      p.paper_id = cell_at(row, c_id);
      p.pub_year = require_year(cell_at(row, c_year), row.line, "pub_year");
      p.title = cell_at(row, c_title);
      p.doi = cell_at(row, c_doi);
      p.pmid = cell_at(row, c_pmid);
      p.fields_of_study = unpack_fields_at(cell_at(row, c_fos), row.line);
      accept(std::move(p), row.line);
    }
    return out;
  }

  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line = i + 1;
    if (trim(lines[i]).empty()) continue;
    auto j = parse_json_line(lines[i], line);
    PaperRecord p;
    p.paper_id = json_field<std::string>(j, "paper_id", line);
    p.pub_year = json_field<int>(j, "pub_year", line);
    p.title = json_optional_string(j, "title", line);
    p.doi = json_optional_string(j, "doi", line);
    p.pmid = json_optional_string(j, "pmid", line);
    if (j.contains("fields_of_study")) {
      const auto& fos = j.at("fields_of_study");
      if (fos.is_string()) {
        p.fields_of_study = unpack_fields_at(fos.get<std::string>(), line);
      } else if (fos.is_array()) {
        for (const auto& f : fos) {
          if (!f.is_object() || !f.contains("name") || !f.contains("level") ||
              !f.at("name").is_string() || !f.at("level").is_number_integer())
            malformed(line, "bad fields_of_study item");
          p.fields_of_study.push_back(
              {f.at("name").get<std::string>(), f.at("level").get<int>()});
        }
      } else if (!fos.is_null()) {
        malformed(line, "bad fields_of_study");
      }
    }
    accept(std::move(p), line);
  }
  return out;
}

// Citations --------------------------------------------------------------------

std::vector<CitationCountRow> parse_citations(std::istream& in) {
  auto t = csv::read(in);
  auto c_id = t.column("paper_id");
  auto c_year = t.column("year");
  auto c_count = t.column("count");
  std::vector<CitationCountRow> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    check_width(t, row);
    CitationCountRow r;
    r.paper_id = cell_at(row, c_id);
    if (r.paper_id.empty()) malformed(row.line, "empty paper_id");
    r.year = require_year(cell_at(row, c_year), row.line, "year");
    r.count = require_count(cell_at(row, c_count), row.line, "count");
    out.push_back(std::move(r));
  }
  return out;
}

CitationSeries build_series(const PaperRecord& paper,
                            std::span<const CitationCountRow> rows,
                            Year window_end) {
  if (window_end < paper.pub_year)
    throw Error(ErrorKind::RowOutOfWindow,
                "window end " + std::to_string(window_end) +
                    " precedes publication year of " + paper.paper_id);
  CitationSeries s;
  s.paper_id = paper.paper_id;
  s.base_year = paper.pub_year;
  s.counts.assign(static_cast<std::size_t>(window_end - paper.pub_year) + 1, 0);
  std::vector<bool> seen(s.counts.size(), false);
  for (const auto& r : rows) {
    if (r.paper_id != paper.paper_id)
      throw Error(ErrorKind::MalformedRow,
                  "row for " + r.paper_id + " passed with " + paper.paper_id);
    if (r.year < paper.pub_year || r.year > window_end)
      throw Error(ErrorKind::RowOutOfWindow,
                  paper.paper_id + " year " + std::to_string(r.year));
    if (r.count < 0)
      throw Error(ErrorKind::MalformedRow, "negative count for " + paper.paper_id);
    auto t = static_cast<std::size_t>(r.year - paper.pub_year);
    if (seen[t])
      throw Error(ErrorKind::DuplicateId,
                  paper.paper_id + "@" + std::to_string(r.year));
    seen[t] = true;
    s.counts[t] = r.count;
    s.total += r.count;
  }
  return s;
}

// Patents ----------------------------------------------------------------------

std::vector<PatentFamilyRecord> parse_patent_records(std::istream& in,
                                                     InputFormat format) {
  std::vector<PatentFamilyRecord> out;
  std::set<std::string> seen;
  auto accept = [&](PatentFamilyRecord f, std::size_t line) {
    check_family(f, line);
    if (!seen.insert(f.family_id).second)
      throw Error(ErrorKind::DuplicateId, f.family_id);
    out.push_back(std::move(f));
  };

  if (format == InputFormat::Csv) {
    auto t = csv::read(in);
    auto c_id = t.column("family_id");
    auto c_prio = t.column("earliest_priority_year");
    auto c_fil = t.column("filing_years");
    auto c_fwd = t.column("forward_citation_count");
    auto c_ipc = optional_column(t, "ipc_codes");
    for (const auto& row : t.rows) {
      check_width(t, row);
      PatentFamilyRecord f;
      f.family_id = cell_at(row, c_id);
      f.earliest_priority_year =
          require_year(cell_at(row, c_prio), row.line, "earliest_priority_year");
      for (const auto& y : csv::split_packed(cell_at(row, c_fil)))
        f.filing_years.push_back(require_year(y, row.line, "filing year"));
      f.forward_citation_count =
          require_count(cell_at(row, c_fwd), row.line, "forward_citation_count");
      for (auto& code : csv::split_packed(cell_at(row, c_ipc))) {
        if (trim(code).empty()) malformed(row.line, "empty IPC code");
        f.ipc_codes.push_back(std::move(code));
      }
      accept(std::move(f), row.line);
    }
    return out;
  }

  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line = i + 1;
    if (trim(lines[i]).empty()) continue;
    auto j = parse_json_line(lines[i], line);
    PatentFamilyRecord f;
    f.family_id = json_field<std::string>(j, "family_id", line);
    f.earliest_priority_year = json_field<int>(j, "earliest_priority_year", line);
    f.filing_years = json_field<std::vector<int>>(j, "filing_years", line);
    f.forward_citation_count =
        json_field<std::int64_t>(j, "forward_citation_count", line);
    if (j.contains("ipc_codes"))
      f.ipc_codes = json_field<std::vector<std::string>>(j, "ipc_codes", line);
    accept(std::move(f), line);
  }
  return out;
}

std::vector<PatentCitationLink> parse_links(std::istream& in) {
  auto t = csv::read(in);
  auto c_paper = t.column("paper_id");
  auto c_family = t.column("family_id");
  std::vector<PatentCitationLink> out;
  for (const auto& row : t.rows) {
    check_width(t, row);
    PatentCitationLink l{cell_at(row, c_paper), cell_at(row, c_family)};
    if (l.paper_id.empty() || l.family_id.empty())
      malformed(row.line, "empty id in link");
    out.push_back(std::move(l));
  }
  return out;
}

// Concordance ------------------------------------------------------------------

std::vector<ConcordanceEntry> load_concordance(std::istream& in) {
  auto t = csv::read(in, '\t');
  auto c_prefix = t.column("ipc_prefix");
  auto c_id = t.column("wipo_field_id");
  auto c_name = t.column("wipo_field_name");
  auto c_sector = t.column("sector");
  std::vector<ConcordanceEntry> out;
  for (const auto& row : t.rows) {
    check_width(t, row);
    ConcordanceEntry e;
    e.ipc_prefix = std::string(trim(cell_at(row, c_prefix)));
    if (e.ipc_prefix.empty()) malformed(row.line, "empty ipc_prefix");
    auto id = require_int(cell_at(row, c_id), row.line, "wipo_field_id");
    if (id < 1 || id > 35)
      throw Error(ErrorKind::FieldIdOutOfRange,
                  "line " + std::to_string(row.line) + ": " + std::to_string(id));
    e.wipo_field_id = static_cast<int>(id);
    e.wipo_field_name = cell_at(row, c_name);
    e.sector = cell_at(row, c_sector);
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ConcordanceEntry& a, const ConcordanceEntry& b) {
                     if (a.ipc_prefix.size() != b.ipc_prefix.size())
                       return a.ipc_prefix.size() > b.ipc_prefix.size();
                     return a.ipc_prefix < b.ipc_prefix;
                   });
  return out;
}

// Contexts ---------------------------------------------------------------------

std::vector<CitationContextRecord> parse_contexts(std::istream& in) {
  std::vector<CitationContextRecord> out;
  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line = i + 1;
    if (trim(lines[i]).empty()) continue;
    auto j = parse_json_line(lines[i], line);
    CitationContextRecord r;
    r.citing_id = json_field<std::string>(j, "citing_id", line);
    r.cited_paper_id = json_field<std::string>(j, "cited_paper_id", line);
    r.year = json_field<int>(j, "year", line);
    r.sentence = json_field<std::string>(j, "sentence", line);
    if (trim(r.sentence).empty()) malformed(line, "empty sentence");
    out.push_back(std::move(r));
  }
  return out;
}

// Writers ----------------------------------------------------------------------

void write_papers(std::ostream& out, std::span<const PaperRecord> papers) {
  out << "paper_id,pub_year,title,doi,pmid,fields_of_study\n";
  for (const auto& p : papers) {
    std::vector<std::string> cells{p.paper_id, std::to_string(p.pub_year),
                                   p.title,    p.doi,
                                   p.pmid,     pack_fields(p.fields_of_study)};
    csv::write_row(out, cells);
  }
}

void write_citations(std::ostream& out, std::span<const CitationCountRow> rows) {
  out << "paper_id,year,count\n";
  for (const auto& r : rows) {
    out << csv::escape(r.paper_id) << ',' << r.year << ',' << r.count << '\n';
  }
}

void write_patents(std::ostream& out,
                   std::span<const PatentFamilyRecord> families) {
  out << "family_id,earliest_priority_year,filing_years,forward_citation_count,"
         "ipc_codes\n";
  for (const auto& f : families) {
    std::vector<std::string> years;
    for (auto y : f.filing_years) years.push_back(std::to_string(y));
    std::vector<std::string> cells{
        f.family_id, std::to_string(f.earliest_priority_year),
        csv::join_packed(years), std::to_string(f.forward_citation_count),
        csv::join_packed(f.ipc_codes)};
    csv::write_row(out, cells);
  }
}

void write_links(std::ostream& out, std::span<const PatentCitationLink> links) {
  out << "paper_id,family_id\n";
  for (const auto& l : links)
    out << csv::escape(l.paper_id) << ',' << csv::escape(l.family_id) << '\n';
}

void write_concordance(std::ostream& out,
                       std::span<const ConcordanceEntry> entries) {
  out << "ipc_prefix\twipo_field_id\twipo_field_name\tsector\n";
  for (const auto& e : entries) {
    std::vector<std::string> cells{e.ipc_prefix, std::to_string(e.wipo_field_id),
                                   e.wipo_field_name, e.sector};
    csv::write_row(out, cells, '\t');
  }
}

void write_contexts(std::ostream& out,
                    std::span<const CitationContextRecord> contexts) {
  for (const auto& c : contexts) {
    json j = {{"citing_id", c.citing_id},
              {"cited_paper_id", c.cited_paper_id},
              {"year", c.year},
              {"sentence", c.sentence}};
    out << j.dump() << '\n';
  }
}

// Dataset ----------------------------------------------------------------------

LoadedDataset load_dataset(const std::filesystem::path& dir, Year window_end) {
  namespace fs = std::filesystem;
  auto open = [&](const char* name) {
    auto path = dir / name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return in;
  };

  LoadedDataset result;
  Dataset& ds = result.dataset;
  ds.window_end = window_end;

  {
    auto in = open(dataset_files::kPapers);
    for (auto& p : parse_papers(in)) {
      auto id = p.paper_id;
      ds.papers.emplace(std::move(id), std::move(p));
    }
  }

  std::map<std::string, std::vector<CitationCountRow>> rows_by_paper;
  {
    auto in = open(dataset_files::kCitations);
    for (auto& r : parse_citations(in)) {
      if (r.year > window_end) {
        ++result.clipped_rows;
        continue;
      }
      rows_by_paper[r.paper_id].push_back(std::move(r));
    }
  }
  for (const auto& [id, paper] : ds.papers) {
    auto it = rows_by_paper.find(id);
    std::span<const CitationCountRow> rows;
    if (it != rows_by_paper.end()) rows = it->second;
    if (paper.pub_year > window_end) continue;  // reported by validation
    ds.series.emplace(id, build_series(paper, rows, window_end));
  }
  // Rows for unknown papers are kept as a series so validation can name them.
  for (const auto& [id, rows] : rows_by_paper) {
    if (ds.papers.count(id)) continue;
    PaperRecord ghost;
    ghost.paper_id = id;
    ghost.pub_year = std::min_element(rows.begin(), rows.end(),
                                      [](const auto& a, const auto& b) {
                                        return a.year < b.year;
                                      })->year;
    ds.series.emplace(id, build_series(ghost, rows, window_end));
  }

  {
    auto in = open(dataset_files::kPatents);
    for (auto& f : parse_patent_records(in)) {
      auto id = f.family_id;
      ds.patents.emplace(std::move(id), std::move(f));
    }
  }
  {
    auto in = open(dataset_files::kLinks);
    ds.links = parse_links(in);
  }
  {
    auto in = open(dataset_files::kConcordance);
    ds.concordance = load_concordance(in);
  }
  if (fs::exists(dir / dataset_files::kContexts)) {
    auto in = open(dataset_files::kContexts);
    ds.contexts = parse_contexts(in);
  }
  return result;
}

// Validation -------------------------------------------------------------------

ValidationReport validate_dataset(const Dataset& ds) {
  ValidationReport report;
  auto error = [&](const std::string& id, std::string msg) {
    report.push_back({Severity::Error, id, std::move(msg)});
  };
  auto warn = [&](const std::string& id, std::string msg) {
    report.push_back({Severity::Warning, id, std::move(msg)});
  };

  const Year now = current_year();
  Year max_pub = 0;
  for (const auto& [id, p] : ds.papers) {
    if (p.paper_id.empty() || p.paper_id != id) error(id, "paper_id mismatch or empty");
    if (p.pub_year < kMinYear || p.pub_year > now)
      error(id, "pub_year out of range: " + std::to_string(p.pub_year));
    for (const auto& f : p.fields_of_study)
      if (f.level < 0 || f.level > 5)
        error(id, "field of study level outside 0-5: " + f.name);
    max_pub = std::max(max_pub, p.pub_year);
  }
  if (!ds.papers.empty() && ds.window_end < max_pub)
    error("", "window_end " + std::to_string(ds.window_end) +
                  " precedes latest publication year " + std::to_string(max_pub));

  for (const auto& [id, s] : ds.series) {
    auto pit = ds.papers.find(id);
    if (pit == ds.papers.end()) {
      error(id, "citation series for unknown paper");
      continue;
    }
    if (s.base_year != pit->second.pub_year)
      error(id, "series base year differs from pub_year");
    if (s.total == 0)
      warn(id, "zero total citations; curve operations will reject");
    else if (s.counts.size() < 2)
      warn(id, "citation window shorter than two years; curve operations will reject");
  }
  for (const auto& [id, p] : ds.papers) {
    if (!ds.series.count(id) && p.pub_year <= ds.window_end)
      warn(id, "zero total citations; curve operations will reject");
  }

  for (const auto& [id, f] : ds.patents) {
    if (f.family_id != id) error(id, "family_id mismatch");
    if (f.filing_years.empty()) error(id, "empty filing_years");
    if (f.forward_citation_count < 0) error(id, "negative forward_citation_count");
  }

  std::set<PatentCitationLink> seen_links;
  for (const auto& l : ds.links) {
    if (!ds.papers.count(l.paper_id))
      error(l.paper_id, "link references unknown paper_id " + l.paper_id);
    if (!ds.patents.count(l.family_id))
      error(l.family_id, "link references unknown family_id " + l.family_id);
    if (!seen_links.insert(l).second)
      warn(l.paper_id, "duplicate link to family " + l.family_id);
  }

  for (const auto& e : ds.concordance) {
    if (e.ipc_prefix.empty()) error("", "concordance entry with empty ipc_prefix");
    if (e.wipo_field_id < 1 || e.wipo_field_id > 35)
      error(e.ipc_prefix, "wipo_field_id outside 1-35");
  }

  if (ds.contexts) {
    for (const auto& c : *ds.contexts) {
      if (trim(c.sentence).empty()) error(c.citing_id, "empty context sentence");
      if (!ds.papers.count(c.cited_paper_id))
        warn(c.cited_paper_id, "context cites unknown paper");
    }
  }
  return report;
}

bool has_errors(const ValidationReport& report) {
  return std::any_of(report.begin(), report.end(), [](const ValidationIssue& i) {
    return i.severity == Severity::Error;
  });
}

// Context flagging -------------------------------------------------------------

const std::vector<std::string>& default_negative_terms() {
  static const std::vector<std::string> terms{"disagree", "contradict", "contrast",
                                              "inconsistent", "dispute"};
  return terms;
}

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

// Lowercases and collapses whitespace runs to one space.
std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool contains_whole_word(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return false;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    bool left_ok =
        pos == 0 || !is_word_byte(static_cast<unsigned char>(haystack[pos - 1]));
    auto end = pos + needle.size();
    bool right_ok = end == haystack.size() ||
                    !is_word_byte(static_cast<unsigned char>(haystack[end]));
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

}  // namespace

std::vector<FlaggedContext> flag_citation_contexts(
    std::span<const CitationContextRecord> contexts,
    std::span<const std::string> terms) {
  if (terms.empty()) throw Error(ErrorKind::InvalidConfig, "empty term list");
  std::vector<std::pair<std::string, std::string>> needles;  // (original, normalized)
  for (const auto& t : terms) {
    auto n = normalize_text(t);
    if (n.empty()) continue;
    if (std::none_of(needles.begin(), needles.end(),
                     [&](const auto& p) { return p.second == n; }))
      needles.emplace_back(t, std::move(n));
  }
  std::vector<FlaggedContext> out;
  for (const auto& c : contexts) {
    auto hay = normalize_text(c.sentence);
    std::vector<std::string> matched;
    for (const auto& [original, normalized] : needles)
      if (contains_whole_word(hay, normalized)) matched.push_back(original);
    if (!matched.empty()) out.push_back({c, std::move(matched)});
  }
  return out;
}

}  // namespace slumber
