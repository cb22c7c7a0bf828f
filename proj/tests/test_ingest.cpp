#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <fstream>
#include <sstream>

#include "slumber/error.hpp"
#include "slumber/ingest.hpp"
#include "slumber/synth.hpp"

using namespace slumber;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

std::vector<PaperRecord> papers_from(const std::string& text,
                                     InputFormat f = InputFormat::Csv) {
  std::istringstream in(text);
  return parse_papers(in, f);
}

Dataset small_dataset() {
  Dataset ds;
  ds.window_end = 1975;
  ds.papers["p1"] = {"p1", 1970, "t", "", "", {{"Biology", 0}}};
  ds.series["p1"] = {"p1", 1970, {1, 2, 0, 0, 3, 4}, 10};
  ds.patents["f1"] = {"f1", 1980, {1980}, 3, {"C12N 15/00"}};
  ds.links = {{"p1", "f1"}};
  ds.concordance = {{"C12N", 15, "Biotechnology", "Chemistry"}};
  return ds;
}

}  // namespace

TEST_CASE("parse_papers: csv") {
  auto ps = papers_from(
      "paper_id,pub_year,title,doi,pmid,fields_of_study\n"
      "p1,1970,Growth,10.1/x,,Biology@0;Genetics@1\n");
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].paper_id == "p1");
  CHECK(ps[0].pub_year == 1970);
  REQUIRE(ps[0].fields_of_study.size() == 2);
  CHECK(ps[0].fields_of_study[1].name == "Genetics");
  CHECK(ps[0].fields_of_study[1].level == 1);
}

TEST_CASE("parse_papers: duplicate id") {
  CHECK(kind_of([] { papers_from("paper_id,pub_year\np1,1970\np1,1971\n"); }) ==
        ErrorKind::DuplicateId);
}

TEST_CASE("parse_papers: field level outside 0-5") {
  CHECK(kind_of([] {
          papers_from("paper_id,pub_year,fields_of_study\np1,1970,Biology@7\n");
        }) == ErrorKind::MalformedRow);
}

TEST_CASE("parse_papers: jsonl with array and packed fields") {
  auto ps = papers_from(
      "{\"paper_id\":\"a\",\"pub_year\":1980,\"fields_of_study\":[{\"name\":\"Physics\",\"level\":0}]}\n"
      "\n"
      "{\"paper_id\":\"b\",\"pub_year\":1981,\"fields_of_study\":\"Biology@0\"}\n",
      InputFormat::Jsonl);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].fields_of_study[0].name == "Physics");
  CHECK(ps[1].fields_of_study[0].name == "Biology");
  CHECK(kind_of([] { papers_from("{\"pub_year\":1980}\n", InputFormat::Jsonl); }) ==
        ErrorKind::MissingColumn);
  CHECK(kind_of([] { papers_from("{not json\n", InputFormat::Jsonl); }) ==
        ErrorKind::MalformedRow);
}

TEST_CASE("parse_papers: missing required column") {
  CHECK(kind_of([] { papers_from("paper_id,title\np1,x\n"); }) == ErrorKind::MissingColumn);
}

TEST_CASE("build_series: zero fill and window") {
  PaperRecord p{"p", 1970, "", "", "", {}};
  std::vector<CitationCountRow> rows{{"p", 1971, 3}};
  auto s = build_series(p, rows, 1972);
  CHECK(s.counts == std::vector<std::int64_t>{0, 3, 0});
  CHECK(s.t_max() == 2);
  CHECK(s.total == 3);
  CHECK(build_series(p, {}, 2015).t_max() == 45);

  std::vector<CitationCountRow> early{{"p", 1969, 1}};
  CHECK(kind_of([&] { build_series(p, early, 1972); }) == ErrorKind::RowOutOfWindow);
  std::vector<CitationCountRow> dup{{"p", 1971, 1}, {"p", 1971, 2}};
  CHECK(kind_of([&] { build_series(p, dup, 1972); }) == ErrorKind::DuplicateId);
}

TEST_CASE("build_series: length and total are preserved") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 100; ++round) {
    PaperRecord p{"p", 1990, "", "", "", {}};
    Year end = 1990 + static_cast<Year>(rng() % 30);
    std::vector<CitationCountRow> rows;
    std::int64_t sum = 0;
    for (Year y = 1990; y <= end; ++y)
      if (rng() % 2) {
        auto c = static_cast<std::int64_t>(rng() % 100);
        rows.push_back({"p", y, c});
        sum += c;
      }
    auto s = build_series(p, rows, end);
    CHECK(s.counts.size() == static_cast<std::size_t>(end - 1990 + 1));
    CHECK(s.total == sum);
    CHECK(std::accumulate(s.counts.begin(), s.counts.end(), std::int64_t{0}) == sum);
  }
}

TEST_CASE("parse_patent_records") {
  std::istringstream ok(
      "family_id,earliest_priority_year,filing_years,forward_citation_count,ipc_codes\n"
      "f1,1986,1986;1994,64,C12N 15/09;A61K 38/00\n");
  auto fs = parse_patent_records(ok);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].forward_citation_count == 64);
  CHECK(*std::max_element(fs[0].filing_years.begin(), fs[0].filing_years.end()) == 1994);
  CHECK(fs[0].ipc_codes.size() == 2);

  const std::string head =
      "family_id,earliest_priority_year,filing_years,forward_citation_count,ipc_codes\n";
  CHECK(kind_of([&] {
          std::istringstream in(head + "f1,1986,,3,C12N\n");
          parse_patent_records(in);
        }) == ErrorKind::MalformedRow);
  CHECK(kind_of([&] {
          std::istringstream in(head + "f1,1986,1986,-1,C12N\n");
          parse_patent_records(in);
        }) == ErrorKind::MalformedRow);
}

TEST_CASE("load_concordance") {
  std::istringstream in(
      "ipc_prefix\twipo_field_id\twipo_field_name\tsector\n"
      "C12\t15\tBiotechnology\tChemistry\n"
      "C12N\t15\tBiotechnology\tChemistry\n"
      "A61K\t16\tPharmaceuticals\tChemistry\n");
  auto c = load_concordance(in);
  REQUIRE(c.size() == 3);
  CHECK(c[0].ipc_prefix == "A61K");
  CHECK(c[1].ipc_prefix == "C12N");
  CHECK(c[2].ipc_prefix == "C12");
  CHECK(c[1].wipo_field_id == 15);

  CHECK(kind_of([] {
          std::istringstream bad(
              "ipc_prefix\twipo_field_id\twipo_field_name\tsector\nX\t36\tNone\tNone\n");
          load_concordance(bad);
        }) == ErrorKind::FieldIdOutOfRange);
}

TEST_CASE("load_concordance: total order on the sample table") {
  std::ostringstream out;
  write_concordance(out, synth::sample_concordance());
  std::istringstream in(out.str());
  auto c = load_concordance(in);
  for (std::size_t i = 1; i < c.size(); ++i) {
    const auto& a = c[i - 1].ipc_prefix;
    const auto& b = c[i].ipc_prefix;
    CHECK((a.size() > b.size() || (a.size() == b.size() && a < b)));
  }
}

TEST_CASE("validate_dataset") {
  auto ds = small_dataset();
  CHECK(validate_dataset(ds).empty());

  auto broken = ds;
  broken.links.push_back({"p1", "f404"});
  auto report = validate_dataset(broken);
  REQUIRE(report.size() == 1);
  CHECK(report[0].severity == Severity::Error);
  CHECK(report[0].message.find("f404") != std::string::npos);

  auto zero = ds;
  zero.papers["p2"] = {"p2", 1971, "", "", "", {}};
  zero.series["p2"] = {"p2", 1971, {0, 0, 0, 0, 0}, 0};
  auto zr = validate_dataset(zero);
  REQUIRE(zr.size() == 1);
  CHECK(zr[0].severity == Severity::Warning);
  CHECK(zr[0].entity_id == "p2");
  CHECK(zr[0].message.find("curve operations will reject") != std::string::npos);
  CHECK_FALSE(has_errors(zr));

  // pure
  auto again = validate_dataset(broken);
  REQUIRE(again.size() == report.size());
  CHECK(again[0].message == report[0].message);
}

TEST_CASE("flag_citation_contexts") {
  std::vector<CitationContextRecord> ctx{
      {"c1", "p1", 2000, "However, it is not sufficient to explain"},
      {"c2", "p1", 2000, "Smith proposed an interesting idea of a protein space"},
      {"c3", "p1", 2000, "The contrasting results were striking"},
      {"c4", "p1", 2000, "We  DISAGREE\twith this."},
  };
  std::vector<std::string> ns{"not sufficient"};
  auto hit = flag_citation_contexts(std::span(ctx).first(1), ns);
  CHECK(hit.size() == 1);

  auto flagged = flag_citation_contexts(ctx, default_negative_terms());
  REQUIRE(flagged.size() == 1);
  CHECK(flagged[0].record.citing_id == "c4");
  CHECK(flagged[0].matched_terms == std::vector<std::string>{"disagree"});

  std::vector<std::string> contrast{"contrast"};
  CHECK(flag_citation_contexts(std::span(ctx).subspan(2, 1), contrast).empty());

  std::vector<std::string> none;
  CHECK(kind_of([&] { flag_citation_contexts(ctx, none); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("writers and parsers round-trip") {
  SynthSpec spec;
  spec.n_papers = 120;
  spec.fraction = 0.1;
  auto data = synth::generate(spec);

  std::ostringstream po, co, fo, lo, xo;
  write_papers(po, data.papers);
  write_citations(co, data.citations);
  write_patents(fo, data.patents);
  write_links(lo, data.links);
  write_contexts(xo, data.contexts);

  std::istringstream pi(po.str()), ci(co.str()), fi(fo.str()), li(lo.str()), xi(xo.str());
  auto papers = parse_papers(pi);
  auto cites = parse_citations(ci);
  auto fams = parse_patent_records(fi);
  auto links = parse_links(li);
  auto ctx = parse_contexts(xi);

  std::ostringstream po2, co2, fo2, lo2, xo2;
  write_papers(po2, papers);
  write_citations(co2, cites);
  write_patents(fo2, fams);
  write_links(lo2, links);
  write_contexts(xo2, ctx);
  CHECK(po.str() == po2.str());
  CHECK(co.str() == co2.str());
  CHECK(fo.str() == fo2.str());
  CHECK(lo.str() == lo2.str());
  CHECK(xo.str() == xo2.str());
  CHECK(papers.size() == data.papers.size());
  CHECK(links == data.links);
}

TEST_CASE("load_dataset: clipping, ghosts and missing files") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "slumber_ingest_load";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream(dir / name) << text;
  };
  put("papers.csv", "paper_id,pub_year\np1,2000\n");
  put("citations.csv", "paper_id,year,count\np1,2001,4\np1,2020,9\nghost,2001,1\n");
  put("patents.csv",
      "family_id,earliest_priority_year,filing_years,forward_citation_count,ipc_codes\n");
  put("links.csv", "paper_id,family_id\n");
  put("concordance.tsv", "ipc_prefix\twipo_field_id\twipo_field_name\tsector\n");

  auto loaded = load_dataset(dir, 2010);
  CHECK(loaded.clipped_rows == 1);
  CHECK(loaded.dataset.series.at("p1").total == 4);
  CHECK_FALSE(loaded.dataset.contexts.has_value());
  auto report = validate_dataset(loaded.dataset);
  CHECK(has_errors(report));
  CHECK(std::any_of(report.begin(), report.end(),
                    [](const auto& i) { return i.entity_id == "ghost"; }));

  fs::remove(dir / "links.csv");
  CHECK(kind_of([&] { load_dataset(dir, 2010); }) == ErrorKind::Io);
  fs::remove_all(dir);
}
