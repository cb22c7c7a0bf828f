#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "slumber/csv.hpp"
#include "slumber/format.hpp"
#include "slumber/pipeline.hpp"
#include "slumber/synth.hpp"

namespace fs = std::filesystem;
using namespace slumber;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("slumber_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& log) {
  std::string cmd = std::string(SLUMBER_CLI) + " " + args + " > '" + log.string() + "' 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

csv::Table table(const fs::path& p) { return csv::parse(slurp(p)); }

PaperRecord paper(const std::string& id, Year pub, const std::string& field = "Biology") {
  return {id, pub, "t " + id, "", "", {{field, 0}}};
}

void all_in_year(synth::SynthDataset& d, const std::string& id, Year y, std::int64_t n) {
  d.citations.push_back({id, y, n});
}

// 25 delayed papers published 1970..1994 and 25 instant ones; each delayed
// paper has one citing family filed `lag(pub)` years after publication.
synth::SynthDataset lag_fixture(bool with_links) {
  synth::SynthDataset d;
  d.concordance = synth::sample_concordance();
  for (int i = 0; i < 25; ++i) {
    Year pub = 1970 + i;
    auto dr = "d" + std::to_string(100 + i);
    auto ir = "i" + std::to_string(100 + i);
    d.papers.push_back(paper(dr, pub));
    d.papers.push_back(paper(ir, pub));
    all_in_year(d, dr, 2015, 300);
    all_in_year(d, ir, pub + 1, 300);
    if (!with_links) continue;
    auto fid = "f" + std::to_string(100 + i);
    Year prio = pub + (i * 7) % 13;
    d.patents.push_back({fid, prio, {prio}, 1, {"C12N 15/10"}});
    d.links.push_back({dr, fid});
  }
  return d;
}

const char* kHalf = "fraction = 0.5\n";

fs::path write_conf(const fs::path& dir, const std::string& text) {
  auto p = dir / "run.conf";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("cli: exit codes") {
  auto dir = scratch("exit");
  auto log = dir / "log.txt";
  CHECK(run("profile --dataset " + (dir / "nope").string() + " --out " + (dir / "o").string(),
            log) == 2);
  CHECK(run("frobnicate", log) == 1);

  auto good = lag_fixture(true);
  synth::write_dataset(good, dir / "ds");
  auto out = (dir / "o").string();
  CHECK(run("profile --dataset " + (dir / "ds").string() + " --out " + out, log) == 0);

  auto conf = write_conf(dir, "fraction = 2\n");
  CHECK(run("profile --config " + conf.string() + " --dataset " + (dir / "ds").string() +
                " --out " + out,
            log) == 1);
  CHECK(run("profile --config " + (dir / "missing.conf").string() + " --dataset " +
                (dir / "ds").string() + " --out " + out,
            log) == 2);

  auto broken = good;
  broken.links.push_back({"d100", "f999"});
  synth::write_dataset(broken, dir / "bad");
  CHECK(run("profile --dataset " + (dir / "bad").string() + " --out " + out, log) == 1);
  CHECK(slurp(log).find("f999") != std::string::npos);
  CHECK(run("validate --dataset " + (dir / "bad").string() + " --out " + out, log) == 1);
}

TEST_CASE("cli: profile skips zero-citation papers and reports extremes") {
  auto dir = scratch("profile");
  synth::SynthDataset d;
  d.concordance = synth::sample_concordance();
  d.papers = {paper("late", 1970), paper("none", 1980), paper("flat", 2000)};
  all_in_year(d, "late", 2015, 10);
  for (Year y = 2000; y <= 2015; ++y) all_in_year(d, "flat", y, 3);
  synth::write_dataset(d, dir / "ds");
  auto log = dir / "log.txt";
  REQUIRE(run("profile --dataset " + (dir / "ds").string() + " --out " + (dir / "o").string(),
              log) == 0);
  CHECK(slurp(log).find("none") != std::string::npos);
  auto t = table(dir / "o" / "profiles.csv");
  REQUIRE(t.rows.size() == 2);
  auto bcp = t.column("bcp");
  auto type = t.column("turning_type");
  CHECK(t.rows[0].cells[0] == "flat");
  CHECK(t.rows[0].cells[bcp] == "0.000000");
  CHECK(t.rows[0].cells[type] == "flat");
  CHECK(t.rows[1].cells[0] == "late");
  CHECK(t.rows[1].cells[bcp] == "22.000000");
  CHECK(t.rows[1].cells[type] == "awakening");
}

TEST_CASE("cli: table1 with no patent links reports no test") {
  auto dir = scratch("table1_empty");
  synth::write_dataset(lag_fixture(false), dir / "ds");
  auto conf = write_conf(dir, kHalf);
  auto log = dir / "log.txt";
  REQUIRE(run("table1 --config " + conf.string() + " --dataset " + (dir / "ds").string() +
                  " --out " + (dir / "o").string(),
              log) == 0);
  CHECK(slurp(log).find("DegeneratePool") != std::string::npos);
  auto t = table(dir / "o" / "comparison.csv");
  REQUIRE(t.rows.size() == 6);
  for (const auto& r : t.rows) {
    CHECK(r.cells[t.column("rate")] == "0.000000");
    CHECK(r.cells[t.column("z")] == "NA");
    CHECK(r.cells[t.column("p")] == "NA");
  }
}

TEST_CASE("cli: lag-trend windows match a recomputation") {
  auto dir = scratch("lag");
  synth::write_dataset(lag_fixture(true), dir / "ds");
  auto conf = write_conf(dir, kHalf);
  auto log = dir / "log.txt";
  REQUIRE(run("lag-trend --config " + conf.string() + " --dataset " + (dir / "ds").string() +
                  " --out " + (dir / "o").string(),
              log) == 0);
  auto t = table(dir / "o" / "lag_trend.csv");
  std::vector<stats::YearValue> pts;
  for (int i = 0; i < 25; ++i) pts.push_back({1970 + i, static_cast<double>((i * 7) % 13)});
  auto want = oracle::window_means(pts, 5, 1);
  REQUIRE(t.rows.size() == want.size());
  CHECK(t.rows.front().cells[2] == "1970");
  CHECK(t.rows.front().cells[3] == "1974");
  CHECK(t.rows.back().cells[2] == "1990");
  CHECK(t.rows.back().cells[3] == "1994");
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(t.rows[i].cells[0] == "DR");
    CHECK(t.rows[i].cells[4] == format_fixed6(want[i].mean));
    CHECK(t.rows[i].cells[5] == std::to_string(want[i].n_obs));
  }
  // IR papers have no links: trend rows only for DR, summary only for DR
  CHECK(table(dir / "o" / "lag_summary.csv").rows.size() == 1);
}

TEST_CASE("cli: lag-trend with no linked papers writes only headers") {
  auto dir = scratch("lag_empty");
  synth::write_dataset(lag_fixture(false), dir / "ds");
  auto conf = write_conf(dir, kHalf);
  REQUIRE(run("lag-trend --config " + conf.string() + " --dataset " + (dir / "ds").string() +
                  " --out " + (dir / "o").string(),
              dir / "log.txt") == 0);
  CHECK(slurp(dir / "o" / "lag_trend.csv") ==
        "cohort,mode,window_start,window_end,mean_lag,n_obs\n");
}

TEST_CASE("cli: interactions and flag-contexts at file level") {
  auto dir = scratch("interact");
  auto d = lag_fixture(true);
  d.papers[0].fields_of_study.push_back({"Chemistry", 0});
  d.patents[0].ipc_codes.push_back("A61K 38/00");
  d.contexts = {{"c1", "d100", 1990, "We disagree with d100."},
                {"c2", "d100", 1991, "d100 proposed an interesting idea of a protein space."}};
  synth::write_dataset(d, dir / "ds");
  auto conf = write_conf(dir, kHalf);
  auto base = " --config " + conf.string() + " --dataset " + (dir / "ds").string() +
              " --out " + (dir / "o").string();
  REQUIRE(run("interactions" + base, dir / "log.txt") == 0);
  auto m = table(dir / "o" / "interactions_DR.csv");
  std::map<std::pair<std::string, std::string>, std::string> cells;
  for (const auto& r : m.rows) cells[{r.cells[0], r.cells[1]}] = r.cells[3];
  CHECK(cells.at({"Biology", "15"}) == "25");
  CHECK(cells.at({"Biology", "16"}) == "1");
  CHECK(cells.at({"Chemistry", "15"}) == "1");
  CHECK(cells.at({"Chemistry", "16"}) == "1");
  CHECK(table(dir / "o" / "interactions_IR.csv").rows.empty());

  REQUIRE(run("flag-contexts" + base, dir / "log.txt") == 0);
  auto flagged = slurp(dir / "o" / "flagged_contexts.jsonl");
  CHECK(flagged.find("c1") != std::string::npos);
  CHECK(flagged.find("c2") == std::string::npos);
  CHECK(flagged.find("disagree") != std::string::npos);
}

TEST_CASE("cli: commands are repeatable and leave the dataset untouched") {
  auto dir = scratch("repeat");
  REQUIRE(run("synth --seed 5 --papers 300 --out " + (dir / "ds").string(), dir / "log.txt") ==
          0);
  auto before = snapshot(dir / "ds");
  auto conf = write_conf(dir, "fraction = 0.05\n");
  for (const char* cmd : {"validate", "profile", "cohort", "patents", "table1", "lag-trend",
                          "interactions", "aagr", "flag-contexts"}) {
    auto args = std::string(cmd) + " --config " + conf.string() + " --dataset " +
                (dir / "ds").string() + " --out ";
    REQUIRE(run(args + (dir / "a").string(), dir / "log.txt") == 0);
    REQUIRE(run(args + (dir / "b").string(), dir / "log.txt") == 0);
  }
  CHECK(snapshot(dir / "a") == snapshot(dir / "b"));
  CHECK(snapshot(dir / "ds") == before);
}

TEST_CASE("cli: thread count does not change reports") {
  auto dir = scratch("threads");
  REQUIRE(run("synth --seed 8 --papers 600 --out " + (dir / "ds").string(), dir / "log.txt") ==
          0);
  auto args = "profile --dataset " + (dir / "ds").string() + " --out ";
  REQUIRE(run("--help", dir / "log.txt") == 0);
  REQUIRE(std::system(("SLUMBER_THREADS=1 " + std::string(SLUMBER_CLI) + " " + args +
                       (dir / "one").string() + " 2>/dev/null")
                          .c_str()) == 0);
  REQUIRE(std::system(("SLUMBER_THREADS=7 " + std::string(SLUMBER_CLI) + " " + args +
                       (dir / "seven").string() + " 2>/dev/null")
                          .c_str()) == 0);
  CHECK(slurp(dir / "one" / "profiles.csv") == slurp(dir / "seven" / "profiles.csv"));
}

TEST_CASE("cli: bundled demo dataset validates") {
  auto dir = scratch("demo");
  CHECK(run(std::string("validate --dataset ") + SLUMBER_DEMO, dir / "log.txt") == 0);
}

TEST_CASE("cli: committed comparison fixture regenerates byte for byte") {
  auto dir = scratch("fixture");
  const fs::path fixtures = SLUMBER_FIXTURES;
  REQUIRE(run("synth --config " + (fixtures / "table1.conf").string() + " --out " +
                  (dir / "ds").string(),
              dir / "log.txt") == 0);
  CHECK(snapshot(dir / "ds") == snapshot(fixtures / "table1"));
}

TEST_CASE("comparison: swapping groups inverts ratios and keeps p") {
  auto flags = [](int n, int yes_a, int yes_b, int yes_c) {
    std::vector<PatentFlags> out;
    for (int i = 0; i < n; ++i) out.push_back({i < yes_a, i < yes_b, i < yes_c});
    return out;
  };
  auto dr = flags(200, 99, 82, 75);
  auto ir = flags(200, 70, 57, 41);
  auto ab = build_comparison(dr, ir, "DR", "IR");
  auto ba = build_comparison(ir, dr, "IR", "DR");
  REQUIRE(ab.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(ab[i].indicator == ba[i].indicator);
    CHECK(*ab[i].ratio_ab == doctest::Approx(*ba[i].ratio_ba));
    CHECK(*ab[i].ratio_ab * *ba[i].ratio_ab == doctest::Approx(1.0));
    CHECK(*ab[i].p == *ba[i].p);
    CHECK(*ab[i].z == -*ba[i].z);
  }
  CHECK(ab[0].a.rate == 0.495);
  CHECK(ab[2].b.rate == 0.205);
}
