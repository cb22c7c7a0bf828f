#include "slumber/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "slumber/csv.hpp"
#include "slumber/error.hpp"
#include "slumber/format.hpp"

namespace slumber {
namespace {

const std::set<std::string, std::less<>> kRunKeys{
    "pub_year_min", "pub_year_max",  "window_end",     "min_total_citations",
    "fraction",     "window_width",  "aagr_method",    "negative_terms",
    "threads"};

const std::set<std::string, std::less<>> kSynthKeys{
    "synth_papers",       "synth_seed",       "synth_mix",
    "synth_link_density", "synth_timing",     "synth_dr_patent_counts",
    "synth_ir_patent_counts", "synth_context_density"};

[[noreturn]] void bad(const std::string& key, const std::string& value) {
  throw Error(ErrorKind::InvalidConfig, "bad value for " + key + ": '" + value + "'");
}

std::int64_t as_int(const std::string& key, const std::string& value) {
  auto v = parse_int(value);
  if (!v) bad(key, value);
  return *v;
}

double as_double(const std::string& key, const std::string& value) {
  auto v = parse_double(value);
  if (!v) bad(key, value);
  return *v;
}

std::vector<std::string> as_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

template <std::size_t N>
std::array<double, N> as_weights(const std::string& key, const std::string& value) {
  auto items = as_list(value);
  if (items.size() != N) bad(key, value);
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = as_double(key, items[i]);
  return out;
}

CohortPatentTargets as_targets(const std::string& key, const std::string& value) {
  auto items = as_list(value);
  if (items.size() != 3) bad(key, value);
  auto n = [&](const std::string& s) {
    auto v = as_int(key, s);
    if (v < 0) bad(key, value);
    return static_cast<std::size_t>(v);
  };
  return {n(items[0]), n(items[1]), n(items[2])};
}

template <std::size_t N>
void normalize(std::array<double, N>& w, const char* what) {
  for (double x : w)
    if (!(x >= 0.0)) throw Error(ErrorKind::InvalidConfig, std::string(what) + " has a negative weight");
  double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(sum > 0.0)) throw Error(ErrorKind::InvalidConfig, std::string(what) + " weights sum to zero");
  for (double& x : w) x /= sum;
}

}  // namespace

void RunConfig::validate() const {
  cohort.validate();
  if (window_width < 1) throw Error(ErrorKind::InvalidConfig, "window_width must be >= 1");
  if (aagr_methods.empty()) throw Error(ErrorKind::InvalidConfig, "no AAGR method");
}

void SynthSpec::normalize_and_validate() {
  if (n_papers == 0) throw Error(ErrorKind::InvalidConfig, "synth needs at least one paper");
  normalize(shape_mix, "shape mix");
  normalize(timing, "timing targets");
  if (!(link_density >= 0.0 && link_density <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "link density outside [0, 1]");
  if (!(context_density >= 0.0 && context_density <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "context density outside [0, 1]");
  if (pub_year_min > pub_year_max)
    throw Error(ErrorKind::InvalidConfig, "pub_year_min > pub_year_max");
  if (window_end - pub_year_max < 2)
    throw Error(ErrorKind::InvalidConfig, "window must extend two years past pub_year_max");
  if (min_total_citations < 1)
    throw Error(ErrorKind::InvalidConfig, "min_total_citations must be positive");
  if (!(fraction > 0.0 && fraction <= 0.5))
    throw Error(ErrorKind::InvalidConfig, "fraction must lie in (0, 0.5]");
  for (const auto* t : {&dr_targets, &ir_targets}) {
    if (!*t) continue;
    const auto& v = **t;
    if (v.forward > v.linked || v.durable > v.linked)
      throw Error(ErrorKind::InvalidConfig, "patent targets exceed linked count");
    if (v.linked > cohort_size(n_papers, fraction))
      throw Error(ErrorKind::InvalidConfig, "linked target exceeds cohort size");
  }
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    // a '#' inside a quoted value is kept
    auto quote = line.find('"');
    if (hash != std::string::npos && (quote == std::string::npos || hash < quote))
      line.erase(hash);
    auto t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key(trim(t.substr(0, eq)));
    std::string value(trim(t.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!kRunKeys.count(key) && !kSynthKeys.count(key))
      throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": unknown key " + key);
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void apply_run_config(RunConfig& c, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "pub_year_min") c.cohort.pub_year_min = static_cast<Year>(as_int(key, value));
    else if (key == "pub_year_max") c.cohort.pub_year_max = static_cast<Year>(as_int(key, value));
    else if (key == "window_end") c.cohort.window_end = static_cast<Year>(as_int(key, value));
    else if (key == "min_total_citations") c.cohort.min_total_citations = as_int(key, value);
    else if (key == "fraction") c.cohort.fraction = as_double(key, value);
    else if (key == "window_width") c.window_width = static_cast<int>(as_int(key, value));
    else if (key == "threads") {
      auto n = as_int(key, value);
      if (n < 0) bad(key, value);
      c.threads = static_cast<unsigned>(n);
    } else if (key == "aagr_method") {
      c.aagr_methods.clear();
      for (const auto& m : as_list(value)) {
        if (m == "both") {
          c.aagr_methods = {stats::AagrMethod::Arithmetic, stats::AagrMethod::Compound};
          continue;
        }
        auto parsed = stats::parse_aagr_method(m);
        if (!parsed) bad(key, value);
        c.aagr_methods.push_back(*parsed);
      }
    } else if (key == "negative_terms") {
      c.negative_terms = as_list(value);
    }
  }
}

void apply_synth_config(SynthSpec& s, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "synth_papers") {
      auto n = as_int(key, value);
      if (n < 1) bad(key, value);
      s.n_papers = static_cast<std::size_t>(n);
    } else if (key == "synth_seed") {
      auto n = as_int(key, value);
      if (n < 0) bad(key, value);
      s.seed = static_cast<std::uint64_t>(n);
    } else if (key == "synth_mix") s.shape_mix = as_weights<4>(key, value);
    else if (key == "synth_link_density") s.link_density = as_double(key, value);
    else if (key == "synth_timing") s.timing = as_weights<3>(key, value);
    else if (key == "synth_dr_patent_counts") s.dr_targets = as_targets(key, value);
    else if (key == "synth_ir_patent_counts") s.ir_targets = as_targets(key, value);
    else if (key == "synth_context_density") s.context_density = as_double(key, value);
    else if (key == "pub_year_min") s.pub_year_min = static_cast<Year>(as_int(key, value));
    else if (key == "pub_year_max") s.pub_year_max = static_cast<Year>(as_int(key, value));
    else if (key == "window_end") s.window_end = static_cast<Year>(as_int(key, value));
    else if (key == "min_total_citations") s.min_total_citations = as_int(key, value);
    else if (key == "fraction") s.fraction = as_double(key, value);
  }
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SLUMBER_THREADS")) {
    auto v = parse_int(env);
    if (v && *v > 0) return static_cast<unsigned>(*v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace slumber
