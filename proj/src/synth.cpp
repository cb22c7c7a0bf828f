#include "slumber/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>

#include "slumber/cohort.hpp"
#include "slumber/curve.hpp"
#include "slumber/error.hpp"
#include "slumber/ingest.hpp"
#include "slumber/patent.hpp"

namespace slumber::synth {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::string numbered(const char* prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
  return buf;
}

struct FieldProfile {
  const char* name;
  std::vector<const char*> subfields;
  std::vector<const char*> ipc;
};

const std::vector<FieldProfile>& field_profiles() {
  static const std::vector<FieldProfile> fields{
      {"Biology", {"Genetics", "Biochemistry", "Molecular biology", "Cell biology"},
       {"C12N 15/10", "C12Q 1/68", "A61K 38/00", "C07K 14/47", "G01N 33/53"}},
      {"Chemistry", {"Organic chemistry", "Physical chemistry", "Polymer chemistry"},
       {"C07D 213/00", "B01J 19/00", "C08F 2/00", "C12N 9/00"}},
      {"Psychology", {"Neuroscience", "Cognitive psychology"},
       {"A61B 5/16", "G06F 3/01", "G09B 19/00"}},
      {"Geology", {"Geochemistry", "Paleontology"}, {"E21B 43/00", "G01V 1/00", "C02F 1/00"}},
      {"Materials science", {"Nanotechnology", "Composite material"},
       {"C22C 38/00", "B82Y 30/00", "C23C 16/00", "H01L 29/00"}},
      {"Physics", {"Condensed matter physics", "Optics", "Quantum mechanics"},
       {"H01L 21/00", "G02B 6/00", "H01S 3/00", "G01N 21/00"}},
      {"Medicine", {"Immunology", "Virology"}, {"A61K 31/00", "A61P 35/00", "A61B 6/00"}},
      {"Computer science", {"Algorithm", "Machine learning"}, {"G06F 17/00", "H04L 29/06"}},
      {"Environmental science", {"Ecology"}, {"C02F 3/00", "B01D 53/00"}},
      {"Engineering", {"Mechanical engineering"}, {"F16H 1/00", "B23K 26/00"}},
      {"Mathematics", {"Statistics"}, {"G06F 17/18"}},
      {"Geography", {"Cartography"}, {"G01C 21/00"}},
      {"Economics", {}, {"G06Q 10/00"}},
      {"Art", {}, {"B44C 1/00"}},
      {"Business", {}, {"G06Q 30/00"}},
      {"History", {}, {"G09B 19/00"}},
      {"Philosophy", {}, {"G06N 5/00"}},
      {"Political science", {}, {"G06Q 50/26"}},
      {"Sociology", {}, {"G06Q 50/00"}},
  };
  return fields;
}

// Weights over field_profiles() per shape; the tail fields share the rest.
std::vector<double> field_weights(Shape shape) {
  const auto n = field_profiles().size();
  std::vector<double> w(n, 0.0);
  switch (shape) {
    case Shape::Instant:
      w[0] = 0.9;
      w[1] = 0.1;
      break;
    case Shape::Delayed:
      w = {0.28, 0.14, 0.12, 0.09, 0.09, 0.08, 0.05, 0.03, 0.02, 0.02,
           0.02, 0.01, 0.01, 0.01, 0.01, 0.005, 0.005, 0.005, 0.005};
      break;
    default:
      std::fill(w.begin(), w.end(), 1.0);
      break;
  }
  return w;
}

std::size_t pick_weighted(Rng& rng, const std::vector<double>& w) {
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  double x = rng.unit() * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (x < w[i]) return i;
    x -= w[i];
  }
  for (std::size_t i = w.size(); i-- > 0;)
    if (w[i] > 0) return i;
  return 0;
}

CitationSeries to_series(const std::string& id, Year base, const std::vector<std::int64_t>& c) {
  CitationSeries s;
  s.paper_id = id;
  s.base_year = base;
  s.counts = c;
  s.total = std::accumulate(c.begin(), c.end(), std::int64_t{0});
  return s;
}

int bcp_sign(const std::vector<std::int64_t>& counts) {
  return bcp_exact(cumulative_fraction(to_series("", 0, counts))).sign();
}

std::vector<std::int64_t> make_counts(Rng& rng, Shape shape, int tm, std::int64_t min_total) {
  const auto len = static_cast<std::size_t>(tm) + 1;
  std::int64_t total = rng.uniform(min_total, min_total * 3);
  std::vector<double> w(len, 0.0);
  switch (shape) {
    case Shape::Linear: {
      auto per_year = (total + static_cast<std::int64_t>(len) - 1) / static_cast<std::int64_t>(len);
      return std::vector<std::int64_t>(len, per_year);
    }
    case Shape::Delayed: {
      int lo = std::max(1, tm / 3);
      int hi = std::max(lo, tm - 2);
      int awake = static_cast<int>(rng.uniform(lo, hi));
      for (int t = 0; t <= tm; ++t)
        w[static_cast<std::size_t>(t)] =
            t < awake ? 0.02 * rng.unit() : std::pow(t - awake + 1.0, 1.5);
      auto counts = allocate_counts(w, total);
      if (bcp_sign(counts) > 0) return counts;
      std::vector<std::int64_t> fallback(len, 0);
      fallback.back() = total;
      return fallback;
    }
    case Shape::Instant: {
      int peak = static_cast<int>(rng.uniform(0, std::min(3, tm - 1)));
      double tau = 1.0 + 2.0 * rng.unit();
      for (int t = 0; t <= tm; ++t)
        w[static_cast<std::size_t>(t)] =
            (t < peak ? 0.3 : std::exp(-(t - peak) / tau)) + 0.005 * rng.unit();
      auto counts = allocate_counts(w, total);
      if (bcp_sign(counts) < 0) return counts;
      std::vector<std::int64_t> fallback(len, 0);
      fallback[1] = total;
      return fallback;
    }
    case Shape::Noise:
      for (auto& x : w) x = 0.05 + rng.unit();
      return allocate_counts(w, total);
  }
  return std::vector<std::int64_t>(len, 1);
}

}  // namespace

// Rng --------------------------------------------------------------------------

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(next());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % range);
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

// Apportionment ----------------------------------------------------------------

std::vector<std::size_t> largest_remainder(std::span<const double> proportions,
                                           std::size_t total) {
  const double sum = std::accumulate(proportions.begin(), proportions.end(), 0.0);
  std::vector<std::size_t> out(proportions.size(), 0);
  if (proportions.empty() || !(sum > 0)) return out;
  std::vector<std::pair<double, std::size_t>> rema;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    const double quota = proportions[i] / sum * static_cast<double>(total);
    // snap values that are integral up to rounding noise
    const double snapped = std::abs(quota - std::round(quota)) < 1e-9 ? std::round(quota) : quota;
    out[i] = static_cast<std::size_t>(std::floor(snapped));
    assigned += out[i];
    rema.emplace_back(snapped - std::floor(snapped), i);
  }
  std::stable_sort(rema.begin(), rema.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total && k < rema.size(); ++k, ++assigned)
    ++out[rema[k].second];
  return out;
}

std::vector<std::int64_t> allocate_counts(std::span<const double> weights, std::int64_t total) {
  auto parts = largest_remainder(weights, static_cast<std::size_t>(total));
  return {parts.begin(), parts.end()};
}

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::Delayed: return "delayed";
    case Shape::Instant: return "instant";
    case Shape::Linear: return "linear";
    case Shape::Noise: return "noise";
  }
  return "";
}

// Concordance ------------------------------------------------------------------

const std::vector<ConcordanceEntry>& sample_concordance() {
  static const std::vector<ConcordanceEntry> entries = [] {
    struct Field {
      int id;
      const char* name;
      const char* sector;
      std::vector<const char*> prefixes;
    };
    const char* ee = "Electrical engineering";
    const char* in = "Instruments";
    const char* ch = "Chemistry";
    const char* me = "Mechanical engineering";
    const char* ot = "Other fields";
    const std::vector<Field> fields{
        {1, "Electrical machinery, apparatus, energy", ee, {"H01B", "H01F", "H01G", "H01H", "H01M", "H01R", "H02"}},
        {2, "Audio-visual technology", ee, {"G09F", "G09G", "G11B", "H04N", "H04R", "H04S"}},
        {3, "Telecommunications", ee, {"H01P", "H01Q", "H04B", "H04M", "H04Q"}},
        {4, "Digital communication", ee, {"H04L", "H04W"}},
        {5, "Basic communication processes", ee, {"H03"}},
        {6, "Computer technology", ee, {"G06", "G10L", "G11C"}},
        {7, "IT methods for management", ee, {"G06Q"}},
        {8, "Semiconductors", ee, {"H01L"}},
        {9, "Optics", in, {"G02", "G03B", "G03F", "H01S"}},
        {10, "Measurement", in, {"G01", "G04"}},
        {11, "Analysis of biological materials", in, {"G01N33/"}},
        {12, "Control", in, {"G05B", "G05D", "G08B", "G09B"}},
        {13, "Medical technology", in, {"A61B", "A61F", "A61M", "A61N"}},
        {14, "Organic fine chemistry", ch, {"C07B", "C07C", "C07D", "C07F", "A61Q"}},
        {15, "Biotechnology", ch, {"C07K", "C12M", "C12N", "C12P", "C12Q"}},
        {16, "Pharmaceuticals", ch, {"A61K", "A61P"}},
        {17, "Macromolecular chemistry, polymers", ch, {"C08F", "C08G", "C08L"}},
        {18, "Food chemistry", ch, {"A23L", "C12C", "C12G", "C13"}},
        {19, "Basic materials chemistry", ch, {"A01N", "C09K", "C10", "C11D"}},
        {20, "Materials, metallurgy", ch, {"B22", "C01", "C04", "C21", "C22"}},
        {21, "Surface technology, coating", ch, {"B05D", "C23", "C25"}},
        {22, "Micro-structural and nano-technology", ch, {"B81", "B82"}},
        {23, "Chemical engineering", ch, {"B01J", "B01F", "B03", "B04"}},
        {24, "Environmental technology", ch, {"B01D53", "B09", "C02", "F01N"}},
        {25, "Handling", me, {"B65G", "B66"}},
        {26, "Machine tools", me, {"B21", "B23", "B24"}},
        {27, "Engines, pumps, turbines", me, {"F01D", "F02", "F03", "F04"}},
        {28, "Textile and paper machines", me, {"D01", "D03", "D21"}},
        {29, "Other special machines", me, {"A01B", "B29", "F41"}},
        {30, "Thermal processes and apparatus", me, {"F24", "F25B", "F28"}},
        {31, "Mechanical elements", me, {"F15", "F16"}},
        {32, "Transport", me, {"B60", "B61", "B62", "B64"}},
        {33, "Furniture, games", ot, {"A47", "A63"}},
        {34, "Other consumer goods", ot, {"A45", "B42", "B44"}},
        {35, "Civil engineering", ot, {"E01", "E02", "E04", "E21"}},
    };
    std::vector<ConcordanceEntry> out;
    for (const auto& f : fields)
      for (const auto* p : f.prefixes) out.push_back({p, f.id, f.name, f.sector});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.ipc_prefix.size() != b.ipc_prefix.size())
        return a.ipc_prefix.size() > b.ipc_prefix.size();
      return a.ipc_prefix < b.ipc_prefix;
    });
    return out;
  }();
  return entries;
}

// Generator --------------------------------------------------------------------

SynthDataset generate(SynthSpec spec) {
  spec.normalize_and_validate();
  Rng rng(spec.seed);
  SynthDataset data;
  data.concordance = sample_concordance();

  // Shapes in exact proportions, shuffled over papers.
  auto shape_counts = largest_remainder(spec.shape_mix, spec.n_papers);
  std::vector<Shape> shapes;
  const Shape kinds[] = {Shape::Delayed, Shape::Instant, Shape::Linear, Shape::Noise};
  for (std::size_t k = 0; k < 4; ++k) shapes.insert(shapes.end(), shape_counts[k], kinds[k]);
  rng.shuffle(shapes);

  const auto& fields = field_profiles();
  std::map<std::string, std::size_t> primary_field;
  std::vector<CurveProfile> profiles;
  profiles.reserve(spec.n_papers);

  for (std::size_t i = 0; i < spec.n_papers; ++i) {
    PaperRecord p;
    p.paper_id = numbered("P", i + 1, 6);
    p.pub_year = static_cast<Year>(rng.uniform(spec.pub_year_min, spec.pub_year_max));
    p.title = "Synthetic paper " + std::to_string(i + 1);
    p.doi = "10.5555/synth." + std::to_string(i + 1);

    const Shape shape = shapes[i];
    const auto weights = field_weights(shape);
    const auto first = pick_weighted(rng, weights);
    std::vector<std::size_t> tops{first};
    if (shape != Shape::Instant && rng.chance(0.3)) {
      auto second = pick_weighted(rng, weights);
      if (second != first) tops.push_back(second);
    }
    for (auto f : tops) p.fields_of_study.push_back({fields[f].name, 0});
    for (auto f : tops) {
      const auto& subs = fields[f].subfields;
      if (subs.empty()) continue;
      auto k = rng.uniform(1, static_cast<std::int64_t>(std::min<std::size_t>(2, subs.size())));
      for (std::int64_t j = 0; j < k; ++j)
        p.fields_of_study.push_back({subs[static_cast<std::size_t>(j)], 1});
    }
    primary_field[p.paper_id] = first;

    const int tm = spec.window_end - p.pub_year;
    auto counts = make_counts(rng, shape, tm, spec.min_total_citations);
    for (int t = 0; t <= tm; ++t) {
      auto c = counts[static_cast<std::size_t>(t)];
      if (c > 0) data.citations.push_back({p.paper_id, p.pub_year + t, c});
    }
    profiles.push_back(profile(to_series(p.paper_id, p.pub_year, counts)));
    data.shapes[p.paper_id] = shape;
    data.papers.push_back(std::move(p));
  }

  CohortConfig cc;
  cc.pub_year_min = spec.pub_year_min;
  cc.pub_year_max = spec.pub_year_max;
  cc.window_end = spec.window_end;
  cc.min_total_citations = spec.min_total_citations;
  cc.fraction = spec.fraction;
  auto cohorts = select_cohorts(profiles, cc);
  data.dr_set = cohorts.dr_set;
  data.ir_set = cohorts.ir_set;

  std::map<std::string, const CurveProfile*> profile_of;
  for (const auto& pr : profiles) profile_of[pr.paper_id] = &pr;
  std::map<std::string, const PaperRecord*> paper_of;
  for (const auto& p : data.papers) paper_of[p.paper_id] = &p;

  std::size_t family_counter = 0;
  const Year last_filing = spec.window_end + 3;
  auto ipc_for = [&](const std::string& paper_id) {
    const auto& pool = fields[primary_field.at(paper_id)].ipc;
    std::vector<std::string> codes;
    auto n = rng.uniform(1, std::min<std::int64_t>(2, static_cast<std::int64_t>(pool.size())));
    auto start = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(pool.size()) - 1));
    for (std::int64_t k = 0; k < n; ++k)
      codes.emplace_back(pool[(start + static_cast<std::size_t>(k)) % pool.size()]);
    return codes;
  };
  auto add_family = [&](const std::string& paper_id, Year priority, std::vector<Year> filings,
                        std::int64_t forward) {
    PatentFamilyRecord f;
    f.family_id = numbered("F", ++family_counter, 7);
    f.earliest_priority_year = priority;
    std::sort(filings.begin(), filings.end());
    filings.erase(std::unique(filings.begin(), filings.end()), filings.end());
    f.filing_years = std::move(filings);
    f.forward_citation_count = forward;
    f.ipc_codes = ipc_for(paper_id);
    data.links.push_back({paper_id, f.family_id});
    data.patents.push_back(std::move(f));
  };

  // Cohort papers: linked counts, timing classes and outcome flags follow
  // the targets exactly.
  std::set<std::string> in_cohort;
  auto link_cohort = [&](const std::vector<std::string>& members,
                         const std::optional<CohortPatentTargets>& targets) {
    std::vector<std::string> order;
    for (const auto& id : members)
      if (in_cohort.insert(id).second) order.push_back(id);
    rng.shuffle(order);
    const std::size_t linked =
        targets ? std::min(targets->linked, order.size())
                : static_cast<std::size_t>(std::llround(spec.link_density * static_cast<double>(order.size())));
    auto class_counts = largest_remainder(spec.timing, linked);
    std::vector<TimingClass> classes;
    const TimingClass kinds3[] = {TimingClass::Earlier, TimingClass::Same, TimingClass::Later};
    for (std::size_t k = 0; k < 3; ++k) classes.insert(classes.end(), class_counts[k], kinds3[k]);
    rng.shuffle(classes);

    auto flag_list = [&](std::optional<std::size_t> exact, double p) {
      std::vector<bool> flags(linked, false);
      if (exact) {
        for (std::size_t k = 0; k < std::min(*exact, linked); ++k) flags[k] = true;
        std::vector<std::size_t> idx(linked);
        std::iota(idx.begin(), idx.end(), 0);
        rng.shuffle(idx);
        std::vector<bool> shuffled(linked);
        for (std::size_t k = 0; k < linked; ++k) shuffled[idx[k]] = flags[k];
        return shuffled;
      }
      for (std::size_t k = 0; k < linked; ++k) flags[k] = rng.chance(p);
      return flags;
    };
    auto forward_flags = flag_list(targets ? std::optional(targets->forward) : std::nullopt, 0.7);
    auto durable_flags = flag_list(targets ? std::optional(targets->durable) : std::nullopt, 0.6);

    for (std::size_t k = 0; k < linked; ++k) {
      const auto& id = order[k];
      const Year pub = paper_of.at(id)->pub_year;
      const Year turning = profile_of.at(id)->turning_year;
      Year prio = turning;
      switch (classes[k]) {
        case TimingClass::Earlier:
          prio = turning > pub ? static_cast<Year>(rng.uniform(pub, turning - 1)) : turning - 1;
          break;
        case TimingClass::Same:
          prio = turning;
          break;
        case TimingClass::Later:
          prio = static_cast<Year>(rng.uniform(turning + 1, std::max(turning + 1, last_filing)));
          break;
      }
      const bool durable = durable_flags[k];
      const auto n_fam = rng.uniform(1, durable ? 4 : 3);
      const std::int64_t fwd = forward_flags[k] ? rng.uniform(1, 300) : 0;
      std::vector<Year> filings{prio};
      if (durable) filings.push_back(prio + static_cast<Year>(rng.uniform(1, 8)));
      add_family(id, prio, filings, fwd);
      for (std::int64_t j = 1; j < n_fam; ++j) {
        const Year p2 = durable ? static_cast<Year>(rng.uniform(prio, prio + 10)) : prio;
        std::vector<Year> f2{p2};
        if (durable && rng.chance(0.5)) f2.push_back(p2 + static_cast<Year>(rng.uniform(0, 4)));
        add_family(id, p2, f2, rng.uniform(0, 50));
      }
    }
  };
  link_cohort(cohorts.dr_set, spec.dr_targets);
  link_cohort(cohorts.ir_set, spec.ir_targets);

  for (const auto& p : data.papers) {
    if (in_cohort.count(p.paper_id) || !rng.chance(spec.link_density)) continue;
    const auto n_fam = rng.uniform(1, 3);
    for (std::int64_t j = 0; j < n_fam; ++j) {
      const Year prio = static_cast<Year>(rng.uniform(p.pub_year, last_filing));
      std::vector<Year> filings{prio};
      if (rng.chance(0.5)) filings.push_back(prio + static_cast<Year>(rng.uniform(0, 5)));
      add_family(p.paper_id, prio, filings, rng.chance(0.3) ? 0 : rng.uniform(1, 120));
    }
  }
  std::sort(data.links.begin(), data.links.end());

  // Citation contexts, some carrying negative terms.
  static const char* negative[] = {
      "However, these measurements are inconsistent with the model of %s.",
      "We disagree with the interpretation proposed in %s.",
      "Our data contradict the earlier claim made in %s.",
      "In contrast to %s, we observe no such effect.",
      "The mechanism described in %s remains in dispute.",
  };
  static const char* neutral[] = {
      "The authors of %s proposed an interesting idea that we extend here.",
      "Following the approach of %s, we measured the rates directly.",
      "Contrasting predictions were tested, building on %s.",
      "The protein space concept was first introduced by %s.",
  };
  std::size_t context_counter = 0;
  for (const auto& p : data.papers) {
    if (!rng.chance(spec.context_density)) continue;
    const auto n = rng.uniform(1, 2);
    for (std::int64_t j = 0; j < n; ++j) {
      const bool neg = rng.chance(0.4);
      const char* tmpl =
          neg ? negative[rng.uniform(0, std::size(negative) - 1)]
              : neutral[rng.uniform(0, std::size(neutral) - 1)];
      char buf[256];
      std::snprintf(buf, sizeof buf, tmpl, p.paper_id.c_str());
      CitationContextRecord c;
      c.citing_id = numbered("C", ++context_counter, 7);
      c.cited_paper_id = p.paper_id;
      c.year = static_cast<Year>(rng.uniform(p.pub_year + 1, spec.window_end));
      c.sentence = buf;
      data.contexts.push_back(std::move(c));
    }
  }
  return data;
}

void write_dataset(const SynthDataset& data, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw Error(ErrorKind::Io, "cannot create " + dir.string());
  auto write = [&](const char* name, auto&& fn) {
    auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    fn(out);
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
  };
  write(dataset_files::kPapers, [&](std::ostream& o) { write_papers(o, data.papers); });
  write(dataset_files::kCitations, [&](std::ostream& o) { write_citations(o, data.citations); });
  write(dataset_files::kPatents, [&](std::ostream& o) { write_patents(o, data.patents); });
  write(dataset_files::kLinks, [&](std::ostream& o) { write_links(o, data.links); });
  write(dataset_files::kConcordance,
        [&](std::ostream& o) { write_concordance(o, data.concordance); });
  write(dataset_files::kContexts, [&](std::ostream& o) { write_contexts(o, data.contexts); });
}

}  // namespace slumber::synth
