#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "slumber/config.hpp"
#include "slumber/model.hpp"

namespace slumber::synth {

/// splitmix64-seeded xoshiro256**. Same seed, same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform integer in [lo, hi]; lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// Uniform double in [0, 1).
  double unit();
  bool chance(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

/// Apportions `total` by largest remainder; ties go to the lower index.
std::vector<std::size_t> largest_remainder(std::span<const double> proportions,
                                           std::size_t total);

/// Splits `total` citations over the weights by largest remainder.
std::vector<std::int64_t> allocate_counts(std::span<const double> weights,
                                          std::int64_t total);

enum class Shape { Delayed, Instant, Linear, Noise };
std::string_view to_string(Shape s);

struct SynthDataset {
  std::vector<PaperRecord> papers;
  std::vector<CitationCountRow> citations;
  std::vector<PatentFamilyRecord> patents;
  std::vector<PatentCitationLink> links;
  std::vector<ConcordanceEntry> concordance;
  std::vector<CitationContextRecord> contexts;
  std::map<std::string, Shape> shapes;
  std::vector<std::string> dr_set;
  std::vector<std::string> ir_set;
};

/// Delayed papers always come out with Bcp > 0 and instant papers with
/// Bcp < 0. Every paper is cohort-eligible under the same settings, and
/// timing classes of the patent-linked papers in each cohort follow the
/// target proportions exactly (largest remainder).
SynthDataset generate(SynthSpec spec);

/// Writes the six dataset files.
void write_dataset(const SynthDataset& data, const std::filesystem::path& dir);

/// Small IPC -> WIPO technology field concordance covering all 35 fields.
const std::vector<ConcordanceEntry>& sample_concordance();

}  // namespace slumber::synth
