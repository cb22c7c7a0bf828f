#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slumber/cohort.hpp"
#include "slumber/stats.hpp"

namespace slumber {

struct RunConfig {
  std::filesystem::path dataset_dir;
  std::filesystem::path output_dir;
  CohortConfig cohort;
  int window_width = 5;
  std::vector<stats::AagrMethod> aagr_methods{stats::AagrMethod::Arithmetic,
                                              stats::AagrMethod::Compound};
  std::vector<std::string> negative_terms;  // empty means the default list
  unsigned threads = 0;                      // 0 = hardware concurrency

  void validate() const;
};

/// Patent outcome counts forced onto one synthetic cohort.
struct CohortPatentTargets {
  std::size_t linked = 0;   // papers with >= 1 citing family
  std::size_t forward = 0;  // of those, earliest family has forward cites
  std::size_t durable = 0;  // of those, citing spans >= 1 year
};

struct SynthSpec {
  std::size_t n_papers = 1000;
  std::uint64_t seed = 1;
  // delayed, instant, linear, noise
  std::array<double, 4> shape_mix{0.3, 0.3, 0.2, 0.2};
  double link_density = 0.5;
  // earlier, same, later
  std::array<double, 3> timing{69.0 / 99, 5.0 / 99, 25.0 / 99};
  Year pub_year_min = 1970;
  Year pub_year_max = 2005;
  Year window_end = 2015;
  std::int64_t min_total_citations = 200;
  double fraction = 0.01;
  std::optional<CohortPatentTargets> dr_targets;
  std::optional<CohortPatentTargets> ir_targets;
  double context_density = 0.1;

  /// Normalizes shape_mix and timing to sum to 1 and checks ranges.
  /// Throws Error(InvalidConfig).
  void normalize_and_validate();
};

/// `key = value` lines; `#` starts a comment; values may be double-quoted.
/// Throws Error(InvalidConfig) for syntax errors, unknown keys or values
/// that do not parse.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

void apply_run_config(RunConfig& config, const KeyValues& kv);
void apply_synth_config(SynthSpec& spec, const KeyValues& kv);

/// Thread count from SLUMBER_THREADS (0 or unset = hardware concurrency),
/// overridden by an explicit non-zero request.
unsigned resolve_threads(unsigned requested);

}  // namespace slumber
