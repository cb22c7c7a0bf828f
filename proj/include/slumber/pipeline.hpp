#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slumber/cohort.hpp"
#include "slumber/config.hpp"
#include "slumber/curve.hpp"
#include "slumber/ingest.hpp"
#include "slumber/interact.hpp"
#include "slumber/patent.hpp"
#include "slumber/stats.hpp"

namespace slumber {

// Process exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitIo = 2;

/// Profiles of every paper whose curve is defined (total > 0, two or more
/// years observed), in paper_id order. Other papers are reported in
/// `warnings`. Work is split over `threads` workers; output order does not
/// depend on the thread count.
std::vector<CurveProfile> compute_profiles(const Dataset& dataset, unsigned threads,
                                           std::vector<std::string>* warnings = nullptr);

/// Indicators for every profiled paper, keyed by paper_id.
std::map<std::string, PatentIndicators> compute_all_indicators(
    const Dataset& dataset, std::span<const CurveProfile> profiles);

// Comparison table -------------------------------------------------------------

struct IndicatorComparison {
  std::string indicator;
  std::string label_a;
  std::string label_b;
  stats::ProportionSummary a;
  stats::ProportionSummary b;
  std::optional<double> ratio_ab;  // absent on ZeroBaseline
  std::optional<double> ratio_ba;
  std::optional<double> z;         // a minus b; absent on DegeneratePool
  std::optional<double> p;
};

/// One comparison per yes/no patent outcome: citing families, forward
/// citations of the earliest family, durability. Groups must be non-empty.
std::vector<IndicatorComparison> build_comparison(std::span<const PatentFlags> group_a,
                                                  std::span<const PatentFlags> group_b,
                                                  const std::string& label_a,
                                                  const std::string& label_b);

// Report writers. Floats use six decimals; rows come in a fixed order.
void write_profiles_csv(std::ostream& out, std::span<const CurveProfile> profiles);
void write_cohort_csv(std::ostream& out, const CohortResult& cohorts);
void write_indicators_csv(std::ostream& out,
                          const std::map<std::string, PatentIndicators>& indicators);
void write_comparison_csv(std::ostream& out, std::span<const IndicatorComparison> rows);
void write_matrix_csv(std::ostream& out, const InteractionMatrix& matrix);
void write_marginals_csv(std::ostream& out, const InteractionMatrix& matrix);
void write_trend_csv_header(std::ostream& out);
void write_trend_rows(std::ostream& out, const std::string& cohort, const std::string& mode,
                      const stats::WindowedTrend& trend);

// Commands ---------------------------------------------------------------------
// Each returns a process exit code and writes diagnostics to `log`.

int cmd_validate(const RunConfig& config, std::ostream& log);
int cmd_profile(const RunConfig& config, std::ostream& log);
int cmd_cohort(const RunConfig& config, std::ostream& log);
int cmd_patents(const RunConfig& config, std::ostream& log);
int cmd_table1(const RunConfig& config, std::ostream& log);
int cmd_lag_trend(const RunConfig& config, std::ostream& log);
int cmd_interactions(const RunConfig& config, std::ostream& log);
int cmd_aagr(const RunConfig& config, std::ostream& log);
int cmd_flag_contexts(const RunConfig& config, std::ostream& log);
int cmd_synth(const SynthSpec& spec, const std::filesystem::path& out_dir,
              std::ostream& log);

}  // namespace slumber
