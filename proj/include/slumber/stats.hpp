#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "slumber/model.hpp"

namespace slumber::stats {

/// Two-sided 95% standard normal quantile.
inline constexpr double kZ95 = 1.959964;

/// Standard normal CDF, 0.5 * erfc(-x / sqrt(2)). libm's erfc is accurate
/// to a few ulp, well inside 1e-7 absolute.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

struct ProportionSummary {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;
};

/// Wald interval rate +- z * sqrt(rate (1 - rate) / n), clamped to [0, 1].
/// Throws Error(InvalidCounts) unless 0 <= k <= n and n >= 1.
ProportionSummary proportion_ci(std::int64_t k, std::int64_t n, double level = 0.95);

struct ComparisonResult {
  ProportionSummary group_a;
  ProportionSummary group_b;
  std::optional<double> rate_ratio;  // absent when group_b's rate is zero
  double z = 0.0;
  double p_two_sided = 1.0;
};

/// Pooled two-proportion z test. Throws Error(DegeneratePool) when the
/// pooled rate is 0 or 1.
ComparisonResult two_proportion_test(std::int64_t k1, std::int64_t n1,
                                     std::int64_t k2, std::int64_t n2);

/// (k1/n1) / (k2/n2). Throws Error(ZeroBaseline) when k2 == 0.
double rate_ratio(std::int64_t k1, std::int64_t n1, std::int64_t k2, std::int64_t n2);

struct YearValue {
  Year year = 0;
  double value = 0.0;
};

struct WindowMean {
  Year start = 0;
  Year end = 0;
  double mean = 0.0;
  std::size_t n_obs = 0;

  bool operator==(const WindowMean&) const = default;
};

using WindowedTrend = std::vector<WindowMean>;

/// Means over [s, s + width - 1] for s = min year, min year + step, ... up
/// to max year - width + 1. When the data span is shorter than one window a
/// single window starting at the min year is produced. Empty windows are
/// omitted.
WindowedTrend moving_window_mean(std::span<const YearValue> points, int width = 5,
                                 int step = 1);

struct Summary {
  std::size_t n = 0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  std::optional<double> sd;  // sample SD, needs n >= 2
};

/// Throws Error(InsufficientData) on empty input.
Summary summary_stats(std::span<const double> values);

/// Sample (n - 1) standard deviation. Throws Error(InsufficientData) for n < 2.
double sample_sd(std::span<const double> values);

double median(std::span<const double> values);

enum class AagrMethod { Arithmetic, Compound };
std::string_view to_string(AagrMethod m);
std::optional<AagrMethod> parse_aagr_method(std::string_view text);

struct AagrResult {
  Year base_year = 0;
  Year end_year = 0;
  AagrMethod method = AagrMethod::Arithmetic;
  double value_percent = 0.0;
  int skipped_years = 0;  // arithmetic only: years with a zero predecessor
};

/// Annual average growth rate of yearly counts from base_year to end_year,
/// in percent. Years absent from `annual_counts` count as zero.
///  arithmetic: mean of (v_y - v_{y-1}) / v_{y-1} over y in (base, end],
///              skipping zero predecessors; Error(AllDenominatorsZero) if
///              every year is skipped.
///  compound:   (v_end / v_base)^(1 / (end - base)) - 1; Error(ZeroBase)
///              when v_base == 0.
AagrResult aagr(std::span<const std::pair<Year, double>> annual_counts,
                Year base_year, Year end_year, AagrMethod method);

}  // namespace slumber::stats
