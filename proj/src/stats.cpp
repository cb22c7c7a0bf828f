#include "slumber/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "slumber/error.hpp"
#include "slumber/format.hpp"

namespace slumber::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorKind::InvalidConfig, "quantile probability outside (0, 1)");
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double lo = 0.02425;
  double x;
  if (p < lo) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - lo) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

ProportionSummary proportion_ci(std::int64_t k, std::int64_t n, double level) {
  if (n < 1 || k < 0 || k > n)
    throw Error(ErrorKind::InvalidCounts,
                std::to_string(k) + " of " + std::to_string(n));
  if (!(level > 0.0 && level < 1.0))
    throw Error(ErrorKind::InvalidConfig, "confidence level outside (0, 1)");
  const double z = level == 0.95 ? kZ95 : normal_quantile(0.5 + level / 2);
  ProportionSummary s;
  s.successes = k;
  s.trials = n;
  s.level = level;
  s.rate = static_cast<double>(k) / static_cast<double>(n);
  const double half = z * std::sqrt(s.rate * (1 - s.rate) / static_cast<double>(n));
  s.ci_low = std::clamp(s.rate - half, 0.0, 1.0);
  s.ci_high = std::clamp(s.rate + half, 0.0, 1.0);
  return s;
}

ComparisonResult two_proportion_test(std::int64_t k1, std::int64_t n1,
                                     std::int64_t k2, std::int64_t n2) {
  ComparisonResult r;
  r.group_a = proportion_ci(k1, n1);
  r.group_b = proportion_ci(k2, n2);
  const double pooled =
      static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
  if (k1 + k2 == 0 || k1 + k2 == n1 + n2)
    throw Error(ErrorKind::DegeneratePool,
                "pooled rate " + std::to_string(pooled));
  const double se = std::sqrt(pooled * (1 - pooled) *
                              (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  r.z = (r.group_a.rate - r.group_b.rate) / se;
  r.p_two_sided = std::clamp(2.0 * (1.0 - normal_cdf(std::abs(r.z))), 0.0, 1.0);
  if (k2 > 0) r.rate_ratio = rate_ratio(k1, n1, k2, n2);
  return r;
}

double rate_ratio(std::int64_t k1, std::int64_t n1, std::int64_t k2, std::int64_t n2) {
  if (n1 < 1 || n2 < 1 || k1 < 0 || k2 < 0 || k1 > n1 || k2 > n2)
    throw Error(ErrorKind::InvalidCounts, "rate ratio counts");
  if (k2 == 0) throw Error(ErrorKind::ZeroBaseline, "baseline group has no events");
  return (static_cast<double>(k1) / static_cast<double>(n1)) /
         (static_cast<double>(k2) / static_cast<double>(n2));
}

WindowedTrend moving_window_mean(std::span<const YearValue> points, int width,
                                 int step) {
  if (width < 1 || step < 1)
    throw Error(ErrorKind::InvalidConfig, "window width and step must be positive");
  WindowedTrend out;
  if (points.empty()) return out;

  std::vector<YearValue> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const YearValue& a, const YearValue& b) { return a.year < b.year; });
  const Year first = sorted.front().year;
  const Year last_start = std::max(first, sorted.back().year - width + 1);

  auto lo = sorted.begin();
  for (Year s = first; s <= last_start; s += step) {
    const Year e = s + width - 1;
    while (lo != sorted.end() && lo->year < s) ++lo;
    double sum = 0.0;
    std::size_t n = 0;
    for (auto it = lo; it != sorted.end() && it->year <= e; ++it) {
      sum += it->value;
      ++n;
    }
    if (n == 0) continue;
    out.push_back({s, e, sum / static_cast<double>(n), n});
  }
  return out;
}

double median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::InsufficientData, "median of nothing");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2)
    throw Error(ErrorKind::InsufficientData, "sample SD needs two values");
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

Summary summary_stats(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::InsufficientData, "no values");
  Summary s;
  s.n = values.size();
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  s.min = *mn;
  s.max = *mx;
  s.median = median(values);
  if (values.size() >= 2) s.sd = sample_sd(values);
  return s;
}

std::string_view to_string(AagrMethod m) {
  return m == AagrMethod::Arithmetic ? "arithmetic" : "compound";
}

std::optional<AagrMethod> parse_aagr_method(std::string_view text) {
  const auto name = to_lower(trim(text));
  if (name == "arithmetic") return AagrMethod::Arithmetic;
  if (name == "compound") return AagrMethod::Compound;
  return std::nullopt;
}

AagrResult aagr(std::span<const std::pair<Year, double>> annual_counts,
                Year base_year, Year end_year, AagrMethod method) {
  if (base_year >= end_year)
    throw Error(ErrorKind::InvalidConfig, "AAGR needs base_year < end_year");
  std::map<Year, double> by_year;
  for (const auto& [y, v] : annual_counts) {
    if (v < 0) throw Error(ErrorKind::InvalidCounts, "negative yearly count");
    if (!by_year.emplace(y, v).second)
      throw Error(ErrorKind::InvalidCounts, "year listed twice: " + std::to_string(y));
  }
  auto at = [&](Year y) {
    auto it = by_year.find(y);
    return it == by_year.end() ? 0.0 : it->second;
  };

  AagrResult r{base_year, end_year, method, 0.0, 0};
  if (method == AagrMethod::Compound) {
    const double base = at(base_year);
    if (base == 0.0) throw Error(ErrorKind::ZeroBase, std::to_string(base_year));
    const double ratio = at(end_year) / base;
    r.value_percent =
        (std::pow(ratio, 1.0 / static_cast<double>(end_year - base_year)) - 1.0) * 100.0;
    return r;
  }

  double sum = 0.0;
  int used = 0;
  for (Year y = base_year + 1; y <= end_year; ++y) {
    const double prev = at(y - 1);
    if (prev == 0.0) {
      ++r.skipped_years;
      continue;
    }
    sum += (at(y) - prev) / prev;
    ++used;
  }
  if (used == 0)
    throw Error(ErrorKind::AllDenominatorsZero,
                std::to_string(base_year) + "-" + std::to_string(end_year));
  r.value_percent = sum / used * 100.0;
  return r;
}

}  // namespace slumber::stats
