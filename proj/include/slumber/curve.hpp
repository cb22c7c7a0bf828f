#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "slumber/model.hpp"

namespace slumber {

/// Cumulative share of citations C_t = numerators[t] / denominator, held
/// exactly. numerators is non-decreasing, starts at or above zero and ends
/// at denominator, so C_{t_max} is exactly 1.
class CumulativeCurve {
 public:
  /// Validates the invariants above and t_max >= 1.
  /// Throws Error(SeriesTooShort) or Error(InvalidCounts).
  CumulativeCurve(std::vector<std::int64_t> numerators, std::int64_t denominator);

  int t_max() const { return static_cast<int>(numerators_.size()) - 1; }
  std::int64_t numerator(int t) const { return numerators_[static_cast<std::size_t>(t)]; }
  std::int64_t denominator() const { return denominator_; }
  const std::vector<std::int64_t>& numerators() const { return numerators_; }

  double fraction(int t) const;
  std::vector<double> fractions() const;

 private:
  std::vector<std::int64_t> numerators_;
  std::int64_t denominator_;
};

/// Reduced fraction; den > 0.
struct ExactValue {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const;
  int sign() const { return (num > 0) - (num < 0); }
  bool operator==(const ExactValue&) const = default;
};

enum class TurningType { Awakening, Falling, Flat };
std::string_view to_string(TurningType type);

struct TurningPoint {
  int t = 0;
  TurningType type = TurningType::Flat;
};

struct CurveProfile {
  std::string paper_id;
  Year base_year = 0;
  int t_max = 0;
  std::int64_t total_citations = 0;
  double bcp = 0.0;
  ExactValue bcp_exact;
  int turning_t = 0;
  Year turning_year = 0;
  TurningType turning_type = TurningType::Flat;
  std::vector<double> deviations;  // L_t - C_t
};

/// Throws Error(ZeroCitations) when the series has no citations and
/// Error(SeriesTooShort) when it covers a single year.
CumulativeCurve cumulative_fraction(const CitationSeries& series);

/// Straight line from (0, C_0) to (t_max, 1).
std::vector<double> reference_line(const CumulativeCurve& curve);

/// Sum over t of (L_t - C_t). Positive when the curve sags below the
/// reference line (delayed recognition), negative when it bulges above it.
/// Note the value grows with the observation window; papers of different
/// ages are not directly comparable.
ExactValue bcp_exact(const CumulativeCurve& curve);
double bcp(const CumulativeCurve& curve);

/// Exact L_t - C_t for every t, as reduced fractions.
std::vector<ExactValue> deviations_exact(const CumulativeCurve& curve);

/// Year offset where (t, C_t) is farthest from the reference line; the
/// earliest t wins ties. Type follows the sign of Bcp.
TurningPoint turning_point(const CumulativeCurve& curve);

CurveProfile profile(const CitationSeries& series);

}  // namespace slumber
