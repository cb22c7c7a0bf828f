#include "slumber/curve.hpp"

#include <cstdlib>
#include <limits>

#include "slumber/error.hpp"

namespace slumber {
namespace {

__extension__ typedef __int128 Wide;

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

Wide wide_gcd(Wide a, Wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    Wide r = a % b;
    a = b;
    b = r;
  }
  return a;
}

ExactValue reduce(Wide num, Wide den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr Wide lim = std::numeric_limits<std::int64_t>::max();
  if (wide_abs(num) > lim || den > lim)
    throw Error(ErrorKind::InvalidCounts, "citation counts too large for exact arithmetic");
  return {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// Numerator of L_t - C_t over the common denominator D * t_max:
//   C_0 t_max + (1 - C_0) t - C_t t_max, scaled by D.
// Its absolute value is also the (scaled) perpendicular distance from
// (t, C_t) to the reference line, up to a constant factor.
Wide deviation_numerator(const CumulativeCurve& c, int t) {
  const Wide d = c.denominator();
  const Wide c0 = c.numerator(0);
  const Wide tm = c.t_max();
  return c0 * tm + (d - c0) * t - Wide{c.numerator(t)} * tm;
}

}  // namespace

CumulativeCurve::CumulativeCurve(std::vector<std::int64_t> numerators,
                                 std::int64_t denominator)
    : numerators_(std::move(numerators)), denominator_(denominator) {
  if (numerators_.size() < 2)
    throw Error(ErrorKind::SeriesTooShort,
                "cumulative curve needs at least two years");
  if (denominator_ <= 0)
    throw Error(ErrorKind::ZeroCitations, "non-positive curve denominator");
  if (numerators_.front() < 0)
    throw Error(ErrorKind::InvalidCounts, "negative cumulative share");
  for (std::size_t i = 1; i < numerators_.size(); ++i)
    if (numerators_[i] < numerators_[i - 1])
      throw Error(ErrorKind::InvalidCounts, "cumulative curve decreases");
  if (numerators_.back() != denominator_)
    throw Error(ErrorKind::InvalidCounts, "cumulative curve does not end at 1");
}

double CumulativeCurve::fraction(int t) const {
  if (t == t_max()) return 1.0;
  return reduce(numerator(t), denominator_).to_double();
}

std::vector<double> CumulativeCurve::fractions() const {
  std::vector<double> out;
  out.reserve(numerators_.size());
  for (int t = 0; t <= t_max(); ++t) out.push_back(fraction(t));
  return out;
}

double ExactValue::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string_view to_string(TurningType type) {
  switch (type) {
    case TurningType::Awakening: return "awakening";
    case TurningType::Falling: return "falling";
    case TurningType::Flat: return "flat";
  }
  return "flat";
}

CumulativeCurve cumulative_fraction(const CitationSeries& series) {
  if (series.counts.size() < 2)
    throw Error(ErrorKind::SeriesTooShort, series.paper_id);
  std::vector<std::int64_t> cum;
  cum.reserve(series.counts.size());
  std::int64_t running = 0;
  for (auto c : series.counts) {
    if (c < 0) throw Error(ErrorKind::InvalidCounts, series.paper_id);
    running += c;
    cum.push_back(running);
  }
  if (running == 0) throw Error(ErrorKind::ZeroCitations, series.paper_id);
  return CumulativeCurve(std::move(cum), running);
}

std::vector<double> reference_line(const CumulativeCurve& curve) {
  const int tm = curve.t_max();
  const Wide d = curve.denominator();
  const Wide c0 = curve.numerator(0);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(tm) + 1);
  for (int t = 0; t <= tm; ++t)
    out.push_back(reduce(c0 * tm + (d - c0) * t, d * tm).to_double());
  return out;
}

ExactValue bcp_exact(const CumulativeCurve& curve) {
  Wide sum = 0;
  for (int t = 0; t <= curve.t_max(); ++t) sum += deviation_numerator(curve, t);
  return reduce(sum, Wide{curve.denominator()} * curve.t_max());
}

double bcp(const CumulativeCurve& curve) { return bcp_exact(curve).to_double(); }

std::vector<ExactValue> deviations_exact(const CumulativeCurve& curve) {
  const Wide den = Wide{curve.denominator()} * curve.t_max();
  std::vector<ExactValue> out;
  out.reserve(static_cast<std::size_t>(curve.t_max()) + 1);
  for (int t = 0; t <= curve.t_max(); ++t)
    out.push_back(reduce(deviation_numerator(curve, t), den));
  return out;
}

TurningPoint turning_point(const CumulativeCurve& curve) {
  TurningPoint tp;
  Wide best = -1;
  for (int t = 0; t <= curve.t_max(); ++t) {
    Wide dist = wide_abs(deviation_numerator(curve, t));
    if (dist > best) {
      best = dist;
      tp.t = t;
    }
  }
  switch (bcp_exact(curve).sign()) {
    case 1: tp.type = TurningType::Awakening; break;
    case -1: tp.type = TurningType::Falling; break;
    default: tp.type = TurningType::Flat; break;
  }
  return tp;
}

CurveProfile profile(const CitationSeries& series) {
  auto curve = cumulative_fraction(series);
  CurveProfile p;
  p.paper_id = series.paper_id;
  p.base_year = series.base_year;
  p.t_max = curve.t_max();
  p.total_citations = curve.denominator();
  p.bcp_exact = bcp_exact(curve);
  p.bcp = p.bcp_exact.to_double();
  auto tp = turning_point(curve);
  p.turning_t = tp.t;
  p.turning_year = series.base_year + tp.t;
  p.turning_type = tp.type;
  for (const auto& d : deviations_exact(curve)) p.deviations.push_back(d.to_double());
  return p;
}

}  // namespace slumber
