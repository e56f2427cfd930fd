#include "projlim/base_measure.hpp"

#include <algorithm>
#include <cmath>

namespace projlim {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

}  // namespace

double standard_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("quantile argument must lie in (0,1), got " + format_double(p));
  }
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact cdf.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

BaseMeasure BaseMeasure::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("exponential rate must be positive");
  }
  BaseMeasure m;
  m.kind_ = MeasureKind::exponential;
  m.a_ = rate;
  return m;
}

BaseMeasure BaseMeasure::gaussian(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
    throw std::invalid_argument("gaussian needs finite mean and positive sd");
  }
  BaseMeasure m;
  m.kind_ = MeasureKind::gaussian;
  m.a_ = mean;
  m.b_ = sd;
  return m;
}

BaseMeasure BaseMeasure::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("uniform needs finite lo < hi");
  }
  BaseMeasure m;
  m.kind_ = MeasureKind::uniform;
  m.a_ = lo;
  m.b_ = hi;
  return m;
}

BaseMeasure BaseMeasure::empirical_step(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.empty() || atoms.size() != weights.size()) {
    throw std::invalid_argument("empirical_step needs matching non-empty atoms and weights");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i])) throw std::invalid_argument("non-finite atom");
    if (!(weights[i] > 0.0)) throw std::invalid_argument("weights must be positive");
    if (i > 0 && !(atoms[i - 1] < atoms[i])) {
      throw std::invalid_argument("atoms must be strictly increasing");
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("weights sum to " + format_double(total));
  }
  BaseMeasure m;
  m.kind_ = MeasureKind::empirical_step;
  for (double& w : weights) w /= total;
  m.atoms_ = std::move(atoms);
  m.weights_ = std::move(weights);
  m.cum_.resize(m.weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < m.weights_.size(); ++i) {
    acc += m.weights_[i];
    m.cum_[i] = acc;
  }
  m.cum_.back() = 1.0;
  return m;
}

double BaseMeasure::cdf(double x) const {
  if (std::isnan(x)) throw NumericError("cdf of NaN");
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  switch (kind_) {
    case MeasureKind::exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-a_ * x);
    case MeasureKind::gaussian:
      return normal_cdf((x - a_) / b_);
    case MeasureKind::uniform:
      if (x <= a_) return 0.0;
      if (x >= b_) return 1.0;
      return (x - a_) / (b_ - a_);
    case MeasureKind::empirical_step: {
      auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
      return it == atoms_.begin() ? 0.0 : cum_[std::distance(atoms_.begin(), it) - 1];
    }
  }
  return 0.0;
}

double BaseMeasure::mass_below(double x) const {
  if (kind_ != MeasureKind::empirical_step) return cdf(x);
  if (std::isnan(x)) throw NumericError("mass_below of NaN");
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x);
  return it == atoms_.begin() ? 0.0 : cum_[std::distance(atoms_.begin(), it) - 1];
}

double BaseMeasure::quantile(double p) const {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("quantile argument must lie in (0,1), got " + format_double(p));
  }
  switch (kind_) {
    case MeasureKind::exponential:
      return -std::log1p(-p) / a_;
    case MeasureKind::gaussian:
      return a_ + b_ * standard_normal_quantile(p);
    case MeasureKind::uniform:
      return a_ + p * (b_ - a_);
    case MeasureKind::empirical_step: {
      auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
      return atoms_[std::min<std::size_t>(std::distance(cum_.begin(), it), atoms_.size() - 1)];
    }
  }
  return 0.0;
}

double BaseMeasure::mass(const Interval& iv) const {
  const double m = mass_below(iv.hi) - mass_below(iv.lo);
  if (std::isnan(m)) throw NumericError("NaN mass on " + to_string(iv));
  return std::max(m, 0.0);  // guard against cdf rounding inversion
}

double BaseMeasure::mass(const QSet& s) const {
  double total = 0.0;
  for (const auto& iv : s.intervals()) total += mass(iv);
  return total;
}

double BaseMeasure::support_upper() const {
  switch (kind_) {
    case MeasureKind::uniform:
      return b_;
    case MeasureKind::empirical_step:
      return atoms_.back();
    default:
      return kInf;
  }
}

std::string BaseMeasure::describe() const {
  switch (kind_) {
    case MeasureKind::exponential:
      return "exponential(rate=" + format_double(a_) + ")";
    case MeasureKind::gaussian:
      return "gaussian(mean=" + format_double(a_) + ",sd=" + format_double(b_) + ")";
    case MeasureKind::uniform:
      return "uniform(" + format_double(a_) + "," + format_double(b_) + ")";
    case MeasureKind::empirical_step:
      return "empirical_step(" + std::to_string(atoms_.size()) + " atoms)";
  }
  return "?";
}

SimplexPoint cell_masses(const BaseMeasure& mu, const Partition& I) {
  std::vector<double> masses(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) masses[i] = mu.mass(I.cell(i));
  return SimplexPoint::normalized(std::move(masses), 1e-9);
}

Partition dyadic_quantile_partition(const BaseMeasure& g0, int level) {
  if (level < 1 || level > 30) {
    throw std::invalid_argument("dyadic level must lie in [1,30], got " + std::to_string(level));
  }
  if (!g0.has_continuous_quantile()) {
    throw std::invalid_argument("unsupported base measure for quantile partition: " +
                                g0.describe());
  }
  const std::size_t n = std::size_t{1} << level;
  std::vector<double> cuts(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    cuts[k - 1] = g0.quantile(std::ldexp(static_cast<double>(k), -level));
  }
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    if (!(cuts[k - 1] < cuts[k])) {
      throw NumericError("quantile cuts are not strictly increasing for " + g0.describe());
    }
  }
  return Partition::from_cut_points(cuts);
}

Charge::Charge(std::string name, std::function<double(const QSet&)> eval)
    : name_(std::move(name)), eval_(std::move(eval)) {
  if (!eval_) throw std::invalid_argument("charge needs an evaluation rule");
}

Charge Charge::from_measure(const BaseMeasure& mu) {
  return Charge(mu.describe(), [mu](const QSet& a) { return mu.mass(a); });
}

Charge escape_charge() {
  return Charge("escape", [](const QSet& a) { return a.has_upper_tail() ? 1.0 : 0.0; });
}

SimplexPoint cell_masses(const Charge& c, const Partition& I) {
  std::vector<double> masses(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) masses[i] = c(I.cell(i));
  return SimplexPoint::normalized(std::move(masses), 1e-9);
}

}  // namespace projlim
