#pragma once

#include <functional>
#include <string>
#include <vector>

#include "projlim/intervals.hpp"

namespace projlim {

enum class MeasureKind { exponential, gaussian, uniform, empirical_step };

/// Probability measure on R described through its cdf and quantile
/// function. Continuous kinds (exponential, gaussian, uniform) have a
/// strictly increasing cdf on their support; empirical_step is a finite
/// atomic measure with a right-continuous step cdf.
class BaseMeasure {
 public:
  static BaseMeasure exponential(double rate);
  static BaseMeasure gaussian(double mean, double sd);
  static BaseMeasure uniform(double lo, double hi);
  /// Atoms strictly increasing; weights positive, summing to 1 within 1e-9.
  static BaseMeasure empirical_step(std::vector<double> atoms, std::vector<double> weights);

  MeasureKind kind() const { return kind_; }

  /// P((-inf, x]); right-continuous, handles +-inf.
  double cdf(double x) const;
  /// P((-inf, x)); equals cdf except at atoms of an empirical_step.
  double mass_below(double x) const;
  /// Generalized inverse of the cdf: smallest x with cdf(x) >= p, p in (0,1).
  double quantile(double p) const;

  /// Mass of a half-open interval [lo, hi); an atom sitting exactly at lo
  /// belongs to the interval, one at hi does not.
  double mass(const Interval& iv) const;
  double mass(const QSet& s) const;

  /// True for the continuous kinds, whose quantile is a proper inverse.
  bool has_continuous_quantile() const { return kind_ != MeasureKind::empirical_step; }
  /// Smallest x with cdf(x) = 1, or +inf when there is none.
  double support_upper() const;

  std::string describe() const;

 private:
  BaseMeasure() = default;
  MeasureKind kind_ = MeasureKind::exponential;
  double a_ = 1.0;  // rate / mean / lo
  double b_ = 0.0;  // unused / sd / hi
  std::vector<double> atoms_;
  std::vector<double> weights_;   // normalized
  std::vector<double> cum_;       // cumulative weights
};

/// Quantile of the standard normal law; Acklam's rational approximation
/// with one Halley correction step against erfc (relative error well below
/// 1e-12 over (0,1)).
double standard_normal_quantile(double p);

/// Vector of cell masses of mu on the partition (the evaluation of a
/// measure on a finite partition). Throws NumericError when a cdf
/// evaluation yields NaN or the masses fail to sum to 1 within 1e-9.
SimplexPoint cell_masses(const BaseMeasure& mu, const Partition& I);

/// Partition of R into 2^level cells of equal mass under g0, cut at the
/// quantiles k/2^level. Levels n and n+1 nest: every level-n cell is the
/// union of two level-(n+1) cells. Requires a continuous quantile.
Partition dyadic_quantile_partition(const BaseMeasure& g0, int level);

/// Finitely additive normalized set function on the interval algebra.
/// Measures are the sigma-additive special case (from_measure); other
/// charges need not be sigma-additive.
class Charge {
 public:
  Charge(std::string name, std::function<double(const QSet&)> eval);
  static Charge from_measure(const BaseMeasure& mu);

  double operator()(const QSet& a) const { return eval_(a); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<double(const QSet&)> eval_;
};

/// The charge assigning 1 to every set that contains a tail [t, inf) and 0
/// to every other set. Finitely additive, but along the tails
/// A_n = [n, inf) decreasing to the empty set its value stays 1, so it is
/// not sigma-additive.
Charge escape_charge();

SimplexPoint cell_masses(const Charge& c, const Partition& I);

}  // namespace projlim
