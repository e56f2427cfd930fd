#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace projlim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerance on the mass sum of a validated simplex point.
inline constexpr double kSimplexSumTol = 1e-12;

/// Raised when a numeric evaluation produces NaN, diverges, or a sum
/// drifts outside its admissible tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form; "inf"/"-inf" for unbounded values.
std::string format_double(double x);

/// Half-open interval [lo, hi) with lo < hi; lo may be -inf, hi may be +inf.
/// +inf is never attained, so [a, inf) means {x : x >= a}.
struct Interval {
  double lo;
  double hi;

  bool contains(double x) const { return lo <= x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& iv);

/// Finite disjoint union of half-open intervals in canonical form:
/// intervals sorted by left endpoint, pairwise disjoint, and separated by
/// strictly positive gaps (adjacent [a,b)+[b,c) is always stored as [a,c)).
/// The canonical form is unique, so operator== decides set equality.
class QSet {
 public:
  QSet() = default;  // the empty set

  static QSet full_line();
  static QSet interval(double lo, double hi);
  /// Canonicalizes an arbitrary interval list: sorts, merges overlaps and
  /// adjacencies. Throws std::invalid_argument unless every input interval
  /// has lo < hi with non-NaN endpoints.
  static QSet from_intervals(std::vector<Interval> raw);

  const std::vector<Interval>& intervals() const { return ivals_; }
  bool is_empty() const { return ivals_.empty(); }
  bool is_full_line() const;
  bool contains(double x) const;
  /// True when the set contains some tail [t, +inf).
  bool has_upper_tail() const { return !ivals_.empty() && ivals_.back().hi == kInf; }
  /// Left endpoint of the first interval; requires a non-empty set.
  double leftmost() const;

  friend bool operator==(const QSet&, const QSet&) = default;

 private:
  std::vector<Interval> ivals_;
};

QSet complement(const QSet& a);
QSet set_union(const QSet& a, const QSet& b);
QSet set_intersect(const QSet& a, const QSet& b);
bool is_subset(const QSet& inner, const QSet& outer);
bool are_disjoint(const QSet& a, const QSet& b);
std::string to_string(const QSet& s);

/// Finite measurable partition of the real line. Cells are non-empty
/// QSets, pairwise disjoint, with union equal to all of R, stored sorted
/// by leftmost endpoint.
class Partition {
 public:
  static Partition trivial();
  /// Validates and canonically orders the given cells; throws
  /// std::invalid_argument when they do not partition R.
  static Partition from_cells(std::vector<QSet> cells);
  /// (-inf,c1), [c1,c2), ..., [ck,inf) for strictly increasing cuts;
  /// an empty cut list yields the trivial partition.
  static Partition from_cut_points(const std::vector<double>& cuts);

  std::size_t size() const { return cells_.size(); }
  const QSet& cell(std::size_t i) const { return cells_[i]; }
  const std::vector<QSet>& cells() const { return cells_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  explicit Partition(std::vector<QSet> cells) : cells_(std::move(cells)) {}
  std::vector<QSet> cells_;
};

/// Predicate form of the Partition invariant: pairwise disjoint cells
/// whose union is the whole line.
bool is_partition(std::span<const QSet> cells);

std::string to_string(const Partition& p);

/// Common refinement: all non-empty pairwise intersections of cells of a
/// and b. Both inputs are coarsenings of the result.
Partition common_refinement(const Partition& a, const Partition& b);

/// Assignment of fine-partition cells to coarse-partition cells.
/// blocks[i] lists (in increasing order) the fine indices whose union is
/// coarse cell i.
struct Grouping {
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t fine_size = 0;

  static Grouping identity(std::size_t n);
};

/// Returns the grouping that realizes `coarse` as a coarsening of `fine`,
/// or nullopt when `fine` does not refine `coarse`.
std::optional<Grouping> coarsening_of(const Partition& coarse, const Partition& fine);

/// Probability vector over the cells of a partition: entries >= 0,
/// summing to 1 within kSimplexSumTol.
class SimplexPoint {
 public:
  /// Strict constructor; throws std::invalid_argument on a negative or
  /// non-finite entry or a sum off by more than kSimplexSumTol.
  static SimplexPoint from_masses(std::vector<double> masses);
  /// Asserts the raw sum is within pre_tol of 1 (NumericError otherwise),
  /// then divides through so the strict invariant holds. Exact zeros stay
  /// exact zeros.
  static SimplexPoint normalized(std::vector<double> masses, double pre_tol = 1e-9);

  std::size_t size() const { return masses_.size(); }
  double operator[](std::size_t i) const { return masses_[i]; }
  const std::vector<double>& masses() const { return masses_; }
  double sum() const;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  explicit SimplexPoint(std::vector<double> m) : masses_(std::move(m)) {}
  std::vector<double> masses_;
};

/// Block-sums a fine simplex point into the coarse one (the coarsening map
/// on simplices). Throws std::invalid_argument on a dimension mismatch or
/// an inconsistent grouping.
SimplexPoint coarsen(const Grouping& g, const SimplexPoint& fine);

}  // namespace projlim
