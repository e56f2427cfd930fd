#include "projlim/intervals.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace projlim {

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string to_string(const Interval& iv) {
  return "[" + format_double(iv.lo) + "," + format_double(iv.hi) + ")";
}

QSet QSet::full_line() { return interval(-kInf, kInf); }

QSet QSet::interval(double lo, double hi) {
  return from_intervals({Interval{lo, hi}});
}

QSet QSet::from_intervals(std::vector<Interval> raw) {
  for (auto& iv : raw) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi)) {
      throw std::invalid_argument("invalid interval " + to_string(iv) +
                                  ": require lo < hi with non-NaN endpoints");
    }
    // Canonical zero so bit-level equality matches value equality.
    if (iv.lo == 0.0) iv.lo = 0.0;
    if (iv.hi == 0.0) iv.hi = 0.0;
  }
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  QSet out;
  for (const auto& iv : raw) {
    if (!out.ivals_.empty() && iv.lo <= out.ivals_.back().hi) {
      out.ivals_.back().hi = std::max(out.ivals_.back().hi, iv.hi);
    } else {
      out.ivals_.push_back(iv);
    }
  }
  return out;
}

bool QSet::is_full_line() const {
  return ivals_.size() == 1 && ivals_[0].lo == -kInf && ivals_[0].hi == kInf;
}

bool QSet::contains(double x) const {
  auto it = std::upper_bound(ivals_.begin(), ivals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == ivals_.begin()) return false;
  return std::prev(it)->contains(x);
}

double QSet::leftmost() const {
  if (ivals_.empty()) throw std::invalid_argument("leftmost() of the empty set");
  return ivals_.front().lo;
}

QSet complement(const QSet& a) {
  std::vector<Interval> out;
  double cursor = -kInf;
  for (const auto& iv : a.intervals()) {
    if (cursor < iv.lo) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < kInf) out.push_back({cursor, kInf});
  return QSet::from_intervals(std::move(out));
}

QSet set_union(const QSet& a, const QSet& b) {
  std::vector<Interval> all = a.intervals();
  all.insert(all.end(), b.intervals().begin(), b.intervals().end());
  return QSet::from_intervals(std::move(all));
}

QSet set_intersect(const QSet& a, const QSet& b) {
  const auto& A = a.intervals();
  const auto& B = b.intervals();
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < A.size() && j < B.size()) {
    const double lo = std::max(A[i].lo, B[j].lo);
    const double hi = std::min(A[i].hi, B[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (A[i].hi < B[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return QSet::from_intervals(std::move(out));
}

bool is_subset(const QSet& inner, const QSet& outer) {
  return set_intersect(inner, outer) == inner;
}

bool are_disjoint(const QSet& a, const QSet& b) {
  return set_intersect(a, b).is_empty();
}

std::string to_string(const QSet& s) {
  if (s.is_empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < s.intervals().size(); ++i) {
    if (i > 0) out += "+";
    out += to_string(s.intervals()[i]);
  }
  return out;
}

namespace {

// Sweep over all cell intervals at once: disjointness shows up as
// non-overlapping sorted intervals, coverage as absence of gaps.
bool check_cells(std::span<const QSet> cells, bool throw_on_violation) {
  auto fail = [&](const std::string& why) -> bool {
    if (throw_on_violation) throw std::invalid_argument("not a partition: " + why);
    return false;
  };
  if (cells.empty()) return fail("no cells");
  std::vector<Interval> all;
  for (const auto& c : cells) {
    if (c.is_empty()) return fail("empty cell");
    all.insert(all.end(), c.intervals().begin(), c.intervals().end());
  }
  std::sort(all.begin(), all.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  if (all.front().lo != -kInf) return fail("uncovered ray below " + format_double(all.front().lo));
  double cursor = -kInf;
  for (const auto& iv : all) {
    if (iv.lo < cursor) return fail("overlap at " + format_double(iv.lo));
    if (iv.lo > cursor) return fail("gap at " + format_double(cursor));
    cursor = iv.hi;
  }
  if (cursor != kInf) return fail("uncovered ray above " + format_double(cursor));
  return true;
}

}  // namespace

bool is_partition(std::span<const QSet> cells) {
  return check_cells(cells, /*throw_on_violation=*/false);
}

Partition Partition::trivial() { return Partition({QSet::full_line()}); }

Partition Partition::from_cells(std::vector<QSet> cells) {
  check_cells(cells, /*throw_on_violation=*/true);
  std::sort(cells.begin(), cells.end(),
            [](const QSet& a, const QSet& b) { return a.leftmost() < b.leftmost(); });
  return Partition(std::move(cells));
}

Partition Partition::from_cut_points(const std::vector<double>& cuts) {
  if (cuts.empty()) return trivial();
  std::vector<QSet> cells;
  double lo = -kInf;
  for (double c : cuts) {
    cells.push_back(QSet::interval(lo, c));
    lo = c;
  }
  cells.push_back(QSet::interval(lo, kInf));
  return from_cells(std::move(cells));
}

std::string to_string(const Partition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += " | ";
    out += to_string(p.cell(i));
  }
  return out;
}

Partition common_refinement(const Partition& a, const Partition& b) {
  std::vector<QSet> cells;
  for (const auto& ca : a.cells()) {
    for (const auto& cb : b.cells()) {
      QSet piece = set_intersect(ca, cb);
      if (!piece.is_empty()) cells.push_back(std::move(piece));
    }
  }
  return Partition::from_cells(std::move(cells));
}

Grouping Grouping::identity(std::size_t n) {
  Grouping g;
  g.fine_size = n;
  g.blocks.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.blocks[i] = {i};
  return g;
}

std::optional<Grouping> coarsening_of(const Partition& coarse, const Partition& fine) {
  Grouping g;
  g.fine_size = fine.size();
  g.blocks.resize(coarse.size());
  for (std::size_t j = 0; j < fine.size(); ++j) {
    const double probe = fine.cell(j).leftmost() == -kInf
                             ? -kInf
                             : fine.cell(j).leftmost();
    std::size_t host = coarse.size();
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const bool hit = probe == -kInf ? coarse.cell(i).leftmost() == -kInf
                                      : coarse.cell(i).contains(probe);
      if (hit) {
        host = i;
        break;
      }
    }
    if (host == coarse.size() || !is_subset(fine.cell(j), coarse.cell(host))) {
      return std::nullopt;
    }
    g.blocks[host].push_back(j);
  }
  return g;
}

SimplexPoint SimplexPoint::from_masses(std::vector<double> masses) {
  if (masses.empty()) throw std::invalid_argument("simplex point needs at least one entry");
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw std::invalid_argument("simplex entry out of range: " + format_double(m));
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kSimplexSumTol) {
    throw std::invalid_argument("simplex masses sum to " + format_double(total));
  }
  return SimplexPoint(std::move(masses));
}

SimplexPoint SimplexPoint::normalized(std::vector<double> masses, double pre_tol) {
  if (masses.empty()) throw std::invalid_argument("simplex point needs at least one entry");
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw NumericError("mass out of range: " + format_double(m));
    }
    total += m;
  }
  if (!(std::abs(total - 1.0) <= pre_tol)) {
    throw NumericError("masses sum to " + format_double(total) +
                       ", outside tolerance " + format_double(pre_tol));
  }
  for (double& m : masses) m /= total;
  return from_masses(std::move(masses));
}

double SimplexPoint::sum() const {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

SimplexPoint coarsen(const Grouping& g, const SimplexPoint& fine) {
  if (fine.size() != g.fine_size) {
    throw std::invalid_argument("dimension mismatch: point has " +
                                std::to_string(fine.size()) + " entries, grouping expects " +
                                std::to_string(g.fine_size));
  }
  std::vector<bool> seen(g.fine_size, false);
  std::vector<double> out(g.blocks.size(), 0.0);
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    for (std::size_t j : g.blocks[i]) {
      if (j >= g.fine_size || seen[j]) {
        throw std::invalid_argument("grouping is not a partition of fine indices");
      }
      seen[j] = true;
      out[i] += fine[j];
    }
  }
  for (bool s : seen) {
    if (!s) throw std::invalid_argument("grouping leaves a fine index unassigned");
  }
  return SimplexPoint::from_masses(std::move(out));
}

}  // namespace projlim
