#include "projlim/samplers.hpp"

#include <algorithm>
#include <cmath>

namespace projlim {

namespace {

void check_shapes(std::span<const double> shapes) {
  if (shapes.empty()) throw std::invalid_argument("empty parameter vector");
  bool any_positive = false;
  for (double s : shapes) {
    if (std::isnan(s) || s < 0.0) throw std::domain_error("parameters must be >= 0");
    if (s > 0.0) any_positive = true;
  }
  if (!any_positive) {
    throw std::invalid_argument("degenerate family: all parameters are zero");
  }
}

template <class Draw>
SimplexPoint normalized_independent_draw(std::span<const double> shapes, Draw draw) {
  check_shapes(shapes);
  std::vector<double> vals(shapes.size(), 0.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    double total = 0.0;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      vals[i] = shapes[i] == 0.0 ? 0.0 : draw(shapes[i]);
      total += vals[i];
    }
    if (total > 0.0) {
      for (double& v : vals) v /= total;
      return SimplexPoint::normalized(std::move(vals), 1e-9);
    }
  }
  throw NumericError("normalization sum underflowed to zero");
}

// Maps points to cells of a partition; cells may be multi-interval QSets.
class CellLocator {
 public:
  explicit CellLocator(const Partition& I) {
    for (std::size_t i = 0; i < I.size(); ++i) {
      for (const auto& iv : I.cell(i).intervals()) {
        entries_.push_back({iv.lo, iv.hi, i});
      }
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.lo < b.lo; });
  }

  std::size_t locate(double x) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), x,
                               [](double v, const Entry& e) { return v < e.lo; });
    // A partition covers R, so the predecessor interval always contains x.
    return std::prev(it)->cell;
  }

 private:
  struct Entry {
    double lo, hi;
    std::size_t cell;
  };
  std::vector<Entry> entries_;
};

}  // namespace

SimplexPoint sample_dirichlet(std::span<const double> shapes, RandomSource& rng) {
  return normalized_independent_draw(shapes, [&rng](double s) { return rng.gamma(s); });
}

SimplexPoint sample_nig(std::span<const double> shapes, RandomSource& rng) {
  return normalized_independent_draw(shapes,
                                     [&rng](double s) { return rng.inverse_gaussian(s, 1.0); });
}

std::vector<double> polya_tree_leaf_draw(const PolyaTreeFamily& f, int level, RandomSource& rng) {
  if (level < 1 || level > 30) throw std::invalid_argument("tree level must lie in [1,30]");
  std::vector<double> x{1.0};
  std::vector<double> next;
  for (int l = 1; l <= level; ++l) {
    const double a = f.schedule.level_alpha(l);
    next.resize(x.size() * 2);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double y = rng.beta(a, a);
      next[2 * j] = x[j] * y;
      next[2 * j + 1] = x[j] * (1.0 - y);
    }
    std::swap(x, next);
  }
  return x;
}

SimplexPoint sample_polya_tree_level(const PolyaTreeFamily& f, int level, RandomSource& rng) {
  return SimplexPoint::normalized(polya_tree_leaf_draw(f, level, rng), 1e-9);
}

SimplexPoint sample_marginal(const MarginalFamily& f, const Partition& I, RandomSource& rng) {
  if (std::holds_alternative<DirichletFamily>(f)) {
    return sample_dirichlet(family_params(f, I).cell_params, rng);
  }
  if (std::holds_alternative<NigFamily>(f)) {
    return sample_nig(family_params(f, I).cell_params, rng);
  }
  const auto& pt = std::get<PolyaTreeFamily>(f);
  return sample_polya_tree_level(pt, dyadic_level_of(pt, I), rng);
}

ChainDraw sample_chain(const MarginalFamily& f, std::vector<Partition> chain, RandomSource& rng) {
  if (chain.empty()) throw std::invalid_argument("empty partition chain");
  std::vector<Grouping> steps;  // steps[i]: chain[i] as coarsening of chain[i+1]
  steps.reserve(chain.size() - 1);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    auto g = coarsening_of(chain[i], chain[i + 1]);
    if (!g) {
      throw std::invalid_argument("not a refinement chain at position " + std::to_string(i));
    }
    steps.push_back(std::move(*g));
  }
  ChainDraw out;
  out.points.resize(chain.size(), SimplexPoint::from_masses({1.0}));
  out.points.back() = sample_marginal(f, chain.back(), rng);
  for (std::size_t i = chain.size() - 1; i-- > 0;) {
    out.points[i] = coarsen(steps[i], out.points[i + 1]);
  }
  out.chain = std::move(chain);
  return out;
}

StickBreakingDraw stick_breaking_draw(double alpha, const BaseMeasure& g0,
                                      std::size_t truncation, RandomSource& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("stick-breaking concentration must be positive");
  }
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  StickBreakingDraw out;
  out.weights.resize(truncation);
  out.atoms.resize(truncation);
  double stick = 1.0;
  for (std::size_t k = 0; k < truncation; ++k) {
    // Beta(1, alpha) by inverse cdf.
    const double v = -std::expm1(std::log1p(-rng.uniform01()) / alpha);
    out.weights[k] = v * stick;
    stick *= 1.0 - v;
    out.atoms[k] = g0.quantile(rng.uniform_open());
  }
  // Remaining stick mass lands on one extra atom so the output is a full
  // simplex point rather than a deficient one.
  out.leftover = stick;
  out.extra_atom = g0.quantile(rng.uniform_open());
  return out;
}

SimplexPoint stick_breaking_sample(double alpha, const BaseMeasure& g0, std::size_t truncation,
                                   const Partition& I, RandomSource& rng) {
  const StickBreakingDraw draw = stick_breaking_draw(alpha, g0, truncation, rng);
  const CellLocator locator(I);
  std::vector<double> acc(I.size(), 0.0);
  for (std::size_t k = 0; k < truncation; ++k) {
    acc[locator.locate(draw.atoms[k])] += draw.weights[k];
  }
  acc[locator.locate(draw.extra_atom)] += draw.leftover;
  return SimplexPoint::normalized(std::move(acc), 1e-9);
}

}  // namespace projlim
