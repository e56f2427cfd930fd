#pragma once

#include <span>
#include <vector>

#include "projlim/families.hpp"
#include "projlim/intervals.hpp"
#include "projlim/rng.hpp"

namespace projlim {

/// Dirichlet draw via independent unit-scale gammas with the given shapes.
/// Zero shapes yield exactly-zero coordinates. Throws std::invalid_argument
/// when all shapes are zero (degenerate family).
SimplexPoint sample_dirichlet(std::span<const double> shapes, RandomSource& rng);

/// Normalized vector of independent inverse Gaussian draws with
/// parameters (shapes[i], rate 1). Zero parameters yield exactly-zero
/// coordinates.
SimplexPoint sample_nig(std::span<const double> shapes, RandomSource& rng);

/// Leaf masses of one Polya tree draw at the given level: beta branch
/// probabilities are drawn at every internal node down to the level and
/// multiplied along root-to-leaf paths. Returns the raw 2^level products.
std::vector<double> polya_tree_leaf_draw(const PolyaTreeFamily& f, int level, RandomSource& rng);

/// Same draw presented as a simplex point on the level's partition.
SimplexPoint sample_polya_tree_level(const PolyaTreeFamily& f, int level, RandomSource& rng);

/// One draw of the family's marginal on a partition.
SimplexPoint sample_marginal(const MarginalFamily& f, const Partition& I, RandomSource& rng);

/// Coherent draw along a refinement chain: the finest partition is sampled
/// once and every coarser point is the block sum of the next finer one, so
/// pushing any point through its coarsening map reproduces the adjacent
/// point bit for bit.
struct ChainDraw {
  std::vector<Partition> chain;      // coarse to fine
  std::vector<SimplexPoint> points;  // aligned with chain
};

/// Throws std::invalid_argument when consecutive partitions are not
/// refinements (or, for a Polya tree, when any partition leaves the dyadic
/// chain).
ChainDraw sample_chain(const MarginalFamily& f, std::vector<Partition> chain, RandomSource& rng);

/// Raw truncated stick-breaking draw: weights w_k = v_k prod_{j<k}(1-v_j)
/// with v_j ~ Beta(1, alpha), atoms drawn from g0 through its quantile,
/// and the mass left after `truncation` sticks attached to one extra atom.
struct StickBreakingDraw {
  std::vector<double> weights;
  std::vector<double> atoms;
  double leftover = 0.0;
  double extra_atom = 0.0;
};

StickBreakingDraw stick_breaking_draw(double alpha, const BaseMeasure& g0,
                                      std::size_t truncation, RandomSource& rng);

/// The same draw aggregated over the cells of I.
SimplexPoint stick_breaking_sample(double alpha, const BaseMeasure& g0, std::size_t truncation,
                                   const Partition& I, RandomSource& rng);

}  // namespace projlim
