#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "projlim/base_measure.hpp"
#include "projlim/intervals.hpp"

namespace projlim {

/// Marginals on a partition are Dirichlet with parameters
/// concentration * (base mass of each cell). Their mean is the vector of
/// base-measure cell masses on every partition.
struct DirichletFamily {
  double concentration;
  BaseMeasure base;
};

/// Marginals are normalized vectors of independent inverse Gaussian
/// variables with parameters concentration * (base mass of each cell) and
/// rate parameter fixed to 1.
struct NigFamily {
  double concentration;
  BaseMeasure base;
};

/// Branch-parameter schedule for a Polya tree: either alpha = c * level^2
/// at every node of a level, or an explicit per-level table.
class PolyaTreeSchedule {
 public:
  static PolyaTreeSchedule quadratic(double c);
  static PolyaTreeSchedule per_level(std::vector<double> alphas);

  /// Branch parameter used at every node of the given level (level >= 1).
  double level_alpha(int level) const;
  std::string describe() const;

 private:
  PolyaTreeSchedule() = default;
  double c_ = 0.0;  // 0 marks the tabulated form
  std::vector<double> table_;
};

/// Random measures built on the nested dyadic quantile partitions of the
/// base measure via beta-distributed branch probabilities. Marginals are
/// defined only on partitions of that chain.
struct PolyaTreeFamily {
  BaseMeasure base;
  PolyaTreeSchedule schedule;
};

using MarginalFamily = std::variant<DirichletFamily, NigFamily, PolyaTreeFamily>;

MarginalFamily make_dirichlet(double concentration, BaseMeasure base);
MarginalFamily make_nig(double concentration, BaseMeasure base);
MarginalFamily make_polya_tree(BaseMeasure base, PolyaTreeSchedule schedule);

const BaseMeasure& family_base(const MarginalFamily& f);
std::string describe(const MarginalFamily& f);

/// Per-partition parameter set of a family. Dirichlet/NIG fill
/// cell_params; a Polya tree fills tree_level_alphas (level l, 1-based,
/// holds the 2^l branch parameters of that level). Cells with zero base
/// mass are recorded in zero_cells.
struct FamilyParams {
  std::vector<double> cell_params;
  std::vector<std::vector<double>> tree_level_alphas;
  std::vector<std::size_t> zero_cells;
};

FamilyParams family_params(const MarginalFamily& f, const Partition& I);

/// The exact marginal mean: the base-measure cell masses. For a Polya
/// tree the partition must lie on the dyadic quantile chain.
SimplexPoint family_mean(const MarginalFamily& f, const Partition& I);

/// Level n such that I equals the family's dyadic quantile partition at
/// level n; throws std::invalid_argument when there is no such level.
int dyadic_level_of(const PolyaTreeFamily& f, const Partition& I);

/// Log density of Dirichlet(alphas) at an interior simplex point, taken
/// with respect to Lebesgue measure on the (n-1)-simplex.
double dirichlet_log_density(std::span<const double> alphas, const SimplexPoint& x);

/// Log of alpha/sqrt(2 pi) z^{-3/2} exp(-(alpha^2/z + gamma^2 z)/2 + gamma alpha).
double inverse_gaussian_log_density(double z, double alpha, double gamma);

}  // namespace projlim
