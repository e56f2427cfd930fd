#include "projlim/families.hpp"

#include <bit>
#include <cmath>

namespace projlim {

PolyaTreeSchedule PolyaTreeSchedule::quadratic(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("Polya tree constant c must be positive");
  }
  PolyaTreeSchedule s;
  s.c_ = c;
  return s;
}

PolyaTreeSchedule PolyaTreeSchedule::per_level(std::vector<double> alphas) {
  if (alphas.empty()) throw std::invalid_argument("per-level table must be non-empty");
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("per-level alphas must be positive");
    }
  }
  PolyaTreeSchedule s;
  s.table_ = std::move(alphas);
  return s;
}

double PolyaTreeSchedule::level_alpha(int level) const {
  if (level < 1) throw std::invalid_argument("tree level must be >= 1");
  if (table_.empty()) {
    return c_ * static_cast<double>(level) * static_cast<double>(level);
  }
  if (static_cast<std::size_t>(level) > table_.size()) {
    throw std::invalid_argument("per-level table has no entry for level " +
                                std::to_string(level));
  }
  return table_[static_cast<std::size_t>(level) - 1];
}

std::string PolyaTreeSchedule::describe() const {
  if (table_.empty()) return "c*n^2, c=" + format_double(c_);
  return "per-level table (" + std::to_string(table_.size()) + " levels)";
}

MarginalFamily make_dirichlet(double concentration, BaseMeasure base) {
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw std::invalid_argument("Dirichlet concentration must be positive");
  }
  return DirichletFamily{concentration, std::move(base)};
}

MarginalFamily make_nig(double concentration, BaseMeasure base) {
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw std::invalid_argument("NIG concentration must be positive");
  }
  return NigFamily{concentration, std::move(base)};
}

MarginalFamily make_polya_tree(BaseMeasure base, PolyaTreeSchedule schedule) {
  if (!base.has_continuous_quantile()) {
    throw std::invalid_argument("Polya tree needs a base measure with continuous quantile");
  }
  return PolyaTreeFamily{std::move(base), std::move(schedule)};
}

const BaseMeasure& family_base(const MarginalFamily& f) {
  return std::visit([](const auto& fam) -> const BaseMeasure& { return fam.base; }, f);
}

std::string describe(const MarginalFamily& f) {
  if (const auto* d = std::get_if<DirichletFamily>(&f)) {
    return "dirichlet(alpha=" + format_double(d->concentration) + ")/" + d->base.describe();
  }
  if (const auto* n = std::get_if<NigFamily>(&f)) {
    return "nig(alpha=" + format_double(n->concentration) + ")/" + n->base.describe();
  }
  const auto& pt = std::get<PolyaTreeFamily>(f);
  return "polya_tree(" + pt.schedule.describe() + ")/" + pt.base.describe();
}

int dyadic_level_of(const PolyaTreeFamily& f, const Partition& I) {
  const std::size_t n = I.size();
  if (n < 2 || !std::has_single_bit(n)) {
    throw std::invalid_argument("unsupported partition for Polya tree: " +
                                std::to_string(n) + " cells is not a dyadic size");
  }
  const int level = std::countr_zero(n);
  if (I != dyadic_quantile_partition(f.base, level)) {
    throw std::invalid_argument(
        "unsupported partition for Polya tree: not the level-" + std::to_string(level) +
        " quantile partition of " + f.base.describe());
  }
  return level;
}

namespace {

FamilyParams scaled_mass_params(double concentration, const BaseMeasure& base,
                                const Partition& I) {
  FamilyParams out;
  const SimplexPoint masses = cell_masses(base, I);
  out.cell_params.resize(I.size());
  for (std::size_t i = 0; i < I.size(); ++i) {
    out.cell_params[i] = concentration * masses[i];
    if (masses[i] == 0.0) out.zero_cells.push_back(i);
  }
  return out;
}

}  // namespace

FamilyParams family_params(const MarginalFamily& f, const Partition& I) {
  if (const auto* d = std::get_if<DirichletFamily>(&f)) {
    return scaled_mass_params(d->concentration, d->base, I);
  }
  if (const auto* n = std::get_if<NigFamily>(&f)) {
    return scaled_mass_params(n->concentration, n->base, I);
  }
  const auto& pt = std::get<PolyaTreeFamily>(f);
  const int level = dyadic_level_of(pt, I);
  FamilyParams out;
  out.tree_level_alphas.resize(static_cast<std::size_t>(level));
  for (int l = 1; l <= level; ++l) {
    out.tree_level_alphas[static_cast<std::size_t>(l) - 1]
        .assign(std::size_t{1} << l, pt.schedule.level_alpha(l));
  }
  return out;
}

SimplexPoint family_mean(const MarginalFamily& f, const Partition& I) {
  if (const auto* pt = std::get_if<PolyaTreeFamily>(&f)) {
    dyadic_level_of(*pt, I);  // reject partitions off the chain
  }
  return cell_masses(family_base(f), I);
}

double dirichlet_log_density(std::span<const double> alphas, const SimplexPoint& x) {
  if (alphas.size() != x.size()) {
    throw std::invalid_argument("parameter/point dimension mismatch");
  }
  double alpha_sum = 0.0;
  double log_norm = 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw std::domain_error("Dirichlet parameters must be positive");
    if (!(x[i] > 0.0) || !(x[i] < 1.0)) {
      throw std::domain_error("density is defined on the open simplex interior");
    }
    alpha_sum += alphas[i];
    log_norm += std::lgamma(alphas[i]);
    dot += (alphas[i] - 1.0) * std::log(x[i]);
  }
  return std::lgamma(alpha_sum) - log_norm + dot;
}

double inverse_gaussian_log_density(double z, double alpha, double gamma) {
  if (!(z > 0.0) || !(alpha > 0.0) || !(gamma > 0.0)) {
    throw std::domain_error("inverse_gaussian_log_density needs positive arguments");
  }
  return std::log(alpha) - 0.5 * std::log(2.0 * M_PI) - 1.5 * std::log(z) -
         0.5 * (alpha * alpha / z + gamma * gamma * z) + gamma * alpha;
}

}  // namespace projlim
