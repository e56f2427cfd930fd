#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "projlim/families.hpp"
#include "support.hpp"

using namespace projlim;
using namespace testsupport;

TEST_SUITE_BEGIN("families");

namespace {

const BaseMeasure kExp1 = BaseMeasure::exponential(1.0);
const BaseMeasure kU01 = BaseMeasure::uniform(0.0, 1.0);

// Independent quadrature oracle for densities on (0, inf).
double integrate_positive_axis(const std::function<double(double)>& f) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 12, 1e-10);
}

}  // namespace

TEST_CASE("dirichlet parameters on the median split") {
  const MarginalFamily f = make_dirichlet(2.0, kExp1);
  const FamilyParams p = family_params(f, dyadic_quantile_partition(kExp1, 1));
  REQUIRE(p.cell_params.size() == 2);
  CHECK(p.cell_params[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.cell_params[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.zero_cells.empty());
}

TEST_CASE("nig parameters scale interval lengths inside the support") {
  const MarginalFamily f = make_nig(3.0, kU01);
  const Partition I = Partition::from_cut_points({0.0, 0.25, 0.75, 1.0});
  const FamilyParams p = family_params(f, I);
  REQUIRE(p.cell_params.size() == 5);
  CHECK(p.cell_params[0] == 0.0);
  CHECK(p.cell_params[1] == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(p.cell_params[2] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(p.cell_params[3] == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(p.cell_params[4] == 0.0);
  CHECK(p.zero_cells == std::vector<std::size_t>{0, 4});
}

TEST_CASE("polya tree parameters follow the quadratic schedule") {
  const auto f = make_polya_tree(kExp1, PolyaTreeSchedule::quadratic(1.0));
  const FamilyParams p = family_params(f, dyadic_quantile_partition(kExp1, 2));
  REQUIRE(p.tree_level_alphas.size() == 2);
  CHECK(p.tree_level_alphas[0] == std::vector<double>{1.0, 1.0});
  CHECK(p.tree_level_alphas[1] == std::vector<double>(4, 4.0));
}

TEST_CASE("polya tree rejects partitions off the dyadic chain") {
  const auto f = PolyaTreeFamily{kExp1, PolyaTreeSchedule::quadratic(1.0)};
  CHECK_THROWS_AS(family_params(MarginalFamily{f}, Partition::from_cut_points({0.5})),
                  std::invalid_argument);
  CHECK_THROWS_AS(family_params(MarginalFamily{f}, Partition::from_cut_points({0.1, 0.2, 0.3})),
                  std::invalid_argument);
  CHECK_THROWS_AS(family_mean(MarginalFamily{f}, Partition::trivial()), std::invalid_argument);
  // the level-2 partition of a different base measure is off this chain
  CHECK_THROWS_AS(family_params(MarginalFamily{f}, dyadic_quantile_partition(kU01, 2)),
                  std::invalid_argument);
}

TEST_CASE("per-level schedule table") {
  const auto sched = PolyaTreeSchedule::per_level({2.0, 8.0});
  CHECK(sched.level_alpha(1) == 2.0);
  CHECK(sched.level_alpha(2) == 8.0);
  CHECK_THROWS_AS(sched.level_alpha(3), std::invalid_argument);
  CHECK_THROWS_AS(PolyaTreeSchedule::per_level({1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("family mean equals the base cell masses") {
  const Partition I = Partition::from_cut_points({0.5, 0.8});
  const MarginalFamily f = make_dirichlet(2.0, kU01);
  const SimplexPoint m = family_mean(f, I);
  CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(m[2] == doctest::Approx(0.2).epsilon(1e-12));

  const SimplexPoint one = family_mean(make_nig(5.0, kExp1), Partition::trivial());
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 1.0);

  const auto pt = make_polya_tree(kExp1, PolyaTreeSchedule::quadratic(1.0));
  const SimplexPoint eighth = family_mean(pt, dyadic_quantile_partition(kExp1, 3));
  for (std::size_t i = 0; i < 8; ++i) CHECK(eighth[i] == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("mean projectivity across random refinements") {
  RandomSource rng(SeededRng{301, 0});
  const std::vector<MarginalFamily> families = {make_dirichlet(2.0, kExp1),
                                                make_nig(4.0, BaseMeasure::gaussian(0, 1))};
  for (const auto& f : families) {
    for (int t = 0; t < 100; ++t) {
      const Partition fine = random_cut_partition(rng, 6);
      const Partition coarse = random_merge(fine, rng);
      const auto g = coarsening_of(coarse, fine);
      REQUIRE(g.has_value());
      const SimplexPoint pushed = coarsen(*g, family_mean(f, fine));
      const SimplexPoint direct = family_mean(f, coarse);
      for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(std::abs(pushed[i] - direct[i]) <= 1e-9);
      }
    }
  }
  // the Polya tree's chain version of the same statement
  const auto pt = make_polya_tree(kExp1, PolyaTreeSchedule::quadratic(0.5));
  const Partition I3 = dyadic_quantile_partition(kExp1, 3);
  const Partition I2 = dyadic_quantile_partition(kExp1, 2);
  const auto g = coarsening_of(I2, I3);
  const SimplexPoint pushed = coarsen(*g, family_mean(pt, I3));
  const SimplexPoint direct = family_mean(pt, I2);
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(std::abs(pushed[i] - direct[i]) <= 1e-9);
  }
}

TEST_CASE("parameter additivity under coarsening") {
  RandomSource rng(SeededRng{302, 0});
  for (const auto& f : {make_dirichlet(3.0, kExp1), make_nig(2.5, kExp1)}) {
    for (int t = 0; t < 100; ++t) {
      const Partition fine = random_cut_partition(rng, 6);
      const Partition coarse = random_merge(fine, rng);
      const auto g = coarsening_of(coarse, fine);
      REQUIRE(g.has_value());
      const auto fine_params = family_params(f, fine).cell_params;
      const auto coarse_params = family_params(f, coarse).cell_params;
      for (std::size_t i = 0; i < g->blocks.size(); ++i) {
        double block_sum = 0.0;
        for (std::size_t j : g->blocks[i]) block_sum += fine_params[j];
        CHECK(std::abs(block_sum - coarse_params[i]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("dirichlet log density values") {
  CHECK(dirichlet_log_density(std::vector<double>{1, 1}, SimplexPoint::from_masses({0.3, 0.7})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // Beta(2,2) has density 6 p (1-p); at p = 1/2 this is 1.5.
  CHECK(dirichlet_log_density(std::vector<double>{2, 2}, SimplexPoint::from_masses({0.5, 0.5})) ==
        doctest::Approx(std::log(1.5)).epsilon(1e-12));
  // the flat density on the 2-simplex is Gamma(3) = 2
  CHECK(dirichlet_log_density(std::vector<double>{1, 1, 1},
                              SimplexPoint::normalized({1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(dirichlet_log_density(std::vector<double>{1, 0},
                                        SimplexPoint::from_masses({0.3, 0.7})),
                  std::domain_error);
  CHECK_THROWS_AS(dirichlet_log_density(std::vector<double>{1, 1},
                                        SimplexPoint::from_masses({0.0, 1.0})),
                  std::domain_error);
}

TEST_CASE("inverse gaussian log density values") {
  CHECK(inverse_gaussian_log_density(1.0, 1.0, 1.0) ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
  CHECK(inverse_gaussian_log_density(1.0, 2.0, 1.0) ==
        doctest::Approx(std::log(2.0) - 0.5 * std::log(2.0 * M_PI) - 0.5).epsilon(1e-12));
  CHECK_THROWS_AS(inverse_gaussian_log_density(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(inverse_gaussian_log_density(1.0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("inverse gaussian density integrates to one") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double gamma : {0.5, 1.0, 2.0}) {
      const double total = integrate_positive_axis(
          [&](double z) { return std::exp(inverse_gaussian_log_density(z, alpha, gamma)); });
      CHECK(std::abs(total - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("inverse gaussian density mean is alpha/gamma by quadrature") {
  const double mean = integrate_positive_axis(
      [](double z) { return z * std::exp(inverse_gaussian_log_density(z, 2.0, 1.0)); });
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("family construction validation") {
  CHECK_THROWS_AS(make_dirichlet(0.0, kExp1), std::invalid_argument);
  CHECK_THROWS_AS(make_nig(-1.0, kExp1), std::invalid_argument);
  CHECK_THROWS_AS(PolyaTreeSchedule::quadratic(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_polya_tree(BaseMeasure::empirical_step({0.0}, {1.0}),
                                  PolyaTreeSchedule::quadratic(1.0)),
                  std::invalid_argument);
}

TEST_SUITE_END();
