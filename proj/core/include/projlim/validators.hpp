#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "projlim/base_measure.hpp"
#include "projlim/families.hpp"
#include "projlim/intervals.hpp"
#include "projlim/rng.hpp"

namespace projlim {

/// KS significance used by the statistical validators (Bonferroni-corrected
/// per coordinate where several coordinates are tested together).
inline constexpr double kKsSignificance = 0.01;
/// Mean and decay checks run at this many standard errors.
inline constexpr double kMeanCheckSigmas = 3.0;
/// Slack, in combined standard errors, allowed when checking that a decay
/// curve is non-increasing.
inline constexpr double kDecaySlackSigmas = 2.0;

struct KsResult {
  double statistic;
  double p_value;
};

/// Two-sample Kolmogorov-Smirnov statistic with the asymptotic p-value.
/// Throws std::invalid_argument on an empty sample.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One line of a test report: a coordinate, a depth step, or any other
/// checked quantity. Fields that do not apply stay NaN and are omitted
/// from serialized output.
struct ReportRow {
  std::string label;
  double statistic = std::numeric_limits<double>::quiet_NaN();
  double p_value = std::numeric_limits<double>::quiet_NaN();
  double expected = std::numeric_limits<double>::quiet_NaN();
  double observed = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
};

/// Outcome of one validator run. Fully determined by (seed, stream) and
/// the test arguments; re-running reproduces every statistic bit for bit.
struct TestReport {
  std::string test_name;
  std::string subject;
  std::string threshold_desc;
  double threshold_value = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t draws = 0;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<ReportRow> rows;
  bool pass = false;
};

using MarginalSampler = std::function<SimplexPoint(RandomSource&)>;

/// Distribution-level check that pushed fine draws and direct coarse draws
/// follow the same law: per-coordinate two-sample KS on n_draws samples of
/// each, passing when every p-value clears kKsSignificance divided by the
/// coarse dimension.
TestReport pushforward_ks_test(const std::string& subject, const MarginalSampler& sample_fine,
                               const MarginalSampler& sample_coarse, const Grouping& grouping,
                               std::size_t n_draws, SeededRng rng, int threads = 1);

/// The projectivity condition for a family on a refinement pair
/// coarse <= fine. Throws std::invalid_argument when fine does not refine
/// coarse or the family is undefined on either partition.
TestReport projectivity_test(const MarginalFamily& f, const Partition& fine,
                             const Partition& coarse, std::size_t n_draws, SeededRng rng,
                             int threads = 1);

/// Compares the empirical mean of a sampler against an exact expectation,
/// coordinate by coordinate, at kMeanCheckSigmas standard errors. When
/// expected_variance is non-null the per-coordinate sample variances are
/// checked the same way.
TestReport mean_check_test(const std::string& subject, const MarginalSampler& sampler,
                           const SimplexPoint& expected,
                           const std::vector<double>* expected_variance, std::size_t n_draws,
                           SeededRng rng, int threads = 1);

/// The mean condition for a family on a partition: empirical means against
/// the base-measure cell masses; for a Dirichlet family the coordinate
/// variances are additionally checked against p(1-p)/(alpha+1).
TestReport mean_condition_test(const MarginalFamily& f, const Partition& I, std::size_t n_draws,
                               SeededRng rng, int threads = 1);

/// One decreasing sequence of sets with empty limit, materialized to a
/// finite depth together with the base-measure reference masses.
struct HarrisSequence {
  std::string label;
  std::vector<QSet> sets;
  std::vector<double> reference_mass;
};

struct HarrisSequences {
  std::vector<HarrisSequence> sequences;

  /// Re-checks the structural invariant on the materialized prefixes:
  /// strict set decrease with non-increasing reference mass.
  bool structurally_decreasing() const;
};

/// Builds `count` sequences to the given depth: one tail sequence
/// [quantile(1-2^-n), .) shrinking past every fixed point, and count-1
/// sequences [q_p - 2^-n, q_p) closing in on interior quantile points from
/// the left (the point q_p itself is excluded, so the limit is empty).
/// Requires a continuous quantile.
HarrisSequences make_harris_sequences(const BaseMeasure& g0, int count, int depth);

/// Decay of the expected random mass along each sequence, estimated from
/// n_draws of the family's marginal on (A, complement of A) at every
/// depth. Passes when each curve is non-increasing within
/// kDecaySlackSigmas combined standard errors and its deepest value is
/// within kMeanCheckSigmas standard errors above the reference mass.
TestReport harris_test(const MarginalFamily& f, const HarrisSequences& seqs,
                       std::size_t n_draws, SeededRng rng, int threads = 1);

/// Deterministic variant for a charge: values are evaluated exactly and
/// the test passes only when each sequence is non-increasing and ends at
/// the reference mass (within 1e-9). The escape charge fails this.
TestReport harris_test(const Charge& c, const HarrisSequences& seqs);

}  // namespace projlim
