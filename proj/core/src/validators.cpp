#include "projlim/validators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "projlim/samplers.hpp"

namespace projlim {

namespace {

constexpr std::size_t kBlockRows = 8192;

// Fills a row-major n_rows x dim matrix in fixed blocks. Block b always
// draws from rng.at_stream(stream_offset + b), so the result is identical
// for any thread count.
void fill_draws(std::size_t n_rows, std::size_t dim, SeededRng rng, std::uint64_t stream_offset,
                int threads, const MarginalSampler& sampler, std::vector<double>& out) {
  out.resize(n_rows * dim);
  const std::size_t n_blocks = (n_rows + kBlockRows - 1) / kBlockRows;
  auto run_block = [&](std::size_t b) {
    RandomSource src(rng.at_stream(stream_offset + b));
    const std::size_t begin = b * kBlockRows;
    const std::size_t end = std::min(n_rows, begin + kBlockRows);
    for (std::size_t r = begin; r < end; ++r) {
      const SimplexPoint x = sampler(src);
      if (x.size() != dim) throw std::invalid_argument("sampler dimension mismatch");
      std::copy(x.masses().begin(), x.masses().end(), out.begin() + r * dim);
    }
  };
  if (threads <= 1 || n_blocks <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        run_block(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<std::size_t>(static_cast<std::size_t>(threads), n_blocks);
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> column(const std::vector<double>& matrix, std::size_t dim, std::size_t col) {
  std::vector<double> out(matrix.size() / dim);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = matrix[r * dim + col];
  return out;
}

// Simplex coordinates are only meaningful to kSimplexSumTol: a degenerate
// coordinate (say a block covering the whole line) block-sums to 1 up to
// rounding while a direct draw is exactly 1, and raw KS would flag that
// jitter. Snapping to the tolerance grid removes it without moving any
// continuous coordinate by a detectable amount.
void quantize_to_simplex_tol(std::vector<double>& xs) {
  for (double& x : xs) x = std::nearbyint(x / kSimplexSumTol) * kSimplexSumTol;
}

double ks_asymptotic_p(double lambda) {
  if (lambda < 1e-9) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::abs(sum) || term < 1e-300) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;   // unbiased
  double m4 = 0.0;    // fourth central moment
};

MeanVar moments(std::span<const double> xs) {
  MeanVar out;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= n;
  double s2 = 0.0, s4 = 0.0;
  for (double x : xs) {
    const double d = x - out.mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  out.var = xs.size() > 1 ? s2 / (n - 1.0) : 0.0;
  out.m4 = s4 / n;
  return out;
}

std::string cell_label(const Partition& I, std::size_t i) {
  return to_string(I.cell(i));
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  return {d, ks_asymptotic_p(lambda)};
}

TestReport pushforward_ks_test(const std::string& subject, const MarginalSampler& sample_fine,
                               const MarginalSampler& sample_coarse, const Grouping& grouping,
                               std::size_t n_draws, SeededRng rng, int threads) {
  if (n_draws == 0) throw std::invalid_argument("n_draws must be positive");
  const std::size_t dim = grouping.blocks.size();
  const std::size_t n_blocks = (n_draws + kBlockRows - 1) / kBlockRows;

  MarginalSampler pushed = [&](RandomSource& src) {
    return coarsen(grouping, sample_fine(src));
  };
  std::vector<double> fine_mat, coarse_mat;
  fill_draws(n_draws, dim, rng, 0, threads, pushed, fine_mat);
  fill_draws(n_draws, dim, rng, n_blocks, threads, sample_coarse, coarse_mat);

  TestReport report;
  report.test_name = "projectivity";
  report.subject = subject;
  report.threshold_value = kKsSignificance / static_cast<double>(dim);
  report.threshold_desc = "per-coordinate two-sample KS p-value > " +
                          format_double(report.threshold_value) +
                          " (0.01 Bonferroni-corrected over " + std::to_string(dim) +
                          " coordinates)";
  report.seed = rng.seed;
  report.stream = rng.stream;
  report.draws = n_draws;
  report.pass = true;
  for (std::size_t c = 0; c < dim; ++c) {
    auto pushed_col = column(fine_mat, dim, c);
    auto direct_col = column(coarse_mat, dim, c);
    quantize_to_simplex_tol(pushed_col);
    quantize_to_simplex_tol(direct_col);
    const KsResult ks = ks_two_sample(pushed_col, direct_col);
    ReportRow row;
    row.label = "coordinate " + std::to_string(c);
    row.statistic = ks.statistic;
    row.p_value = ks.p_value;
    row.pass = ks.p_value > report.threshold_value;
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  }
  return report;
}

TestReport projectivity_test(const MarginalFamily& f, const Partition& fine,
                             const Partition& coarse, std::size_t n_draws, SeededRng rng,
                             int threads) {
  auto g = coarsening_of(coarse, fine);
  if (!g) throw std::invalid_argument("not a refinement: fine partition does not refine coarse");
  family_params(f, fine);  // surface unsupported-partition errors up front
  family_params(f, coarse);
  MarginalSampler draw_fine = [&f, fine](RandomSource& src) {
    return sample_marginal(f, fine, src);
  };
  MarginalSampler draw_coarse = [&f, coarse](RandomSource& src) {
    return sample_marginal(f, coarse, src);
  };
  TestReport report =
      pushforward_ks_test(describe(f), draw_fine, draw_coarse, *g, n_draws, rng, threads);
  report.attributes.emplace_back("fine_partition", to_string(fine));
  report.attributes.emplace_back("coarse_partition", to_string(coarse));
  for (std::size_t c = 0; c < coarse.size(); ++c) {
    report.rows[c].label = cell_label(coarse, c);
  }
  return report;
}

TestReport mean_check_test(const std::string& subject, const MarginalSampler& sampler,
                           const SimplexPoint& expected,
                           const std::vector<double>* expected_variance, std::size_t n_draws,
                           SeededRng rng, int threads) {
  if (n_draws < 2) throw std::invalid_argument("n_draws must be at least 2");
  const std::size_t dim = expected.size();
  std::vector<double> mat;
  fill_draws(n_draws, dim, rng, 0, threads, sampler, mat);

  TestReport report;
  report.test_name = "mean_condition";
  report.subject = subject;
  report.threshold_value = kMeanCheckSigmas;
  report.threshold_desc = "per-coordinate |observed - expected| <= " +
                          format_double(kMeanCheckSigmas) + " standard errors";
  report.seed = rng.seed;
  report.stream = rng.stream;
  report.draws = n_draws;
  report.pass = true;
  const double n = static_cast<double>(n_draws);
  for (std::size_t c = 0; c < dim; ++c) {
    const auto xs = column(mat, dim, c);
    const MeanVar mv = moments(xs);
    const double se = std::sqrt(mv.var / n);
    ReportRow row;
    row.label = "mean[" + std::to_string(c) + "]";
    row.expected = expected[c];
    row.observed = mv.mean;
    row.se = se;
    row.statistic = std::abs(mv.mean - expected[c]);
    row.pass = row.statistic <= kMeanCheckSigmas * se;
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));

    if (expected_variance != nullptr) {
      // Asymptotic standard error of the sample variance.
      const double se_var = std::sqrt(std::max(mv.m4 - mv.var * mv.var, 0.0) / n);
      ReportRow vrow;
      vrow.label = "var[" + std::to_string(c) + "]";
      vrow.expected = (*expected_variance)[c];
      vrow.observed = mv.var;
      vrow.se = se_var;
      vrow.statistic = std::abs(mv.var - (*expected_variance)[c]);
      vrow.pass = vrow.statistic <= kMeanCheckSigmas * se_var;
      report.pass = report.pass && vrow.pass;
      report.rows.push_back(std::move(vrow));
    }
  }
  return report;
}

TestReport mean_condition_test(const MarginalFamily& f, const Partition& I, std::size_t n_draws,
                               SeededRng rng, int threads) {
  const SimplexPoint expected = family_mean(f, I);
  std::vector<double> var_expected;
  const std::vector<double>* var_ptr = nullptr;
  if (const auto* d = std::get_if<DirichletFamily>(&f)) {
    var_expected.resize(I.size());
    for (std::size_t i = 0; i < I.size(); ++i) {
      var_expected[i] = expected[i] * (1.0 - expected[i]) / (d->concentration + 1.0);
    }
    var_ptr = &var_expected;
  }
  MarginalSampler sampler = [&f, I](RandomSource& src) { return sample_marginal(f, I, src); };
  TestReport report =
      mean_check_test(describe(f), sampler, expected, var_ptr, n_draws, rng, threads);
  report.attributes.emplace_back("partition", to_string(I));
  for (std::size_t c = 0; c < I.size(); ++c) {
    report.rows[var_ptr ? 2 * c : c].label = "mean " + cell_label(I, c);
    if (var_ptr) report.rows[2 * c + 1].label = "var " + cell_label(I, c);
  }
  return report;
}

bool HarrisSequences::structurally_decreasing() const {
  for (const auto& seq : sequences) {
    if (seq.sets.empty() || seq.sets.size() != seq.reference_mass.size()) return false;
    for (std::size_t n = 0; n + 1 < seq.sets.size(); ++n) {
      if (!is_subset(seq.sets[n + 1], seq.sets[n])) return false;
      if (seq.sets[n + 1] == seq.sets[n]) return false;
      // mass can plateau while an endpoint is outside the support
      if (!(seq.reference_mass[n + 1] <= seq.reference_mass[n])) return false;
    }
  }
  return true;
}

HarrisSequences make_harris_sequences(const BaseMeasure& g0, int count, int depth) {
  if (count < 1 || depth < 1) throw std::invalid_argument("need count >= 1 and depth >= 1");
  if (!g0.has_continuous_quantile()) {
    throw std::invalid_argument("unsupported base measure for Harris sequences: " +
                                g0.describe());
  }
  HarrisSequences out;

  // Tail sequence: mass 2^-n above the (1 - 2^-n)-quantile. For a measure
  // with bounded support the tails are capped at the supremum so the
  // intersection over all n is empty, not [sup, inf).
  HarrisSequence tail;
  tail.label = "tail";
  const double upper = g0.support_upper();
  for (int n = 1; n <= depth; ++n) {
    const double q = g0.quantile(1.0 - std::ldexp(1.0, -n));
    QSet a = QSet::interval(q, upper == kInf ? kInf : upper);
    tail.sets.push_back(a);
    tail.reference_mass.push_back(g0.mass(a));
  }
  out.sequences.push_back(std::move(tail));

  // Interval sequences closing in on a quantile point from the left; the
  // point itself is excluded, so the infinite intersection is empty.
  for (int m = 1; m < count; ++m) {
    const double p = static_cast<double>(m) / static_cast<double>(count);
    const double q = g0.quantile(p);
    HarrisSequence seq;
    seq.label = "left-of-q(" + format_double(p) + ")";
    for (int n = 1; n <= depth; ++n) {
      QSet a = QSet::interval(q - std::ldexp(1.0, -n), q);
      seq.sets.push_back(a);
      seq.reference_mass.push_back(g0.mass(a));
    }
    out.sequences.push_back(std::move(seq));
  }

  if (!out.structurally_decreasing()) {
    throw NumericError("generated Harris sequences are not strictly decreasing under " +
                       g0.describe());
  }
  return out;
}

namespace {

// Partition (A, complement) plus the index of A among the ordered cells.
std::pair<Partition, std::size_t> split_partition(const QSet& a) {
  Partition p = Partition::from_cells({a, complement(a)});
  return {p, p.cell(0) == a ? 0u : 1u};
}

}  // namespace

TestReport harris_test(const MarginalFamily& f, const HarrisSequences& seqs,
                       std::size_t n_draws, SeededRng rng, int threads) {
  if (std::holds_alternative<PolyaTreeFamily>(f)) {
    throw std::invalid_argument(
        "harris_test needs a family defined on arbitrary two-cell partitions");
  }
  if (n_draws < 2) throw std::invalid_argument("n_draws must be at least 2");
  TestReport report;
  report.test_name = "harris";
  report.subject = describe(f);
  report.threshold_desc = "non-increasing decay within " + format_double(kDecaySlackSigmas) +
                          " SE; deepest value within " + format_double(kMeanCheckSigmas) +
                          " SE of the reference mass";
  report.threshold_value = kMeanCheckSigmas;
  report.seed = rng.seed;
  report.stream = rng.stream;
  report.draws = n_draws;
  report.pass = true;

  const double n = static_cast<double>(n_draws);
  for (std::size_t m = 0; m < seqs.sequences.size(); ++m) {
    const auto& seq = seqs.sequences[m];
    std::vector<double> est(seq.sets.size()), se(seq.sets.size());
    for (std::size_t depth = 0; depth < seq.sets.size(); ++depth) {
      const auto [part, a_index] = split_partition(seq.sets[depth]);
      MarginalSampler sampler = [&f, part = part](RandomSource& src) {
        return sample_marginal(f, part, src);
      };
      std::vector<double> mat;
      fill_draws(n_draws, part.size(), rng.at_stream(m * 4096 + depth), 0, threads, sampler,
                 mat);
      const MeanVar mv = moments(column(mat, part.size(), a_index));
      est[depth] = mv.mean;
      se[depth] = std::sqrt(mv.var / n);
    }
    bool seq_pass = true;
    for (std::size_t depth = 0; depth + 1 < est.size(); ++depth) {
      const double slack =
          kDecaySlackSigmas * std::sqrt(se[depth] * se[depth] + se[depth + 1] * se[depth + 1]);
      if (est[depth + 1] > est[depth] + slack) seq_pass = false;
    }
    const double deepest_bound = seq.reference_mass.back() + kMeanCheckSigmas * se.back();
    if (est.back() > deepest_bound) seq_pass = false;
    for (std::size_t depth = 0; depth < est.size(); ++depth) {
      ReportRow row;
      row.label = seq.label + " depth " + std::to_string(depth + 1);
      row.expected = seq.reference_mass[depth];
      row.observed = est[depth];
      row.se = se[depth];
      row.pass = seq_pass;
      report.rows.push_back(std::move(row));
    }
    report.pass = report.pass && seq_pass;
  }
  return report;
}

TestReport harris_test(const Charge& c, const HarrisSequences& seqs) {
  TestReport report;
  report.test_name = "harris";
  report.subject = "charge:" + c.name();
  report.threshold_desc =
      "exact evaluation: non-increasing and deepest value within 1e-9 of the reference mass";
  report.threshold_value = 1e-9;
  report.pass = true;
  for (const auto& seq : seqs.sequences) {
    bool seq_pass = true;
    std::vector<double> vals(seq.sets.size());
    for (std::size_t depth = 0; depth < seq.sets.size(); ++depth) {
      vals[depth] = c(seq.sets[depth]);
      if (depth > 0 && vals[depth] > vals[depth - 1]) seq_pass = false;
    }
    if (vals.back() > seq.reference_mass.back() + 1e-9) seq_pass = false;
    for (std::size_t depth = 0; depth < vals.size(); ++depth) {
      ReportRow row;
      row.label = seq.label + " depth " + std::to_string(depth + 1);
      row.expected = seq.reference_mass[depth];
      row.observed = vals[depth];
      row.se = 0.0;
      row.pass = seq_pass;
      report.rows.push_back(std::move(row));
    }
    report.pass = report.pass && seq_pass;
  }
  return report;
}

}  // namespace projlim
