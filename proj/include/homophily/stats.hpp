#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace homophily::stats {

enum class Stars { none, one, two, three };

/// "", "*", "**", "***".
std::string_view to_string(Stars stars);
/// *** below 0.01, ** below 0.05, * below 0.1.
Stars stars_for(double p_value);

struct CorrelationResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  Stars stars = Stars::none;
};

struct KsResult {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

struct Chi2Result {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

struct IntervalEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// 1-based ranks, ties get the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Product-moment coefficient only (two-pass). Throws UndefinedError on zero
/// variance, InvalidArgument on length mismatch or n < 2.
double pearson_coefficient(std::span<const double> x, std::span<const double> y);

/// Pearson with a two-sided Student-t p-value (n - 2 dof). Requires n >= 3.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rho (Pearson on average ranks). Two-sided p-value from exact
/// enumeration of rank permutations for n <= 10, t-approximation above.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

/// Two-sided two-sample Kolmogorov-Smirnov test with the asymptotic
/// Kolmogorov distribution at effective size n1*n2/(n1+n2).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Pearson chi-square test of independence on a rows x cols count table.
Chi2Result chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table);

/// Jackknife mean and t-based 95% CI per position over equal-length replicates.
/// Requires at least 3 replicates.
std::vector<IntervalEstimate> leave_one_out_ci(const std::vector<std::vector<double>>& replicates,
                                               double confidence = 0.95);

}  // namespace homophily::stats
