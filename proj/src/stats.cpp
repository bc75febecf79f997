#include "homophily/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "homophily/error.hpp"

namespace homophily::stats {

namespace {

constexpr std::size_t kExactSpearmanMax = 10;

double t_two_sided(double r, std::size_t n) {
  const double df = static_cast<double>(n - 2);
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  const double t2 = r2 * df / (1.0 - r2);
  return boost::math::ibeta(df / 2.0, 0.5, df / (df + t2));
}

// Exact two-sided permutation p-value: the share of orderings of the y ranks
// whose |rho| reaches the observed one. Tied ranks make some orderings
// identical; every distinct arrangement has the same multiplicity so
// enumerating distinct ones gives the same proportion.
double exact_spearman_p(const std::vector<double>& rx, std::vector<double> ry, double rho) {
  std::sort(ry.begin(), ry.end());
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;
  double sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  const double denom = std::sqrt(sxx * syy);
  const double target = std::abs(rho) - 1e-12;
  std::uint64_t total = 0, extreme = 0;
  do {
    double sxy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) sxy += (rx[i] - mean) * (ry[i] - mean);
    ++total;
    if (std::abs(sxy / denom) >= target) ++extreme;
  } while (std::next_permutation(ry.begin(), ry.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

std::string_view to_string(Stars stars) {
  switch (stars) {
    case Stars::three: return "***";
    case Stars::two: return "**";
    case Stars::one: return "*";
    case Stars::none: break;
  }
  return "";
}

Stars stars_for(double p) {
  if (p < 0.01) return Stars::three;
  if (p < 0.05) return Stars::two;
  if (p < 0.1) return Stars::one;
  return Stars::none;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const auto n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double pearson_coefficient(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("correlation inputs differ in length");
  const auto n = x.size();
  if (n < 2) throw InvalidArgument("correlation needs at least 2 observations");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw UndefinedError("undefined correlation: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 3) throw InvalidArgument("correlation test needs at least 3 observations");
  CorrelationResult r;
  r.rho = pearson_coefficient(x, y);
  r.n = x.size();
  r.p_value = t_two_sided(r.rho, r.n);
  r.stars = stars_for(r.p_value);
  return r;
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("correlation inputs differ in length");
  if (x.size() < 3) throw InvalidArgument("correlation test needs at least 3 observations");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  CorrelationResult r;
  r.rho = pearson_coefficient(rx, ry);
  r.n = x.size();
  r.p_value = r.n <= kExactSpearmanMax ? exact_spearman_p(rx, ry, r.rho) : t_two_sided(r.rho, r.n);
  r.stars = stars_for(r.p_value);
  return r;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double kPi = 3.141592653589793;
  if (lambda < 1.18) {
    // CDF series converges fast for small lambda.
    double sum = 0.0;
    const double c = -kPi * kPi / (8.0 * lambda * lambda);
    for (int k = 1; k <= 50; ++k) {
      const double odd = 2.0 * k - 1.0;
      sum += std::exp(c * odd * odd);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * kPi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS test needs two non-empty samples");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double n1 = static_cast<double>(sa.size());
  const double n2 = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult r;
  r.d_statistic = d;
  r.n1 = sa.size();
  r.n2 = sb.size();
  r.p_value = kolmogorov_survival(std::sqrt(n1 * n2 / (n1 + n2)) * d);
  return r;
}

Chi2Result chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table) {
  const auto rows = table.size();
  if (rows < 2) throw InvalidArgument("chi-square table needs at least 2 rows");
  const auto cols = table.front().size();
  if (cols < 2) throw InvalidArgument("chi-square table needs at least 2 columns");
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (table[i].size() != cols) throw InvalidArgument("ragged chi-square table");
    for (std::size_t j = 0; j < cols; ++j) {
      const auto v = static_cast<double>(table[i][j]);
      row_sum[i] += v;
      col_sum[j] += v;
      total += v;
    }
  }
  for (double s : row_sum) {
    if (s <= 0.0) throw InvalidArgument("chi-square table has an empty row");
  }
  for (double s : col_sum) {
    if (s <= 0.0) throw InvalidArgument("chi-square table has an empty column");
  }
  Chi2Result r;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected = row_sum[i] * col_sum[j] / total;
      const double diff = static_cast<double>(table[i][j]) - expected;
      r.statistic += diff * diff / expected;
    }
  }
  r.dof = (rows - 1) * (cols - 1);
  r.p_value = boost::math::gamma_q(static_cast<double>(r.dof) / 2.0, r.statistic / 2.0);
  return r;
}

std::vector<IntervalEstimate> leave_one_out_ci(const std::vector<std::vector<double>>& replicates,
                                               double confidence) {
  const auto n = replicates.size();
  if (n < 3) throw InvalidArgument("leave-one-out CI needs at least 3 replicates");
  const auto len = replicates.front().size();
  for (const auto& r : replicates) {
    if (r.size() != len) throw InvalidArgument("replicates differ in length");
  }
  const double nd = static_cast<double>(n);
  const boost::math::students_t dist(nd - 1.0);
  const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);
  std::vector<IntervalEstimate> out(len);
  std::vector<double> loo(n);
  for (std::size_t pos = 0; pos < len; ++pos) {
    double sum = 0.0;
    for (const auto& r : replicates) sum += r[pos];
    for (std::size_t i = 0; i < n; ++i) loo[i] = (sum - replicates[i][pos]) / (nd - 1.0);
    const double mean = std::accumulate(loo.begin(), loo.end(), 0.0) / nd;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    const double se = std::sqrt((nd - 1.0) / nd * ss);
    out[pos] = {mean, se, mean - t * se, mean + t * se};
  }
  return out;
}

}  // namespace homophily::stats
