#include "pixi/study/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>

#include "pixi/common/error.hpp"

namespace pixi::study {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, message);
}

double f_sf(double x, double d1, double d2) {
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f_distribution<double>(d1, d2), x));
}

double chi2_sf(double x, double k) {
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(k), x));
}

// Shared tail of both ANOVA entry points.
TestResult anova_result(double ssb, double ssw, double k, double n) {
  TestResult r;
  r.df1 = k - 1;
  r.df2 = n - k;
  r.effect_kind = EffectKind::EtaSquared;
  const double sst = ssb + ssw;
  r.effect_size = sst > 0 ? ssb / sst : 0.0;
  if (ssw <= 0) {
    if (ssb > 0) {
      r.infinite = true;
      r.statistic = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    } else {
      r.statistic = 0.0;
      r.p_value = 1.0;
    }
    return r;
  }
  r.statistic = (ssb / r.df1) / (ssw / r.df2);
  r.p_value = f_sf(r.statistic, r.df1, r.df2);
  return r;
}

}  // namespace

std::string_view to_string(EffectKind kind) {
  return kind == EffectKind::EtaSquared ? "eta_squared" : "cramers_v";
}

double f_cdf(double x, double d1, double d2) {
  require(d1 > 0 && d2 > 0, "F degrees of freedom must be positive");
  require(x >= 0, "F statistic must be non-negative");
  return boost::math::cdf(boost::math::fisher_f_distribution<double>(d1, d2), x);
}

double chi2_cdf(double x, double k) {
  require(k > 0, "chi-square degrees of freedom must be positive");
  require(x >= 0, "chi-square statistic must be non-negative");
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(k), x);
}

TestResult anova_oneway(std::span<const std::vector<double>> groups) {
  require(groups.size() >= 2, "ANOVA needs at least two groups");
  double n = 0;
  double total = 0;
  for (const auto& g : groups) {
    require(g.size() >= 2, "each ANOVA group needs at least two values");
    n += static_cast<double>(g.size());
    total += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const double grand = total / n;
  double ssb = 0, ssw = 0;
  for (const auto& g : groups) {
    const double m = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
  }
  return anova_result(ssb, ssw, static_cast<double>(groups.size()), n);
}

TestResult anova_from_summary(std::span<const double> means, std::span<const double> stds,
                              std::span<const double> ns) {
  require(means.size() == stds.size() && means.size() == ns.size(), "summary lists differ in length");
  require(means.size() >= 2, "ANOVA needs at least two groups");
  double n = 0, total = 0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    require(ns[i] >= 2, "each ANOVA group needs n >= 2");
    require(stds[i] >= 0, "standard deviations must be non-negative");
    n += ns[i];
    total += ns[i] * means[i];
  }
  const double grand = total / n;
  double ssb = 0, ssw = 0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    ssb += ns[i] * (means[i] - grand) * (means[i] - grand);
    ssw += (ns[i] - 1) * stds[i] * stds[i];
  }
  return anova_result(ssb, ssw, static_cast<double>(means.size()), n);
}

TestResult chi_square(const std::vector<std::vector<double>>& table) {
  require(table.size() >= 2, "chi-square needs at least two rows");
  const auto cols = table[0].size();
  require(cols >= 2, "chi-square needs at least two columns");
  std::vector<double> row_sum(table.size(), 0.0), col_sum(cols, 0.0);
  double n = 0;
  for (std::size_t r = 0; r < table.size(); ++r) {
    require(table[r].size() == cols, "ragged chi-square table");
    for (std::size_t c = 0; c < cols; ++c) {
      require(table[r][c] >= 0, "counts must be non-negative");
      row_sum[r] += table[r][c];
      col_sum[c] += table[r][c];
      n += table[r][c];
    }
  }
  for (double s : row_sum) require(s > 0, "zero row marginal");
  for (double s : col_sum) require(s > 0, "zero column marginal");

  double chi2 = 0;
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double e = row_sum[r] * col_sum[c] / n;
      chi2 += (table[r][c] - e) * (table[r][c] - e) / e;
    }
  }
  TestResult result;
  result.statistic = chi2;
  result.df1 = static_cast<double>((table.size() - 1) * (cols - 1));
  result.p_value = chi2_sf(chi2, result.df1);
  result.effect_kind = EffectKind::CramersV;
  const double min_dim = static_cast<double>(std::min(table.size(), cols) - 1);
  result.effect_size = std::sqrt(chi2 / (n * min_dim));
  return result;
}

HolmResult holm_bonferroni(std::span<const double> p_values, double alpha) {
  require(!p_values.empty(), "no p-values");
  for (double p : p_values) require(p >= 0 && p <= 1, "p-value outside [0, 1]");
  const auto m = p_values.size();
  HolmResult h;
  h.order.resize(m);
  std::iota(h.order.begin(), h.order.end(), std::size_t{0});
  std::stable_sort(h.order.begin(), h.order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  h.reject.assign(m, false);
  bool stopped = false;
  for (std::size_t k = 0; k < m; ++k) {
    const double p = p_values[h.order[k]];
    const double threshold = alpha / static_cast<double>(m - k);
    h.p_sorted.push_back(p);
    h.thresholds.push_back(threshold);
    const bool reject = !stopped && p <= threshold;
    if (!reject) stopped = true;
    h.reject_sorted.push_back(reject);
    h.reject[h.order[k]] = reject;
  }
  return h;
}

double sus_score(std::span<const int> responses) {
  if (responses.size() != 10) throw Error(ErrorCode::InvalidArgument, "SUS needs exactly 10 responses");
  int sum = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    const int r = responses[i];
    if (r < 1 || r > 5) throw Error(ErrorCode::InvalidArgument, "SUS responses must be in 1..5");
    sum += (i % 2 == 0) ? r - 1 : 5 - r;  // items 1,3,5,... sit at even indices
  }
  return 2.5 * sum;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  out.n = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(out.n - 1));
  }
  return out;
}

}  // namespace pixi::study
