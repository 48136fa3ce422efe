#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace pixi::study {

enum class EffectKind { EtaSquared, CramersV };

std::string_view to_string(EffectKind kind);

struct TestResult {
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;  // second F degree of freedom; 0 for chi-square
  double p_value = 1.0;
  double effect_size = 0.0;
  EffectKind effect_kind = EffectKind::EtaSquared;
  bool infinite = false;  // zero within-group variance with nonzero between
};

// Regularized-incomplete-function CDFs.
double f_cdf(double x, double d1, double d2);
double chi2_cdf(double x, double k);

TestResult anova_oneway(std::span<const std::vector<double>> groups);
TestResult anova_from_summary(std::span<const double> means, std::span<const double> stds,
                              std::span<const double> ns);

// Pearson chi-square of independence on an r x c table of counts.
TestResult chi_square(const std::vector<std::vector<double>>& table);

struct HolmResult {
  std::vector<double> p_sorted;        // ascending
  std::vector<std::size_t> order;      // original index of each sorted entry
  std::vector<double> thresholds;      // alpha / (m - k + 1), k = 1..m
  std::vector<bool> reject_sorted;     // per sorted position
  std::vector<bool> reject;            // per original position
};

HolmResult holm_bonferroni(std::span<const double> p_values, double alpha = 0.05);

// Standard SUS: 2.5 * (sum over odd items of (r - 1) + sum over even items of (5 - r)).
double sus_score(std::span<const int> responses);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  std::size_t n = 0;
};

MeanStd mean_std(std::span<const double> values);

}  // namespace pixi::study
