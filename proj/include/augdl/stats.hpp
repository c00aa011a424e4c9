#pragma once

#include <span>

namespace augdl {

/// Root-mean-squared error between predictions and targets. The performance
/// metric for every model in this project.
double rmse(std::span<const double> predictions, std::span<const double> targets);

/// Percent improvement of an augmented error over a baseline error:
/// 100 * (p_baseline - p_aug) / p_baseline. Positive when augmentation helps.
double improvement_pct(double p_baseline, double p_aug);

namespace stats {

double mean(std::span<const double> values);
double median(std::span<const double> values);
/// Sample standard deviation (n-1 denominator); 0 when fewer than 2 values.
double sample_std(std::span<const double> values);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);
/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

double student_t_cdf(double t, double dof);
/// Inverse of student_t_cdf in p for fixed dof.
double student_t_quantile(double p, double dof);

/// Survival function of the chi-square distribution (1 - CDF).
double chi_square_sf(double x, double dof);

/// Half-width of the two-sided t confidence interval:
/// t_{(1+level)/2, n-1} * sample_std / sqrt(n). Requires n >= 2.
double confidence_half_width(std::span<const double> values, double level = 0.95);

/// Two-sided paired t-test p-value over equal-length paired samples.
/// Zero-variance differences (including identical samples) report 1.0.
double paired_t_test_pvalue(std::span<const double> a, std::span<const double> b);

}  // namespace stats
}  // namespace augdl
