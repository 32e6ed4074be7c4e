#pragma once

#include <span>
#include <vector>

namespace hip {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation. Domain: a, b > 0 and 0 <= x <= 1.
double regularized_incomplete_beta(double a, double b, double x);

// Upper tail P(T > t) of Student's t with df degrees of freedom.
double student_t_sf(double t, int df);

// Two-sided p-value for an observed t statistic.
double student_t_two_sided_p(double t, int df);

// Two-sided p-value for a standard-normal z statistic.
double normal_two_sided_p(double z);

// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> xs);

double pearson(std::span<const double> xs, std::span<const double> ys);

// Pearson over average ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

// Tau-b with tie correction, O(n log n) via sort + merge inversion count.
double kendall_tau_b(std::span<const double> xs, std::span<const double> ys);

struct CorrelationResult {
    double pearson_r = 0.0;
    double spearman_rho = 0.0;
    double kendall_tau = 0.0;
    double p_pearson = 1.0;
    double p_spearman = 1.0;
    double p_kendall = 1.0;
};

// All three coefficients plus p-values. Pearson and Spearman p-values use
// the t statistic r*sqrt((n-2)/(1-r^2)) against Student's t with n-2 df;
// Kendall uses the normal approximation z = 3*tau*sqrt(n(n-1))/sqrt(2(2n+5)).
// Throws LengthMismatch (|xs| != |ys| or n < 3) and ConstantInput.
CorrelationResult correlate(std::span<const double> xs, std::span<const double> ys);

}  // namespace hip
