#pragma once

#include <vector>

namespace splitinf::simlab {

double mean(const std::vector<double>& x);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(const std::vector<double>& x);

/// sqrt(p (1 - p) / trials) at p = successes / trials.
double binomial_se(long successes, long trials);

double normal_cdf(double x);

/// sup_x |F_n(x) - Phi(x)| for the empirical cdf of x.
double ks_distance_normal(std::vector<double> x);

/// Asymptotic Kolmogorov tail probability P(D_n > d), with the usual
/// finite-n scaling sqrt(n) + 0.12 + 0.11/sqrt(n).
double kolmogorov_pvalue(double d, long n);

}  // namespace splitinf::simlab
