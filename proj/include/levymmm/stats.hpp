#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace levymmm {

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Survival function of the Kolmogorov distribution, 20-term alternating series.
double kolmogorov_sf(double lambda);

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf);

// One-sample KS against F(x) = exp(-nu^{-1} e^{-nu x}), the eta(0) marginal.
KsResult ks_vs_gumbel(std::vector<double> samples, double nu);

double gumbel_marginal_cdf(double x, double nu);
double gumbel_marginal_quantile(double p, double nu);

// Upper tail of the chi-square distribution (regularized incomplete gamma).
double chi2_sf(double x, double dof);

struct TestReport {
    std::string name;
    double statistic = 0.0;
    std::optional<double> p_value;
    std::optional<double> z_score;
    bool pass = false;
    long n = 0;
    std::string notes;
};

}  // namespace levymmm
