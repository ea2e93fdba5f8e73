#include "levymmm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levymmm/errors.hpp"

namespace levymmm {

namespace {

// Regularized lower incomplete gamma P(a, x): series for x < a+1, continued
// fraction (modified Lentz) otherwise.
double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double term = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

double ks_lambda(double n_eff, double d) {
    double s = std::sqrt(n_eff);
    return (s + 0.12 + 0.11 / s) * d;
}

}  // namespace

double kolmogorov_sf(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 20; ++j) {
        sum += sign * std::exp(-2.0 * j * j * lambda * lambda);
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 10 || b.size() < 10)
        throw InsufficientSampleError("ks_two_sample needs at least 10 points per sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf(ks_lambda(na * nb / (na + nb), d));
    return r;
}

KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
    if (samples.size() < 10)
        throw InsufficientSampleError("ks_one_sample needs at least 10 points");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf(ks_lambda(n, d));
    return r;
}

double gumbel_marginal_cdf(double x, double nu) {
    return std::exp(-std::exp(-nu * x) / nu);
}

double gumbel_marginal_quantile(double p, double nu) {
    return -std::log(-nu * std::log(p)) / nu;
}

KsResult ks_vs_gumbel(std::vector<double> samples, double nu) {
    return ks_one_sample(std::move(samples),
                         [nu](double x) { return gumbel_marginal_cdf(x, nu); });
}

double chi2_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return 1.0 - gamma_p(0.5 * dof, 0.5 * x);
}

}  // namespace levymmm
