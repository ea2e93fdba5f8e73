#include "levymmm/fluctuation.hpp"

#include <cmath>
#include <limits>

namespace levymmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection on [lo, hi] with f(lo) <= 0 < f(hi), then up to two Newton polish
// steps clamped to the bracket. Convexity of psi makes the bracket phase safe;
// Newton alone can escape the domain.
template <typename F, typename DF>
double bisect_newton(F f, DF df, double lo, double hi) {
    while (hi - lo > 1e-12 * std::max(1.0, std::fabs(hi))) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) <= 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 2; ++i) {
        double d = df(x);
        if (!(std::fabs(d) > 1e-12)) break;
        double step = f(x) / d;
        double y = x - step;
        if (y <= lo || y >= hi) break;
        x = y;
    }
    return x;
}

}  // namespace

std::string to_string(ConstantsMethod m) {
    switch (m) {
        case ConstantsMethod::spectrally_negative: return "spectrally_negative";
        case ConstantsMethod::spectrally_positive: return "spectrally_positive";
        case ConstantsMethod::brownian: return "brownian";
        case ConstantsMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

double find_nu(const LevyModel& m, double tol) {
    if (psi_prime(m, 0.0) >= 0.0)
        throw NotDriftingError("E X(1) >= 0: no positive root of psi");
    const double upper = theta_domain(m).upper;
    double hi = upper == kInf ? 1.0 : 0.5 * upper;
    double lo = 0.0;
    while (psi(m, hi) <= 0.0) {
        lo = hi;
        if (upper == kInf) {
            hi *= 2.0;
            if (hi > 1e12) throw NoRootError("psi stays negative up to 1e12");
        } else {
            hi = upper - 0.5 * (upper - hi);
            if (upper - hi < 1e-14 * upper)
                throw NoRootError("psi stays negative up to the domain boundary");
        }
    }
    double nu = bisect_newton([&](double x) { return psi(m, x); },
                              [&](double x) { return psi_prime(m, x); }, lo, hi);
    if (!(std::fabs(psi(m, nu)) < tol))
        throw NoRootError("root refinement did not reach the requested tolerance");
    return nu;
}

double phi(const LevyModel& m, double q) {
    if (has_positive_jumps(m))
        throw ApplicabilityError("Phi requires a spectrally negative model");
    // Locate the argmin of psi on [0, inf); psi is strictly increasing beyond it.
    double theta_star = 0.0;
    if (psi_prime(m, 0.0) < 0.0) {
        double hi = 1.0;
        while (psi_prime(m, hi) < 0.0) {
            hi *= 2.0;
            if (hi > 1e12) throw NoRootError("psi' stays negative up to 1e12");
        }
        double lo = 0.0;
        while (hi - lo > 1e-13 * std::max(1.0, hi)) {
            double mid = 0.5 * (lo + hi);
            (psi_prime(m, mid) < 0.0 ? lo : hi) = mid;
        }
        theta_star = 0.5 * (lo + hi);
    }
    const double psi_min = psi(m, theta_star);
    if (q < psi_min - 1e-12)
        throw DomainError("q below the minimum of psi: no real right root");
    double lo = theta_star;
    double hi = std::max(1.0, 2.0 * theta_star);
    while (psi(m, hi) < q) {
        hi *= 2.0;
        if (hi > 1e12) throw NoRootError("bracket expansion for Phi failed");
    }
    return bisect_newton([&](double x) { return psi(m, x) - q; },
                         [&](double x) { return psi_prime(m, x); }, lo, hi);
}

LadderExponents ladder_exponents(const LevyModel& m, double alpha, double beta) {
    if (is_two_sided(m))
        throw ApplicabilityError("ladder exponents in closed form need a one-sided model");
    if (is_spectrally_negative(m)) {
        double pa = phi(m, alpha);
        double k_up = pa + beta;
        double k_down = std::fabs(pa - beta) < 1e-8 ? psi_prime(m, beta)
                                                    : (alpha - psi(m, beta)) / (pa - beta);
        return {k_up, k_down};
    }
    LevyModel hat = negate_model(m);
    double pa = phi(hat, alpha);
    double k_up = std::fabs(pa - beta) < 1e-8 ? psi_prime(hat, beta)
                                              : (alpha - psi(hat, beta)) / (pa - beta);
    double k_down = pa + beta;
    return {k_up, k_down};
}

double c0(const LevyModel& m, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("c0 requires nu > 0");
    if (std::fabs(psi(m, nu)) > 1e-8 * std::max(1.0, std::fabs(psi_prime(m, nu))))
        throw std::invalid_argument("c0 requires psi(nu) = 0");
    if (is_two_sided(m))
        throw ApplicabilityError(
            "no closed-form C0 for two-sided jumps; use the Monte Carlo estimator");
    if (is_spectrally_negative(m)) return nu * psi_prime(m, nu);
    return -nu * psi_prime(m, 0.0);
}

double c_killed(const LevyModel& m, double nu, double p, double q) {
    if (!(p > 0.0 && q > 0.0)) throw std::invalid_argument("c_killed requires p, q > 0");
    if (is_two_sided(m))
        throw ApplicabilityError("no closed-form C for two-sided jumps");
    const double psi_nu = psi(m, nu);
    if (is_spectrally_negative(m))
        return p * phi(m, q) / (phi(m, p + psi_nu) - nu);
    LevyModel hat = negate_model(m);
    return q * (phi(hat, p + psi_nu) + nu) / phi(hat, q);
}

FluctuationConstants compute_constants(const LevyModel& m, std::optional<double> nu_opt,
                                       double p, double q) {
    FluctuationConstants fc;
    fc.mean = psi_prime(m, 0.0);
    fc.nu = nu_opt ? *nu_opt : find_nu(m);
    fc.psi_nu = psi(m, fc.nu);
    fc.psi_prime_nu = psi_prime(m, fc.nu);
    if (is_two_sided(m))
        fc.method = ConstantsMethod::monte_carlo;
    else if (std::holds_alternative<NoJumps>(m.jumps))
        fc.method = ConstantsMethod::brownian;
    else if (is_spectrally_negative(m))
        fc.method = ConstantsMethod::spectrally_negative;
    else
        fc.method = ConstantsMethod::spectrally_positive;
    const bool corollary_root =
        fc.nu > 0.0 && std::fabs(fc.psi_nu) < 1e-8 && fc.mean < 0.0 && fc.psi_prime_nu > 0.0;
    if (corollary_root && !is_two_sided(m)) fc.c0 = c0(m, fc.nu);
    if (p > 0.0 && q > 0.0 && !is_two_sided(m)) fc.c_killed = c_killed(m, fc.nu, p, q);
    return fc;
}

}  // namespace levymmm
