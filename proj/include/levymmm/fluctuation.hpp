#pragma once

#include <optional>
#include <string>

#include "levymmm/model.hpp"

namespace levymmm {

enum class ConstantsMethod { spectrally_negative, spectrally_positive, brownian, monte_carlo };

std::string to_string(ConstantsMethod m);

struct FluctuationConstants {
    double nu = 0.0;            // root of psi(nu)=0, or user-supplied tilt
    double psi_nu = 0.0;        // psi(nu)
    double psi_prime_nu = 0.0;  // psi'(nu)
    double mean = 0.0;          // psi'(0) = E X(1)
    std::optional<double> c0;
    std::optional<double> c_killed;
    ConstantsMethod method = ConstantsMethod::monte_carlo;
};

// Positive root of psi(nu) = 0 for a model with psi'(0) < 0. Bracketed by
// doubling, bisected to width ~1e-12, then polished with two Newton steps.
double find_nu(const LevyModel& m, double tol = 1e-12);

// Right inverse of psi for a spectrally negative model: the right-most solution
// of psi(theta) = q. Accepts the analytic continuation q >= min psi.
double phi(const LevyModel& m, double q);

struct LadderExponents {
    double k_up;    // ascending ladder exponent
    double k_down;  // descending ladder exponent
};

// Bivariate ladder exponents for a spectrally one-sided model:
//   spectrally negative:  k_up = Phi(alpha)+beta, k_down = (alpha-psi(beta))/(Phi(alpha)-beta)
//   spectrally positive:  hat duals of the above on -X.
// The removable singularity Phi(alpha)=beta is evaluated as the limit psi'(beta).
LadderExponents ladder_exponents(const LevyModel& m, double alpha, double beta);

// C0 of the unkilled identity: nu*psi'(nu) (spectrally negative, incl. BM) or
// -nu*psi'(0) (spectrally positive). Two-sided models must use the Monte Carlo
// estimator instead.
double c0(const LevyModel& m, double nu);

// C of the killed identity at rates (p, q):
//   spectrally negative: p*Phi(q) / (Phi(p+psi(nu)) - nu)
//   spectrally positive: q*(PhiHat(p+psi(nu)) + nu) / PhiHat(q)
double c_killed(const LevyModel& m, double nu, double p, double q);

// Assemble the record; nu = nullopt triggers find_nu. When p,q > 0 the killed
// constant is attached where analytically available.
FluctuationConstants compute_constants(const LevyModel& m, std::optional<double> nu_opt,
                                       double p = 0.0, double q = 0.0);

}  // namespace levymmm
