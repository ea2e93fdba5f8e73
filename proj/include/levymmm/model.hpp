#pragma once

#include <string>
#include <variant>
#include <vector>

#include "levymmm/errors.hpp"

namespace levymmm {

struct NoJumps {};

// Compound Poisson jumps with Gaussian sizes N(mean, var).
struct GaussianJumps {
    double rate;  // jumps per unit time
    double mean;
    double var;
};

// Double exponential (Kou) jumps: up sizes Exp(eta_up) w.p. p_up,
// down sizes -Exp(eta_down) w.p. 1 - p_up.
struct DoubleExpJumps {
    double rate;
    double p_up;
    double eta_up;
    double eta_down;
};

enum class JumpSign { positive, negative };

struct OneSidedExpJumps {
    JumpSign sign;
    double rate;
    double decay;
};

using JumpSpec = std::variant<NoJumps, GaussianJumps, DoubleExpJumps, OneSidedExpJumps>;

// Open interval on which psi is finite.
struct ThetaDomain {
    double lower;
    double upper;
    bool contains(double theta) const { return theta > lower && theta < upper; }
};

// Levy process with triplet (a, sigma^2, Pi), Pi of finite activity:
//   psi(theta) = log E exp(theta X(1)) = a*theta + sigma^2*theta^2/2 + J(theta),
//   J(theta)   = integral of (e^{theta x} - 1) Pi(dx).
// The catalog requires sigma2 > 0, so paths are never monotone and never
// compound Poisson.
struct LevyModel {
    double drift_a = 0.0;
    double sigma2 = 1.0;
    JumpSpec jumps = NoJumps{};
};

inline LevyModel brownian_motion(double drift, double sigma2) {
    return LevyModel{drift, sigma2, NoJumps{}};
}

struct ModelDiagnostics {
    bool ok;
    std::vector<std::string> violations;
    ThetaDomain domain;
};

ThetaDomain theta_domain(const LevyModel& m);

double psi(const LevyModel& m, double theta);
double psi_prime(const LevyModel& m, double theta);

// Model of the associated process X^nu: psi_tilted(theta) = psi(theta+nu) - psi(nu)
// holds identically (sigma unchanged, jump measure e^{nu x} Pi(dx), drift shifted).
LevyModel esscher_tilt(const LevyModel& m, double nu);

ModelDiagnostics validate(const LevyModel& m);

bool has_positive_jumps(const LevyModel& m);
bool has_negative_jumps(const LevyModel& m);
inline bool is_spectrally_negative(const LevyModel& m) { return !has_positive_jumps(m); }
inline bool is_spectrally_positive(const LevyModel& m) { return !has_negative_jumps(m); }
inline bool is_two_sided(const LevyModel& m) {
    return has_positive_jumps(m) && has_negative_jumps(m);
}

// The dual model of -X (used for spectrally positive formulas).
LevyModel negate_model(const LevyModel& m);

double jump_rate(const JumpSpec& jumps);

}  // namespace levymmm
