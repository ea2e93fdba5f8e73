#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levymmm/fluctuation.hpp"
#include "levymmm/path.hpp"

namespace levymmm {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n = 0;
    std::map<std::string, double> diagnostics;
};

// Indicator window on (T, Zbar): T in [t1,t2], Zbar in [x1,x2]. x2 may be +inf.
struct Box {
    double t1, t2, x1, x2;
};

enum class PathFunctional { one, sup_below, value_below };

// Bounded functionals of the post-extremum path, read off the grid points
// s = dt..t_window (the anchor s=0 is 0 by construction on both sides of the
// identity, so it is excluded). A path dead before s counts as: sup over an
// empty set -> indicator 1; missing value at t_window -> indicator 0. The same
// rule applies to both estimator sides, which is all the identity needs.
struct HSpec {
    PathFunctional kind = PathFunctional::one;
    double level = -0.5;
    double t_window = 1.0;
};

double h_value(const GridPath& post, const HSpec& h);

struct SimParams {
    double dt = 0.01;
    double horizon = 40.0;  // truncation horizon per side in the unkilled regime
    double window = 5.0;
    double margin = 10.0;
    int doubling_cap = 6;
    int workers = 0;
};

// Monte Carlo estimate of E[ integral exp(nu Y(t)) dt ] = C0^{-1} by trapezoidal
// quadrature over each sampled Y's support. Corollary regime only.
McEstimate estimate_c0_inverse(const LevyModel& m, double nu, const SimParams& sp, long n,
                               const RngStream& rng);

struct DualResult {
    McEstimate lhs;
    McEstimate rhs;
};

struct PanelEntry {
    Box box;
    HSpec h;
};

struct PanelResult {
    std::vector<DualResult> entries;
    // Covariance matrix of the per-entry lhs sample means (same replicates are
    // shared across entries), used by the independence/factorization checks.
    std::vector<std::vector<double>> lhs_mean_cov;
};

// Both sides of the identity on a panel of (box, h) entries sharing one batch
// of Z replicates and one batch of Y replicates:
//   lhs = E[ h(shifted Z) 1{T in box_t, Zbar in box_x} ]
//   rhs = C * int_{t1}^{t2} e^{(psi(nu)+p-q)t} E[ h(Y) e^{nu Y(-t)} 1{-Y(-t) in box_x} ] dt
PanelResult dual_estimator_panel(const LevyModel& m, double nu, double p, double q,
                                 const std::vector<PanelEntry>& panel, const SimParams& sp,
                                 long n, const RngStream& rng, double c_value);

// Single-box convenience wrapper; C from c_killed / c0 unless overridden (the
// override is how two-sided models plug in their Monte Carlo constant).
DualResult dual_estimator(const LevyModel& m, double nu, double p, double q, const Box& box,
                          const HSpec& h, const SimParams& sp, long n, const RngStream& rng,
                          std::optional<double> c_override = std::nullopt);

}  // namespace levymmm
