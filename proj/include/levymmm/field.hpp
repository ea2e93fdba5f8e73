#pragma once

#include <vector>

#include "levymmm/estimators.hpp"
#include "levymmm/path.hpp"

namespace levymmm {

struct FieldConfig {
    std::vector<double> t_grid;  // strictly increasing evaluation times
    double pad = 30.0;           // padding L of the T-window for Psi2
    double delta = 0.01;         // Psi1 truncation failure budget
    double nu = 1.0;
    double c0 = 0.5;
};

struct MaxStableField {
    std::vector<double> eta;
    long n_particles = 0;
    double truncation_gap = 0.0;  // Psi1 only; Psi2 stopping is exact
};

// Psi2 / mixed moving maxima: points (V_i, T_i) of a PPP with intensity
// c0 * dt * e^{-nu v} dv on the padded window, V_i generated in decreasing
// order via the inverse tail mass, each paired with an independent Y. Stops
// exactly once V_k cannot beat the current field minimum (sup Y = 0).
// `overshoot_particles` keeps processing past the stop rule; the stopping
// exactness test asserts that doing so never changes eta.
MaxStableField sample_psi2_eta(const LevyModel& m, const FieldConfig& cfg, const SimParams& sp,
                               const RngStream& rng, int overshoot_particles = 0);

// Decreasing levels V of the Psi2 point process above `v_floor` (exposed for
// distributional tests of the spacing construction).
std::vector<double> psi2_levels_above(const FieldConfig& cfg, double v_floor,
                                      const RngStream& rng);

struct Psi1Calibration {
    double k_hat = 1.0;     // fitted tail constant P(Zbar > a) ~ k_hat e^{-nu a}
    double delta_cap = 0.0; // stopping depth below the field minimum
    long pilot_n = 0;
};

Psi1Calibration calibrate_psi1_floor(const LevyModel& m, const FieldConfig& cfg,
                                     const SimParams& sp, const RngStream& rng,
                                     long pilot_n = 500);

// Psi1: U_i descending from the PPP with intensity e^{-nu u} du, each paired
// with an independent Z over the grid window. Stops once U_k drops delta_cap
// below the field minimum, where delta_cap is calibrated so the chance that a
// discarded particle would have mattered is about cfg.delta.
MaxStableField sample_psi1_eta(const LevyModel& m, const FieldConfig& cfg, const SimParams& sp,
                               const RngStream& rng, const Psi1Calibration* calib = nullptr);

}  // namespace levymmm
