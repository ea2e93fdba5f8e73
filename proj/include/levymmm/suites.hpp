#pragma once

#include <string>
#include <vector>

#include "levymmm/config.hpp"
#include "levymmm/stats.hpp"

namespace levymmm {

// Fixed panel of (t, x) boxes for the identity suites: t<0 and t>0, small and
// large x, plus the full positive-time box.
std::vector<Box> identity_boxes();

std::vector<std::string> suite_names();

// Named verification suites turning the identities into pass/fail reports:
//   constants, ladder, tilt      - deterministic closed-form checks
//   corollary_identity           - dual estimator panel, unkilled regime
//   killed_identity              - dual estimator panel at rates (p, q)
//   psi1_psi2                    - two-sample KS between the particle systems
//   stationarity, maxstability   - distributional properties of eta
std::vector<TestReport> run_suite(const std::string& name, const ExperimentConfig& cfg,
                                  std::uint64_t seed);

}  // namespace levymmm
