#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "levymmm/config.hpp"
#include "levymmm/estimators.hpp"
#include "levymmm/field.hpp"
#include "levymmm/fluctuation.hpp"
#include "levymmm/path.hpp"
#include "levymmm/stats.hpp"

namespace levymmm {

// Shortest round-trip decimal representation.
std::string format_double(double x);

// RFC-4180 CSV, header `t,value,side`, rows in increasing t.
void write_two_sided_csv(std::ostream& os, const TwoSidedPath& p);

// Header `t,eta`.
void write_field_csv(std::ostream& os, const std::vector<double>& t_grid,
                     const std::vector<double>& eta);

nlohmann::json to_json(const McEstimate& e);
nlohmann::json to_json(const FluctuationConstants& fc);
nlohmann::json to_json(const TestReport& r);
nlohmann::json field_diagnostics_json(const MaxStableField& f, double pad, double delta);
nlohmann::json manifest_json(const ExperimentConfig& cfg, std::uint64_t seed,
                             double wall_seconds);

}  // namespace levymmm
