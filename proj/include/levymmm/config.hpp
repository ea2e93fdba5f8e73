#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levymmm/estimators.hpp"
#include "levymmm/field.hpp"
#include "levymmm/model.hpp"

namespace levymmm {

// Flat sectioned key-value experiment description; see README for the schema
// and defaults. Unknown keys are rejected.
struct ExperimentConfig {
    LevyModel model;
    std::optional<double> nu;  // nullopt = auto (find_nu)
    double p = 0.0;
    double q = 0.0;

    double dt = 0.01;
    std::optional<double> horizon;  // auto: 20 / |psi'(0)|
    std::optional<double> window;   // auto: 5
    std::optional<double> margin;   // auto: 10 / nu
    std::optional<double> pad;      // auto: (15/nu) * max(1/|psi'(0)|, 1)
    double delta = 0.01;
    int doubling_cap = 6;

    std::vector<double> t_grid;  // default -2..5 step 1

    long n = 10000;
    std::uint64_t master_seed = 1;
    int workers = 0;  // 0 = auto (env LEVY_MMM_WORKERS, then hardware)

    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};

    std::map<std::string, std::string> raw;  // parsed keys, echoed in manifests
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// nu from the config or find_nu on the model.
double resolved_nu(const ExperimentConfig& cfg);

SimParams resolved_sim(const ExperimentConfig& cfg, double nu);

FieldConfig resolved_field(const ExperimentConfig& cfg, double nu, double c0_value);

}  // namespace levymmm
