#include "levymmm/io.hpp"

#include <charconv>
#include <ostream>

namespace levymmm {

std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_two_sided_csv(std::ostream& os, const TwoSidedPath& p) {
    os << "t,value,side\n";
    for (std::size_t j = p.left.values.size(); j >= 2; --j) {
        double t = -static_cast<double>(j - 1) * p.left.dt;
        os << format_double(t) << ',' << format_double(p.left.values[j - 1]) << ",left\n";
    }
    for (std::size_t j = 0; j < p.right.values.size(); ++j) {
        double t = static_cast<double>(j) * p.right.dt;
        os << format_double(t) << ',' << format_double(p.right.values[j]) << ",right\n";
    }
}

void write_field_csv(std::ostream& os, const std::vector<double>& t_grid,
                     const std::vector<double>& eta) {
    os << "t,eta\n";
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        os << format_double(t_grid[i]) << ',' << format_double(eta[i]) << '\n';
}

nlohmann::json to_json(const McEstimate& e) {
    nlohmann::json j;
    j["mean"] = e.mean;
    j["std_error"] = e.std_error;
    j["n"] = e.n;
    j["diagnostics"] = e.diagnostics;
    return j;
}

nlohmann::json to_json(const FluctuationConstants& fc) {
    nlohmann::json j;
    j["nu"] = fc.nu;
    j["psi_nu"] = fc.psi_nu;
    j["psi_prime_nu"] = fc.psi_prime_nu;
    j["mean"] = fc.mean;
    if (fc.c0)
        j["c0"] = *fc.c0;
    else
        j["note"] = "c0 has no closed form for this model; run estimate-c0";
    if (fc.c_killed) j["c_killed"] = *fc.c_killed;
    j["method"] = to_string(fc.method);
    return j;
}

nlohmann::json to_json(const TestReport& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["statistic"] = r.statistic;
    if (r.p_value) j["p_value"] = *r.p_value;
    if (r.z_score) j["z_score"] = *r.z_score;
    j["pass"] = r.pass;
    j["n"] = r.n;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

nlohmann::json field_diagnostics_json(const MaxStableField& f, double pad, double delta) {
    nlohmann::json j;
    j["n_particles"] = f.n_particles;
    j["truncation_gap"] = f.truncation_gap;
    j["pad"] = pad;
    j["delta"] = delta;
    return j;
}

nlohmann::json manifest_json(const ExperimentConfig& cfg, std::uint64_t seed,
                             double wall_seconds) {
    nlohmann::json j;
    j["config"] = cfg.raw;
    j["seed"] = seed;
    j["version"] = "levy-mmm 0.1.0";
    j["wall_time_seconds"] = wall_seconds;
    return j;
}

}  // namespace levymmm
