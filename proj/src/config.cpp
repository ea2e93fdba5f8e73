#include "levymmm/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "levymmm/errors.hpp"
#include "levymmm/fluctuation.hpp"

namespace levymmm {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> parse_pairs(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("duplicate key: " + key);
        kv[key] = val;
    }
    return kv;
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size())
        throw ConfigError("key " + key + ": not a number: " + v);
    return x;
}

long to_long(const std::string& key, const std::string& v) {
    char* end = nullptr;
    long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size())
        throw ConfigError("key " + key + ": not an integer: " + v);
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(v);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

struct KeyReader {
    const std::map<std::string, std::string>& kv;
    mutable std::map<std::string, bool> seen;

    bool has(const std::string& k) const {
        auto it = kv.find(k);
        if (it != kv.end()) seen[k] = true;
        return it != kv.end();
    }
    std::string str(const std::string& k, const std::string& dflt) const {
        return has(k) ? kv.at(k) : dflt;
    }
    double num(const std::string& k, double dflt) const {
        return has(k) ? to_double(k, kv.at(k)) : dflt;
    }
    double num_required(const std::string& k) const {
        if (!has(k)) throw ConfigError("missing required key: " + k);
        return to_double(k, kv.at(k));
    }
    long integer(const std::string& k, long dflt) const {
        return has(k) ? to_long(k, kv.at(k)) : dflt;
    }
    std::optional<double> num_or_auto(const std::string& k) const {
        if (!has(k)) return std::nullopt;
        std::string v = kv.at(k);
        if (v == "auto") return std::nullopt;
        return to_double(k, v);
    }
};

JumpSpec parse_jumps(const KeyReader& r) {
    std::string kind = r.str("model.jumps.kind", "none");
    if (kind == "none") return NoJumps{};
    if (kind == "gaussian") {
        return GaussianJumps{r.num_required("model.jumps.rate"),
                             r.num_required("model.jumps.mean"),
                             r.num_required("model.jumps.var")};
    }
    if (kind == "double_exp") {
        return DoubleExpJumps{r.num_required("model.jumps.rate"),
                              r.num_required("model.jumps.p_up"),
                              r.num_required("model.jumps.eta_up"),
                              r.num_required("model.jumps.eta_down")};
    }
    if (kind == "one_sided_exp") {
        std::string sign = r.str("model.jumps.sign", "");
        if (sign != "up" && sign != "down")
            throw ConfigError("model.jumps.sign must be up or down");
        return OneSidedExpJumps{sign == "up" ? JumpSign::positive : JumpSign::negative,
                                r.num_required("model.jumps.rate"),
                                r.num_required("model.jumps.eta")};
    }
    throw ConfigError("model.jumps.kind must be none|gaussian|double_exp|one_sided_exp");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    auto kv = parse_pairs(text);
    KeyReader r{kv, {}};
    ExperimentConfig cfg;
    cfg.raw = kv;

    cfg.model.drift_a = r.num_required("model.drift");
    cfg.model.sigma2 = r.num_required("model.sigma2");
    cfg.model.jumps = parse_jumps(r);
    ModelDiagnostics diag = validate(cfg.model);
    if (!diag.ok) {
        std::string msg = "invalid model:";
        for (const auto& v : diag.violations) msg += " " + v + ";";
        throw ConfigError(msg);
    }

    cfg.nu = r.num_or_auto("regime.nu");
    cfg.p = r.num("regime.p", 0.0);
    cfg.q = r.num("regime.q", 0.0);
    if (cfg.p < 0.0 || cfg.q < 0.0) throw ConfigError("killing rates must be >= 0");
    if ((cfg.p > 0.0) != (cfg.q > 0.0))
        throw ConfigError("regime.p and regime.q must be both zero or both positive");

    cfg.dt = r.num("numerics.dt", 0.01);
    if (!(cfg.dt > 0.0)) throw ConfigError("numerics.dt must be > 0");
    cfg.horizon = r.num_or_auto("numerics.horizon");
    cfg.window = r.num_or_auto("numerics.window");
    cfg.margin = r.num_or_auto("numerics.margin");
    cfg.pad = r.num_or_auto("numerics.pad");
    cfg.delta = r.num("numerics.delta", 0.01);
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("numerics.delta in (0,1)");
    cfg.doubling_cap = static_cast<int>(r.integer("numerics.doubling_cap", 6));

    if (r.has("field.t_grid")) {
        for (const auto& s : split_list(kv.at("field.t_grid")))
            cfg.t_grid.push_back(to_double("field.t_grid", s));
    } else {
        double lo = r.num("field.t_min", -2.0);
        double hi = r.num("field.t_max", 5.0);
        double step = r.num("field.t_step", 1.0);
        if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("bad field grid spec");
        for (double t = lo; t <= hi + 1e-12; t += step) cfg.t_grid.push_back(t);
    }
    for (std::size_t i = 1; i < cfg.t_grid.size(); ++i)
        if (!(cfg.t_grid[i] > cfg.t_grid[i - 1]))
            throw ConfigError("field.t_grid must be strictly increasing");

    cfg.n = r.integer("mc.n", 10000);
    if (cfg.n <= 0) throw ConfigError("mc.n must be positive");
    cfg.master_seed = static_cast<std::uint64_t>(r.integer("mc.master_seed", 1));
    cfg.workers = static_cast<int>(r.integer("mc.workers", 0));

    cfg.out_dir = r.str("output.directory", "out");
    cfg.formats = split_list(r.str("output.formats", "csv,json"));

    for (const auto& [k, v] : kv)
        if (!r.seen.count(k)) throw ConfigError("unknown key: " + k);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

double resolved_nu(const ExperimentConfig& cfg) {
    return cfg.nu ? *cfg.nu : find_nu(cfg.model);
}

SimParams resolved_sim(const ExperimentConfig& cfg, double nu) {
    SimParams sp;
    sp.dt = cfg.dt;
    double mean = psi_prime(cfg.model, 0.0);
    sp.horizon = cfg.horizon ? *cfg.horizon : 20.0 / std::max(1e-6, std::fabs(mean));
    sp.window = cfg.window ? *cfg.window : 5.0;
    sp.margin = cfg.margin ? *cfg.margin : 10.0 / nu;
    sp.doubling_cap = cfg.doubling_cap;
    int workers = cfg.workers;
    if (workers <= 0) {
        if (const char* env = std::getenv("LEVY_MMM_WORKERS")) workers = std::atoi(env);
    }
    sp.workers = workers;
    return sp;
}

FieldConfig resolved_field(const ExperimentConfig& cfg, double nu, double c0_value) {
    FieldConfig fc;
    fc.t_grid = cfg.t_grid;
    double mean = psi_prime(cfg.model, 0.0);
    fc.pad = cfg.pad ? *cfg.pad
                     : (15.0 / nu) * std::max(1.0 / std::max(1e-6, std::fabs(mean)), 1.0);
    fc.delta = cfg.delta;
    fc.nu = nu;
    fc.c0 = c0_value;
    return fc;
}

}  // namespace levymmm
