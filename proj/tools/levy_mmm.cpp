#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "levymmm/config.hpp"
#include "levymmm/errors.hpp"
#include "levymmm/field.hpp"
#include "levymmm/fluctuation.hpp"
#include "levymmm/io.hpp"
#include "levymmm/suites.hpp"

namespace fs = std::filesystem;
using namespace levymmm;

namespace {

struct CliState {
    std::string config_path;
    std::optional<long> seed;
    std::string out_dir;
    int workers = -1;
    long count = 1;
};

ExperimentConfig load_config(const CliState& st) {
    if (st.config_path.empty()) throw ConfigError("--config PATH is required");
    ExperimentConfig cfg = parse_config_file(st.config_path);
    if (st.seed) cfg.master_seed = static_cast<std::uint64_t>(*st.seed);
    if (!st.out_dir.empty()) cfg.out_dir = st.out_dir;
    if (st.workers >= 0) cfg.workers = st.workers;
    return cfg;
}

void write_text_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
}

std::string tag(long i) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04ld", i);
    return buf;
}

int cmd_constants(const CliState& st) {
    ExperimentConfig cfg = load_config(st);
    FluctuationConstants fc = compute_constants(cfg.model, cfg.nu, cfg.p, cfg.q);
    std::cout << to_json(fc).dump(2) << "\n";
    return 0;
}

int cmd_estimate_c0(const CliState& st) {
    ExperimentConfig cfg = load_config(st);
    double nu = resolved_nu(cfg);
    SimParams sp = resolved_sim(cfg, nu);
    RngStream root(cfg.master_seed);
    McEstimate est =
        estimate_c0_inverse(cfg.model, nu, sp, cfg.n, root.substream("cli.c0inv", 0));
    nlohmann::json j = to_json(est);
    j["nu"] = nu;
    j["quantity"] = "c0_inverse";
    std::cout << j.dump(2) << "\n";
    fs::create_directories(cfg.out_dir);
    write_text_file(fs::path(cfg.out_dir) / "estimate_c0.json", j.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const CliState& st, const std::string& kind) {
    auto t_start = std::chrono::steady_clock::now();
    ExperimentConfig cfg = load_config(st);
    double nu = resolved_nu(cfg);
    SimParams sp = resolved_sim(cfg, nu);
    fs::create_directories(cfg.out_dir);
    RngStream root(cfg.master_seed);
    YParams yp;
    yp.dt = sp.dt;
    yp.p = cfg.p;
    yp.q = cfg.q;
    yp.window = sp.window;
    yp.margin = sp.margin;
    yp.horizon0 = sp.horizon;
    yp.doubling_cap = sp.doubling_cap;

    auto write_csv = [&](const std::string& name, auto writer) {
        std::ofstream os(fs::path(cfg.out_dir) / name, std::ios::binary);
        writer(os);
    };

    if (kind == "z") {
        for (long i = 0; i < st.count; ++i) {
            TwoSidedPath z = build_z(cfg.model, nu, sp.dt, cfg.p, cfg.q, sp.horizon,
                                     root.substream("cli.z", static_cast<std::uint64_t>(i)));
            write_csv("z_" + tag(i) + ".csv", [&](std::ostream& os) {
                write_two_sided_csv(os, z);
            });
        }
    } else if (kind == "y") {
        for (long i = 0; i < st.count; ++i) {
            TwoSidedPath y = sample_y(cfg.model, nu, yp,
                                      root.substream("cli.y", static_cast<std::uint64_t>(i)));
            write_csv("y_" + tag(i) + ".csv", [&](std::ostream& os) {
                write_two_sided_csv(os, y);
            });
        }
    } else if (kind == "eta-psi1" || kind == "eta-psi2") {
        double c0v;
        if (is_two_sided(cfg.model)) {
            McEstimate inv = estimate_c0_inverse(cfg.model, nu, sp, cfg.n,
                                                 root.substream("cli.c0inv", 0));
            c0v = 1.0 / inv.mean;
        } else {
            c0v = c0(cfg.model, nu);
        }
        FieldConfig fc = resolved_field(cfg, nu, c0v);
        Psi1Calibration cal;
        if (kind == "eta-psi1")
            cal = calibrate_psi1_floor(cfg.model, fc, sp, root.substream("cli.calib", 0));
        for (long i = 0; i < st.count; ++i) {
            MaxStableField f =
                kind == "eta-psi2"
                    ? sample_psi2_eta(cfg.model, fc, sp,
                                      root.substream("cli.eta2", static_cast<std::uint64_t>(i)))
                    : sample_psi1_eta(cfg.model, fc, sp,
                                      root.substream("cli.eta1", static_cast<std::uint64_t>(i)),
                                      &cal);
            std::string base = (kind == "eta-psi2" ? "eta_psi2_" : "eta_psi1_") + tag(i);
            write_csv(base + ".csv", [&](std::ostream& os) {
                write_field_csv(os, fc.t_grid, f.eta);
            });
            write_text_file(fs::path(cfg.out_dir) / (base + ".diag.json"),
                            field_diagnostics_json(f, fc.pad, fc.delta).dump(2) + "\n");
        }
    } else {
        throw ConfigError("simulate kind must be one of z|y|eta-psi1|eta-psi2");
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                      .count();
    write_text_file(fs::path(cfg.out_dir) / "manifest.json",
                    manifest_json(cfg, cfg.master_seed, wall).dump(2) + "\n");
    return 0;
}

int cmd_verify(const CliState& st, const std::string& suite) {
    ExperimentConfig cfg = load_config(st);
    std::vector<TestReport> reports = run_suite(suite, cfg, cfg.master_seed);
    nlohmann::json arr = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
        all_pass = all_pass && r.pass;
    }
    std::cout << arr.dump(2) << "\n";
    fs::create_directories(cfg.out_dir);
    write_text_file(fs::path(cfg.out_dir) / ("verify_" + suite + ".json"),
                    arr.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

int cmd_export(const CliState& st, const std::string& what) {
    ExperimentConfig cfg = load_config(st);
    if (what != "psi") throw ConfigError("export target must be: psi");
    fs::create_directories(cfg.out_dir);
    ThetaDomain dom = theta_domain(cfg.model);
    double lo = std::max(dom.lower * 0.95, -5.0);
    double hi = std::min(dom.upper * 0.95, 5.0);
    std::ofstream os(fs::path(cfg.out_dir) / "psi_curve.csv", std::ios::binary);
    os << "theta,psi,psi_prime\n";
    const int npts = 401;
    for (int i = 0; i < npts; ++i) {
        double th = lo + (hi - lo) * i / (npts - 1);
        os << format_double(th) << ',' << format_double(psi(cfg.model, th)) << ','
           << format_double(psi_prime(cfg.model, th)) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CliState st;
    CLI::App app{"Levy processes seen from their supremum: simulation and verification"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", st.config_path, "experiment config file");
    app.add_option("--seed", st.seed, "override mc.master_seed");
    app.add_option("--out", st.out_dir, "override output.directory");
    app.add_option("--workers", st.workers, "override mc.workers");

    auto* constants = app.add_subcommand("constants", "print fluctuation constants as JSON");
    auto* estimate = app.add_subcommand("estimate-c0", "Monte Carlo estimate of C0^{-1}");
    auto* simulate = app.add_subcommand("simulate", "sample paths or fields to CSV");
    std::string sim_kind;
    simulate->add_option("kind", sim_kind, "z|y|eta-psi1|eta-psi2")->required();
    simulate->add_option("--count", st.count, "number of replicates to write");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    verify->add_option("suite", suite, "suite name")->required();
    auto* exporter = app.add_subcommand("export", "write plot-ready curves");
    std::string what;
    exporter->add_option("target", what, "psi")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (constants->parsed()) return cmd_constants(st);
        if (estimate->parsed()) return cmd_estimate_c0(st);
        if (simulate->parsed()) return cmd_simulate(st, sim_kind);
        if (verify->parsed()) return cmd_verify(st, suite);
        if (exporter->parsed()) return cmd_export(st, what);
    } catch (const HorizonExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ApplicabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotDriftingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NoRootError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
