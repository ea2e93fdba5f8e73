#include "levymmm/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levymmm/parallel.hpp"

namespace levymmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kParticleCap = 500000;

void check_grid(const FieldConfig& cfg) {
    if (cfg.t_grid.empty()) throw std::invalid_argument("t_grid must be nonempty");
    for (std::size_t i = 1; i < cfg.t_grid.size(); ++i)
        if (!(cfg.t_grid[i] > cfg.t_grid[i - 1]))
            throw std::invalid_argument("t_grid must be strictly increasing");
    if (!(cfg.pad > 0.0)) throw std::invalid_argument("pad must be positive");
    if (!(cfg.nu > 0.0) || !(cfg.c0 > 0.0))
        throw std::invalid_argument("field sampling needs nu > 0 and c0 > 0");
}

}  // namespace

std::vector<double> psi2_levels_above(const FieldConfig& cfg, double v_floor,
                                      const RngStream& rng) {
    check_grid(cfg);
    const double wlen = (cfg.t_grid.back() - cfg.t_grid.front()) + 2.0 * cfg.pad;
    const double lam0 = cfg.c0 * wlen / cfg.nu;  // tail mass at v: lam0 * e^{-nu v}
    std::vector<double> out;
    double gamma = 0.0;
    for (std::uint64_t k = 0;; ++k) {
        auto ar = rng.substream("psi2.arrival", k);
        gamma += ar.exponential(1.0);
        double v = std::log(lam0 / gamma) / cfg.nu;
        if (v <= v_floor) break;
        out.push_back(v);
        if (static_cast<long>(out.size()) > kParticleCap)
            throw std::runtime_error("psi2 level generation exceeded the particle cap");
    }
    return out;
}

MaxStableField sample_psi2_eta(const LevyModel& m, const FieldConfig& cfg, const SimParams& sp,
                               const RngStream& rng, int overshoot_particles) {
    check_grid(cfg);
    const double t_lo = cfg.t_grid.front();
    const double wlen = (cfg.t_grid.back() - t_lo) + 2.0 * cfg.pad;
    const double lam0 = cfg.c0 * wlen / cfg.nu;
    YParams yp;
    yp.dt = sp.dt;
    yp.window = sp.window;
    yp.margin = sp.margin;
    yp.horizon0 = sp.horizon;
    yp.doubling_cap = sp.doubling_cap;

    MaxStableField field;
    field.eta.assign(cfg.t_grid.size(), -kInf);
    double min_eta = -kInf;
    double gamma = 0.0;
    for (std::uint64_t k = 0;; ++k) {
        auto ar = rng.substream("psi2.arrival", k);
        gamma += ar.exponential(1.0);
        double v = std::log(lam0 / gamma) / cfg.nu;
        if (min_eta > -kInf && v <= min_eta) {  // exact: sup Y = 0
            if (overshoot_particles <= 0) break;
            --overshoot_particles;
        }
        double t_rel = ar.uniform() * wlen;  // relative to t_lo - pad
        TwoSidedPath y = sample_y(m, cfg.nu, yp, rng.substream("psi2.y", k));
        for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
            double s = (cfg.t_grid[i] - t_lo) + cfg.pad - t_rel;
            auto yv = path_value_at(y, s);
            if (yv && v + *yv > field.eta[i]) field.eta[i] = v + *yv;
        }
        min_eta = *std::min_element(field.eta.begin(), field.eta.end());
        ++field.n_particles;
        if (field.n_particles > kParticleCap)
            throw std::runtime_error("psi2 exceeded the particle cap");
    }
    field.truncation_gap = 0.0;
    return field;
}

Psi1Calibration calibrate_psi1_floor(const LevyModel& m, const FieldConfig& cfg,
                                     const SimParams& sp, const RngStream& rng, long pilot_n) {
    check_grid(cfg);
    const double hl = std::max(0.0, -cfg.t_grid.front());
    const double hr = std::max(0.0, cfg.t_grid.back());
    auto zbars = parallel_map<double>(static_cast<std::size_t>(pilot_n), sp.workers,
                                      [&](std::size_t i) {
                                          TwoSidedPath z = build_z_window(
                                              m, cfg.nu, sp.dt, hl, hr,
                                              rng.substream("psi1.pilot", i));
                                          return supremum_split(z).sup_value;
                                      });
    std::sort(zbars.begin(), zbars.end(), std::greater<double>());
    // least squares fit of the intercept of log P(Zbar > a) = log k_hat - nu a
    // on the upper tail order statistics (slope pinned at -nu)
    std::size_t n_tail = std::max<std::size_t>(50, zbars.size() / 5);
    n_tail = std::min(n_tail, zbars.size());
    KahanSum acc;
    for (std::size_t i = 0; i < n_tail; ++i) {
        double surv = (static_cast<double>(i) + 0.5) / static_cast<double>(zbars.size());
        acc.add(std::log(surv) + cfg.nu * zbars[i]);
    }
    Psi1Calibration cal;
    cal.k_hat = std::exp(acc.value() / static_cast<double>(n_tail));
    cal.delta_cap = std::max(0.0, std::log(cal.k_hat / cfg.delta) / cfg.nu);
    cal.pilot_n = pilot_n;
    return cal;
}

MaxStableField sample_psi1_eta(const LevyModel& m, const FieldConfig& cfg, const SimParams& sp,
                               const RngStream& rng, const Psi1Calibration* calib) {
    check_grid(cfg);
    Psi1Calibration local;
    if (!calib) {
        local = calibrate_psi1_floor(m, cfg, sp, rng.substream("psi1.calib", 0));
        calib = &local;
    }
    const double hl = std::max(0.0, -cfg.t_grid.front());
    const double hr = std::max(0.0, cfg.t_grid.back());
    MaxStableField field;
    field.eta.assign(cfg.t_grid.size(), -kInf);
    double min_eta = -kInf;
    double gamma = 0.0;
    double u_stop = 0.0;
    for (std::uint64_t k = 0;; ++k) {
        auto ar = rng.substream("psi1.arrival", k);
        gamma += ar.exponential(1.0);
        double u = -std::log(cfg.nu * gamma) / cfg.nu;  // tail mass e^{-nu u}/nu
        if (min_eta > -kInf && u < min_eta - calib->delta_cap) {
            u_stop = u;
            break;
        }
        TwoSidedPath z = build_z_window(m, cfg.nu, sp.dt, hl, hr, rng.substream("psi1.z", k));
        for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
            auto zv = path_value_at(z, cfg.t_grid[i]);
            if (zv && u + *zv > field.eta[i]) field.eta[i] = u + *zv;
        }
        min_eta = *std::min_element(field.eta.begin(), field.eta.end());
        ++field.n_particles;
        if (field.n_particles > kParticleCap)
            throw std::runtime_error("psi1 exceeded the particle cap");
    }
    field.truncation_gap =
        std::min(1.0, calib->k_hat * std::exp(-cfg.nu * (min_eta - u_stop)));
    return field;
}

}  // namespace levymmm
