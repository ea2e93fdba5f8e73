#include "levymmm/estimators.hpp"

#include <cmath>
#include <limits>

#include "levymmm/parallel.hpp"

namespace levymmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long grid_floor(double r) {
    long k = std::lround(r);
    if (std::fabs(r - static_cast<double>(k)) < 1e-6) return k;
    return static_cast<long>(std::floor(r));
}

long grid_ceil(double r) {
    long k = std::lround(r);
    if (std::fabs(r - static_cast<double>(k)) < 1e-6) return k;
    return static_cast<long>(std::ceil(r));
}

YParams make_yparams(const SimParams& sp, double p, double q) {
    YParams yp;
    yp.dt = sp.dt;
    yp.p = p;
    yp.q = q;
    yp.window = sp.window;
    yp.margin = sp.margin;
    yp.horizon0 = sp.horizon;
    yp.doubling_cap = sp.doubling_cap;
    return yp;
}

// Y(-t) at the center of time cell c = [c*dt, (c+1)*dt]: the post-split sides
// store cell-center values, so the center of cell c >= 0 is left.values[c+1]
// and of cell c <= -1 is right.values[-c]. nullopt beyond the support.
std::optional<double> y_at_cell_center(const TwoSidedPath& y, long c) {
    if (c >= 0) {
        auto idx = static_cast<std::size_t>(c + 1);
        if (idx >= y.left.values.size()) return std::nullopt;
        return y.left.values[idx];
    }
    auto idx = static_cast<std::size_t>(-c);
    if (idx >= y.right.values.size()) return std::nullopt;
    return y.right.values[idx];
}

}  // namespace

double h_value(const GridPath& post, const HSpec& h) {
    switch (h.kind) {
        case PathFunctional::one:
            return 1.0;
        case PathFunctional::sup_below: {
            long kmax = grid_floor(h.t_window / post.dt);
            double best = -kInf;
            bool any = false;
            for (long k = 1; k <= kmax && static_cast<std::size_t>(k) < post.values.size();
                 ++k) {
                best = std::max(best, post.values[static_cast<std::size_t>(k)]);
                any = true;
            }
            if (!any) return 1.0;
            return best < h.level ? 1.0 : 0.0;
        }
        case PathFunctional::value_below: {
            long k = grid_floor(h.t_window / post.dt);
            if (k < 1 || static_cast<std::size_t>(k) >= post.values.size()) return 0.0;
            return post.values[static_cast<std::size_t>(k)] < h.level ? 1.0 : 0.0;
        }
    }
    return 1.0;
}

McEstimate estimate_c0_inverse(const LevyModel& m, double nu, const SimParams& sp, long n,
                               const RngStream& rng) {
    const YParams yp = make_yparams(sp, 0.0, 0.0);
    const double drift_down = std::fabs(psi_prime(m, 0.0));
    const double drift_up = psi_prime(m, nu);
    struct Rep {
        double integral = 0.0;
        double tail = 0.0;
        double doublings = 0.0;
    };
    auto reps = parallel_map<Rep>(static_cast<std::size_t>(n), sp.workers, [&](std::size_t i) {
        int dbl = 0;
        TwoSidedPath y = sample_y(m, nu, yp, rng.substream("c0inv.y", i), &dbl);
        // midpoint rule on the cell ladder: values[k], k >= 1, sit at the
        // centers of the cells following the extremum
        auto side = [&](const std::vector<double>& vals) {
            KahanSum s;
            for (std::size_t k = 1; k < vals.size(); ++k) s.add(std::exp(nu * vals[k]));
            return sp.dt * s.value();
        };
        Rep r;
        r.integral = side(y.right.values) + side(y.left.values);
        r.tail = std::exp(nu * y.right.values.back()) / (nu * drift_down) +
                 std::exp(nu * y.left.values.back()) / (nu * drift_up);
        r.doublings = dbl;
        return r;
    });
    std::vector<double> integrals(reps.size());
    KahanSum tail, dbl;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        integrals[i] = reps[i].integral;
        tail.add(reps[i].tail);
        dbl.add(reps[i].doublings);
    }
    MeanSe ms = mean_se(integrals);
    McEstimate est;
    est.mean = ms.mean;
    est.std_error = ms.se;
    est.n = n;
    est.diagnostics["tail_bound_mean"] = tail.value() / static_cast<double>(n);
    est.diagnostics["horizon_doublings_mean"] = dbl.value() / static_cast<double>(n);
    return est;
}

PanelResult dual_estimator_panel(const LevyModel& m, double nu, double p, double q,
                                 const std::vector<PanelEntry>& panel, const SimParams& sp,
                                 long n, const RngStream& rng, double c_value) {
    const std::size_t ne = panel.size();
    const std::size_t nn = static_cast<std::size_t>(n);
    const double c_t = psi(m, nu) + p - q;

    // lhs: one Z batch shared across entries
    auto lhs_rows = parallel_map<std::vector<double>>(nn, sp.workers, [&](std::size_t i) {
        TwoSidedPath z = build_z(m, nu, sp.dt, p, q, sp.horizon, rng.substream("dual.z", i));
        SplitResult s = supremum_split(z);
        std::vector<double> row(ne, 0.0);
        for (std::size_t e = 0; e < ne; ++e) {
            const Box& b = panel[e].box;
            if (s.sup_time >= b.t1 && s.sup_time <= b.t2 && s.sup_value >= b.x1 &&
                s.sup_value <= b.x2)
                row[e] = h_value(s.post_path, panel[e].h);
        }
        return row;
    });

    // rhs: one Y batch shared across entries
    const YParams yp = make_yparams(sp, p, q);
    struct RhsRow {
        std::vector<double> vals;
        double miss = 0.0;
    };
    auto rhs_rows = parallel_map<RhsRow>(nn, sp.workers, [&](std::size_t i) {
        TwoSidedPath y = sample_y(m, nu, yp, rng.substream("dual.y", i));
        RhsRow row;
        row.vals.assign(ne, 0.0);
        // available time cells: c >= 0 needs left.values[c+1], c < 0 right[-c]
        const long c_lo_avail = -(static_cast<long>(y.right.values.size()) - 1);
        const long c_hi_avail = static_cast<long>(y.left.values.size()) - 2;
        for (std::size_t e = 0; e < ne; ++e) {
            const Box& b = panel[e].box;
            // midpoint rule over the cells [c dt, (c+1) dt] inside [t1, t2];
            // the lhs boxes tile the same cells (T is reported mid-cell)
            long c1 = grid_ceil(b.t1 / sp.dt);
            long c2 = grid_floor(b.t2 / sp.dt) - 1;
            if (c2 < c1) continue;
            if (c1 < c_lo_avail || c2 > c_hi_avail) row.miss += 1.0;
            KahanSum s;
            long lo = std::max(c1, c_lo_avail);
            long hi = std::min(c2, c_hi_avail);
            for (long c = lo; c <= hi; ++c) {
                auto yv = y_at_cell_center(y, c);
                if (!yv) continue;
                double x = -*yv;
                if (x < b.x1 || x > b.x2) continue;
                s.add(std::exp(c_t * ((static_cast<double>(c) + 0.5) * sp.dt) + nu * *yv));
            }
            double integral = sp.dt * s.value();
            if (integral != 0.0) integral *= h_value(y.right, panel[e].h);
            row.vals[e] = integral;
        }
        return row;
    });

    // fixed-order reductions
    std::vector<std::vector<double>> lhs_cols(ne, std::vector<double>(nn));
    std::vector<std::vector<double>> rhs_cols(ne, std::vector<double>(nn));
    KahanSum miss;
    for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t e = 0; e < ne; ++e) {
            lhs_cols[e][i] = lhs_rows[i][e];
            rhs_cols[e][i] = rhs_rows[i].vals[e];
        }
        miss.add(rhs_rows[i].miss);
    }
    PanelResult out;
    out.entries.resize(ne);
    std::vector<double> lhs_means(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        MeanSe ls = mean_se(lhs_cols[e]);
        MeanSe rs = mean_se(rhs_cols[e]);
        McEstimate& L = out.entries[e].lhs;
        L.mean = ls.mean;
        L.std_error = ls.se;
        L.n = n;
        McEstimate& R = out.entries[e].rhs;
        R.mean = c_value * rs.mean;
        R.std_error = c_value * rs.se;
        R.n = n;
        R.diagnostics["c_value"] = c_value;
        R.diagnostics["support_misses"] = miss.value();
        lhs_means[e] = ls.mean;
    }
    out.lhs_mean_cov.assign(ne, std::vector<double>(ne, 0.0));
    for (std::size_t a = 0; a < ne; ++a) {
        for (std::size_t b = a; b < ne; ++b) {
            KahanSum s;
            for (std::size_t i = 0; i < nn; ++i)
                s.add((lhs_cols[a][i] - lhs_means[a]) * (lhs_cols[b][i] - lhs_means[b]));
            double cov_mean =
                s.value() / (static_cast<double>(nn - 1) * static_cast<double>(nn));
            out.lhs_mean_cov[a][b] = out.lhs_mean_cov[b][a] = cov_mean;
        }
    }
    return out;
}

DualResult dual_estimator(const LevyModel& m, double nu, double p, double q, const Box& box,
                          const HSpec& h, const SimParams& sp, long n, const RngStream& rng,
                          std::optional<double> c_override) {
    double c_value;
    if (c_override)
        c_value = *c_override;
    else if (p > 0.0 && q > 0.0)
        c_value = c_killed(m, nu, p, q);
    else
        c_value = c0(m, nu);
    PanelResult pr = dual_estimator_panel(m, nu, p, q, {{box, h}}, sp, n, rng, c_value);
    return pr.entries[0];
}

}  // namespace levymmm
