#include "levymmm/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levymmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sample_jump(const JumpSpec& jumps, RngStream& rng) {
    struct V {
        RngStream& rng;
        double operator()(const NoJumps&) const { return 0.0; }
        double operator()(const GaussianJumps& g) const {
            return g.mean + std::sqrt(g.var) * rng.normal();
        }
        double operator()(const DoubleExpJumps& d) const {
            return rng.uniform() < d.p_up ? rng.exponential(d.eta_up)
                                          : -rng.exponential(d.eta_down);
        }
        double operator()(const OneSidedExpJumps& o) const {
            double e = rng.exponential(o.decay);
            return o.sign == JumpSign::positive ? e : -e;
        }
    };
    return std::visit(V{rng}, jumps);
}

// Supremum of a Brownian bridge from a to b over an interval with total
// variance s2t, inverse-CDF sampled from u in (0,1). s2t = 0 degrades to
// max(a, b).
double bridge_sup(double a, double b, double s2t, double u) {
    double d = b - a;
    return 0.5 * ((a + b) + std::sqrt(d * d - 2.0 * s2t * std::log(u)));
}

double bridge_inf(double a, double b, double s2t, double u) {
    double d = b - a;
    return 0.5 * ((a + b) - std::sqrt(d * d - 2.0 * s2t * std::log(u)));
}

// One grid cell of length tau starting from `v`: returns the end value and, if
// refining, the exact-in-law extremum of the cell. Jump times split the cell
// into pure-Brownian segments so the bridge draws stay exact.
void advance_cell(const LevyModel& m, double v, double tau, RngStream& rng, CellRefine refine,
                  double& end, double& ext) {
    const double lambda = jump_rate(m.jumps);
    if (refine == CellRefine::none) {
        double w = v + m.drift_a * tau + std::sqrt(m.sigma2 * tau) * rng.normal();
        std::uint64_t n = lambda > 0.0 ? rng.poisson(lambda * tau) : 0;
        for (std::uint64_t i = 0; i < n; ++i) w += sample_jump(m.jumps, rng);
        end = w;
        return;
    }
    const bool want_sup = refine == CellRefine::sup;
    std::uint64_t n = lambda > 0.0 ? rng.poisson(lambda * tau) : 0;
    if (n == 0) {
        double w = v + m.drift_a * tau + std::sqrt(m.sigma2 * tau) * rng.normal();
        ext = want_sup ? bridge_sup(v, w, m.sigma2 * tau, rng.uniform())
                       : bridge_inf(v, w, m.sigma2 * tau, rng.uniform());
        end = w;
        return;
    }
    std::vector<double> times(n);
    for (auto& t : times) t = tau * rng.uniform();
    std::sort(times.begin(), times.end());
    double cur = v;
    double best = want_sup ? -kInf : kInf;
    double prev = 0.0;
    auto segment = [&](double len) {
        double w = cur + m.drift_a * len + std::sqrt(m.sigma2 * len) * rng.normal();
        double e = want_sup ? bridge_sup(cur, w, m.sigma2 * len, rng.uniform())
                            : bridge_inf(cur, w, m.sigma2 * len, rng.uniform());
        best = want_sup ? std::max(best, e) : std::min(best, e);
        cur = w;
    };
    for (std::uint64_t i = 0; i < n; ++i) {
        segment(times[i] - prev);
        prev = times[i];
        cur += sample_jump(m.jumps, rng);
        best = want_sup ? std::max(best, cur) : std::min(best, cur);
    }
    segment(tau - prev);
    end = cur;
    ext = best;
}

bool side_refined(const GridPath& p) {
    std::size_t expected = (p.size() > 0 ? p.size() - 1 : 0) + (p.lifetime ? 1 : 0);
    return p.cell_ext.size() == expected;
}

long grid_index_floor(double r) {
    long k = std::lround(r);
    if (std::fabs(r - static_cast<double>(k)) < 1e-6) return k;
    return static_cast<long>(std::floor(r));
}

long grid_index_ceil(double r) {
    long k = std::lround(r);
    if (std::fabs(r - static_cast<double>(k)) < 1e-6) return k;
    return static_cast<long>(std::ceil(r));
}

}  // namespace

GridPath negate(GridPath p) {
    for (auto& v : p.values) v = -v;
    for (auto& e : p.cell_ext) e = -e;
    if (p.ext_kind == CellRefine::sup)
        p.ext_kind = CellRefine::inf;
    else if (p.ext_kind == CellRefine::inf)
        p.ext_kind = CellRefine::sup;
    return p;
}

namespace {

// Grows an unkilled path in place until it covers [0, t_end], consuming the
// stream sequentially so extension never disturbs already-drawn cells.
void extend_path(const LevyModel& m, GridPath& p, double t_end, RngStream& rng,
                 CellRefine refine) {
    auto steps = static_cast<std::size_t>(std::floor(t_end / p.dt + 1e-9));
    while (p.values.size() < steps + 1) {
        double end = 0.0, ext = 0.0;
        advance_cell(m, p.values.back(), p.dt, rng, refine, end, ext);
        p.values.push_back(end);
        if (refine != CellRefine::none) p.cell_ext.push_back(ext);
    }
}

}  // namespace

GridPath sample_path(const LevyModel& m, double t_end, double dt, RngStream& rng,
                     CellRefine refine) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (t_end < 0.0) throw std::invalid_argument("t_end must be non-negative");
    GridPath p;
    p.dt = dt;
    p.ext_kind = refine;
    p.values.push_back(0.0);
    extend_path(m, p, t_end, rng, refine);
    return p;
}

GridPath sample_killed_path(const LevyModel& m, double rate, double dt, RngStream& rng,
                            CellRefine refine) {
    if (!(rate > 0.0)) throw std::invalid_argument("killing rate must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    GridPath p;
    p.dt = dt;
    p.ext_kind = refine;
    const double zeta = rng.exponential(rate);
    p.lifetime = zeta;
    auto len = static_cast<std::size_t>(std::ceil(zeta / dt));
    if (len == 0) len = 1;
    p.values.reserve(len);
    p.values.push_back(0.0);
    if (refine != CellRefine::none) p.cell_ext.reserve(len);
    for (std::size_t k = 0; k + 1 < len; ++k) {
        double end = 0.0, ext = 0.0;
        advance_cell(m, p.values.back(), dt, rng, refine, end, ext);
        p.values.push_back(end);
        if (refine != CellRefine::none) p.cell_ext.push_back(ext);
    }
    if (refine != CellRefine::none) {
        // stub cell [t_{len-1}, zeta): extremum kept, end value discarded
        double tau = zeta - static_cast<double>(len - 1) * dt;
        double end = 0.0, ext = 0.0;
        advance_cell(m, p.values.back(), tau, rng, refine, end, ext);
        p.cell_ext.push_back(ext);
    }
    return p;
}

TwoSidedPath build_z_window(const LevyModel& m, double nu, double dt, double horizon_left,
                            double horizon_right, const RngStream& rng) {
    if (!(nu > 0.0) || std::fabs(psi(m, nu)) > 1e-8)
        throw std::invalid_argument("unkilled Z requires the Corollary regime psi(nu)=0, nu>0");
    LevyModel tilted = esscher_tilt(m, nu);
    TwoSidedPath z;
    auto rr = rng.substream("z.right", 0);
    z.right = sample_path(m, horizon_right, dt, rr, CellRefine::sup);
    auto rl = rng.substream("z.left", 0);
    z.left = negate(sample_path(tilted, horizon_left, dt, rl, CellRefine::inf));
    return z;
}

TwoSidedPath build_z(const LevyModel& m, double nu, double dt, double p, double q,
                     double horizon, const RngStream& rng) {
    if ((p > 0.0) != (q > 0.0))
        throw std::invalid_argument("killing rates p and q must be both zero or both positive");
    if (p == 0.0) return build_z_window(m, nu, dt, horizon, horizon, rng);
    LevyModel tilted = esscher_tilt(m, nu);
    TwoSidedPath z;
    auto rr = rng.substream("z.right", 0);
    z.right = sample_killed_path(m, q, dt, rr, CellRefine::sup);
    auto rl = rng.substream("z.left", 0);
    z.left = negate(sample_killed_path(tilted, p, dt, rl, CellRefine::inf));
    return z;
}

namespace {

// Location of the argmax on the merged two-sided timeline.
struct ArgmaxLoc {
    bool on_left = false;
    std::size_t index = 0;  // grid point index (unrefined) or cell index (refined)
    bool refined = false;
    double time = 0.0;
    double value = 0.0;
};

SplitResult assemble(const TwoSidedPath& z, const ArgmaxLoc& loc) {
    const GridPath& l = z.left;
    const GridPath& r = z.right;
    const double dt = r.dt;
    const double zbar = loc.value;
    SplitResult out;
    out.sup_value = zbar;
    out.sup_time = loc.time;

    auto& post = out.post_path;
    post.dt = dt;
    post.t0 = 0.0;
    const bool carry_ext = loc.refined;
    if (carry_ext) {
        post.ext_kind = CellRefine::sup;
        post.ext_anchor = true;
    }

    // First grid point strictly after the extremum. Unrefined: the attaining
    // point itself (value - zbar = 0). Refined: the 0 anchor is prepended and
    // the grid continues after the argmax cell.
    if (loc.refined) {
        post.values.push_back(0.0);
        post.cell_ext.push_back(0.0);
        if (loc.on_left) {
            // cells strictly after the argmax cell have smaller left indices
            for (std::size_t j = loc.index; j >= 1; --j) {
                post.values.push_back(l.values[j] - zbar);
                post.cell_ext.push_back(l.cell_ext[j - 1] - zbar);
            }
            for (std::size_t j = 0; j < r.values.size(); ++j) {
                post.values.push_back(r.values[j] - zbar);
            }
            for (double e : r.cell_ext) post.cell_ext.push_back(e - zbar);
        } else {
            for (std::size_t j = loc.index + 1; j < r.values.size(); ++j)
                post.values.push_back(r.values[j] - zbar);
            for (std::size_t j = loc.index + 1; j < r.cell_ext.size(); ++j)
                post.cell_ext.push_back(r.cell_ext[j] - zbar);
        }
    } else {
        if (loc.on_left) {
            for (std::size_t j = loc.index;; --j) {
                post.values.push_back(l.values[j] - zbar);
                if (j == 1) break;
            }
            for (std::size_t j = 0; j < r.values.size(); ++j)
                post.values.push_back(r.values[j] - zbar);
        } else {
            for (std::size_t j = loc.index; j < r.values.size(); ++j)
                post.values.push_back(r.values[j] - zbar);
        }
    }
    if (r.lifetime) post.lifetime = *r.lifetime - loc.time;

    auto& pre = out.pre_path;
    pre.dt = dt;
    const std::size_t ml = l.values.size();
    if (loc.on_left) {
        // grid points at times <= T: left indices ml-1 .. stop, where the
        // refined argmax cell [-(index+1)dt, -index dt] starts at index+1 and
        // the unrefined attaining point is the index itself
        std::size_t stop = loc.refined ? loc.index + 1 : loc.index;
        for (std::size_t j = ml; j >= 2; --j) {
            if (j - 1 < stop) break;
            pre.values.push_back(l.values[j - 1] - zbar);
        }
    } else {
        for (std::size_t j = ml; j >= 2; --j) pre.values.push_back(l.values[j - 1] - zbar);
        for (std::size_t j = 0; j <= loc.index && j < r.values.size(); ++j)
            pre.values.push_back(r.values[j] - zbar);
    }
    if (loc.refined) pre.values.push_back(0.0);  // the extremum itself
    pre.t0 = -static_cast<double>(pre.values.empty() ? 0 : pre.values.size() - 1) * dt;
    return out;
}

}  // namespace

SplitResult supremum_split(const TwoSidedPath& z) {
    const GridPath& l = z.left;
    const GridPath& r = z.right;
    if (r.values.empty() || l.values.empty())
        throw std::invalid_argument("supremum_split needs non-empty sides");
    const double dt = r.dt;
    const bool refined = side_refined(l) && side_refined(r) &&
                         (l.cell_ext.empty() || l.ext_kind == CellRefine::sup) &&
                         (r.cell_ext.empty() || r.ext_kind == CellRefine::sup);
    ArgmaxLoc loc;
    loc.refined = refined;
    double best = -kInf;
    if (refined) {
        const std::size_t cl = l.cell_ext.size();
        // left cells in increasing time: cell j covers [-(j+1)dt, -j dt]
        // (stub cell j = ml-1 covers (-lifetime, -(ml-1)dt])
        for (std::size_t jj = cl; jj >= 1; --jj) {
            std::size_t j = jj - 1;
            if (l.cell_ext[j] > best) {
                best = l.cell_ext[j];
                double lo = (l.lifetime && j + 1 == cl && j + 1 == l.values.size())
                                ? -*l.lifetime
                                : -static_cast<double>(j + 1) * dt;
                double hi = -static_cast<double>(j) * dt;
                loc = ArgmaxLoc{true, j, true, 0.5 * (lo + hi), best};
            }
        }
        const std::size_t cr = r.cell_ext.size();
        for (std::size_t j = 0; j < cr; ++j) {
            if (r.cell_ext[j] > best) {
                best = r.cell_ext[j];
                double lo = static_cast<double>(j) * dt;
                double hi = (r.lifetime && j + 1 == cr && j + 1 == r.values.size())
                                ? *r.lifetime
                                : static_cast<double>(j + 1) * dt;
                loc = ArgmaxLoc{false, j, true, 0.5 * (lo + hi), best};
            }
        }
    } else {
        for (std::size_t jj = l.values.size(); jj >= 2; --jj) {
            std::size_t j = jj - 1;
            if (l.values[j] > best) {
                best = l.values[j];
                loc = ArgmaxLoc{true, j, false, -static_cast<double>(j) * dt, best};
            }
        }
        for (std::size_t j = 0; j < r.values.size(); ++j) {
            if (r.values[j] > best) {
                best = r.values[j];
                loc = ArgmaxLoc{false, j, false, static_cast<double>(j) * dt, best};
            }
        }
    }
    return assemble(z, loc);
}

SplitResult split_at_supremum(const GridPath& p) {
    TwoSidedPath z;
    z.left.dt = p.dt;
    z.left.values = {0.0};
    z.right = p;
    return supremum_split(z);
}

SplitResult split_at_infimum(const GridPath& p) {
    SplitResult s = split_at_supremum(negate(p));
    SplitResult out;
    out.sup_value = -s.sup_value;
    out.sup_time = s.sup_time;
    out.post_path = negate(std::move(s.post_path));
    out.pre_path = negate(std::move(s.pre_path));
    return out;
}

TwoSidedPath sample_y(const LevyModel& m, double nu, const YParams& yp, const RngStream& rng,
                      int* doublings) {
    if ((yp.p > 0.0) != (yp.q > 0.0))
        throw std::invalid_argument("killing rates p and q must be both zero or both positive");
    const bool killed = yp.q > 0.0;
    if (!killed && (!(nu > 0.0) || std::fabs(psi(m, nu)) > 1e-8))
        throw std::invalid_argument("unkilled Y requires the Corollary regime psi(nu)=0, nu>0");
    LevyModel tilted = esscher_tilt(m, nu);
    int total_doublings = 0;

    auto adaptive = [&](const LevyModel& mod, const char* label, bool at_sup) -> GridPath {
        if (killed) {
            auto rs = rng.substream(label, 0);
            GridPath path = sample_killed_path(mod, at_sup ? yp.q : yp.p, yp.dt, rs,
                                               at_sup ? CellRefine::sup : CellRefine::inf);
            return at_sup ? split_at_supremum(path).post_path
                          : split_at_infimum(path).post_path;
        }
        const CellRefine refine = at_sup ? CellRefine::sup : CellRefine::inf;
        auto rs = rng.substream(label, 0);
        GridPath path;
        path.dt = yp.dt;
        path.ext_kind = refine;
        path.values.push_back(0.0);
        double horizon = yp.horizon0;
        for (int attempt = 0; attempt <= yp.doubling_cap; ++attempt) {
            extend_path(mod, path, horizon, rs, refine);
            SplitResult s = at_sup ? split_at_supremum(path) : split_at_infimum(path);
            double end = path.values.back();
            bool deep = at_sup ? end <= s.sup_value - yp.margin : end >= s.sup_value + yp.margin;
            if (s.sup_time <= horizon - yp.window && deep) {
                total_doublings += attempt;
                return s.post_path;
            }
            horizon *= 2.0;
        }
        throw HorizonExhausted("adaptive horizon cap reached while sampling Y");
    };

    TwoSidedPath y;
    y.right = adaptive(m, "y.right", true);
    y.left = negate(adaptive(tilted, "y.left", false));
    if (doublings) *doublings = total_doublings;
    return y;
}

std::optional<double> path_value_at(const TwoSidedPath& p, double t) {
    if (t >= 0.0) {
        // anchored paths hold values at cell centers (k - 1/2) dt; plain paths
        // at grid points, filled forward
        long k = p.right.ext_anchor && t > 0.0
                     ? static_cast<long>(std::floor(t / p.right.dt + 1e-9)) + 1
                     : grid_index_floor(t / p.right.dt);
        if (k < 0) k = 0;
        if (static_cast<std::size_t>(k) >= p.right.values.size()) return std::nullopt;
        return p.right.values[static_cast<std::size_t>(k)];
    }
    long k = p.left.ext_anchor
                 ? static_cast<long>(std::floor(-t / p.left.dt + 1e-9)) + 1
                 : grid_index_ceil(-t / p.left.dt);
    if (k < 0) k = 0;
    if (static_cast<std::size_t>(k) >= p.left.values.size()) return std::nullopt;
    return p.left.values[static_cast<std::size_t>(k)];
}

}  // namespace levymmm
