#pragma once

#include <optional>
#include <vector>

#include "levymmm/model.hpp"
#include "levymmm/rng.hpp"

namespace levymmm {

enum class CellRefine { none, sup, inf };

// Discretized sample path on the grid t0 + k*dt. For killed paths, `values`
// covers exactly the grid points strictly before the lifetime.
//
// When sampled with refinement, `cell_ext` holds the exact-in-law extremum of
// the continuous path over each grid cell [t_k, t_{k+1}] (Brownian bridge draw,
// with jump times splitting a cell into pure-Brownian segments). Killed paths
// carry one extra entry for the stub cell [t_{len-1}, lifetime).
struct GridPath {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;
    std::optional<double> lifetime;
    std::vector<double> cell_ext;
    CellRefine ext_kind = CellRefine::none;
    // Post-split paths anchored at a refined extremum: values[0] sits at the
    // (sub-cell) extremum time and values[k], k>=1, at (k - 1/2)*dt, the
    // centers of the grid cells following the argmax cell.
    bool ext_anchor = false;

    std::size_t size() const { return values.size(); }
};

GridPath negate(GridPath p);

GridPath sample_path(const LevyModel& m, double t_end, double dt, RngStream& rng,
                     CellRefine refine = CellRefine::none);

// Lifetime ~ Exp(rate), independent of the increments; at least the point t=0.
GridPath sample_killed_path(const LevyModel& m, double rate, double dt, RngStream& rng,
                            CellRefine refine = CellRefine::none);

// Two-sided process: left.values[k] is the process at time -k*dt. Both sides
// are anchored at 0.
struct TwoSidedPath {
    GridPath left;
    GridPath right;
};

struct SplitResult {
    double sup_value = 0.0;
    double sup_time = 0.0;   // first time attaining the supremum
    GridPath post_path;      // extremum-shifted post-extremum path, values <= 0, starts at 0
    GridPath pre_path;       // path up to the extremum, shifted, ends at 0
};

// Z(t) = X(t) for t>=0, -X^nu((-t)-) for t<0. Either p=q=0 (Corollary regime,
// requires psi(nu)=0, nu>0, finite truncation `horizon` per side) or p,q>0
// (killed regime, horizon ignored). The two sides use independent substreams.
TwoSidedPath build_z(const LevyModel& m, double nu, double dt, double p, double q,
                     double horizon, const RngStream& rng);

// Unkilled Z with separate horizons per side (particle systems need asymmetric
// windows).
TwoSidedPath build_z_window(const LevyModel& m, double nu, double dt, double horizon_left,
                            double horizon_right, const RngStream& rng);

SplitResult supremum_split(const TwoSidedPath& z);

SplitResult split_at_supremum(const GridPath& p);
// Mirrored conventions: sup_value holds the infimum, post values >= 0.
SplitResult split_at_infimum(const GridPath& p);

struct YParams {
    double dt = 0.01;
    double p = 0.0;
    double q = 0.0;
    double window = 5.0;     // required post-extremum coverage (unkilled regime)
    double margin = 10.0;    // required depth of the end value beyond the extremum
    double horizon0 = 40.0;  // initial adaptive horizon
    int doubling_cap = 6;
};

// Y(t) = X^down(t) for t>=0 and -(X^nu)^up((-t)-) for t<0: post-supremum path of
// X glued to the post-infimum path of X^nu. In the unkilled regime a horizon is
// accepted only if the extremum occurred at least `window` before the end and
// the end value is `margin` beyond the extremum; otherwise the horizon doubles
// and the SAME path is extended on its stream. Extending (rather than
// resampling) keeps the path law exact: the accept test only decides when to
// stop growing a single trajectory.
TwoSidedPath sample_y(const LevyModel& m, double nu, const YParams& yp, const RngStream& rng,
                      int* doublings = nullptr);

// Forward-fill lookup: value at the last grid time <= t (cadlag skeleton).
// nullopt outside the simulated support.
std::optional<double> path_value_at(const TwoSidedPath& p, double t);

}  // namespace levymmm
