//! Low-dispersion point sets in the unit cube and on the torus.
//!
//! The crate builds small point sets whose largest empty axis-parallel box
//! has volume at most a target `eps`, going through an explicit family of
//! grid boxes (a net): any box of volume `eps` contains a net element of
//! volume at least `delta`, so piercing every net element pierces every
//! large box. Construction is randomized in two phases (bulk sampling,
//! then greedy repair of the surviving elements) with a certified size
//! bound, or purely random as a baseline.
//!
//! Exact dispersion of small sets, a grid-restricted oracle, closed-form
//! bounds from the literature, and a command-line front end round out the
//! crate. All randomized paths are seed-deterministic, including under the
//! thread pool configured via `DISPERSE_THREADS`.

pub mod bounds;
pub mod construct;
pub mod dispersion;
pub mod error;
pub mod geometry;
pub mod io;
pub mod nets;

pub use bounds::{
    best_known_upper, bound_table, canonical_params, delta_for_gamma,
    inverse_dispersion_upper_cube, inverse_dispersion_upper_torus, min_dispersion_upper,
    piecewise_thresholds, random_piercing_bound, reference_net_cardinality,
    two_phase_piercing_bound, BoundConstants, BoundSide, BoundValue, CanonicalParams,
    PiecewiseBound, PiecewiseBranch, TableEntry,
};
pub use construct::{
    certificate_net, phase1_size, random_only, report_json, sample_uniform, two_phase,
    unpierced, ConstructionReport,
};
pub use dispersion::{
    estimate_dispersion, grid_oracle, largest_empty_box, largest_empty_box_capped,
    largest_empty_torus_box, largest_empty_torus_box_capped, DispersionResult, ExactCaps,
    Witness,
};
pub use error::{Error, Result};
pub use geometry::{BoxFamily, CubeBox, Point, PointSet, TorusArc, TorusBox};
pub use io::{format_points, parse_points, read_points, write_points};
pub use nets::{
    build_net, build_net_capped, grid_resolution, verify_net, Net, NetParams, VerifyReport,
    DEFAULT_NET_CAP,
};

use std::sync::Once;

static THREAD_INIT: Once = Once::new();

/// Sizes the global worker pool from the `DISPERSE_THREADS` environment
/// variable (unset or invalid: library default). Call before first use of
/// any parallel path; later calls are no-ops. Results are identical for
/// every pool size, only timing changes.
pub fn init_threads() {
    THREAD_INIT.call_once(|| {
        if let Ok(v) = std::env::var("DISPERSE_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    // ignore failure: a pool may already exist, which is fine
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    });
}
