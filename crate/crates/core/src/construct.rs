//! Piercing-set constructions.
//!
//! Both constructions produce a point set that meets every element of an
//! approximation net, which caps the dispersion of the output by the net's
//! `eps`. The pure random baseline draws `floor(3 ln|N| / delta)` points and
//! retries until everything is pierced. The two-phase construction draws the
//! much smaller `ceil(ln(delta |N|) / delta)` random points, then repairs
//! the missed elements deterministically with one greedy point each; when
//! the random phase performs no worse than its expectation, the combined
//! size is certified to be at most `ln(4 delta |N|)/delta`.
//!
//! All randomness flows from a single root seed; attempt sub-seeds are
//! derived by a fixed mixing rule, so results are reproducible regardless of
//! retry count or parallelism.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoxFamily, CubeBox, Point, PointSet, TorusBox};
use crate::nets::{build_net_capped, Net, NetParams};

/// Audit record of one construction run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionReport {
    /// `"two-phase"` or `"random-only"`.
    pub method: String,
    /// Root RNG seed.
    pub seed: u64,
    /// Random-phase draw count (`M`).
    pub m: u64,
    /// Net cardinality the run pierced against.
    pub net_size: usize,
    /// Net elements left unpierced by the random phase (best attempt).
    pub bad_count: usize,
    /// Repair points added by greedy piercing.
    pub repair_count: usize,
    /// Final distinct point count.
    pub total: usize,
    /// Extra attempts beyond the first.
    pub retries: u32,
    /// Whether the size certificate applies (two-phase: realized bad count
    /// within the expectation bound; random-only: full piercing achieved).
    pub accepted: bool,
    /// Certified size bound: `ln(4 delta |N|)/delta` for two-phase,
    /// `3 ln|N|/delta` for random-only.
    pub bound: f64,
}

/// Report JSON as emitted by the CLI: the report fields plus the net
/// parameters, under a versioned schema.
pub fn report_json(report: &ConstructionReport, net: &Net) -> serde_json::Value {
    serde_json::json!({
        "schema": 1,
        "method": report.method,
        "seed": report.seed,
        "m": report.m,
        "net_size": report.net_size,
        "bad_count": report.bad_count,
        "repair_count": report.repair_count,
        "total": report.total,
        "retries": report.retries,
        "accepted": report.accepted,
        "bound": report.bound,
        "net": {
            "dim": net.dim(),
            "eps": net.eps(),
            "delta": net.delta(),
            "grid_m": net.grid_m(),
            "kind": net.kind().as_str(),
            "size": net.len(),
        },
    })
}

/// `n` independent uniform points in `[0,1)^d`, deterministic in the seed.
pub fn sample_uniform(n: u64, dim: usize, seed: u64) -> PointSet {
    assert!(dim >= 1, "dimension must be >= 1");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let coords = (0..dim).map(|_| rng.gen::<f64>()).collect();
        points.push(Point::new(coords));
    }
    PointSet::new(dim, points)
}

/// Random-phase size `M = ceil(ln(delta * net_size) / delta)`.
///
/// Requires `delta * net_size >= e`; below that the logarithm is too small
/// for the size certificate to close.
pub fn phase1_size(delta: f64, net_size: usize) -> Result<u64> {
    let product = delta * net_size as f64;
    if !(delta > 0.0) || product < std::f64::consts::E {
        return Err(Error::TwoPhaseHypothesis {
            delta,
            net_size,
            product,
        });
    }
    Ok((product.ln() / delta).ceil() as u64)
}

/// Derives the sub-seed for one attempt from the root seed by a fixed
/// splitmix-style mixing of the attempt index.
fn attempt_seed(root: u64, attempt: u32) -> u64 {
    let mut z = root.wrapping_add((attempt as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Indices of net elements containing no point of `ps`, in ascending order.
/// Parallelized; identical to the sequential scan.
pub fn unpierced(net: &Net, ps: &PointSet) -> Vec<usize> {
    (0..net.len())
        .into_par_iter()
        .filter(|&i| !ps.iter().any(|p| net.element_contains(i, p)))
        .collect()
}

fn fully_pierced(net: &Net, ps: &PointSet) -> bool {
    (0..net.len())
        .into_par_iter()
        .all(|i| ps.iter().any(|p| net.element_contains(i, p)))
}

trait Pierceable {
    fn center(&self) -> Point;
    fn has(&self, p: &Point) -> bool;
}

impl Pierceable for CubeBox {
    fn center(&self) -> Point {
        let coords = (0..self.dim())
            .map(|i| self.lo()[i] + (self.hi()[i] - self.lo()[i]) / 2.0)
            .collect();
        Point::new(coords)
    }

    fn has(&self, p: &Point) -> bool {
        self.contains(p)
    }
}

impl Pierceable for TorusBox {
    fn center(&self) -> Point {
        let coords = self
            .arcs()
            .iter()
            .map(|a| (a.a() + a.length() / 2.0).rem_euclid(1.0))
            .collect();
        Point::new(coords)
    }

    fn has(&self, p: &Point) -> bool {
        self.contains(p)
    }
}

fn greedy_pierce_impl<B: Pierceable>(dim: usize, boxes: &[B]) -> PointSet {
    let centers: Vec<Point> = boxes.iter().map(|b| b.center()).collect();
    let mut covered = vec![false; boxes.len()];
    let mut remaining = boxes.len();
    let mut out = Vec::new();
    while remaining > 0 {
        let mut best_i = usize::MAX;
        let mut best_cov = 0usize;
        for (i, c) in centers.iter().enumerate() {
            let cov = boxes
                .iter()
                .zip(&covered)
                .filter(|(b, &done)| !done && b.has(c))
                .count();
            if cov > best_cov {
                best_cov = cov;
                best_i = i;
            }
        }
        // every uncovered box contains its own center, so progress is sure
        assert!(best_cov >= 1);
        let c = centers[best_i].clone();
        for (b, done) in boxes.iter().zip(covered.iter_mut()) {
            if !*done && b.has(&c) {
                *done = true;
                remaining -= 1;
            }
        }
        out.push(c);
    }
    PointSet::new(dim, out)
}

/// Greedy piercing of cube boxes by their centers: repeatedly takes the
/// center covering the most remaining boxes (lowest index on ties). Output
/// size never exceeds the input size.
pub fn greedy_pierce(dim: usize, boxes: &[CubeBox]) -> PointSet {
    greedy_pierce_impl(dim, boxes)
}

/// Torus variant of [`greedy_pierce`]; candidates are arc midpoints.
pub fn greedy_pierce_torus(dim: usize, boxes: &[TorusBox]) -> PointSet {
    greedy_pierce_impl(dim, boxes)
}

fn dedup_points(dim: usize, points: Vec<Point>) -> PointSet {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    PointSet::new(dim, out)
}

/// Two-phase construction: random phase of [`phase1_size`] points, retried
/// until the realized miss count meets the expectation bound
/// `|N| (1-delta)^M` (keeping the best attempt), then greedy repair of the
/// missed elements.
///
/// Accepted runs certify `|P| <= ln(4 delta |N|)/delta`; unaccepted runs
/// still return a complete piercing, only the size certificate is withheld.
pub fn two_phase(net: &Net, seed: u64, max_retries: u32) -> Result<(PointSet, ConstructionReport)> {
    let delta = net.delta();
    let n = net.len();
    if delta > 1.0 / 3.0 {
        return Err(Error::InvalidParams(format!(
            "two-phase certificate needs delta <= 1/3, got {delta}"
        )));
    }
    if max_retries < 1 {
        return Err(Error::InvalidParams("max_retries must be >= 1".into()));
    }
    let m = phase1_size(delta, n)?;
    let dim = net.dim();
    let threshold = n as f64 * (1.0 - delta).powi(m as i32);

    let mut best: Option<(PointSet, Vec<usize>)> = None;
    let mut attempts = 0u32;
    for attempt in 0..max_retries {
        attempts = attempt + 1;
        let q = sample_uniform(m, dim, attempt_seed(seed, attempt));
        let bad = unpierced(net, &q);
        let improved = match &best {
            None => true,
            Some((_, prev)) => bad.len() < prev.len(),
        };
        if improved {
            let done = bad.len() as f64 <= threshold;
            best = Some((q, bad));
            if done {
                break;
            }
        }
    }
    let (q, bad) = best.unwrap();
    let accepted = bad.len() as f64 <= threshold;

    let repair = match net.kind() {
        BoxFamily::Cube => {
            let boxes: Vec<CubeBox> = bad.iter().map(|&i| net.element_box(i)).collect();
            greedy_pierce(dim, &boxes)
        }
        BoxFamily::Torus => {
            let boxes: Vec<TorusBox> = bad.iter().map(|&i| net.element_torus(i)).collect();
            greedy_pierce_torus(dim, &boxes)
        }
    };
    let repair_count = repair.len();
    let mut all = q.points().to_vec();
    all.extend(repair.points().iter().cloned());
    let points = dedup_points(dim, all);

    assert!(fully_pierced(net, &points), "piercing soundness violated");
    let bound = (4.0 * delta * n as f64).ln() / delta;
    if accepted {
        let tight = (1.0 + delta + (delta * n as f64).ln()) / delta;
        assert!(
            points.len() as f64 <= tight + 1e-9,
            "accepted run exceeds size certificate: {} > {tight}",
            points.len()
        );
        assert!(points.len() as f64 <= bound + 1e-9);
    }

    let report = ConstructionReport {
        method: "two-phase".into(),
        seed,
        m,
        net_size: n,
        bad_count: bad.len(),
        repair_count,
        total: points.len(),
        retries: attempts - 1,
        accepted,
        bound,
    };
    Ok((points, report))
}

/// Pure-random baseline: draws `M = floor(3 ln|N| / delta)` points and
/// retries until every net element is pierced. Requires `|N| >= 3`; each
/// attempt succeeds with probability at least `1 - 1/|N|`.
pub fn random_only(
    net: &Net,
    seed: u64,
    max_retries: u32,
) -> Result<(PointSet, ConstructionReport)> {
    let n = net.len();
    if n < 3 {
        return Err(Error::RandomOnlyHypothesis { net_size: n });
    }
    if max_retries < 1 {
        return Err(Error::InvalidParams("max_retries must be >= 1".into()));
    }
    let delta = net.delta();
    let bound = 3.0 * (n as f64).ln() / delta;
    let m = bound.floor() as u64;
    let dim = net.dim();

    let mut best: Option<(PointSet, usize)> = None;
    let mut attempts = 0u32;
    for attempt in 0..max_retries {
        attempts = attempt + 1;
        let q = sample_uniform(m, dim, attempt_seed(seed, attempt));
        let bad = unpierced(net, &q).len();
        let improved = match &best {
            None => true,
            Some((_, prev)) => bad < *prev,
        };
        if improved {
            best = Some((q, bad));
            if bad == 0 {
                break;
            }
        }
    }
    let (points, bad) = best.unwrap();
    let accepted = bad == 0;
    if accepted {
        assert!(fully_pierced(net, &points));
    }
    let report = ConstructionReport {
        method: "random-only".into(),
        seed,
        m,
        net_size: n,
        bad_count: bad,
        repair_count: 0,
        total: points.distinct_len(),
        retries: attempts - 1,
        accepted,
        bound,
    };
    Ok((points, report))
}

/// Builds the net a construction run pierces against: resolves the smallest
/// admissible grid for `(eps, delta)`, then refines it until
/// `delta * |net| >= e` so the two-phase size formula is defined. The same
/// net serves both constructions.
pub fn certificate_net(
    dim: usize,
    eps: f64,
    delta: Option<f64>,
    kind: BoxFamily,
    cap: u64,
) -> Result<Net> {
    let delta = delta.unwrap_or(eps / (4.0 * std::f64::consts::E));
    let mut params = NetParams::resolve(dim, eps, delta)?;
    loop {
        let net = build_net_capped(&params, kind, cap)?;
        if delta * net.len() as f64 >= std::f64::consts::E {
            return Ok(net);
        }
        params = NetParams::new(dim, eps, delta, params.grid_m() + 1)?;
    }
}
