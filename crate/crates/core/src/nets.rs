//! Finite approximation nets for large boxes, built on a uniform grid.
//!
//! A net for parameters `(eps, delta)` is a finite family of boxes such that
//! every box of volume at least `eps` contains a member of volume at least
//! `delta`. We realize this with boxes whose endpoints lie on the grid
//! `{j/m : 0 <= j <= m}`: rounding a large box inward to the grid shrinks
//! each side by at most `2/m`, so choosing `m` with
//!
//! ```text
//! eps * (1 - 2/(m*eps))^d >= delta
//! ```
//!
//! makes the rounded image a witness. The property is therefore
//! self-certifying, and [`verify_net`] additionally fuzzes it with random
//! boxes.
//!
//! Elements are stored as flat grid indices and enumerated in lexicographic
//! order, so identical parameters always produce byte-identical nets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::geometry::{stable_product, BoxFamily, CubeBox, Point, TorusArc, TorusBox};

/// Default refusal threshold for predicted net cardinality.
pub const DEFAULT_NET_CAP: u64 = 100_000_000;

/// Snap tolerance (in grid steps) and relative slack for volume thresholds.
/// Far above f64 rounding noise, far below any grid quantity.
const GRID_EPS: f64 = 1e-9;

/// Validated parameters of a grid net.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetParams {
    dim: usize,
    eps: f64,
    delta: f64,
    grid_m: u32,
}

fn check_ranges(dim: usize, eps: f64, delta: f64) -> Result<()> {
    if dim < 1 {
        return Err(Error::InvalidParams("dimension must be >= 1".into()));
    }
    if !eps.is_finite() || !delta.is_finite() {
        return Err(Error::InvalidParams("eps and delta must be finite".into()));
    }
    if !(delta > 0.0 && delta <= eps && eps <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "need 0 < delta <= eps <= 1, got delta={delta}, eps={eps}"
        )));
    }
    Ok(())
}

fn min_grid(eps: f64) -> u32 {
    (2.0 / eps).ceil() as u32 + 1
}

fn shrink_holds(dim: usize, eps: f64, delta: f64, m: u32) -> bool {
    m >= min_grid(eps) && eps * (1.0 - 2.0 / (m as f64 * eps)).powi(dim as i32) >= delta
}

impl NetParams {
    /// Validates the guarantee inequality along with basic ranges.
    pub fn new(dim: usize, eps: f64, delta: f64, grid_m: u32) -> Result<Self> {
        check_ranges(dim, eps, delta)?;
        if grid_m < min_grid(eps) {
            return Err(Error::InvalidParams(format!(
                "grid_m={grid_m} below minimum {} for eps={eps}",
                min_grid(eps)
            )));
        }
        if grid_m > u16::MAX as u32 {
            return Err(Error::InvalidParams(format!(
                "grid_m={grid_m} exceeds supported resolution {}",
                u16::MAX
            )));
        }
        if !shrink_holds(dim, eps, delta, grid_m) {
            return Err(Error::InvalidParams(format!(
                "guarantee inequality fails: eps*(1-2/(m*eps))^d < delta \
                 for m={grid_m}, eps={eps}, delta={delta}, d={dim}"
            )));
        }
        Ok(NetParams {
            dim,
            eps,
            delta,
            grid_m,
        })
    }

    /// Picks the smallest admissible grid via [`grid_resolution`].
    pub fn resolve(dim: usize, eps: f64, delta: f64) -> Result<Self> {
        let m = grid_resolution(dim, eps, delta)?;
        Self::new(dim, eps, delta, m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn grid_m(&self) -> u32 {
        self.grid_m
    }
}

/// Smallest grid resolution `m` satisfying the guarantee inequality
/// `eps*(1 - 2/(m*eps))^d >= delta` together with `m >= ceil(2/eps) + 1`.
///
/// Requires `delta < eps` strictly: the shrink factor is always below 1, so
/// `delta = eps` has no finite solution and is reported as an error.
pub fn grid_resolution(dim: usize, eps: f64, delta: f64) -> Result<u32> {
    check_ranges(dim, eps, delta)?;
    if delta >= eps {
        return Err(Error::NoGridResolution { dim, eps, delta });
    }
    // Real solution of the inequality; walk up from slightly below it so the
    // returned m is exactly the smallest integer passing the f64 predicate.
    let ratio = (delta / eps).powf(1.0 / dim as f64);
    let m_est = 2.0 / (eps * (1.0 - ratio));
    if !m_est.is_finite() || m_est > u32::MAX as f64 {
        return Err(Error::InvalidParams(format!(
            "required grid resolution (~{m_est:.3e}) out of range for eps={eps}, delta={delta}"
        )));
    }
    let start = min_grid(eps).max((m_est.floor() as u32).saturating_sub(3));
    let mut m = start;
    loop {
        if shrink_holds(dim, eps, delta, m) {
            return Ok(m);
        }
        m = m.checked_add(1).ok_or_else(|| {
            Error::InvalidParams("grid resolution search overflowed".into())
        })?;
    }
}

fn snap_ceil(y: f64) -> f64 {
    let r = y.round();
    if (y - r).abs() <= GRID_EPS {
        r
    } else {
        y.ceil()
    }
}

fn snap_floor(y: f64) -> f64 {
    let r = y.round();
    if (y - r).abs() <= GRID_EPS {
        r
    } else {
        y.floor()
    }
}

/// Rounds each endpoint inward to the grid `{j/m}`: lower endpoints up,
/// upper endpoints down. The result is contained in the input; `None` when
/// some side is too short to bracket a grid point, so no grid box fits.
pub fn round_inner(b: &CubeBox, m: u32) -> Option<CubeBox> {
    let mf = m as f64;
    let mut lo = Vec::with_capacity(b.dim());
    let mut hi = Vec::with_capacity(b.dim());
    for ax in 0..b.dim() {
        let l = snap_ceil(b.lo()[ax] * mf).clamp(0.0, mf);
        let h = snap_floor(b.hi()[ax] * mf).clamp(0.0, mf);
        if h < l {
            return None;
        }
        lo.push(l / mf);
        hi.push(h / mf);
    }
    Some(CubeBox::new(lo, hi))
}

/// Rounds each arc inward along its direction. Returns `None` when some arc
/// collapses below one grid step (zero-length arcs are not representable).
/// Degenerate full-circle arcs are passed through unchanged.
pub fn round_inner_torus(b: &TorusBox, m: u32) -> Option<TorusBox> {
    let idx = round_torus_indices(
        &b.arcs().iter().map(|a| (a.a(), a.b())).collect::<Vec<_>>(),
        m,
    )?;
    let mf = m as f64;
    let arcs = idx
        .chunks_exact(2)
        .zip(b.arcs())
        .map(|(jk, orig)| {
            if orig.is_degenerate() {
                *orig
            } else {
                TorusArc::new(jk[0] as f64 / mf, jk[1] as f64 / mf)
            }
        })
        .collect();
    Some(TorusBox::new(arcs))
}

/// Grid indices of the inward rounding of cube endpoint pairs, or `None`
/// when some axis collapses.
fn round_cube_indices(pairs: &[(f64, f64)], m: u32) -> Option<Vec<u16>> {
    let mf = m as f64;
    let mut out = Vec::with_capacity(2 * pairs.len());
    for &(lo, hi) in pairs {
        let l = snap_ceil(lo * mf).clamp(0.0, mf) as u32;
        let h = snap_floor(hi * mf).clamp(0.0, mf) as u32;
        if h <= l {
            return None;
        }
        out.push(l as u16);
        out.push(h as u16);
    }
    Some(out)
}

/// Torus analogue; endpoints are normalized to `{0, ..., m-1}`. Degenerate
/// input arcs (`a == b`) keep their anchor index on both slots.
fn round_torus_indices(pairs: &[(f64, f64)], m: u32) -> Option<Vec<u16>> {
    let mf = m as f64;
    let mut out = Vec::with_capacity(2 * pairs.len());
    for &(a, b) in pairs {
        if a == b {
            let j = (snap_ceil(a * mf) as u32) % m;
            out.push(j as u16);
            out.push(j as u16);
            continue;
        }
        let b_unwrapped = if b > a { b } else { b + 1.0 };
        let ja = snap_ceil(a * mf).clamp(0.0, 2.0 * mf) as u32;
        let jb = snap_floor(b_unwrapped * mf).clamp(0.0, 2.0 * mf) as u32;
        if jb <= ja {
            return None;
        }
        out.push((ja % m) as u16);
        out.push((jb % m) as u16);
    }
    Some(out)
}

/// A finite family of grid-aligned boxes, all of volume at least `delta`,
/// sorted lexicographically by endpoint indices.
#[derive(Clone, PartialEq)]
pub struct Net {
    params: NetParams,
    kind: BoxFamily,
    /// Grid indices, stride `2*dim`: per axis `(lo, hi)` for cube elements
    /// (`lo < hi <= m`) or `(a, b)` for torus arcs (`a != b < m`).
    boxes: Vec<u16>,
}

impl std::fmt::Debug for Net {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Net")
            .field("params", &self.params)
            .field("kind", &self.kind)
            .field("len", &self.len())
            .finish()
    }
}

impl Net {
    pub(crate) fn from_parts(params: NetParams, kind: BoxFamily, boxes: Vec<u16>) -> Self {
        assert_eq!(boxes.len() % (2 * params.dim()), 0);
        Net {
            params,
            kind,
            boxes,
        }
    }

    pub fn params(&self) -> &NetParams {
        &self.params
    }

    pub fn kind(&self) -> BoxFamily {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn delta(&self) -> f64 {
        self.params.delta()
    }

    pub fn eps(&self) -> f64 {
        self.params.eps()
    }

    pub fn grid_m(&self) -> u32 {
        self.params.grid_m()
    }

    pub fn len(&self) -> usize {
        self.boxes.len() / (2 * self.params.dim())
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    fn row(&self, i: usize) -> &[u16] {
        let s = 2 * self.params.dim();
        &self.boxes[i * s..(i + 1) * s]
    }

    /// Membership test by grid indices (binary search; rows are sorted).
    pub(crate) fn contains_indices(&self, key: &[u16]) -> bool {
        let s = 2 * self.params.dim();
        assert_eq!(key.len(), s);
        let mut lo = 0usize;
        let mut hi = self.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.row(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Materializes element `i` of a cube-family net.
    pub fn element_box(&self, i: usize) -> CubeBox {
        assert_eq!(self.kind, BoxFamily::Cube, "not a cube-family net");
        let mf = self.params.grid_m() as f64;
        let row = self.row(i);
        let lo = row.iter().step_by(2).map(|&j| j as f64 / mf).collect();
        let hi = row.iter().skip(1).step_by(2).map(|&j| j as f64 / mf).collect();
        CubeBox::new(lo, hi)
    }

    /// Materializes element `i` of a torus-family net.
    pub fn element_torus(&self, i: usize) -> TorusBox {
        assert_eq!(self.kind, BoxFamily::Torus, "not a torus-family net");
        let mf = self.params.grid_m() as f64;
        let arcs = self
            .row(i)
            .chunks_exact(2)
            .map(|jk| TorusArc::new(jk[0] as f64 / mf, jk[1] as f64 / mf))
            .collect();
        TorusBox::new(arcs)
    }

    /// Whether element `i` contains the point, without materializing it.
    /// Uses the same arithmetic as the materialized boxes.
    pub fn element_contains(&self, i: usize, p: &Point) -> bool {
        assert_eq!(p.dim(), self.dim(), "net/point dimension mismatch");
        let mf = self.params.grid_m() as f64;
        let row = self.row(i);
        match self.kind {
            BoxFamily::Cube => (0..self.dim()).all(|ax| {
                let lo = row[2 * ax] as f64 / mf;
                let hi = row[2 * ax + 1] as f64 / mf;
                let x = p.coord(ax);
                lo <= x && x < hi
            }),
            BoxFamily::Torus => (0..self.dim()).all(|ax| {
                let a = row[2 * ax] as f64 / mf;
                let b = row[2 * ax + 1] as f64 / mf;
                let x = p.coord(ax);
                if a < b {
                    a < x && x < b
                } else {
                    x < b || x > a
                }
            }),
        }
    }

    /// Debug export: one element per line, axes separated by `;`, endpoints
    /// by `,`.
    pub fn export_text(&self) -> String {
        let mf = self.params.grid_m() as f64;
        let mut out = String::new();
        for i in 0..self.len() {
            let row = self.row(i);
            let fields: Vec<String> = row
                .chunks_exact(2)
                .map(|jk| format!("{},{}", jk[0] as f64 / mf, jk[1] as f64 / mf))
                .collect();
            out.push_str(&fields.join(";"));
            out.push('\n');
        }
        out
    }
}

/// Per-axis candidate interval: grid endpoints, integer length, and the side
/// length exactly as the materialized box computes it.
struct AxisCand {
    a: u16,
    b: u16,
    len_units: u32,
    side: f64,
}

fn axis_candidates(m: u32, min_len: u32, kind: BoxFamily) -> Vec<AxisCand> {
    let mf = m as f64;
    let mut out = Vec::new();
    match kind {
        BoxFamily::Cube => {
            for lo in 0..m {
                for hi in (lo + 1)..=m {
                    let len = hi - lo;
                    if len < min_len {
                        continue;
                    }
                    out.push(AxisCand {
                        a: lo as u16,
                        b: hi as u16,
                        len_units: len,
                        side: hi as f64 / mf - lo as f64 / mf,
                    });
                }
            }
        }
        BoxFamily::Torus => {
            for a in 0..m {
                for b in 0..m {
                    if b == a {
                        continue;
                    }
                    let len = (b + m - a) % m;
                    if len < min_len {
                        continue;
                    }
                    out.push(AxisCand {
                        a: a as u16,
                        b: b as u16,
                        len_units: len,
                        side: (b as f64 / mf - a as f64 / mf).rem_euclid(1.0),
                    });
                }
            }
        }
    }
    out
}

/// Enumerates, in lexicographic endpoint order, all grid boxes of the given
/// family with volume at least `delta`. Used by [`build_net`]; separated so
/// small grids can be enumerated without full parameter validation.
pub(crate) fn enumerate_boxes(dim: usize, m: u32, delta: f64, kind: BoxFamily) -> Vec<u16> {
    let min_len = ((delta * (1.0 - GRID_EPS)) * m as f64).ceil().max(1.0) as u32;
    let cands = axis_candidates(m, min_len, kind);
    let max_len = match kind {
        BoxFamily::Cube => m,
        BoxFamily::Torus => m.saturating_sub(1),
    } as f64;
    // Volume threshold in grid units, with slack; the exact check happens at
    // the leaves using the materialized side lengths.
    let thresh = delta * (1.0 - GRID_EPS) * (m as f64).powi(dim as i32);
    let mut out = Vec::new();
    let mut prefix: Vec<u16> = Vec::with_capacity(2 * dim);
    let mut sides: Vec<f64> = Vec::with_capacity(dim);
    fn recurse(
        cands: &[AxisCand],
        dim: usize,
        delta: f64,
        max_len: f64,
        thresh: f64,
        prefix: &mut Vec<u16>,
        sides: &mut Vec<f64>,
        prod_units: f64,
        out: &mut Vec<u16>,
    ) {
        let depth = sides.len();
        if depth == dim {
            if stable_product(sides) >= delta {
                out.extend_from_slice(prefix);
            }
            return;
        }
        let remaining = (dim - depth - 1) as i32;
        for c in cands {
            let p = prod_units * c.len_units as f64;
            if p * max_len.powi(remaining) < thresh {
                continue;
            }
            prefix.push(c.a);
            prefix.push(c.b);
            sides.push(c.side);
            recurse(cands, dim, delta, max_len, thresh, prefix, sides, p, out);
            sides.pop();
            prefix.pop();
            prefix.pop();
        }
    }
    recurse(
        &cands, dim, delta, max_len, thresh, &mut prefix, &mut sides, 1.0, &mut out,
    );
    out
}

/// Builds the full net for `params`, refusing when the predicted cardinality
/// exceeds `cap`.
pub fn build_net_capped(params: &NetParams, kind: BoxFamily, cap: u64) -> Result<Net> {
    let m = params.grid_m();
    let min_len = ((params.delta() * (1.0 - GRID_EPS)) * m as f64)
        .ceil()
        .max(1.0) as u32;
    let per_axis = axis_candidates(m, min_len, kind).len();
    let predicted = (per_axis as f64).powi(params.dim() as i32);
    if predicted > cap as f64 {
        return Err(Error::NetCapExceeded { predicted, cap });
    }
    let boxes = enumerate_boxes(params.dim(), m, params.delta(), kind);
    Ok(Net::from_parts(*params, kind, boxes))
}

pub fn build_net(params: &NetParams, kind: BoxFamily) -> Result<Net> {
    build_net_capped(params, kind, DEFAULT_NET_CAP)
}

/// Outcome of randomized net verification.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub trials: u64,
    pub violations: u64,
    /// Total rejection-sampling draws spent producing the trials.
    pub draws: u64,
    /// Sampled boxes that violated the approximation property (capped).
    pub witnesses: Vec<String>,
}

const MAX_WITNESSES: usize = 8;

/// Draws per-axis endpoint pairs until the sampled box has volume at least
/// `eps`. Cube pairs are ordered `(lo, hi)`; torus pairs keep orientation.
pub(crate) fn sample_box_endpoints(
    rng: &mut ChaCha12Rng,
    dim: usize,
    eps: f64,
    kind: BoxFamily,
    draws: &mut u64,
    max_draws: u64,
) -> Result<Vec<(f64, f64)>> {
    loop {
        *draws += 1;
        if *draws > max_draws {
            return Err(Error::SamplingStalled { draws: *draws, eps });
        }
        let mut pairs = Vec::with_capacity(dim);
        let mut sides = Vec::with_capacity(dim);
        for _ in 0..dim {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            match kind {
                BoxFamily::Cube => {
                    let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
                    pairs.push((lo, hi));
                    sides.push(hi - lo);
                }
                BoxFamily::Torus => {
                    pairs.push((u, v));
                    sides.push((v - u).rem_euclid(1.0));
                }
            }
        }
        if stable_product(&sides) >= eps {
            return Ok(pairs);
        }
    }
}

/// Fuzzes the approximation property: samples random boxes of volume at
/// least `eps` and checks that each rounds inward to a net element of volume
/// at least `delta`. Expected zero violations for any net from
/// [`build_net`].
pub fn verify_net(net: &Net, trials: u64, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let m = net.grid_m();
    let mf = m as f64;
    let max_draws = trials.saturating_mul(10_000).max(10_000_000);
    let mut draws = 0u64;
    let mut violations = 0u64;
    let mut witnesses = Vec::new();
    for _ in 0..trials {
        let pairs = sample_box_endpoints(
            &mut rng,
            net.dim(),
            net.eps(),
            net.kind(),
            &mut draws,
            max_draws,
        )?;
        let idx = match net.kind() {
            BoxFamily::Cube => round_cube_indices(&pairs, m),
            BoxFamily::Torus => round_torus_indices(&pairs, m),
        };
        let ok = match idx {
            None => false,
            Some(key) => {
                if !net.contains_indices(&key) {
                    false
                } else {
                    let sides: Vec<f64> = key
                        .chunks_exact(2)
                        .map(|jk| match net.kind() {
                            BoxFamily::Cube => jk[1] as f64 / mf - jk[0] as f64 / mf,
                            BoxFamily::Torus => {
                                (jk[1] as f64 / mf - jk[0] as f64 / mf).rem_euclid(1.0)
                            }
                        })
                        .collect();
                    stable_product(&sides) >= net.delta()
                }
            }
        };
        if !ok {
            violations += 1;
            if witnesses.len() < MAX_WITNESSES {
                let s: Vec<String> = pairs.iter().map(|(a, b)| format!("{a},{b}")).collect();
                witnesses.push(s.join(";"));
            }
        }
    }
    Ok(VerifyReport {
        trials,
        violations,
        draws,
        witnesses,
    })
}
