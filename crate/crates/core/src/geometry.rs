//! Points and axis-parallel boxes on the unit cube `[0,1]^d` and the torus.
//!
//! Cube boxes are half-open products `[lo_i, hi_i)`. Torus boxes are products
//! of cyclic arcs, open inside the arc; an arc with `b < a` wraps through
//! `0 == 1` and equals `[0,1] \ [b, a]`. All dispersion quantities are
//! suprema, so these boundary conventions only affect measure-zero events;
//! they are fixed here once so every module agrees.
//!
//! Everything is immutable after construction and safe to share across
//! threads.

/// A point in `[0,1]^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Panics if any coordinate is outside `[0,1]` or the dimension is zero.
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(!coords.is_empty(), "point must have dimension >= 1");
        for (i, &x) in coords.iter().enumerate() {
            assert!(
                (0.0..=1.0).contains(&x),
                "coordinate {i} = {x} outside [0,1]"
            );
        }
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> f64 {
        self.coords[axis]
    }
}

/// A finite multiset of points of a common dimension. Duplicates are
/// permitted; they never help dispersion and reports count them separately.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Point>) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        for p in &points {
            assert_eq!(p.dim(), dim, "point dimension mismatch");
        }
        PointSet { dim, points }
    }

    pub fn empty(dim: usize) -> Self {
        Self::new(dim, Vec::new())
    }

    /// Builds a set from a flat row-major coordinate buffer.
    pub fn from_flat(dim: usize, flat: &[f64]) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        assert_eq!(flat.len() % dim, 0, "flat buffer length not divisible by dim");
        let points = flat
            .chunks_exact(dim)
            .map(|c| Point::new(c.to_vec()))
            .collect();
        Self::new(dim, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// Number of distinct points under exact coordinate equality.
    pub fn distinct_len(&self) -> usize {
        let mut seen: Vec<&[f64]> = self.points.iter().map(|p| p.coords()).collect();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        seen.dedup();
        seen.len()
    }
}

/// Multiplies side lengths in sorted order so the volume of a box is exactly
/// invariant under axis permutation.
pub(crate) fn stable_product(sides: &[f64]) -> f64 {
    let mut s = sides.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s.iter().product()
}

/// Half-open axis-parallel box `prod [lo_i, hi_i) (subset of [0,1]^d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl CubeBox {
    /// Panics unless `0 <= lo_i <= hi_i <= 1` for all axes.
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "lo/hi dimension mismatch");
        assert!(!lo.is_empty(), "box must have dimension >= 1");
        for i in 0..lo.len() {
            assert!(
                0.0 <= lo[i] && lo[i] <= hi[i] && hi[i] <= 1.0,
                "axis {i}: need 0 <= {} <= {} <= 1",
                lo[i],
                hi[i]
            );
        }
        CubeBox { lo, hi }
    }

    pub fn whole(dim: usize) -> Self {
        Self::new(vec![0.0; dim], vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn volume(&self) -> f64 {
        let sides: Vec<f64> = (0..self.dim()).map(|i| self.side(i)).collect();
        stable_product(&sides)
    }

    /// Half-open membership: `lo_i <= x_i < hi_i` on every axis.
    pub fn contains(&self, p: &Point) -> bool {
        assert_eq!(self.dim(), p.dim(), "box/point dimension mismatch");
        (0..self.dim()).all(|i| self.lo[i] <= p.coord(i) && p.coord(i) < self.hi[i])
    }

    /// Open-interior membership: `lo_i < x_i < hi_i` on every axis. Points
    /// on a face do not count; this is the emptiness notion under which
    /// suprema over boxes are attained.
    pub fn interior_contains(&self, p: &Point) -> bool {
        assert_eq!(self.dim(), p.dim(), "box/point dimension mismatch");
        (0..self.dim()).all(|i| self.lo[i] < p.coord(i) && p.coord(i) < self.hi[i])
    }

    pub fn intersects(&self, ps: &PointSet) -> bool {
        assert_eq!(self.dim(), ps.dim(), "box/point-set dimension mismatch");
        ps.iter().any(|p| self.contains(p))
    }
}

/// A cyclic arc on the unit circle `[0,1]` with `0 == 1`.
///
/// `a < b` is the plain open interval `(a, b)`; `b < a` wraps and equals
/// `[0,1] \ [b, a]`. The degenerate `a == b` form is the full circle minus
/// the single anchor point: length 1, used only as a supremum witness and
/// never as a member of a net.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusArc {
    a: f64,
    b: f64,
}

impl TorusArc {
    pub fn new(a: f64, b: f64) -> Self {
        assert!((0.0..=1.0).contains(&a), "arc endpoint a = {a} outside [0,1]");
        assert!((0.0..=1.0).contains(&b), "arc endpoint b = {b} outside [0,1]");
        TorusArc { a, b }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// Arc length `(b - a) mod 1`; the degenerate arc reports 1.
    pub fn length(&self) -> f64 {
        if self.a == self.b {
            1.0
        } else {
            (self.b - self.a).rem_euclid(1.0)
        }
    }

    /// Open membership. Wrapped arcs exclude the closed gap `[b, a]`.
    pub fn contains(&self, x: f64) -> bool {
        if self.a == self.b {
            x != self.a
        } else if self.a < self.b {
            self.a < x && x < self.b
        } else {
            x < self.b || x > self.a
        }
    }
}

/// Product of cyclic arcs, one per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusBox {
    arcs: Vec<TorusArc>,
}

impl TorusBox {
    pub fn new(arcs: Vec<TorusArc>) -> Self {
        assert!(!arcs.is_empty(), "torus box must have dimension >= 1");
        TorusBox { arcs }
    }

    pub fn dim(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[TorusArc] {
        &self.arcs
    }

    pub fn arc(&self, axis: usize) -> &TorusArc {
        &self.arcs[axis]
    }

    pub fn volume(&self) -> f64 {
        let sides: Vec<f64> = self.arcs.iter().map(|a| a.length()).collect();
        stable_product(&sides)
    }

    pub fn contains(&self, p: &Point) -> bool {
        assert_eq!(self.dim(), p.dim(), "box/point dimension mismatch");
        (0..self.dim()).all(|i| self.arcs[i].contains(p.coord(i)))
    }

    pub fn intersects(&self, ps: &PointSet) -> bool {
        assert_eq!(self.dim(), ps.dim(), "box/point-set dimension mismatch");
        ps.iter().any(|p| self.contains(p))
    }

    pub fn has_degenerate_arc(&self) -> bool {
        self.arcs.iter().any(|a| a.is_degenerate())
    }
}

/// Which box family a net or evaluation works over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoxFamily {
    Cube,
    Torus,
}

impl BoxFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoxFamily::Cube => "cube",
            BoxFamily::Torus => "torus",
        }
    }
}

impl std::fmt::Display for BoxFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec())
    }

    #[test]
    fn cube_volume_examples() {
        assert_eq!(CubeBox::new(vec![0.0, 0.0], vec![1.0, 1.0]).volume(), 1.0);
        assert_eq!(
            CubeBox::new(vec![0.25, 0.25], vec![0.75, 0.75]).volume(),
            0.25
        );
    }

    #[test]
    fn wrapped_arc_length() {
        let arc = TorusArc::new(0.8, 0.2);
        assert!((arc.length() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn cube_contains_is_half_open() {
        let b = CubeBox::new(vec![0.0, 0.0], vec![0.5, 0.5]);
        assert!(!b.contains(&pt(&[0.5, 0.25])));
        assert!(b.contains(&pt(&[0.0, 0.25])));
        assert!(b.contains(&pt(&[0.25, 0.0])));
    }

    #[test]
    fn wrapped_arc_membership() {
        let arc = TorusArc::new(0.8, 0.2);
        assert!(arc.contains(0.9));
        assert!(!arc.contains(0.5));
        // endpoints and the excluded closed gap
        assert!(!arc.contains(0.8));
        assert!(!arc.contains(0.2));
        assert!(arc.contains(0.0));
        assert!(arc.contains(1.0));
    }

    #[test]
    fn degenerate_arc_is_circle_minus_anchor() {
        let arc = TorusArc::new(0.3, 0.3);
        assert_eq!(arc.length(), 1.0);
        assert!(!arc.contains(0.3));
        assert!(arc.contains(0.2999));
        assert!(arc.contains(0.0));
    }

    #[test]
    fn intersects_examples() {
        let whole = CubeBox::whole(2);
        assert!(!whole.intersects(&PointSet::empty(2)));
        assert!(whole.intersects(&PointSet::new(2, vec![pt(&[0.1, 0.9])])));
        let b = CubeBox::new(vec![0.0, 0.0], vec![0.5, 0.5]);
        assert!(!b.intersects(&PointSet::new(2, vec![pt(&[0.75, 0.75])])));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn dimension_mismatch_panics() {
        CubeBox::whole(2).contains(&pt(&[0.5]));
    }

    #[test]
    fn distinct_len_counts_duplicates_once() {
        let ps = PointSet::new(1, vec![pt(&[0.5]), pt(&[0.5]), pt(&[0.25])]);
        assert_eq!(ps.len(), 3);
        assert_eq!(ps.distinct_len(), 2);
    }

    proptest! {
        // Volume is multiplicative across a split of the coordinate axes.
        #[test]
        fn volume_multiplicative(vals in proptest::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 2..6),
                                 split in 1usize..5) {
            let boxes: Vec<(f64, f64)> = vals
                .iter()
                .map(|&(x, y)| if x <= y { (x, y) } else { (y, x) })
                .collect();
            let split = split.min(boxes.len() - 1);
            let full = CubeBox::new(
                boxes.iter().map(|p| p.0).collect(),
                boxes.iter().map(|p| p.1).collect(),
            );
            let left = CubeBox::new(
                boxes[..split].iter().map(|p| p.0).collect(),
                boxes[..split].iter().map(|p| p.1).collect(),
            );
            let right = CubeBox::new(
                boxes[split..].iter().map(|p| p.0).collect(),
                boxes[split..].iter().map(|p| p.1).collect(),
            );
            prop_assert!((full.volume() - left.volume() * right.volume()).abs() < 1e-12);
        }

        // For arcs with a < b, interior membership agrees with the open cube
        // interval; disagreement is confined to the endpoints themselves.
        #[test]
        fn plain_arc_matches_open_interval(a in 0.0f64..1.0, b in 0.0f64..1.0, x in 0.0f64..1.0) {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            prop_assume!(a < b);
            let arc = TorusArc::new(a, b);
            if x != a && x != b {
                prop_assert_eq!(arc.contains(x), a < x && x < b);
            }
        }

        // Shifting all coordinates and endpoints by the same offset mod 1
        // preserves membership and length on the torus.
        #[test]
        fn torus_translation_invariance(a in 0.0f64..1.0, b in 0.0f64..1.0,
                                        x in 0.0f64..1.0, shift in 0.0f64..1.0) {
            prop_assume!(a != b);
            let arc = TorusArc::new(a, b);
            let sa = (a + shift).rem_euclid(1.0);
            let sb = (b + shift).rem_euclid(1.0);
            let sx = (x + shift).rem_euclid(1.0);
            prop_assume!(sa != sb); // rounding can collapse endpoints
            let shifted = TorusArc::new(sa, sb);
            prop_assert!((arc.length() - shifted.length()).abs() < 1e-9);
            // Exclude points that land exactly on an endpoint after shifting.
            if x != a && x != b && sx != sa && sx != sb {
                prop_assert_eq!(arc.contains(x), shifted.contains(sx));
            }
        }
    }
}
