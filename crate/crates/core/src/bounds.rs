//! Closed-form bounds on inverse dispersion and point-set sizes.
//!
//! Every function evaluates a published-style formula in double precision
//! and tags it with its validity regime. Formulas containing an unspecified
//! absolute constant take it as an explicit parameter (default 1) and are
//! marked `constant_free = false`; no numeric claim is invented for them.
//!
//! Outside its regime an entry still evaluates the raw formula (which may
//! then be negative or NaN); the `value > 0` guarantee applies only where
//! `regime_ok` is true. The test suite cross-checks all values against an
//! arbitrary-precision reference table.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::geometry::BoxFamily;

/// One evaluated bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub name: &'static str,
    pub value: f64,
    /// Whether `(eps, d)` lies inside the bound's stated validity regime.
    pub regime_ok: bool,
    /// True when the formula has no unspecified absolute constant.
    pub constant_free: bool,
    /// The constant substituted where the formula is not constant-free
    /// (1.0 for constant-free entries).
    pub c_used: f64,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParams(format!(
            "eps must lie in (0,1), got {eps}"
        )));
    }
    Ok(())
}

fn check_dim2(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParams(format!(
            "dimension must be >= 2, got {d}"
        )));
    }
    Ok(())
}

/// Upper bound on the inverse dispersion over the cube:
/// `16 e d ln(ln(8/eps)) / eps`, for `d >= 2`, `eps` in `(0,1)`.
pub fn inverse_dispersion_upper_cube(eps: f64, d: usize) -> Result<BoundValue> {
    check_eps(eps)?;
    check_dim2(d)?;
    let inner = (8.0 / eps).ln();
    assert!(inner > 1.0, "inner logarithm must exceed 1 for eps < 1");
    Ok(BoundValue {
        name: "inverse_upper_cube",
        value: 16.0 * E * d as f64 * inner.ln() / eps,
        regime_ok: true,
        constant_free: true,
        c_used: 1.0,
    })
}

/// Torus analogue: `8 e d (ln(ln(e/eps)) + ln(2d)) / eps`.
pub fn inverse_dispersion_upper_torus(eps: f64, d: usize) -> Result<BoundValue> {
    check_eps(eps)?;
    check_dim2(d)?;
    let inner = (E / eps).ln();
    assert!(inner > 1.0, "inner logarithm must exceed 1 for eps < 1");
    Ok(BoundValue {
        name: "inverse_upper_torus",
        value: 8.0 * E * d as f64 * (inner.ln() + (2.0 * d as f64).ln()) / eps,
        regime_ok: true,
        constant_free: true,
        c_used: 1.0,
    })
}

/// Upper bound on the minimal dispersion of `n` points:
/// cube `C d ln(ln(n/d))/n`, torus `C d (ln(ln(n/d)) + ln d)/n`.
/// Stated for `n >= 4d`; other `n` evaluate with `regime_ok = false`
/// (requires `n/d > e` so the iterated logarithm is positive).
pub fn min_dispersion_upper(n: u64, d: usize, c: f64, kind: BoxFamily) -> Result<BoundValue> {
    check_dim2(d)?;
    if !(c > 0.0) {
        return Err(Error::InvalidParams(format!("constant must be > 0, got {c}")));
    }
    let ratio = n as f64 / d as f64;
    if ratio <= E {
        return Err(Error::InvalidParams(format!(
            "need n/d > e to evaluate, got n={n}, d={d}"
        )));
    }
    let ll = ratio.ln().ln();
    let (name, value) = match kind {
        BoxFamily::Cube => (
            "min_dispersion_upper_cube",
            c * d as f64 * ll / n as f64,
        ),
        BoxFamily::Torus => (
            "min_dispersion_upper_torus",
            c * d as f64 * (ll + (d as f64).ln()) / n as f64,
        ),
    };
    Ok(BoundValue {
        name,
        value,
        regime_ok: n >= 4 * d as u64,
        constant_free: false,
        c_used: c,
    })
}

/// Size bound for the pure random piercing construction:
/// `3 ln(net_size) / delta`, requiring `net_size >= 3`.
pub fn random_piercing_bound(net_size: usize, delta: f64) -> Result<f64> {
    if net_size < 3 {
        return Err(Error::RandomOnlyHypothesis { net_size });
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "delta must lie in (0,1], got {delta}"
        )));
    }
    Ok(3.0 * (net_size as f64).ln() / delta)
}

/// Size certificate for the two-phase construction:
/// `ln(4 delta net_size) / delta`, requiring `delta <= 1/3` and
/// `delta * net_size >= e`.
pub fn two_phase_piercing_bound(net_size: usize, delta: f64) -> Result<f64> {
    let product = delta * net_size as f64;
    if !(delta > 0.0 && delta <= 1.0 / 3.0) || product < E {
        return Err(Error::TwoPhaseHypothesis {
            delta,
            net_size,
            product,
        });
    }
    Ok((4.0 * product).ln() / delta)
}

/// The canonical auxiliary parameters for a target `eps`:
/// `gamma = 1/ln(1/eps)` and `delta = eps/(4e)`. They satisfy
/// `eps^(1+gamma) = eps/e` exactly, which is asserted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalParams {
    pub gamma: f64,
    pub delta: f64,
}

pub fn canonical_params(eps: f64) -> Result<CanonicalParams> {
    check_eps(eps)?;
    let gamma = 1.0 / (1.0 / eps).ln();
    let delta = eps / (4.0 * E);
    let identity = eps.powf(1.0 + gamma) * E;
    assert!(
        (identity - eps).abs() <= 1e-12 * eps,
        "parameter identity eps^(1+gamma) = eps/e violated: {identity} vs {eps}"
    );
    Ok(CanonicalParams { gamma, delta })
}

/// The `delta` induced by an explicit `gamma`: `eps^(1+gamma)/4`.
pub fn delta_for_gamma(eps: f64, gamma: f64) -> Result<f64> {
    check_eps(eps)?;
    if !(gamma > 0.0) {
        return Err(Error::InvalidParams(format!(
            "gamma must be > 0, got {gamma}"
        )));
    }
    Ok(eps.powf(1.0 + gamma) / 4.0)
}

/// Reference cardinality of the literature net construction for
/// parameters `(eps, d, gamma)`:
/// cube `7 d ln(d) (1+1/gamma)^d (ln(e/eps^(1+gamma)))^d / eps^(1+gamma)`,
/// torus with `(2d)^d` in place of the iterated-logarithm power.
///
/// Reference only: the grid nets this crate builds are larger, so realized
/// point counts carry the grid net's size, not this formula.
pub fn reference_net_cardinality(
    eps: f64,
    d: usize,
    gamma: f64,
    kind: BoxFamily,
) -> Result<f64> {
    check_eps(eps)?;
    check_dim2(d)?;
    if !(gamma > 0.0) {
        return Err(Error::InvalidParams(format!(
            "gamma must be > 0, got {gamma}"
        )));
    }
    let df = d as f64;
    let shrunk = eps.powf(1.0 + gamma);
    let base = 7.0 * df * df.ln() * (1.0 + 1.0 / gamma).powi(d as i32) / shrunk;
    let factor = match kind {
        BoxFamily::Cube => (E / shrunk).ln().powi(d as i32),
        BoxFamily::Torus => (2.0 * df).powi(d as i32),
    };
    Ok(base * factor)
}

/// Which side of the quantity a table entry bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Upper,
    Lower,
}

/// A [`BoundValue`] plus the box family and side it applies to.
#[derive(Debug, Clone, PartialEq)]
pub struct TableEntry {
    pub family: BoxFamily,
    pub side: BoundSide,
    pub bound: BoundValue,
}

/// Constants for the formulas that contain an unspecified one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// `upper_tiny_eps`: C in `C d^2 ln(d)/eps`.
    pub tiny_upper: f64,
    /// `upper_large_eps_sq`: C in `C ln(d) ln(1/eps)/eps^2`.
    pub sq_upper: f64,
    /// `lower_mid_eps_sq`: C in `C ln(d)/(eps^2 ln(1/eps))`.
    pub mid_lower: f64,
    /// `lower_random_baseline`: c in `(c/eps) ln(1/eps)`.
    pub random_lower: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            tiny_upper: 1.0,
            sq_upper: 1.0,
            mid_lower: 1.0,
            random_lower: 1.0,
        }
    }
}

/// Evaluates the collected bounds on `N(eps, d)` (and the torus variant)
/// at one parameter point. Entries outside their regime still carry the raw
/// formula value; `value > 0` is guaranteed only where `regime_ok` holds.
///
/// Upper-bound entries other than the trivial one are flagged in-regime
/// only below `eps = 1/2`, where more than one point is needed; from `1/2`
/// on, the single center point settles the cube question.
pub fn bound_table(eps: f64, d: usize, constants: &BoundConstants) -> Result<Vec<TableEntry>> {
    check_eps(eps)?;
    check_dim2(d)?;
    let df = d as f64;
    let mut out = Vec::with_capacity(11);
    let mut push = |family: BoxFamily,
                    side: BoundSide,
                    name: &'static str,
                    value: f64,
                    regime_ok: bool,
                    c_used: Option<f64>| {
        out.push(TableEntry {
            family,
            side,
            bound: BoundValue {
                name,
                value,
                regime_ok,
                constant_free: c_used.is_none(),
                c_used: c_used.unwrap_or(1.0),
            },
        });
    };

    // exp(-d^2 ln d) = d^(-d^2); underflows to 0 for large d, which simply
    // empties the regime
    let tiny_threshold = (-(df * df) * df.ln()).exp();
    push(
        BoxFamily::Cube,
        BoundSide::Upper,
        "upper_tiny_eps",
        constants.tiny_upper * df * df * df.ln() / eps,
        eps < tiny_threshold,
        Some(constants.tiny_upper),
    );

    let lower_tiny_threshold = (-(df) * (4.0 * df).ln()).exp(); // (4d)^(-d)
    push(
        BoxFamily::Cube,
        BoundSide::Lower,
        "lower_tiny_eps",
        df / (E * eps),
        eps <= lower_tiny_threshold,
        None,
    );

    // threshold (1/d) ln^2(d)/lnln(d) is meaningful only when lnln(d) > 0,
    // i.e. d >= 3
    let sq_regime = if d >= 3 {
        let t = df.ln().powi(2) / (df * df.ln().ln());
        eps > t && eps < 0.5
    } else {
        false
    };
    push(
        BoxFamily::Cube,
        BoundSide::Upper,
        "upper_large_eps_sq",
        constants.sq_upper * df.ln() * (1.0 / eps).ln() / (eps * eps),
        sq_regime,
        Some(constants.sq_upper),
    );

    push(
        BoxFamily::Cube,
        BoundSide::Lower,
        "lower_mid_eps_sq",
        constants.mid_lower * df.ln() / (eps * eps * (1.0 / eps).ln()),
        (0.25 / df.sqrt()..=0.25).contains(&eps),
        Some(constants.mid_lower),
    );

    push(
        BoxFamily::Cube,
        BoundSide::Lower,
        "lower_log2d",
        df.log2() / (8.0 * eps),
        eps < 0.25,
        None,
    );

    push(
        BoxFamily::Cube,
        BoundSide::Upper,
        "upper_additive_loglog",
        (df * (1.0 / eps).ln().ln() + (1.0 / eps).ln()) / eps,
        eps < 1.0 / E,
        None,
    );

    push(
        BoxFamily::Cube,
        BoundSide::Lower,
        "lower_random_baseline",
        ((constants.random_lower / eps) * (1.0 / eps).ln()).max(df / (2.0 * eps)),
        eps < 0.5,
        Some(constants.random_lower),
    );

    push(
        BoxFamily::Cube,
        BoundSide::Upper,
        "upper_quarter_window",
        PI / (eps - 0.25).sqrt() - 3.0,
        eps > 0.25 && eps < 0.5,
        None,
    );

    push(
        BoxFamily::Cube,
        BoundSide::Upper,
        "upper_trivial",
        1.0,
        eps >= 0.5,
        None,
    );

    push(
        BoxFamily::Torus,
        BoundSide::Lower,
        "torus_lower_linear",
        df / eps,
        true,
        None,
    );

    push(
        BoxFamily::Torus,
        BoundSide::Upper,
        "torus_upper_loglinear",
        (df * (2.0 * df).ln() + (E / eps).ln()) / eps,
        true,
        None,
    );

    Ok(out)
}

/// Branch of the piecewise best-known upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiecewiseBranch {
    /// `eps >= ln^2(d)/(d lnln(2d))`: `(C ln d / eps^2) ln(1/eps)`.
    LargeEps,
    /// down to `exp(-d^d)`: `(C d / eps) lnln(1/eps)`.
    MidLoglog,
    /// below `exp(-d^d)`: `C d^2 ln(d)/eps`.
    TinyEps,
}

impl PiecewiseBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            PiecewiseBranch::LargeEps => "large_eps",
            PiecewiseBranch::MidLoglog => "mid_loglog",
            PiecewiseBranch::TinyEps => "tiny_eps",
        }
    }
}

/// The two branch thresholds for dimension `d`:
/// `(ln^2(d)/(d lnln(2d)), exp(-d^d))`.
pub fn piecewise_thresholds(d: usize) -> Result<(f64, f64)> {
    check_dim2(d)?;
    let df = d as f64;
    let t1 = df.ln().powi(2) / (df * (2.0 * df).ln().ln());
    let t2 = (-df.powi(d as i32)).exp();
    Ok((t1, t2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseBound {
    pub branch: PiecewiseBranch,
    pub bound: BoundValue,
}

/// Piecewise best-known upper bound, selecting the branch by the published
/// thresholds. The mid branch's iterated logarithm is negative for
/// `eps > 1/e`, where the raw value goes nonpositive and `regime_ok` is
/// false (the branch constants are not comparable across thresholds anyway,
/// so no continuity is claimed).
pub fn best_known_upper(eps: f64, d: usize, c: f64) -> Result<PiecewiseBound> {
    check_eps(eps)?;
    let (t1, t2) = piecewise_thresholds(d)?;
    let df = d as f64;
    let (branch, value) = if eps >= t1 {
        (
            PiecewiseBranch::LargeEps,
            c * df.ln() * (1.0 / eps).ln() / (eps * eps),
        )
    } else if eps >= t2 {
        (
            PiecewiseBranch::MidLoglog,
            c * df / eps * (1.0 / eps).ln().ln(),
        )
    } else {
        (PiecewiseBranch::TinyEps, c * df * df * df.ln() / eps)
    };
    Ok(PiecewiseBound {
        branch,
        bound: BoundValue {
            name: "best_known_upper",
            value,
            regime_ok: value.is_finite() && value > 0.0,
            constant_free: false,
            c_used: c,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn inverse_upper_cube_spot_values() {
        let v = inverse_dispersion_upper_cube(0.5, 2).unwrap();
        assert!(rel_close(v.value, 177.41141496415033, 1e-9), "got {}", v.value);
        assert!(v.constant_free && v.regime_ok);

        // eps = 8 e^{-e}: the iterated logarithm is exactly 1
        let eps = 8.0 * (-E).exp();
        let v = inverse_dispersion_upper_cube(eps, 3).unwrap();
        assert!(rel_close(v.value, 16.0 * E * 3.0 / eps, 1e-12));
    }

    #[test]
    fn inverse_upper_torus_spot_value() {
        // eps = e^{1-e}: ln(ln(e/eps)) = 1
        let eps = (1.0 - E).exp();
        let v = inverse_dispersion_upper_torus(eps, 2).unwrap();
        let expect = 8.0 * E * 2.0 * (1.0 + 4.0f64.ln()) / eps;
        assert!(rel_close(v.value, expect, 1e-12));
    }

    #[test]
    fn inverse_upper_monotonicity() {
        // cube bound decreases in eps; torus bound increases in d
        let mut prev = f64::INFINITY;
        for eps in [0.1, 0.2, 0.3, 0.5, 0.7, 0.9] {
            let v = inverse_dispersion_upper_cube(eps, 2).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
        let mut prev = 0.0;
        for d in [2, 3, 5, 9, 17] {
            let v = inverse_dispersion_upper_torus(0.3, d).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn domain_violations_error() {
        assert!(inverse_dispersion_upper_cube(0.5, 1).is_err());
        assert!(inverse_dispersion_upper_cube(1.0, 2).is_err());
        assert!(inverse_dispersion_upper_cube(0.0, 2).is_err());
        assert!(min_dispersion_upper(8, 1, 1.0, BoxFamily::Cube).is_err());
        assert!(canonical_params(1.0).is_err());
        assert!(delta_for_gamma(0.5, 0.0).is_err());
    }

    #[test]
    fn min_dispersion_regime_edges() {
        let d = 3;
        let ok = min_dispersion_upper(12, d, 1.0, BoxFamily::Cube).unwrap();
        assert!(ok.regime_ok);
        let edge = min_dispersion_upper(11, d, 1.0, BoxFamily::Cube).unwrap();
        assert!(!edge.regime_ok);
        // doubling the constant doubles the value exactly
        let twice = min_dispersion_upper(12, d, 2.0, BoxFamily::Cube).unwrap();
        assert_eq!(twice.value, 2.0 * ok.value);
        // value -> 0 as n grows
        assert!(
            min_dispersion_upper(1_000_000, d, 1.0, BoxFamily::Cube)
                .unwrap()
                .value
                < 1e-4
        );
    }

    #[test]
    fn piercing_bound_examples() {
        assert!(rel_close(
            random_piercing_bound(1000, 0.1).unwrap(),
            207.232658,
            1e-8
        ));
        assert!(rel_close(
            two_phase_piercing_bound(1000, 0.1).unwrap(),
            59.914645,
            1e-8
        ));
        assert!(random_piercing_bound(2, 0.1).is_err());
        assert!(two_phase_piercing_bound(27, 0.1).is_err());
        // hypothesis boundary: delta * N = e exactly is accepted
        let n = 28;
        assert!(two_phase_piercing_bound(n, E / n as f64).is_ok());
    }

    #[test]
    fn two_phase_dominates_random_on_grid() {
        for &n in &[30usize, 100, 1000, 50_000, 1_000_000] {
            for &delta in &[0.001, 0.01, 0.05, 0.1, 0.2, 0.25] {
                if delta * n as f64 >= E {
                    let l2 = two_phase_piercing_bound(n, delta).unwrap();
                    let l1 = random_piercing_bound(n, delta).unwrap();
                    assert!(l2 <= l1, "n={n} delta={delta}: {l2} > {l1}");
                }
            }
        }
    }

    #[test]
    fn canonical_params_closed_form() {
        let p = canonical_params(1.0 / E).unwrap();
        assert!(rel_close(p.gamma, 1.0, 1e-12));
        assert!(rel_close(p.delta, 1.0 / (4.0 * E * E), 1e-12));
        // delta_for_gamma at the canonical gamma matches eps/(4e)
        let eps = 0.37;
        let p = canonical_params(eps).unwrap();
        let d2 = delta_for_gamma(eps, p.gamma).unwrap();
        assert!(rel_close(d2, p.delta, 1e-12));
    }

    #[test]
    fn net_cardinality_comparisons() {
        // torus >= cube exactly when 2d >= ln(e/eps^(1+gamma))
        for &eps in &[0.1, 0.3, 0.5, 0.7] {
            for d in [2usize, 3, 5] {
                let gamma = canonical_params(eps).unwrap().gamma;
                let cube = reference_net_cardinality(eps, d, gamma, BoxFamily::Cube).unwrap();
                let torus = reference_net_cardinality(eps, d, gamma, BoxFamily::Torus).unwrap();
                let inner = (E / eps.powf(1.0 + gamma)).ln();
                if 2.0 * d as f64 >= inner {
                    assert!(torus >= cube);
                } else {
                    assert!(torus < cube);
                }
            }
        }
        // increasing in d for fixed eps when gamma <= 1
        let mut prev = 0.0;
        for d in [2usize, 3, 4, 6] {
            let v = reference_net_cardinality(0.2, d, 0.9, BoxFamily::Cube).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn table_trivial_regime_above_half() {
        for d in [2usize, 5, 50] {
            let table = bound_table(0.6, d, &BoundConstants::default()).unwrap();
            for e in table.iter().filter(|e| e.family == BoxFamily::Cube) {
                if e.bound.name == "upper_trivial" {
                    assert!(e.bound.regime_ok);
                    assert_eq!(e.bound.value, 1.0);
                } else {
                    assert!(
                        !e.bound.regime_ok,
                        "{} unexpectedly in regime at eps=0.6, d={d}",
                        e.bound.name
                    );
                }
            }
        }
    }

    #[test]
    fn table_quarter_window_value() {
        let table = bound_table(0.3, 4, &BoundConstants::default()).unwrap();
        let kmk = table
            .iter()
            .find(|e| e.bound.name == "upper_quarter_window")
            .unwrap();
        assert!(kmk.bound.regime_ok);
        assert!(rel_close(kmk.bound.value, 11.0496, 1e-4));
        assert!(kmk.bound.constant_free);
    }

    #[test]
    fn table_positive_in_regime() {
        for &eps in &[0.01, 0.05, 0.15, 0.26, 0.35, 0.45, 0.6, 0.9] {
            for d in [2usize, 3, 10, 40] {
                let table = bound_table(eps, d, &BoundConstants::default()).unwrap();
                assert_eq!(table.len(), 11);
                for e in &table {
                    if e.bound.regime_ok {
                        assert!(
                            e.bound.value.is_finite() && e.bound.value > 0.0,
                            "{} at eps={eps}, d={d}: {}",
                            e.bound.name,
                            e.bound.value
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn table_regime_flags_match_quoted_inequalities() {
        let t = bound_table(0.2, 2, &BoundConstants::default()).unwrap();
        let get = |n: &str| t.iter().find(|e| e.bound.name == n).unwrap();
        assert!(!get("upper_tiny_eps").bound.regime_ok); // needs eps < 2^-4
        assert!(get("lower_log2d").bound.regime_ok); // eps < 1/4
        assert!(get("lower_mid_eps_sq").bound.regime_ok); // 1/(4 sqrt 2) <= 0.2 <= 1/4
        assert!(!get("upper_quarter_window").bound.regime_ok);
        assert!(get("torus_lower_linear").bound.regime_ok);

        let t = bound_table(0.0625, 2, &BoundConstants::default()).unwrap();
        // boundary: quoted as strict, eps = 2^-4 exactly is outside
        assert!(!t
            .iter()
            .find(|e| e.bound.name == "upper_tiny_eps")
            .unwrap()
            .bound
            .regime_ok);
    }

    #[test]
    fn piecewise_branches() {
        // d=10: first threshold ~0.483, so eps=0.4 falls in the mid branch
        let (t1, _) = piecewise_thresholds(10).unwrap();
        assert!(rel_close(t1, 0.48323, 1e-4), "t1 = {t1}");
        let p = best_known_upper(0.4, 10, 1.0).unwrap();
        assert_eq!(p.branch, PiecewiseBranch::MidLoglog);
        // mid formula's iterated log is negative here; flagged, not hidden
        assert!(p.bound.value < 0.0 && !p.bound.regime_ok);

        let p = best_known_upper(0.5, 10, 1.0).unwrap();
        assert_eq!(p.branch, PiecewiseBranch::LargeEps);
        assert!(p.bound.regime_ok);

        // d=2: exp(-d^d) = e^-4, below it the tiny branch applies
        let (_, t2) = piecewise_thresholds(2).unwrap();
        assert!(rel_close(t2, (-4.0f64).exp(), 1e-12));
        let p = best_known_upper(0.01, 2, 1.0).unwrap();
        assert_eq!(p.branch, PiecewiseBranch::TinyEps);
        assert!(rel_close(p.bound.value, 4.0 * 2.0f64.ln() / 0.01, 1e-12));

        let p = best_known_upper(0.02, 2, 1.0).unwrap();
        assert_eq!(p.branch, PiecewiseBranch::MidLoglog);
    }

    proptest! {
        // the parameter identity holds across the whole eps range
        #[test]
        fn canonical_identity(eps in 0.0001f64..0.9999) {
            let p = canonical_params(eps).unwrap();
            let lhs = eps.powf(1.0 + p.gamma) * E;
            prop_assert!((lhs - eps).abs() <= 1e-12 * eps);
        }

        // dominance holds wherever both bounds are defined with delta <= 1/4
        #[test]
        fn dominance_fuzz(n in 3usize..2_000_000, delta in 0.0001f64..0.25) {
            prop_assume!(delta * n as f64 >= E);
            let l2 = two_phase_piercing_bound(n, delta).unwrap();
            let l1 = random_piercing_bound(n, delta).unwrap();
            prop_assert!(l2 <= l1);
        }
    }
}
