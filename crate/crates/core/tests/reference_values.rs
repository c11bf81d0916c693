//! Checks every closed-form bound against a frozen arbitrary-precision
//! table (tests/data/bounds_reference.csv, regenerated by
//! tools/gen_bounds_reference.py). Agreement is required to 1e-9 relative.

use disperse::{
    best_known_upper, bound_table, canonical_params, delta_for_gamma,
    inverse_dispersion_upper_cube, inverse_dispersion_upper_torus, min_dispersion_upper,
    random_piercing_bound, reference_net_cardinality, two_phase_piercing_bound, BoundConstants,
    BoxFamily,
};

const TOL: f64 = 1e-9;

fn close(got: f64, want: f64) -> bool {
    (got - want).abs() <= TOL * want.abs().max(1e-12)
}

#[test]
fn formulas_match_reference_table() {
    let data = include_str!("data/bounds_reference.csv");
    let constants = BoundConstants::default();
    let mut checked = 0usize;
    for (lineno, line) in data.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 5, "line {}: {line}", lineno + 1);
        let (name, p1, p2, p3) = (f[0], f[1], f[2], f[3]);
        let want: f64 = f[4].parse().unwrap();
        let eps = || p1.parse::<f64>().unwrap();
        let d = || p2.parse::<usize>().unwrap();

        let got = match name {
            "inverse_upper_cube" => inverse_dispersion_upper_cube(eps(), d()).unwrap().value,
            "inverse_upper_torus" => inverse_dispersion_upper_torus(eps(), d()).unwrap().value,
            "canonical_gamma" => canonical_params(eps()).unwrap().gamma,
            "canonical_delta" => canonical_params(eps()).unwrap().delta,
            "delta_for_gamma" => delta_for_gamma(eps(), p2.parse().unwrap()).unwrap(),
            "net_cardinality_cube" => {
                reference_net_cardinality(eps(), d(), p3.parse().unwrap(), BoxFamily::Cube)
                    .unwrap()
            }
            "net_cardinality_torus" => {
                reference_net_cardinality(eps(), d(), p3.parse().unwrap(), BoxFamily::Torus)
                    .unwrap()
            }
            "min_dispersion_upper_cube" => {
                min_dispersion_upper(p1.parse().unwrap(), d(), 1.0, BoxFamily::Cube)
                    .unwrap()
                    .value
            }
            "min_dispersion_upper_torus" => {
                min_dispersion_upper(p1.parse().unwrap(), d(), 1.0, BoxFamily::Torus)
                    .unwrap()
                    .value
            }
            "random_piercing" => {
                random_piercing_bound(p1.parse().unwrap(), p2.parse().unwrap()).unwrap()
            }
            "two_phase_piercing" => {
                two_phase_piercing_bound(p1.parse().unwrap(), p2.parse().unwrap()).unwrap()
            }
            t if t.starts_with("table_") => {
                let id = &t["table_".len()..];
                bound_table(eps(), d(), &constants)
                    .unwrap()
                    .into_iter()
                    .find(|e| e.bound.name == id)
                    .unwrap_or_else(|| panic!("no table entry named {id}"))
                    .bound
                    .value
            }
            b if b.starts_with("best_known_") => {
                let branch = &b["best_known_".len()..];
                let p = best_known_upper(eps(), d(), 1.0).unwrap();
                assert_eq!(
                    p.branch.as_str(),
                    branch,
                    "line {}: branch mismatch at eps={}, d={}",
                    lineno + 1,
                    p1,
                    p2
                );
                p.bound.value
            }
            other => panic!("unknown reference row {other}"),
        };
        assert!(
            close(got, want),
            "line {}: {name}({p1},{p2},{p3}) = {got}, reference {want}",
            lineno + 1
        );
        checked += 1;
    }
    assert!(checked > 1000, "only {checked} rows checked");
}
