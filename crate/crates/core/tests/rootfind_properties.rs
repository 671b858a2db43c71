use crackwave::rootfind::{grid_scan, newton, winding_count, SearchRegion};
use crackwave::{Complex64, Result};
use proptest::prelude::*;

fn poly(
    roots: &[Complex64],
    lead: Complex64,
) -> impl Fn(Complex64) -> Result<Complex64> + Sync + '_ {
    move |z| Ok(roots.iter().fold(lead, |acc, r| acc * (z - r)))
}

/// Up to four roots inside `[-1.2, 1.2]²`, pairwise at least 0.5 apart. Roots
/// much nearer the window edge than the others can sit above the candidate
/// quantile, so the sample keeps them central.
fn roots() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.2..1.2f64, -1.2..1.2f64), 1..=4)
        .prop_map(|pts| {
            pts.into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect::<Vec<_>>()
        })
        .prop_filter("separated", |rs| {
            rs.iter()
                .enumerate()
                .all(|(i, a)| rs[i + 1..].iter().all(|b| (a - b).norm() > 0.5))
        })
}

fn lead() -> impl Strategy<Value = Complex64> {
    (0.2..3.0f64, -3.2..3.2f64).prop_map(|(r, phi)| Complex64::from_polar(r, phi))
}

fn region() -> SearchRegion {
    SearchRegion::new((-2.0, 2.0), (-2.0, 2.0), 61, 61).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scan_count_matches_winding_number(rs in roots(), a in lead()) {
        let f = poly(&rs, a);
        let region = region();
        let found = grid_scan(&f, &region).unwrap();
        let winding = winding_count(&f, &region, 64).unwrap();
        prop_assert_eq!(winding, rs.len() as i64);
        prop_assert_eq!(found.len(), rs.len());
        for r in &rs {
            prop_assert!(found.iter().any(|x| (x.location - r).norm() < 1e-12), "missing {}", r);
        }
    }

    #[test]
    fn refined_roots_stay_near_their_seed(rs in roots(), a in lead()) {
        let f = poly(&rs, a);
        let region = region();
        for root in grid_scan(&f, &region).unwrap() {
            let off = root.location - root.seed;
            prop_assert!(off.re.abs() <= 2.0 * region.dx() && off.im.abs() <= 2.0 * region.dy());
            prop_assert_eq!(root.certified_count, Some(1));
        }
    }

    #[test]
    fn newton_converges_near_simple_roots(rs in roots(), a in lead(), dre in -0.05..0.05f64, dim in -0.05..0.05f64) {
        let f = poly(&rs, a);
        let start = rs[0] + Complex64::new(dre, dim);
        let rec = newton(&f, start, 1e-12, 50).unwrap();
        prop_assert!((rec.location - rs[0]).norm() < 1e-12, "{}", (rec.location - rs[0]).norm());
        prop_assert!(rec.residual_modulus < 1e-12);
    }
}

#[test]
fn winding_counts_multiplicity() {
    let r = Complex64::new(0.3, -0.2);
    let f = |z: Complex64| Ok((z - r).powi(3) * (z - Complex64::new(5.0, 0.0)));
    assert_eq!(winding_count(f, &region(), 32).unwrap(), 3);
}
