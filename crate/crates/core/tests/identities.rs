mod oracles;

use charclass::csm::{csm_stratum, euler_degree, Arrangement, DivisorSubset};
use charclass::hirzebruch::{chi_y, scissor_decompose, ty_smooth, ty_stratum};
use charclass::ring::{Coeff, GradedElement};
use charclass::spaces::{hypersurface, product, projective_space};
use oracles::*;

const PRIMES: [i64; 4] = [5, 7, 11, 13];

fn generic_forms(n: usize, r: usize) -> Vec<Vec<i64>> {
    // coordinate hyperplanes first, then x_0 + ... + x_n
    let mut out: Vec<Vec<i64>> = (0..=n).map(|i| (0..=n).map(|j| i64::from(i == j)).collect()).collect();
    out.push(vec![1; n + 1]);
    out.truncate(r);
    out
}

fn poly(c: &[Q]) -> Coeff {
    Coeff::from_terms(c.iter().enumerate().map(|(d, x)| (vec![d as u32], x.clone())))
}

#[test]
fn lattice_polynomial_counts_points() {
    for n in 1..=3 {
        for r in 0..=3 {
            let forms = generic_forms(n, r);
            let chi = characteristic_polynomial(&forms, n);
            for p in [5i64, 7] {
                let central: i64 = chi.iter().enumerate().map(|(d, m)| m * p.pow(d as u32)).sum();
                // the origin lies off the arrangement only when it is empty
                let origin = i64::from(r == 0);
                assert_eq!(
                    central,
                    (p - 1) * count_complement_points(&forms, n, p) + origin,
                    "n={n} r={r} p={p}"
                );
            }
        }
    }
}

#[test]
fn complement_chi_y_matches_point_counts() {
    // arrangement complements are polynomial-count of Hodge-Tate type, so
    // chi_y with compact support is the counting polynomial at q = -y
    for n in 1..=3usize {
        let space = projective_space(n);
        for r in 0..=3usize {
            let forms = generic_forms(n, r);
            assert!(normal_crossings(&forms, n));
            let points: Vec<(i64, i64)> = PRIMES[..=n]
                .iter()
                .map(|&p| (p, count_complement_points(&forms, n, p)))
                .collect();
            let want = poly(&q_to_minus_y(&interpolate(&points)));
            let arr = Arrangement::from_classes(space.clone(), &vec!["h"; r]).unwrap();
            let got = ty_stratum(&arr, DivisorSubset::EMPTY).unwrap().degree().unwrap();
            assert_eq!(got, want, "P^{n} minus {r} hyperplanes");
        }
    }
}

#[test]
fn chi_y_of_projective_space_from_point_counts() {
    for n in 0..=3usize {
        let points: Vec<(i64, i64)> = PRIMES[..=n]
            .iter()
            .map(|&p| (p, count_complement_points(&[], n, p)))
            .collect();
        assert_eq!(
            chi_y(&projective_space(n)).unwrap(),
            poly(&q_to_minus_y(&interpolate(&points)))
        );
    }
}

#[test]
fn hirzebruch_strata_add_up() {
    let p1p1 = product(&projective_space(1), &projective_space(1)).unwrap();
    let cases = [
        (projective_space(2), vec!["h", "h", "h"]),
        (projective_space(2), vec!["2*h", "h"]),
        (projective_space(3), vec!["h", "h", "2*h"]),
        (p1p1, vec!["h1", "h2", "h1+h2"]),
    ];
    for (space, classes) in cases {
        let arr = Arrangement::from_classes(space.clone(), &classes).unwrap();
        let mut total = GradedElement::zero(ty_smooth(&space).unwrap().value.ring());
        for i in arr.strata() {
            total = total.add(&ty_stratum(&arr, i).unwrap().value).unwrap();
            let at_minus_one = ty_stratum(&arr, i).unwrap().specialize(&q(-1)).unwrap();
            assert_eq!(at_minus_one, csm_stratum(&arr, i).unwrap().value);
        }
        assert_eq!(total, ty_smooth(&space).unwrap().value, "{} {classes:?}", space.label());
        let whole = scissor_decompose(&arr).unwrap();
        assert!(!whole.terms.is_empty());
    }
}

#[test]
fn chi_y_of_plane_curves() {
    // g = (d-1)(d-2)/2 and chi_y = (1-g)(1-y) for a curve
    for d in 1..=4i64 {
        let g = (d - 1) * (d - 2) / 2;
        let got = chi_y(&hypersurface(2, d as u32).unwrap()).unwrap();
        assert_eq!(got, poly(&[q(1 - g), q(g - 1)]), "degree {d}");
    }
}

#[test]
fn conic_complement_in_the_plane() {
    // P^2 minus a smooth conic: 3 - 2 = 1
    let arr = Arrangement::from_classes(projective_space(2), &["2*h"]).unwrap();
    let c = csm_stratum(&arr, DivisorSubset::EMPTY).unwrap();
    assert_eq!(euler_degree(&c), q(1));
}
