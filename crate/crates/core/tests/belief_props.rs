mod common;

use approx::assert_abs_diff_eq;
use common::*;
use evcomm::{FocalSet, FocalSetCatalog, MassFunction};
use proptest::prelude::*;

/// Bel and Pl by enumerating every subset of the frame as a bitmask.
fn brute_bel_pl(catalog: &FocalSetCatalog, masses: &[f64], a: u64) -> (f64, f64) {
    let mut bel = 0.0;
    let mut pl = 0.0;
    let c = catalog.c();
    for b in 0u64..(1 << c) {
        let m = catalog
            .index_of(FocalSet::from_bits(b))
            .map_or(0.0, |j| masses[j]);
        if b != 0 && b & !a == 0 {
            bel += m;
        }
        if b & a != 0 {
            pl += m;
        }
    }
    (bel, pl)
}

fn bba() -> impl Strategy<Value = (usize, bool, Vec<f64>)> {
    (2usize..=5, any::<bool>()).prop_flat_map(|(c, pairs)| {
        let cat = if pairs {
            FocalSetCatalog::with_max_card(c, 2).unwrap()
        } else {
            FocalSetCatalog::full(c).unwrap()
        };
        let f = cat.len();
        prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], f).prop_filter_map(
            "all zero",
            move |v| {
                let s: f64 = v.iter().sum();
                (s > 0.0).then(|| (c, pairs, v.iter().map(|x| x / s).collect()))
            },
        )
    })
}

fn catalog(c: usize, pairs: bool) -> FocalSetCatalog {
    if pairs {
        FocalSetCatalog::with_max_card(c, 2).unwrap()
    } else {
        FocalSetCatalog::full(c).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn bel_pl_against_brute_force((c, pairs, v) in bba(), a in 0u64..32) {
        let cat = catalog(c, pairs);
        let a = a & ((1 << c) - 1);
        let m = MassFunction::new(&cat, &v).unwrap();
        let set = FocalSet::from_bits(a);
        let (bel, pl) = brute_bel_pl(&cat, &v, a);
        prop_assert!((m.bel(set) - bel).abs() <= 1e-12);
        prop_assert!((m.pl(set) - pl).abs() <= 1e-12);
        prop_assert!(m.bel(set) <= m.pl(set) + 1e-12);
        let comp = set.complement(c);
        prop_assert!((m.bel(set) + m.pl(comp) - (1.0 - m.empty_mass())).abs() <= 1e-12);
    }

    #[test]
    fn contour_and_pignistic((c, pairs, v) in bba()) {
        let cat = catalog(c, pairs);
        let m = MassFunction::new(&cat, &v).unwrap();
        let pl = m.contour();
        for (k, x) in pl.iter().enumerate() {
            prop_assert!(*x <= 1.0 - m.empty_mass() + 1e-12);
            prop_assert!((x - m.pl(FocalSet::singleton(k))).abs() <= 1e-15);
        }
        if m.empty_mass() < 1.0 {
            let bet = m.pignistic().unwrap();
            prop_assert!((bet.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(bet.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn bayesian_contour_equals_pignistic(v in prop::collection::vec(0.01f64..1.0, 2..=5)) {
        let c = v.len();
        let s: f64 = v.iter().sum();
        let cat = FocalSetCatalog::full(c).unwrap();
        let mut masses = vec![0.0; cat.len()];
        for k in 0..c {
            masses[cat.singleton_index(k)] = v[k] / s;
        }
        let m = MassFunction::new(&cat, &masses).unwrap();
        let pl = m.contour();
        let bet = m.pignistic().unwrap();
        for k in 0..c {
            prop_assert_eq!(pl[k], masses[cat.singleton_index(k)]);
            prop_assert!((bet[k] - pl[k]).abs() <= 1e-12);
        }
    }
}

#[test]
fn ten_thousand_random_bbas() {
    let mut r = rng(2024);
    for t in 0..10_000 {
        let c = 2 + t % 4;
        let cat = catalog(c, t % 3 == 0);
        let v = random_masses(&mut r, cat.len());
        let m = MassFunction::new(&cat, &v).unwrap();
        for a in 0..(1u64 << c) {
            let set = FocalSet::from_bits(a);
            let (bel, pl) = brute_bel_pl(&cat, &v, a);
            assert_abs_diff_eq!(m.bel(set), bel, epsilon = 1e-12);
            assert_abs_diff_eq!(m.pl(set), pl, epsilon = 1e-12);
        }
    }
}

#[test]
fn special_cases() {
    for c in 2..=5 {
        let cat = FocalSetCatalog::full(c).unwrap();
        let mut vac = vec![0.0; cat.len()];
        vac[cat.full_index()] = 1.0;
        let m = MassFunction::new(&cat, &vac).unwrap();
        assert_eq!(m.contour(), vec![1.0; c]);
        assert_eq!(m.bel(FocalSet::singleton(0)), 0.0);
        for p in m.pignistic().unwrap() {
            assert_abs_diff_eq!(p, 1.0 / c as f64, epsilon = 1e-15);
        }
        let mut certain = vec![0.0; cat.len()];
        certain[cat.singleton_index(c - 1)] = 1.0;
        let m = MassFunction::new(&cat, &certain).unwrap();
        let mut expected = vec![0.0; c];
        expected[c - 1] = 1.0;
        assert_eq!(m.contour(), expected);
        assert_eq!(m.pignistic().unwrap(), expected);
    }
}
