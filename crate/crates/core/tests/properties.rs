mod common;

use proptest::prelude::*;
use reflexive_lab::{
    compose, decompose, facet_certificates, hstar_closed_form, hstar_oracle_parallelepiped, hstar_weight_formula,
    idp_check, make_qvector, necessary_condition, normalized_volume, payne_hstar_product,
    payne_qvector, support_of, OracleCaps, QVector, SupportDecomposition, WeightFunction,
};

use common::q;

fn raw_entries() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=40, 1..=8)
}

fn reflexive_q(max_n: usize, max_entry: i64) -> impl Strategy<Value = QVector> {
    prop::collection::vec(1i64..=max_entry, 1..=max_n)
        .prop_map(|v| make_qvector(&v).unwrap())
        .prop_filter("reflexive", |q| q.is_reflexive())
}

proptest! {
    #[test]
    fn support_round_trip(raw in raw_entries()) {
        let q = make_qvector(&raw).unwrap();
        let s = support_of(&q);
        prop_assert_eq!(s.expand(), q.clone());
        let rebuilt = SupportDecomposition::new(s.parts().to_vec(), s.multiplicities().to_vec()).unwrap();
        prop_assert_eq!(rebuilt, s);
    }

    #[test]
    fn make_qvector_is_idempotent(raw in raw_entries()) {
        let q = make_qvector(&raw).unwrap();
        let again: Vec<i64> = q.entries().iter().map(|&v| v as i64).collect();
        prop_assert_eq!(make_qvector(&again).unwrap(), q.clone());
        prop_assert_eq!(q.to_string().parse::<QVector>().unwrap(), q);
    }

    #[test]
    fn reflexive_formulations_agree(raw in raw_entries()) {
        let q = make_qvector(&raw).unwrap();
        let v = normalized_volume(&q);
        let by_volume = q.entries().iter().all(|&e| v.is_multiple_of(e as u64));
        let by_cofactor = q.entries().iter().enumerate().all(|(j, &e)| {
            let rest: u64 = q.entries().iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x as u64).sum();
            (1 + rest).is_multiple_of(e as u64)
        });
        prop_assert_eq!(q.is_reflexive(), by_volume);
        prop_assert_eq!(by_volume, by_cofactor);
    }

    #[test]
    fn hstar_volume_and_heights(q in reflexive_q(6, 30)) {
        let h = hstar_closed_form(&q).unwrap();
        prop_assert_eq!(h.value_at_one(), normalized_volume(&q) as u128);
        prop_assert_eq!(h.coefficients()[0], 1);
        prop_assert_eq!(h.coefficients().len(), q.dim() + 1);
        let w = WeightFunction::new(&q);
        prop_assert_eq!(w.eval(0), 0);
        for b in 1..=q.sum() {
            prop_assert!(w.eval(b) >= 1);
        }
    }

    #[test]
    fn weight_formula_matches_oracle_without_reflexivity(raw in prop::collection::vec(1i64..=9, 1..=4)) {
        let q = make_qvector(&raw).unwrap();
        let oracle = hstar_oracle_parallelepiped(&q, OracleCaps::EHRHART).unwrap();
        prop_assert_eq!(hstar_weight_formula(&q), oracle.clone());
        prop_assert_eq!(q.is_reflexive(), oracle.is_symmetric());
    }

    #[test]
    fn idp_implies_necessary(q in reflexive_q(6, 40)) {
        if idp_check(&q).unwrap().is_idp {
            prop_assert!(necessary_condition(&q));
        }
        if necessary_condition(&q) {
            prop_assert!(q.is_reflexive());
        }
    }

    #[test]
    fn compose_decompose_round_trip(p in reflexive_q(4, 6), r in reflexive_q(4, 6)) {
        let split = compose(&p, &r).unwrap();
        prop_assert_eq!(split.scale, 1 + p.sum());
        prop_assert!(split.y.is_reflexive());
        let found = decompose(&split.y).unwrap();
        prop_assert!(found.iter().any(|s| s.p == p && s.q == r && s.scale == split.scale));
    }
}

/// Facet height of `b` on the facet opposite `e_j`, written out directly.
fn facet_height(q: &QVector, j: usize, b: u64) -> i64 {
    let e = q.entries();
    let qj = e[j] as u64;
    let rest: u64 = e.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v as u64).sum();
    let floors: u64 = e
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &v)| b * v as u64 / qj)
        .sum();
    (b * (1 + rest) / qj) as i64 - floors as i64
}

#[test]
fn unit_point_is_always_available_for_idp() {
    for q in common::reflexive_grid(5, 40) {
        if !idp_check(&q).unwrap().is_idp {
            continue;
        }
        for j in 0..q.dim() {
            let qj = q.entries()[j] as u64;
            if qj < 2 {
                continue;
            }
            assert_eq!(facet_height(&q, j, 1), 1, "{q}, j = {j}");
        }
        for w in facet_certificates(&q).unwrap() {
            let j = w.facet_j - 1;
            assert_eq!(facet_height(&q, j, w.b), w.height as i64);
            assert!(w.found_c.is_some(), "{q}: {w:?}");
        }
    }
}

#[test]
fn payne_product_matches_closed_form() {
    for s in 3..=5 {
        for k in 2..=5 {
            for r in 0..=k - 2 {
                let qv = payne_qvector(s, k, r).unwrap();
                assert_eq!(payne_hstar_product(s, k, r).unwrap(), hstar_closed_form(&qv).unwrap(), "({s},{k},{r})");
            }
        }
    }
}

#[test]
fn idp_free_sums_transfer() {
    let small: Vec<QVector> = common::reflexive_grid(3, 8);
    let good: Vec<&QVector> = small
        .iter()
        .filter(|q| idp_check(q).unwrap().is_idp && hstar_closed_form(q).unwrap().is_unimodal())
        .collect();
    assert!(good.len() >= 5);
    for p in &good {
        for r in &good {
            let y = compose(p, r).unwrap().y;
            assert!(y.is_reflexive());
            assert!(idp_check(&y).unwrap().is_idp, "{p} + {r}");
            assert!(hstar_closed_form(&y).unwrap().is_unimodal(), "{p} + {r}");
        }
    }
    // An IDP free sum forces an IDP first summand.
    for p in &small {
        for r in &small {
            let y = compose(p, r).unwrap().y;
            if idp_check(&y).unwrap().is_idp {
                assert!(idp_check(p).unwrap().is_idp, "{p} + {r}");
            }
        }
    }
}

#[test]
fn decompose_matches_subset_search() {
    // Every split (p, q') with y = sorted(p ++ s q') found by trying all sub-multisets.
    for y in common::reflexive_grid(6, 30) {
        let e: Vec<u64> = y.entries().iter().map(|&v| v as u64).collect();
        let n = e.len();
        let mut brute = Vec::new();
        for mask in 1u32..(1 << n) - 1 {
            let p: Vec<i64> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| e[i] as i64).collect();
            let rest: Vec<u64> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| e[i]).collect();
            let s = 1 + p.iter().sum::<i64>() as u64;
            if rest.iter().any(|v| v % s != 0) {
                continue;
            }
            let pq = make_qvector(&p).unwrap();
            let rq = make_qvector(&rest.iter().map(|v| (v / s) as i64).collect::<Vec<_>>()).unwrap();
            if pq.is_reflexive() && rq.is_reflexive() && !brute.contains(&(pq.clone(), rq.clone())) {
                brute.push((pq, rq));
            }
        }
        let mut fast: Vec<(QVector, QVector)> = decompose(&y).unwrap().into_iter().map(|s| (s.p, s.q)).collect();
        brute.sort();
        fast.sort();
        assert_eq!(fast, brute, "{y}");
    }
    assert_eq!(decompose(&q(&[1, 1, 3])).unwrap().len(), 1);
}
