mod common;

use apolar_core::code::{
    all_projective_points, apply_witness, dual_code, gen_code_with_repeats, gen_equivalent_pair,
    gen_equivalent_pair_with_repeats, gen_self_dual, is_self_dual, is_weakly_self_dual, min_distance, projectivize,
    strip_zero_columns, verify_witness, LinearCode, DEFAULT_DISTANCE_CAP,
};
use apolar_core::linalg::{Mat, MonomialWitness};
use apolar_core::reduce::{lce_to_pse, pse_witness_to_lce_witness};
use apolar_core::Error;
use proptest::prelude::*;

fn q_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 9])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn equivalent_pairs_projectivize_to_equal_sizes(q in q_strategy(), k in 1usize..4, extra in 0usize..4, dup in 0usize..3, zero in 0usize..2, seed: u64) {
        let n_proj = (k + extra).min(common::proj_count(q, k));
        let f = common::field(q);
        let (c, c2, w) = gen_equivalent_pair_with_repeats(&f, n_proj, k, dup, zero, seed).unwrap();
        prop_assert!(verify_witness(&c, &c2, &w).unwrap());
        let (s, _) = strip_zero_columns(&c).unwrap();
        let (s2, _) = strip_zero_columns(&c2).unwrap();
        let (p, _) = projectivize(&s).unwrap();
        let (p2, _) = projectivize(&s2).unwrap();
        prop_assert_eq!(p.n(), n_proj);
        prop_assert_eq!(p2.n(), n_proj);
    }

    #[test]
    fn dual_is_an_involution(q in q_strategy(), k in 1usize..4, extra in 1usize..4, seed: u64) {
        let f = common::field(q);
        let n = (k + extra).min(common::proj_count(q, k));
        prop_assume!(n > k);
        let c = gen_code_with_repeats(&f, n, k, 0, 0, seed).unwrap();
        let d = dual_code(&c).unwrap();
        prop_assert_eq!(c.k() + d.k(), c.n());
        prop_assert!(d.generator().mul(&c.generator().transpose()).unwrap().is_zero());
        prop_assert!(dual_code(&d).unwrap().generator().same_row_space(c.generator()));
    }

    #[test]
    fn min_distance_is_an_invariant(q in q_strategy(), k in 1usize..4, extra in 0usize..4, seed: u64) {
        let f = common::field(q);
        let n = (k + extra).min(common::proj_count(q, k));
        let (c, c2, _) = gen_equivalent_pair(&f, n, k, seed).unwrap();
        prop_assert_eq!(min_distance(&c, DEFAULT_DISTANCE_CAP).unwrap(), min_distance(&c2, DEFAULT_DISTANCE_CAP).unwrap());
    }
}

#[test]
fn lifting_through_projectivization_replays() {
    let mut trials = 0;
    for seed in 0..100u64 {
        let q = [2u64, 3, 5, 7, 9][(seed % 5) as usize];
        let k = 1 + (seed % 3) as usize;
        let f = common::field(q);
        let n_proj = (k + 2).min(common::proj_count(q, k));
        let (c, c2, w) = gen_equivalent_pair_with_repeats(&f, n_proj, k, 2, 1, seed).unwrap();
        let red = lce_to_pse(&c, &c2).unwrap();
        let lifted = pse_witness_to_lce_witness(&c, &c2, &red, &w.a).unwrap();
        assert_eq!(apply_witness(&c, &lifted).unwrap(), c2);
        trials += 1;
    }
    assert_eq!(trials, 100);
}

#[test]
fn known_minimum_distances() {
    let f2 = common::field(2);
    let hamming = LinearCode::new(Mat::from_ints(
        &f2,
        &[&[1, 0, 0, 0, 0, 1, 1], &[0, 1, 0, 0, 1, 0, 1], &[0, 0, 1, 0, 1, 1, 0], &[0, 0, 0, 1, 1, 1, 1]],
    ))
    .unwrap();
    assert_eq!(min_distance(&hamming, DEFAULT_DISTANCE_CAP).unwrap(), 3);
    // the simplex code is the dual of the Hamming code
    assert_eq!(min_distance(&dual_code(&hamming).unwrap(), DEFAULT_DISTANCE_CAP).unwrap(), 4);
    // Reed-Solomon [6, 3, 4] over F_7 from a Vandermonde matrix
    let f7 = common::field(7);
    let rows: Vec<Vec<i64>> = (0..3).map(|i| (1..7).map(|a: i64| a.pow(i)).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    let rs = LinearCode::new(Mat::from_ints(&f7, &refs)).unwrap();
    assert_eq!(min_distance(&rs, DEFAULT_DISTANCE_CAP).unwrap(), 4);
}

#[test]
fn self_dual_generation() {
    for (q, k) in [(13u64, 2usize), (5, 3), (7, 2), (9, 3), (5, 4), (13, 3)] {
        let f = common::field(q);
        for seed in 0..3 {
            let c = gen_self_dual(&f, k, seed, 200).unwrap();
            assert_eq!(c.n(), 2 * k);
            assert!(is_self_dual(&c));
            assert!(is_weakly_self_dual(&c));
            assert!(dual_code(&c).unwrap().generator().same_row_space(c.generator()));
        }
    }
    assert_eq!(gen_self_dual(&common::field(3), 3, 0, 10).unwrap_err(), Error::Unsatisfiable);
    assert_eq!(gen_self_dual(&common::field(11), 5, 0, 10).unwrap_err(), Error::Unsatisfiable);
    // the only candidate fills P^1(F_3), which leaves no admissible form
    assert_eq!(gen_self_dual(&common::field(3), 2, 0, 50).unwrap_err(), Error::RetriesExhausted);
}

#[test]
fn projective_point_enumeration() {
    for (q, k) in [(2u64, 3usize), (3, 2), (4, 2), (5, 3)] {
        let f = common::field(q);
        let pts = all_projective_points(&f, k);
        assert_eq!(pts.len(), common::proj_count(q, k));
        for p in &pts {
            let lead = p.iter().find(|x| !f.is_zero(**x)).unwrap();
            assert_eq!(*lead, f.one());
        }
    }
}

#[test]
fn witness_validation() {
    let f = common::field(5);
    let (c, c2, w) = gen_equivalent_pair(&f, 5, 2, 9).unwrap();
    let mut bad = w.clone();
    bad.perm[0] = bad.perm[1];
    assert!(!verify_witness(&c, &c2, &bad).unwrap());
    let mut bad = w.clone();
    bad.d[2] = f.zero();
    assert!(!verify_witness(&c, &c2, &bad).unwrap());
    let id = MonomialWitness::identity(&f, 2, 5);
    assert!(verify_witness(&c, &c, &id).unwrap());
    let other = gen_code_with_repeats(&f, 4, 2, 0, 0, 1).unwrap();
    assert!(verify_witness(&c, &other, &id).is_err());
}
