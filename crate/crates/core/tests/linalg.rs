mod common;

use apolar_core::linalg::{Mat, MonomialWitness};
use apolar_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn q_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rref_is_idempotent_and_rank_nullity_holds(q in q_strategy(), rows in 1usize..7, cols in 1usize..7, seed: u64) {
        let f = common::field(q);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let m = common::matrix(&f, rows, cols, &mut rng);
        let r = m.rref();
        prop_assert_eq!(r.r.rref().r, r.r.clone());
        prop_assert!(r.pivots.windows(2).all(|w| w[0] < w[1]));
        let ker = m.kernel();
        prop_assert_eq!(m.rank() + ker.rows(), cols);
        // every kernel vector is annihilated
        prop_assert!(m.mul(&ker.transpose()).unwrap().is_zero());
        prop_assert!(m.same_row_space(&r.r));
    }

    #[test]
    fn planted_rank_is_recovered(q in q_strategy(), rows in 1usize..7, cols in 1usize..7, rank_seed: usize, seed: u64) {
        let f = common::field(q);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let rank = rank_seed % (rows.min(cols) + 1);
        let m = if rank == 0 { Mat::zeros(&f, rows, cols) } else { common::matrix_of_rank(&f, rows, cols, rank, &mut rng) };
        prop_assert_eq!(m.rank(), rank);
    }

    #[test]
    fn inverse_and_solve(q in q_strategy(), k in 1usize..6, seed: u64) {
        let f = common::field(q);
        let a = Mat::random_invertible(&f, k, seed);
        prop_assert!(a.is_invertible());
        prop_assert_eq!(Mat::random_invertible(&f, k, seed), a.clone());
        let inv = a.invert().unwrap();
        prop_assert_eq!(a.mul(&inv).unwrap(), Mat::identity(&f, k));
        prop_assert_eq!(inv.mul(&a).unwrap(), Mat::identity(&f, k));
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 1);
        let x = common::vector(&f, k, &mut rng);
        let b = a.mul_vec(&x).unwrap();
        prop_assert_eq!(a.solve(&b), Some(x));
    }

    #[test]
    fn witness_composition(q in q_strategy(), k in 1usize..4, extra in 0usize..4, s1: u64, s2: u64) {
        let f = common::field(q);
        let n = k + extra;
        let w1 = MonomialWitness::random(&f, k, n, s1);
        let w2 = MonomialWitness::random(&f, k, n, s2);
        let w = MonomialWitness::compose(&w1, &w2).unwrap();
        // as matrices on generator matrices: G -> A G D P
        let mut rng = ChaCha20Rng::seed_from_u64(s1 ^ s2);
        let g = common::matrix(&f, k, n, &mut rng);
        let apply = |w: &MonomialWitness, g: &Mat| w.a.mul(g).unwrap().mul(&w.d_matrix()).unwrap().mul(&w.p_matrix()).unwrap();
        prop_assert_eq!(apply(&w, &g), apply(&w2, &apply(&w1, &g)));
    }
}

#[test]
fn examples() {
    let f5 = common::field(5);
    let m = Mat::from_ints(&f5, &[&[1, 2], &[2, 4]]);
    assert_eq!(m.rank(), 1);
    assert_eq!(m.invert().unwrap_err(), Error::Singular);
    assert_eq!(m.kernel(), Mat::from_ints(&f5, &[&[1, 2]]));
    let m = Mat::from_ints(&f5, &[&[2, 1], &[1, 1]]);
    assert_eq!(m.invert().unwrap(), Mat::from_ints(&f5, &[&[1, 4], &[4, 2]]));
    let r = Mat::from_ints(&f5, &[&[0, 2, 4], &[1, 1, 1]]).rref();
    assert_eq!(r.r, Mat::from_ints(&f5, &[&[1, 0, 4], &[0, 1, 2]]));
    assert_eq!(r.pivots, vec![0, 1]);
}

#[test]
fn dimension_errors() {
    let f = common::field(3);
    let a = Mat::zeros(&f, 2, 3);
    assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch(_))));
    assert!(matches!(Mat::from_vec(&f, 2, 2, vec![f.one(); 3]), Err(Error::DimensionMismatch(_))));
}
