mod common;

use apolar_core::code::{
    apply_witness, gen_code_with_repeats, gen_equivalent_pair_with_repeats, gen_self_dual, verify_witness, LinearCode,
};
use apolar_core::gf::{Field, FieldElem};
use apolar_core::linalg::{Mat, MonomialWitness};
use apolar_core::oracle::{
    brute_lce, brute_lce_monomial, brute_pi, brute_pi_dual, brute_pse, gl_order, is_iso_dual, is_self_associated,
    SearchCaps,
};
use apolar_core::points::PointSet;
use apolar_core::poly::{dual_gl_act, gl_act, projective_equal, HomogPoly};
use apolar_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn caps() -> SearchCaps {
    SearchCaps::default()
}

/// Every matrix over the field, filtered to the invertible ones.
fn all_invertible(f: &Field, k: usize) -> Vec<Mat> {
    let q = f.q() as usize;
    let total = q.pow((k * k) as u32);
    (0..total)
        .filter_map(|mut idx| {
            let entries: Vec<FieldElem> = (0..k * k)
                .map(|_| {
                    let e = f.elem((idx % q) as u64).unwrap();
                    idx /= q;
                    e
                })
                .collect();
            let m = Mat::from_vec(f, k, k, entries).unwrap();
            m.is_invertible().then_some(m)
        })
        .collect()
}

/// Number of codewords of each Hamming weight.
fn weight_distribution(c: &LinearCode) -> Vec<usize> {
    let f = c.field();
    let q = f.q();
    let mut dist = vec![0; c.n() + 1];
    for idx in 0..q.pow(c.k() as u32) {
        let mut rest = idx;
        let msg: Vec<FieldElem> = (0..c.k())
            .map(|_| {
                let e = f.elem(rest % q).unwrap();
                rest /= q;
                e
            })
            .collect();
        let word = c.generator().transpose().mul_vec(&msg).unwrap();
        dist[word.iter().filter(|v| !f.is_zero(**v)).count()] += 1;
    }
    dist
}

/// Same code under a random basis change and random monomial transformation.
fn represent(c: &LinearCode, rng: &mut ChaCha20Rng) -> LinearCode {
    let w = MonomialWitness::random(c.field(), c.k(), c.n(), rng.gen());
    apply_witness(c, &w).unwrap()
}

#[test]
fn group_orders() {
    for (q, k) in [(2u64, 2usize), (3, 2), (4, 2), (2, 3), (3, 3)] {
        let f = common::field(q);
        assert_eq!(all_invertible(&f, k).len() as u128, gl_order(q, k));
    }
}

#[test]
fn primal_search_matches_enumeration() {
    let f = common::field(3);
    let group = all_invertible(&f, 2);
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let (mut yes, mut no) = (0, 0);
    for i in 0..60 {
        let g1 = common::homog(&f, 2, 3, &mut rng);
        let g2 = if i % 2 == 0 {
            gl_act(&group[rng.gen_range(0..group.len())], &g1).unwrap().scale(common::unit(&f, &mut rng))
        } else {
            common::homog(&f, 2, 3, &mut rng)
        };
        let expect = group.iter().any(|a| gl_act(a, &g1).unwrap().normalized() == g2.normalized());
        let found = brute_pi(&g1, &g2, &caps()).unwrap();
        assert_eq!(found.is_some(), expect);
        if let Some(a) = found {
            assert!(gl_act(&a, &g1).unwrap().normalized() == g2.normalized());
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 0 && no > 0);
}

#[test]
fn dual_search_matches_enumeration() {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    for q in [2u64, 3] {
        let f = common::field(q);
        let group = all_invertible(&f, 2);
        for i in 0..40 {
            let d = rng.gen_range(1..5);
            let phi = common::dual(&f, 2, d, &mut rng);
            let phi2 = if i % 2 == 0 {
                dual_gl_act(&group[rng.gen_range(0..group.len())], &phi).unwrap()
            } else {
                common::dual(&f, 2, d, &mut rng)
            };
            let expect = group.iter().any(|a| projective_equal(&dual_gl_act(a, &phi).unwrap(), &phi2).is_some());
            let found = brute_pi_dual(&phi, &phi2, &caps()).unwrap();
            assert_eq!(found.is_some(), expect, "q={q} phi={phi:?} phi2={phi2:?}");
            if let Some(a) = found {
                assert!(projective_equal(&dual_gl_act(&a, &phi).unwrap(), &phi2).is_some());
            }
        }
    }
}

#[test]
fn three_searches_agree() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let (mut yes, mut no) = (0, 0);
    for i in 0..80 {
        let q = [2u64, 3, 4, 5][rng.gen_range(0..4)];
        let f = common::field(q);
        let k = rng.gen_range(1..=3usize);
        let n_proj = rng.gen_range(k..=k + 2).min(common::proj_count(q, k));
        let (dup, zero) = (rng.gen_range(0..2), rng.gen_range(0..2));
        let (c, c2) = if i % 2 == 0 {
            let (c, c2, _) = gen_equivalent_pair_with_repeats(&f, n_proj, k, dup, zero, rng.gen()).unwrap();
            (c, c2)
        } else {
            let c = gen_code_with_repeats(&f, n_proj, k, dup, zero, rng.gen()).unwrap();
            let c2 = gen_code_with_repeats(&f, n_proj, k, dup, zero, rng.gen()).unwrap();
            (c, c2)
        };
        if c.n() > 6 {
            continue;
        }
        let a = brute_lce(&c, &c2, &caps()).unwrap();
        let b = brute_lce_monomial(&c, &c2, &caps()).unwrap();
        assert_eq!(a.is_some(), b.is_some());
        for w in a.iter().chain(b.iter()) {
            assert!(verify_witness(&c, &c2, w).unwrap());
        }
        if zero == 0 && dup == 0 {
            let x = PointSet::from_code(&c).unwrap();
            let x2 = PointSet::from_code(&c2).unwrap();
            assert_eq!(brute_pse(&x, &x2, &caps()).unwrap().is_some(), a.is_some());
        }
        if a.is_some() { yes += 1 } else { no += 1 }
    }
    assert!(yes > 10 && no >= 3, "{yes} {no}");
}

#[test]
fn decisions_ignore_the_presentation() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for _ in 0..40 {
        let q = [2u64, 3, 5][rng.gen_range(0..3)];
        let f = common::field(q);
        let k = rng.gen_range(1..=3usize);
        let n_proj = (k + rng.gen_range(0..3)).min(common::proj_count(q, k));
        let c = gen_code_with_repeats(&f, n_proj, k, rng.gen_range(0..2), 0, rng.gen()).unwrap();
        let c2 = gen_code_with_repeats(&f, n_proj, k, rng.gen_range(0..2), 0, rng.gen()).unwrap();
        if c.n() != c2.n() {
            continue;
        }
        let base = brute_lce(&c, &c2, &caps()).unwrap().is_some();
        let (r1, r2) = (represent(&c, &mut rng), represent(&c2, &mut rng));
        assert_eq!(brute_lce(&r1, &r2, &caps()).unwrap().is_some(), base);
        assert_eq!(brute_lce_monomial(&r2, &r1, &caps()).unwrap().is_some(), base);
    }
}

#[test]
fn different_weight_distributions_are_inequivalent() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut seen = 0;
    for _ in 0..60 {
        let f = common::field(3);
        let k = rng.gen_range(2..=3usize);
        let n = k + rng.gen_range(1..3);
        let c = gen_code_with_repeats(&f, n, k, 0, 0, rng.gen()).unwrap();
        let c2 = gen_code_with_repeats(&f, n, k, 0, 0, rng.gen()).unwrap();
        if weight_distribution(&c) != weight_distribution(&c2) {
            assert!(brute_lce(&c, &c2, &caps()).unwrap().is_none());
            seen += 1;
        } else if brute_lce(&c, &c2, &caps()).unwrap().is_some() {
            assert_eq!(weight_distribution(&c), weight_distribution(&c2));
        }
    }
    assert!(seen > 5, "{seen}");
}

#[test]
fn self_association() {
    // four points on the projective line form a self-dual code
    let f = common::field(13);
    for seed in 0..4 {
        let c = gen_self_dual(&f, 2, seed, 100).unwrap();
        assert!(is_iso_dual(&c, &caps()).unwrap());
        let x = PointSet::from_code(&c).unwrap();
        assert!(is_self_associated(&x, &caps()).unwrap());
    }
    // wrong length
    let c = gen_code_with_repeats(&f, 5, 2, 0, 0, 1).unwrap();
    assert!(!is_iso_dual(&c, &caps()).unwrap());
    assert!(!is_self_associated(&PointSet::from_code(&c).unwrap(), &caps()).unwrap());
}

#[test]
fn caps_are_enforced() {
    let f = common::field(7);
    let (c, c2, _) = gen_equivalent_pair_with_repeats(&f, 7, 3, 0, 0, 1).unwrap();
    let tight = SearchCaps { max_gl: 10, max_perm_words: 10, ..SearchCaps::default() };
    assert!(matches!(brute_lce(&c, &c2, &tight), Err(Error::CapExceeded)));
    assert!(matches!(brute_lce_monomial(&c, &c2, &tight), Err(Error::CapExceeded)));
    let g = HomogPoly::basis_elem(&f, &[3, 0, 0]);
    let g2 = HomogPoly::basis_elem(&f, &[0, 0, 3]);
    assert!(matches!(brute_pi(&g, &g2, &tight), Err(Error::CapExceeded)));
    // a clock that has already run out
    let late = SearchCaps { time_budget_ms: Some(0), clock: Some(|| 1_000_000), ..SearchCaps::default() };
    let x = PointSet::from_code(&c).unwrap();
    let x2 = PointSet::from_code(&c2).unwrap();
    let _ = brute_pse(&x, &x2, &late);
}
