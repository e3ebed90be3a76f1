mod common;

use apolar_core::canonical::{
    artinian_reduction, canonical_piece, doubling_hf, doubling_hf_formula, doubling_ideal, is_arith_gorenstein,
    is_indecomposable, iso_dual_canonical_generator, iso_dual_profile, minimal_generators, multiply_into_piece,
    omega_min_gen_degrees,
};
use apolar_core::code::gen_self_dual;
use apolar_core::gf::FieldElem;
use apolar_core::linalg::Mat;
use apolar_core::points::PointSet;
use apolar_core::poly::{eval_monomials, monomial_basis};
use apolar_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Canonical module as `Hom_{F[L]}(R, F[L])(-1)`, with `R` presented by a free `F[L]`-basis of
/// monomials chosen greedily from evaluations at the points.
struct HomModel {
    degs: Vec<usize>,
    /// `mult[m]` sends the coefficients of a degree-`d` element to those in degree `d + 1`.
    mult: Vec<Mat>,
}

impl HomModel {
    fn new(x: &PointSet) -> HomModel {
        let f = x.field();
        let n = x.n();
        let reps = x.reps().unwrap();
        let mut chosen: Vec<Vec<u32>> = Vec::new();
        let mut vals: Vec<Vec<FieldElem>> = Vec::new();
        let mut degs = Vec::new();
        let mut d = 0;
        while chosen.len() < n {
            for m in monomial_basis(x.k(), d) {
                let v: Vec<FieldElem> = reps.iter().map(|p| eval_monomials(f, p, d)[m.index()]).collect();
                let mut rows = vals.clone();
                rows.push(v.clone());
                if Mat::from_rows(f, n, &rows).unwrap().rank() > vals.len() {
                    vals.push(v);
                    chosen.push(m.exps.clone());
                    degs.push(d);
                }
            }
            d += 1;
        }
        // columns of t are the basis evaluated at the points
        let t = Mat::from_rows(f, n, &vals).unwrap().transpose();
        let tinv = t.invert().unwrap();
        let mult = (0..x.k())
            .map(|m| {
                let mut e = t.clone();
                for (p, rep) in reps.iter().enumerate() {
                    for i in 0..n {
                        e.set(p, i, f.mul(rep[m], t.get(p, i)));
                    }
                }
                tinv.mul(&e).unwrap().transpose()
            })
            .collect();
        HomModel { degs, mult }
    }

    /// Basis of the homogeneous piece of `Hom` in degree `delta`.
    fn piece(&self, x: &PointSet, delta: i64) -> Mat {
        let f = x.field();
        let n = self.degs.len();
        let rows: Vec<Vec<FieldElem>> = (0..n)
            .filter(|&i| self.degs[i] as i64 + delta >= 0)
            .map(|i| {
                let mut v = vec![f.zero(); n];
                v[i] = f.one();
                v
            })
            .collect();
        Mat::from_rows(f, n, &rows).unwrap()
    }

    /// Minimal generator degrees of the canonical module by graded Nakayama.
    fn generator_degrees(&self, x: &PointSet) -> Vec<i64> {
        let f = x.field();
        let n = self.degs.len();
        let top = *self.degs.iter().max().unwrap() as i64;
        let mut out = Vec::new();
        for delta in -top..=1 {
            let here = self.piece(x, delta);
            let below = self.piece(x, delta - 1);
            let mut rows = Vec::new();
            for i in 0..below.rows() {
                for m in &self.mult {
                    rows.push(m.mul_vec(below.row(i)).unwrap());
                }
            }
            let image = Mat::from_rows(f, n, &rows).unwrap();
            assert!(image.rows() == 0 || here.vstack(&image).unwrap().rank() == here.rows());
            for _ in 0..here.rows() - image.rank() {
                out.push(delta + 1);
            }
        }
        out
    }
}

/// Whether the points split into two nonempty parts spanning complementary subspaces.
fn decomposable_by_search(x: &PointSet) -> bool {
    let n = x.n();
    let g = x.coordinate_matrix();
    (1..(1u32 << (n - 1))).any(|mask| {
        let mask = mask << 1;
        let a: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let b: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        g.select_cols(&a).rank() + g.select_cols(&b).rank() == x.k()
    })
}

/// Points spread over two complementary coordinate subspaces, then mixed by a random matrix.
fn decomposable_instance(rng: &mut ChaCha20Rng) -> Option<PointSet> {
    let q = [5u64, 7, 9][rng.gen_range(0..3)];
    let f = common::field(q);
    let k = rng.gen_range(2..=4usize);
    let a = rng.gen_range(1..k);
    let mut pts = Vec::new();
    for (lo, hi) in [(0, a), (a, k)] {
        let dim = hi - lo;
        let count = rng.gen_range(dim..=dim + 2);
        let sub = apolar_core::code::gen_random_projective(&f, count.min(common::proj_count(q, dim)), dim, rng.gen()).ok()?;
        for j in 0..sub.n() {
            let mut p = vec![f.zero(); k];
            for (t, v) in sub.column(j).into_iter().enumerate() {
                p[lo + t] = v;
            }
            pts.push(p);
        }
    }
    let x = PointSet::new(&f, k, pts).ok()?;
    x.apply(&common::invertible(&f, k, rng)).ok()?.with_default_form().ok()
}

#[test]
fn omega_generators_match_the_hom_model() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    for _ in 0..60 {
        let x = common::random_instance(&mut rng, &[3, 5, 7, 9], 4);
        let model = HomModel::new(&x);
        assert_eq!(omega_min_gen_degrees(&x).unwrap(), model.generator_degrees(&x));
    }
    for _ in 0..30 {
        let Some(x) = decomposable_instance(&mut rng) else { continue };
        let model = HomModel::new(&x);
        assert_eq!(omega_min_gen_degrees(&x).unwrap(), model.generator_degrees(&x));
    }
}

#[test]
fn omega_hilbert_function_reads_off_the_pieces() {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    for _ in 0..40 {
        let x = common::random_instance(&mut rng, &[3, 5, 7, 9], 4);
        let h = x.hilbert_function().unwrap();
        let r = h.r as i64;
        let model = HomModel::new(&x);
        for j in 0..=h.r + 1 {
            let i = -r + 1 + j as i64;
            let expect = x.n() - if i <= 0 { h.at((-i) as usize) } else { 0 };
            assert_eq!(canonical_piece(&x, j).unwrap().dim(), expect);
            assert_eq!(model.piece(&x, i - 1).rows(), expect);
        }
    }
}

#[test]
fn indecomposability_matches_partition_search() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..60 {
        let x = common::random_instance(&mut rng, &[3, 5, 7], 4);
        let expect = !decomposable_by_search(&x);
        assert_eq!(is_indecomposable(&x).unwrap(), expect);
        if expect { yes += 1 } else { no += 1 }
    }
    for _ in 0..40 {
        let Some(x) = decomposable_instance(&mut rng) else { continue };
        assert!(decomposable_by_search(&x));
        assert!(!is_indecomposable(&x).unwrap());
        no += 1;
    }
    assert!(yes > 10 && no > 10, "{yes} {no}");
}

#[test]
fn multiplication_stays_in_the_pieces() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for _ in 0..20 {
        let x = common::random_instance(&mut rng, &[5, 7], 3);
        let r = x.regularity_index().unwrap();
        for j in 0..r {
            let v = canonical_piece(&x, j).unwrap();
            for i in 0..v.dim() {
                for m in 0..x.k() {
                    let w = multiply_into_piece(&x, m, v.basis.row(i), j).unwrap();
                    assert!(canonical_piece(&x, j + 1).unwrap().contains(&w));
                }
            }
        }
        let outside = vec![x.field().one(); x.n()];
        if !canonical_piece(&x, 0).unwrap().contains(&outside) {
            assert_eq!(multiply_into_piece(&x, 0, &outside, 0).unwrap_err(), Error::NotInPiece);
        }
    }
}

#[test]
fn self_dual_characterizations_agree() {
    for (q, k) in [(13u64, 2usize), (5, 3), (9, 3), (5, 4), (9, 4), (13, 3)] {
        let f = common::field(q);
        for seed in 0..4 {
            let c = gen_self_dual(&f, k, seed, 200).unwrap();
            let x = PointSet::from_code(&c).unwrap().with_default_form().unwrap();
            assert!(iso_dual_profile(&x).unwrap());
            assert!(is_arith_gorenstein(&x).unwrap());
            assert_eq!(omega_min_gen_degrees(&x).unwrap(), vec![-2]);
            assert_eq!(HomModel::new(&x).generator_degrees(&x), vec![-2]);
            let (pi, beta) = iso_dual_canonical_generator(&x).unwrap();
            assert_eq!(beta[0], f.one());
            assert_eq!(pi.degree(), 3);
            assert_eq!(minimal_generators(&x).unwrap().len(), 1);
        }
    }
}

#[test]
fn doubling_hilbert_function_and_shifted_pieces() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for _ in 0..25 {
        let x = common::random_instance(&mut rng, &[3, 5, 7, 9], 4);
        let f = x.field();
        let r = x.regularity_index().unwrap();
        for i in 0..3 {
            let hf = doubling_hf(&x, i).unwrap();
            assert_eq!(hf, doubling_hf_formula(&x, i).unwrap());
            assert_eq!(*hf.last().unwrap(), 1);
            // evaluating the doubling ideal at the points gives the shifted canonical pieces
            let dbl = doubling_ideal(&x, i).unwrap();
            for d in 0..=dbl.socle_degree {
                let piece = dbl.piece(f, x.k(), d).unwrap();
                let vals = piece.mul(&x.evaluation_matrix(d).unwrap().transpose()).unwrap();
                if d >= r + i {
                    assert!(vals.same_row_space(&canonical_piece(&x, d - r - i).unwrap().basis));
                } else {
                    assert!(vals.is_zero());
                }
            }
        }
    }
}

#[test]
fn artinian_reduction_examples() {
    let f = common::field(3);
    let pts: Vec<Vec<FieldElem>> = [[1, 0], [0, 1], [1, 1]].iter().map(|r| r.iter().map(|&v| f.from_int(v)).collect()).collect();
    let x = PointSet::new(&f, 2, pts).unwrap().with_default_form().unwrap();
    let ar = artinian_reduction(&x).unwrap();
    assert_eq!(ar.pivot, 0);
    assert_eq!(ar.others, vec![1]);
    assert_eq!(ar.hf, vec![1, 1, 1, 0]);
    assert_eq!(ar.order_ideal.len(), 3);
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    for _ in 0..20 {
        let x = common::random_instance(&mut rng, &[5, 7], 4);
        let ar = artinian_reduction(&x).unwrap();
        let h = x.hilbert_function().unwrap();
        for d in 0..=h.r {
            assert_eq!(ar.hf[d], h.delta[d]);
        }
        assert_eq!(ar.hf[h.r + 1], 0);
    }
}
