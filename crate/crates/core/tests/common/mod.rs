#![allow(dead_code)]

use apolar_core::code::gen_random_projective;
use apolar_core::gf::{Field, FieldElem};
use apolar_core::linalg::Mat;
use apolar_core::points::PointSet;
use apolar_core::poly::{num_monomials, DualPoly, HomogPoly};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

pub fn field(q: u64) -> Field {
    match q {
        4 => Field::new(2, 2, None).unwrap(),
        8 => Field::new(2, 3, None).unwrap(),
        9 => Field::new(3, 2, None).unwrap(),
        16 => Field::new(2, 4, None).unwrap(),
        25 => Field::new(5, 2, None).unwrap(),
        27 => Field::new(3, 3, None).unwrap(),
        _ => Field::prime(q).unwrap(),
    }
}

pub fn small_fields() -> Vec<Field> {
    [2u64, 3, 4, 5, 7, 8, 9].iter().map(|&q| field(q)).collect()
}

pub fn elem(f: &Field, rng: &mut ChaCha20Rng) -> FieldElem {
    f.elem(rng.gen_range(0..f.q())).unwrap()
}

pub fn unit(f: &Field, rng: &mut ChaCha20Rng) -> FieldElem {
    f.elem(rng.gen_range(1..f.q())).unwrap()
}

pub fn vector(f: &Field, n: usize, rng: &mut ChaCha20Rng) -> Vec<FieldElem> {
    (0..n).map(|_| elem(f, rng)).collect()
}

pub fn matrix(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> Mat {
    Mat::from_vec(f, rows, cols, vector(f, rows * cols, rng)).unwrap()
}

/// Random matrix of the given rank, as a product of random full-rank factors.
pub fn matrix_of_rank(f: &Field, rows: usize, cols: usize, rank: usize, rng: &mut ChaCha20Rng) -> Mat {
    loop {
        let a = matrix(f, rows, rank, rng);
        let b = matrix(f, rank, cols, rng);
        let m = a.mul(&b).unwrap();
        if m.rank() == rank {
            return m;
        }
    }
}

pub fn invertible(f: &Field, k: usize, rng: &mut ChaCha20Rng) -> Mat {
    Mat::random_invertible(f, k, rng.gen())
}

pub fn homog(f: &Field, k: usize, d: usize, rng: &mut ChaCha20Rng) -> HomogPoly {
    HomogPoly::from_coeffs(f, k, d, vector(f, num_monomials(k, d), rng)).unwrap()
}

pub fn dual(f: &Field, k: usize, d: usize, rng: &mut ChaCha20Rng) -> DualPoly {
    DualPoly::from_coeffs(f, k, d, vector(f, num_monomials(k, d), rng)).unwrap()
}

pub fn proj_count(q: u64, k: usize) -> usize {
    ((q.pow(k as u32) - 1) / (q - 1)) as usize
}

/// Random point set with its first admissible form; `None` for blocking sets.
pub fn point_set(f: &Field, n: usize, k: usize, seed: u64) -> Option<PointSet> {
    let c = gen_random_projective(f, n, k, seed).ok()?;
    PointSet::from_code(&c).ok()?.with_default_form().ok()
}

/// Random `(q, k, n)` with `k + 1 <= n <= 2k + 2` and a point set that admits a form.
pub fn random_instance(rng: &mut ChaCha20Rng, qs: &[u64], kmax: usize) -> PointSet {
    loop {
        let q = qs[rng.gen_range(0..qs.len())];
        let k = rng.gen_range(2..=kmax);
        let hi = (2 * k + 2).min(proj_count(q, k));
        if hi < k + 1 {
            continue;
        }
        let n = rng.gen_range(k + 1..=hi);
        if let Some(x) = point_set(&field(q), n, k, rng.gen()) {
            return x;
        }
    }
}
