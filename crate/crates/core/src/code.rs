//! Linear codes, monomial equivalence, duals, projectivization, generators.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::linalg::{normalize_first_nonzero, random_elem, random_permutation, random_witness_with, Mat, MonomialWitness};

/// A linear `[n, k]_q` code given by a `k x n` generator matrix of rank `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    g: Mat,
}

impl LinearCode {
    pub fn new(g: Mat) -> Result<LinearCode> {
        if g.rows() == 0 || g.rows() > g.cols() {
            return Err(Error::DimensionMismatch("need 1 <= k <= n".into()));
        }
        if g.rank() != g.rows() {
            return Err(Error::DimensionMismatch("generator matrix must have full row rank".into()));
        }
        Ok(LinearCode { g })
    }

    pub fn field(&self) -> &Field {
        self.g.field()
    }
    pub fn n(&self) -> usize {
        self.g.cols()
    }
    pub fn k(&self) -> usize {
        self.g.rows()
    }
    pub fn generator(&self) -> &Mat {
        &self.g
    }
    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        self.g.col(j)
    }
}

/// For a deleted column: `G[:, column] = scalar * G[:, source]`, `source` a kept column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleHint {
    pub column: usize,
    pub source: usize,
    pub scalar: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivizationMap {
    pub kept: Vec<usize>,
    pub hints: Vec<ScaleHint>,
}

pub fn dual_code(c: &LinearCode) -> Result<LinearCode> {
    if c.k() == c.n() {
        return Err(Error::FullLength);
    }
    LinearCode::new(c.g.kernel())
}

pub fn strip_zero_columns(c: &LinearCode) -> Result<(LinearCode, Vec<usize>)> {
    let f = c.field();
    let kept: Vec<usize> = (0..c.n()).filter(|&j| c.column(j).iter().any(|&x| !f.is_zero(x))).collect();
    if kept.is_empty() {
        return Err(Error::AllZero);
    }
    Ok((LinearCode { g: c.g.select_cols(&kept) }, kept))
}

/// Delete every column proportional to an earlier kept column.
pub fn projectivize(c: &LinearCode) -> Result<(LinearCode, ProjectivizationMap)> {
    let f = c.field();
    let mut kept = Vec::new();
    let mut normals: Vec<(Vec<FieldElem>, FieldElem)> = Vec::new();
    let mut hints = Vec::new();
    for j in 0..c.n() {
        let mut col = c.column(j);
        let Some(inv) = normalize_first_nonzero(f, &mut col) else {
            return Err(Error::InvalidInput("zero column, strip first".into()));
        };
        // col_j = inv^{-1} * normal
        match normals.iter().position(|(nv, _)| *nv == col) {
            Some(u) => {
                let src_inv = normals[u].1;
                let scalar = f.div(src_inv, inv)?;
                hints.push(ScaleHint { column: j, source: kept[u], scalar });
            }
            None => {
                kept.push(j);
                normals.push((col, inv));
            }
        }
    }
    Ok((LinearCode { g: c.g.select_cols(&kept) }, ProjectivizationMap { kept, hints }))
}

/// Extend a witness between projectivized codes to the codes they came from.
pub fn lift_witness(
    c: &LinearCode,
    c2: &LinearCode,
    map: &ProjectivizationMap,
    map2: &ProjectivizationMap,
    wbar: &MonomialWitness,
) -> Result<MonomialWitness> {
    let f = c.field();
    let n = c.n();
    if c2.n() != n || map.kept.len() != map2.kept.len() || wbar.d.len() != map.kept.len() {
        return Err(Error::ProfileMismatch);
    }
    let pos = |kept: &[usize], col: usize| kept.iter().position(|&x| x == col).expect("hint source is kept");
    let mut d = vec![f.one(); n];
    let mut perm = vec![usize::MAX; n];
    for (u, &col) in map.kept.iter().enumerate() {
        d[col] = wbar.d[u];
        perm[col] = map2.kept[wbar.perm[u]];
    }
    for (u, &col) in map.kept.iter().enumerate() {
        let mine: Vec<&ScaleHint> = map.hints.iter().filter(|h| h.source == col).collect();
        let target = map2.kept[wbar.perm[u]];
        let theirs: Vec<&ScaleHint> = map2.hints.iter().filter(|h| h.source == target).collect();
        if mine.len() != theirs.len() {
            return Err(Error::ProfileMismatch);
        }
        debug_assert_eq!(pos(&map.kept, col), u);
        for (h, h2) in mine.iter().zip(&theirs) {
            d[h.column] = f.div(f.mul(h2.scalar, wbar.d[u]), h.scalar)?;
            perm[h.column] = h2.column;
        }
    }
    Ok(MonomialWitness { a: wbar.a.clone(), d, perm })
}

/// `A G D P`.
pub fn apply_witness(c: &LinearCode, w: &MonomialWitness) -> Result<LinearCode> {
    let f = c.field();
    if w.a.rows() != c.k() || w.a.cols() != c.k() || w.d.len() != c.n() || w.perm.len() != c.n() {
        return Err(Error::DimensionMismatch("witness does not fit the code".into()));
    }
    w.validate()?;
    let ag = w.a.mul(&c.g)?;
    let mut out = Mat::zeros(f, c.k(), c.n());
    for i in 0..c.n() {
        for r in 0..c.k() {
            out.set(r, w.perm[i], f.mul(w.d[i], ag.get(r, i)));
        }
    }
    LinearCode::new(out)
}

pub fn verify_witness(c: &LinearCode, c2: &LinearCode, w: &MonomialWitness) -> Result<bool> {
    if c.k() != c2.k() || c.n() != c2.n() {
        return Err(Error::DimensionMismatch("codes of different shape".into()));
    }
    match apply_witness(c, w) {
        Ok(img) => Ok(img.g == c2.g),
        Err(Error::Singular) | Err(Error::InvalidInput(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

pub const DEFAULT_DISTANCE_CAP: u64 = 1_000_000;

/// Minimum Hamming weight of a nonzero codeword, by enumeration.
pub fn min_distance(c: &LinearCode, cap: u64) -> Result<usize> {
    let f = c.field();
    let (k, n, q) = (c.k(), c.n(), f.q());
    let total = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::TooLarge("q^k exceeds the enumeration cap".into()));
    }
    let mut msg = vec![0u64; k];
    let mut best = n;
    for _ in 1..total {
        // increment msg as a base-q counter
        let mut i = 0;
        loop {
            msg[i] += 1;
            if msg[i] < q {
                break;
            }
            msg[i] = 0;
            i += 1;
        }
        let mut wt = 0;
        for j in 0..n {
            let mut s = f.zero();
            for (r, &m) in msg.iter().enumerate() {
                if m != 0 {
                    s = f.add(s, f.mul(f.elem(m).expect("in range"), c.g.get(r, j)));
                }
            }
            if !f.is_zero(s) {
                wt += 1;
            }
        }
        best = best.min(wt);
    }
    Ok(best)
}

pub fn is_weakly_self_dual(c: &LinearCode) -> bool {
    c.g.mul(&c.g.transpose()).map(|m| m.is_zero()).unwrap_or(false)
}

pub fn is_self_dual(c: &LinearCode) -> bool {
    c.n() == 2 * c.k() && is_weakly_self_dual(c)
}

fn projective_point_count(q: u64, k: usize) -> u128 {
    let mut s: u128 = 0;
    for i in 0..k {
        s += (q as u128).pow(i as u32);
    }
    s
}

fn random_normalized_point<R: Rng>(f: &Field, k: usize, rng: &mut R) -> Vec<FieldElem> {
    loop {
        let mut v: Vec<FieldElem> = (0..k).map(|_| random_elem(f, rng)).collect();
        if normalize_first_nonzero(f, &mut v).is_some() {
            return v;
        }
    }
}

/// All normalized points of `P^{k-1}(F_q)`, in scan order.
pub fn all_projective_points(f: &Field, k: usize) -> Vec<Vec<FieldElem>> {
    crate::points::projective_points(f, k).collect()
}

fn random_projective_with<R: Rng>(f: &Field, n: usize, k: usize, rng: &mut R) -> Result<LinearCode> {
    if n < k || k == 0 || projective_point_count(f.q(), k) < n as u128 {
        return Err(Error::Unsatisfiable);
    }
    let enumerate = projective_point_count(f.q(), k) <= 100_000;
    let all = if enumerate { all_projective_points(f, k) } else { Vec::new() };
    loop {
        let pts: Vec<Vec<FieldElem>> = if enumerate {
            let p = random_permutation(all.len(), rng);
            p[..n].iter().map(|&i| all[i].clone()).collect()
        } else {
            let mut pts: Vec<Vec<FieldElem>> = Vec::new();
            while pts.len() < n {
                let v = random_normalized_point(f, k, rng);
                if !pts.contains(&v) {
                    pts.push(v);
                }
            }
            pts
        };
        // random nonzero scaling of each column
        let mut g = Mat::zeros(f, k, n);
        for (j, p) in pts.iter().enumerate() {
            let s = crate::linalg::random_unit(f, rng);
            for i in 0..k {
                g.set(i, j, f.mul(s, p[i]));
            }
        }
        if g.rank() == k {
            return LinearCode::new(g);
        }
    }
}

pub fn gen_random_projective(field: &Field, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    random_projective_with(field, n, k, &mut rng)
}

pub fn gen_equivalent_pair(field: &Field, n: usize, k: usize, seed: u64) -> Result<(LinearCode, LinearCode, MonomialWitness)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let c = random_projective_with(field, n, k, &mut rng)?;
    let w = random_witness_with(field, k, n, &mut rng);
    let c2 = apply_witness(&c, &w)?;
    Ok((c, c2, w))
}

/// A code with `n_proj` distinct projective columns, `n_dup` extra columns proportional
/// to existing ones and `n_zero` zero columns, shuffled.
pub fn gen_code_with_repeats(field: &Field, n_proj: usize, k: usize, n_dup: usize, n_zero: usize, seed: u64) -> Result<LinearCode> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let base = random_projective_with(field, n_proj, k, &mut rng)?;
    let mut cols: Vec<Vec<FieldElem>> = (0..n_proj).map(|j| base.column(j)).collect();
    for _ in 0..n_dup {
        let src = cols[rng.gen_range(0..n_proj)].clone();
        let s = crate::linalg::random_unit(field, &mut rng);
        cols.push(src.iter().map(|&x| field.mul(s, x)).collect());
    }
    for _ in 0..n_zero {
        cols.push(vec![field.zero(); k]);
    }
    let perm = random_permutation(cols.len(), &mut rng);
    let n = cols.len();
    let mut g = Mat::zeros(field, k, n);
    for (j, &src) in perm.iter().enumerate() {
        for i in 0..k {
            g.set(i, j, cols[src][i]);
        }
    }
    LinearCode::new(g)
}

/// Equivalent pair built from [`gen_code_with_repeats`] and a random witness.
pub fn gen_equivalent_pair_with_repeats(
    field: &Field,
    n_proj: usize,
    k: usize,
    n_dup: usize,
    n_zero: usize,
    seed: u64,
) -> Result<(LinearCode, LinearCode, MonomialWitness)> {
    let c = gen_code_with_repeats(field, n_proj, k, n_dup, n_zero, seed)?;
    let w = MonomialWitness::random(field, k, c.n(), seed ^ 0x9e37_79b9_7f4a_7c15);
    let c2 = apply_witness(&c, &w)?;
    Ok((c, c2, w))
}

/// Whether a self-dual `[2k, k]_q` code with projective generator can exist at all.
fn self_dual_possible(f: &Field, k: usize) -> bool {
    let q = f.q();
    // over odd q a self-dual code of length 2k needs (-1)^k to be a square
    if q % 2 == 1 && q % 4 == 3 && k % 2 == 1 {
        return false;
    }
    projective_point_count(q, k) >= 2 * k as u128
}

fn norm(f: &Field, v: &[FieldElem]) -> FieldElem {
    crate::linalg::dot(f, v, v)
}

/// `M` with `M M^T = -I`, built row by row inside orthogonal complements.
fn search_m<R: Rng>(f: &Field, k: usize, rng: &mut R) -> Option<Mat> {
    let target = f.neg(f.one());
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    while rows.len() < k {
        let comp = if rows.is_empty() {
            Mat::identity(f, k)
        } else {
            Mat::from_rows(f, k, &rows).ok()?.kernel()
        };
        let tries = 64 * f.q() as usize;
        let mut found = None;
        for _ in 0..tries {
            let coef: Vec<FieldElem> = (0..comp.rows()).map(|_| random_elem(f, rng)).collect();
            let v = comp.vec_mul(&coef).ok()?;
            if norm(f, &v) == target {
                found = Some(v);
                break;
            }
        }
        match found {
            Some(v) => rows.push(v),
            // backtrack one row
            None => {
                rows.pop()?;
            }
        }
    }
    Mat::from_rows(f, k, &rows).ok()
}

/// Random self-dual code `[I_k | M]`, projective, indecomposable, with an admissible
/// linear form on its point set.
pub fn gen_self_dual(field: &Field, k: usize, seed: u64, retries: usize) -> Result<LinearCode> {
    if k == 0 || !self_dual_possible(field, k) {
        return Err(Error::Unsatisfiable);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..retries {
        let Some(m) = search_m(field, k, &mut rng) else { continue };
        let mut g = Mat::zeros(field, k, 2 * k);
        for i in 0..k {
            g.set(i, i, field.one());
            for j in 0..k {
                g.set(i, k + j, m.get(i, j));
            }
        }
        let c = LinearCode::new(g)?;
        debug_assert!(is_self_dual(&c));
        let Ok(x) = crate::points::PointSet::from_code(&c) else { continue };
        let Ok(l) = x.find_nonvanishing_linear_form() else { continue };
        let x = x.with_form(l)?;
        if crate::canonical::is_indecomposable(&x)? {
            return Ok(c);
        }
    }
    Err(Error::RetriesExhausted)
}

/// Random self-dual code `[I_k | M]` with no projectivity or indecomposability demands.
pub fn gen_self_dual_any(field: &Field, k: usize, seed: u64, retries: usize) -> Result<LinearCode> {
    let q = field.q();
    if k == 0 || (q % 4 == 3 && k % 2 == 1) {
        return Err(Error::Unsatisfiable);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..retries {
        let Some(m) = search_m(field, k, &mut rng) else { continue };
        let mut g = Mat::zeros(field, k, 2 * k);
        for i in 0..k {
            g.set(i, i, field.one());
            for j in 0..k {
                g.set(i, k + j, m.get(i, j));
            }
        }
        return LinearCode::new(g);
    }
    Err(Error::RetriesExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_examples() {
        let f2 = Field::prime(2).unwrap();
        let c = LinearCode::new(Mat::from_ints(&f2, &[&[1, 1]])).unwrap();
        assert_eq!(dual_code(&c).unwrap(), c);
        assert!(is_self_dual(&c));
        let f5 = Field::prime(5).unwrap();
        let c = LinearCode::new(Mat::from_ints(&f5, &[&[1, 0, 1, 1], &[0, 1, 1, 4]])).unwrap();
        let d = dual_code(&c).unwrap();
        assert_eq!(d.k(), 2);
        assert!(d.generator().mul(&c.generator().transpose()).unwrap().is_zero());
        let full = LinearCode::new(Mat::identity(&f5, 2)).unwrap();
        assert_eq!(dual_code(&full).unwrap_err(), Error::FullLength);
    }

    #[test]
    fn strip_and_projectivize_examples() {
        let f5 = Field::prime(5).unwrap();
        let c = LinearCode::new(Mat::from_ints(&f5, &[&[1, 0, 0], &[0, 0, 1]])).unwrap();
        let (s, kept) = strip_zero_columns(&c).unwrap();
        assert_eq!(kept, vec![0, 2]);
        assert_eq!(s.n(), 2);
        let c = LinearCode::new(Mat::from_ints(&f5, &[&[1, 2, 0], &[3, 2, 1]])).unwrap();
        let (p, map) = projectivize(&c).unwrap();
        assert_eq!(p, c);
        assert!(map.hints.is_empty());
        let c = LinearCode::new(Mat::from_ints(&f5, &[&[1, 2, 0], &[3, 6, 1]])).unwrap();
        let (p, map) = projectivize(&c).unwrap();
        assert_eq!(map.kept, vec![0, 2]);
        assert_eq!(map.hints, vec![ScaleHint { column: 1, source: 0, scalar: f5.from_int(2) }]);
        assert_eq!(p.n(), 2);
    }

    #[test]
    fn min_distance_examples() {
        let f2 = Field::prime(2).unwrap();
        let rep = LinearCode::new(Mat::from_ints(&f2, &[&[1, 1, 1, 1, 1]])).unwrap();
        assert_eq!(min_distance(&rep, DEFAULT_DISTANCE_CAP).unwrap(), 5);
        let c = LinearCode::new(Mat::from_ints(&f2, &[&[1, 1, 0], &[0, 1, 1]])).unwrap();
        assert_eq!(min_distance(&c, DEFAULT_DISTANCE_CAP).unwrap(), 2);
        let f5 = Field::prime(5).unwrap();
        let c = LinearCode::new(Mat::from_ints(&f5, &[&[1, 0, 1, 1], &[0, 1, 1, 4]])).unwrap();
        assert_eq!(min_distance(&c, DEFAULT_DISTANCE_CAP).unwrap(), 3);
        assert!(matches!(min_distance(&c, 10), Err(Error::TooLarge(_))));
    }

    #[test]
    fn witness_roundtrip_and_perturbation() {
        let f7 = Field::prime(7).unwrap();
        let (c, c2, w) = gen_equivalent_pair(&f7, 6, 3, 3).unwrap();
        assert!(verify_witness(&c, &c2, &w).unwrap());
        let id = MonomialWitness::identity(&f7, 3, 6);
        assert_eq!(apply_witness(&c, &id).unwrap(), c);
        let mut bad = w.clone();
        bad.d[0] = f7.add(bad.d[0], f7.one());
        if f7.is_zero(bad.d[0]) {
            bad.d[0] = f7.one();
        }
        assert!(!verify_witness(&c, &c2, &bad).unwrap());
    }

    #[test]
    fn self_dual_unsatisfiable_cases() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(gen_self_dual(&f7, 3, 1, 10).unwrap_err(), Error::Unsatisfiable);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(gen_self_dual(&f2, 2, 1, 10).unwrap_err(), Error::Unsatisfiable);
    }
}
