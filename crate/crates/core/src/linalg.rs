//! Dense matrices over a finite field and the witness algebra for code equivalence.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

/// Row-major dense matrix over `field`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub r: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch("entry count".into()));
        }
        Ok(Mat { field: field.clone(), rows, cols, data })
    }

    /// Build from rows; all rows must have length `cols`.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<FieldElem>]) -> Result<Mat> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch("row length".into()));
            }
            data.extend_from_slice(r);
        }
        Ok(Mat { field: field.clone(), rows: rows.len(), cols, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| field.from_int(x))).collect();
        Mat { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn diagonal(field: &Field, d: &[FieldElem]) -> Mat {
        let mut m = Mat::zeros(field, d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Permutation matrix with `P[i][perm[i]] = 1`.
    pub fn permutation(field: &Field, perm: &[usize]) -> Mat {
        let mut m = Mat::zeros(field, perm.len(), perm.len());
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, field.one());
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_mut(&mut self, i: usize) -> &mut [FieldElem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn row_vecs(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.index() == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("matrix product".into()));
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if f.is_zero(a) {
                    continue;
                }
                let orow = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector product".into()));
        }
        let f = &self.field;
        Ok((0..self.rows).map(|i| dot(f, self.row(i), v)).collect())
    }

    /// `v^T M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch("vector-matrix product".into()));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, &a) in v.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElem) -> Mat {
        let f = &self.field;
        Mat { data: self.data.iter().map(|&x| f.mul(c, x)).collect(), ..self.clone() }
    }

    /// Stack rows of `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Keep the listed columns in order.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Mat { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut r = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&i| !f.is_zero(r.get(i, col))) else {
                continue;
            };
            if piv != row {
                for j in 0..self.cols {
                    r.data.swap(piv * self.cols + j, row * self.cols + j);
                }
            }
            let inv = f.inv(r.get(row, col)).expect("pivot nonzero");
            for j in col..self.cols {
                let v = f.mul(inv, r.get(row, j));
                r.set(row, j, v);
            }
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let c = r.get(i, col);
                if f.is_zero(c) {
                    continue;
                }
                for j in col..self.cols {
                    let v = f.sub(r.get(i, j), f.mul(c, r.get(row, j)));
                    r.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref { r, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : M v = 0}` as rows, each with first nonzero entry 1.
    pub fn kernel(&self) -> Mat {
        let f = &self.field;
        let Rref { r, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, f.neg(r.get(i, fc)));
            }
            normalize_first_nonzero(f, out.row_mut(k));
        }
        out
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space(&self) -> Mat {
        let Rref { r, rank, .. } = self.rref();
        let idx: Vec<usize> = (0..rank).collect();
        r.select_rows(&idx)
    }

    /// Whether the row spaces of `self` and `other` coincide.
    pub fn same_row_space(&self, other: &Mat) -> bool {
        self.cols == other.cols && self.row_space() == other.row_space()
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[FieldElem]) -> bool {
        let base = self.rank();
        let mut m = self.clone();
        m.data.extend_from_slice(v);
        m.rows += 1;
        m.rank() == base
    }

    pub fn invert(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Mat::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, f.one());
        }
        let Rref { r, pivots, .. } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.select_cols(&cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Some `x` with `M x = b`, free variables set to zero.
    pub fn solve(&self, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let mut aug = Mat::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            aug.set(i, self.cols, b[i]);
        }
        let Rref { r, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    pub fn random_invertible(field: &Field, k: usize, seed: u64) -> Mat {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        random_invertible_with(field, k, &mut rng)
    }
}

pub(crate) fn random_invertible_with<R: Rng>(field: &Field, k: usize, rng: &mut R) -> Mat {
    loop {
        let data = (0..k * k).map(|_| random_elem(field, rng)).collect();
        let m = Mat { field: field.clone(), rows: k, cols: k, data };
        if m.is_invertible() {
            return m;
        }
    }
}

pub(crate) fn random_elem<R: Rng>(field: &Field, rng: &mut R) -> FieldElem {
    field.elem(rng.gen_range(0..field.q())).expect("in range")
}

pub(crate) fn random_unit<R: Rng>(field: &Field, rng: &mut R) -> FieldElem {
    field.elem(rng.gen_range(1..field.q())).expect("in range")
}

pub fn dot(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    a.iter().zip(b).fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Scale `v` so its first nonzero entry is 1; returns the factor applied.
pub fn normalize_first_nonzero(f: &Field, v: &mut [FieldElem]) -> Option<FieldElem> {
    let lead = v.iter().copied().find(|x| !f.is_zero(*x))?;
    let inv = f.inv(lead).expect("nonzero");
    for x in v.iter_mut() {
        *x = f.mul(inv, *x);
    }
    Some(inv)
}

/// Fisher-Yates shuffle of `0..n`.
pub(crate) fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// A triple `(A, D, P)` with `G' = A G D P`.
///
/// `d` holds the diagonal of `D`; `perm` is the image array of the permutation, so
/// column `perm[i]` of `G'` equals `d[i] A G[:, i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialWitness {
    pub a: Mat,
    pub d: Vec<FieldElem>,
    pub perm: Vec<usize>,
}

impl MonomialWitness {
    pub fn identity(field: &Field, k: usize, n: usize) -> MonomialWitness {
        MonomialWitness { a: Mat::identity(field, k), d: vec![field.one(); n], perm: (0..n).collect() }
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let f = self.a.field();
        let n = self.d.len();
        if !self.a.is_invertible() {
            return Err(Error::Singular);
        }
        if self.d.iter().any(|&x| f.is_zero(x)) {
            return Err(Error::Singular);
        }
        let mut seen = vec![false; n];
        if self.perm.len() != n {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        for &j in &self.perm {
            if j >= n || seen[j] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[j] = true;
        }
        Ok(())
    }

    pub fn d_matrix(&self) -> Mat {
        Mat::diagonal(self.a.field(), &self.d)
    }

    pub fn p_matrix(&self) -> Mat {
        Mat::permutation(self.a.field(), &self.perm)
    }

    /// Applying `w1` then `w2` equals applying the result.
    pub fn compose(w1: &MonomialWitness, w2: &MonomialWitness) -> Result<MonomialWitness> {
        let f = w1.a.field();
        if w1.d.len() != w2.d.len() {
            return Err(Error::DimensionMismatch("witness length".into()));
        }
        let a = w2.a.mul(&w1.a)?;
        let d = (0..w1.d.len()).map(|i| f.mul(w1.d[i], w2.d[w1.perm[i]])).collect();
        let perm = (0..w1.d.len()).map(|i| w2.perm[w1.perm[i]]).collect();
        Ok(MonomialWitness { a, d, perm })
    }

    pub fn random(field: &Field, k: usize, n: usize, seed: u64) -> MonomialWitness {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        random_witness_with(field, k, n, &mut rng)
    }
}

pub(crate) fn random_witness_with<R: Rng>(field: &Field, k: usize, n: usize, rng: &mut R) -> MonomialWitness {
    let a = random_invertible_with(field, k, rng);
    let d = (0..n).map(|_| random_unit(field, rng)).collect();
    let perm = random_permutation(n, rng);
    MonomialWitness { a, d, perm }
}
