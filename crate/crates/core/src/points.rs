//! Projective point sets, evaluation matrices, Hilbert functions, separators.
//!
//! Values at points are taken at representatives scaled so that the distinguished
//! linear form `L` equals 1 on each of them.

use alloc::vec;
use alloc::vec::Vec;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::linalg::{normalize_first_nonzero, Mat};
use crate::poly::{eval_monomials, monomial_basis, num_monomials, HomogPoly, Monomial};

/// Upper bound on the number of linear forms scanned for an admissible one.
pub const FORM_SCAN_CAP: usize = 1_000_000;

/// Normalized points of `P^{k-1}(F_q)`: leading-1 position ascending, then lex on the
/// remaining coordinates with the last coordinate varying fastest.
pub fn projective_points(field: &Field, k: usize) -> impl Iterator<Item = Vec<FieldElem>> + '_ {
    let q = field.q();
    (0..k).flat_map(move |lead| {
        let rest = (k - lead - 1) as u32;
        (0..q.pow(rest)).map(move |t| {
            let mut v = vec![field.zero(); k];
            v[lead] = field.one();
            let mut x = t;
            for i in (lead + 1..k).rev() {
                v[i] = field.elem(x % q).expect("in range");
                x /= q;
            }
            v
        })
    })
}

/// Hilbert function data of a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    /// `HF(0), ..., HF(r)`.
    pub hf: Vec<usize>,
    /// Regularity index: first degree with `HF = n`.
    pub r: usize,
    /// First differences, `delta[0] = 1`.
    pub delta: Vec<usize>,
}

impl HilbertData {
    /// `HF(d)` for any `d >= 0`.
    pub fn at(&self, d: usize) -> usize {
        self.hf[d.min(self.r)]
    }
}

/// A reduced set of points in `P^{k-1}`, optionally with an admissible linear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: Field,
    k: usize,
    points: Vec<Vec<FieldElem>>,
    form: Option<HomogPoly>,
    reps: Vec<Vec<FieldElem>>,
}

impl PointSet {
    /// Points are normalized; they must be distinct, nonzero, and span `F^k`.
    pub fn new(field: &Field, k: usize, points: Vec<Vec<FieldElem>>) -> Result<PointSet> {
        let mut pts = Vec::with_capacity(points.len());
        for mut p in points {
            if p.len() != k {
                return Err(Error::DimensionMismatch("point length".into()));
            }
            if normalize_first_nonzero(field, &mut p).is_none() || pts.contains(&p) {
                return Err(Error::NotProjective);
            }
            pts.push(p);
        }
        if pts.is_empty() {
            return Err(Error::NotProjective);
        }
        let x = PointSet { field: field.clone(), k, points: pts, form: None, reps: Vec::new() };
        if x.coordinate_matrix().rank() != k {
            return Err(Error::DimensionMismatch("points do not span the ambient space".into()));
        }
        Ok(x)
    }

    /// Points given by the columns of a projective generator matrix.
    pub fn from_code(c: &LinearCode) -> Result<PointSet> {
        let cols = (0..c.n()).map(|j| c.column(j)).collect();
        PointSet::new(c.field(), c.k(), cols)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn n(&self) -> usize {
        self.points.len()
    }
    pub fn points(&self) -> &[Vec<FieldElem>] {
        &self.points
    }
    pub fn form(&self) -> Option<&HomogPoly> {
        self.form.as_ref()
    }

    /// `L`-normalized representatives.
    pub fn reps(&self) -> Result<&[Vec<FieldElem>]> {
        if self.form.is_none() {
            return Err(Error::MissingL);
        }
        Ok(&self.reps)
    }

    /// `k x n` matrix whose columns are the normalized points.
    pub fn coordinate_matrix(&self) -> Mat {
        let mut g = Mat::zeros(&self.field, self.k, self.n());
        for (j, p) in self.points.iter().enumerate() {
            for i in 0..self.k {
                g.set(i, j, p[i]);
            }
        }
        g
    }

    /// Whether the linear form vanishes at none of the points.
    pub fn is_admissible(&self, l: &HomogPoly) -> bool {
        l.degree() == 1
            && l.k() == self.k
            && self.points.iter().all(|p| !self.field.is_zero(l.evaluate(p).expect("length checked")))
    }

    /// All admissible linear forms, up to scalar, in scan order.
    pub fn admissible_forms(&self) -> impl Iterator<Item = HomogPoly> + '_ {
        projective_points(&self.field, self.k)
            .take(FORM_SCAN_CAP)
            .map(|c| HomogPoly::linear(&self.field, &c))
            .filter(|l| self.is_admissible(l))
    }

    /// First admissible linear form in scan order.
    pub fn find_nonvanishing_linear_form(&self) -> Result<HomogPoly> {
        self.admissible_forms().next().ok_or(Error::BlockingSet)
    }

    /// Attach a linear form and compute the normalized representatives.
    pub fn with_form(mut self, l: HomogPoly) -> Result<PointSet> {
        if l.k() != self.k || l.degree() != 1 {
            return Err(Error::DimensionMismatch("form must be linear in k variables".into()));
        }
        let f = &self.field;
        let mut reps = Vec::with_capacity(self.n());
        for p in &self.points {
            let v = l.evaluate(p)?;
            let inv = f.inv(v).map_err(|_| Error::InvalidInput("form vanishes at a point".into()))?;
            reps.push(p.iter().map(|&x| f.mul(inv, x)).collect());
        }
        self.reps = reps;
        self.form = Some(l);
        Ok(self)
    }

    /// Attach the first admissible form.
    pub fn with_default_form(self) -> Result<PointSet> {
        let l = self.find_nonvanishing_linear_form()?;
        self.with_form(l)
    }

    /// `{A p}`, without a form.
    pub fn apply(&self, a: &Mat) -> Result<PointSet> {
        let pts = self.points.iter().map(|p| a.mul_vec(p)).collect::<Result<Vec<_>>>()?;
        PointSet::new(&self.field, self.k, pts)
    }

    /// Equality of the underlying sets of points.
    pub fn same_points(&self, other: &PointSet) -> bool {
        if self.k != other.k || self.n() != other.n() {
            return false;
        }
        let mut a = self.points.clone();
        let mut b = other.points.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Entry `(i, alpha)` is `rep_i^alpha`.
    pub fn evaluation_matrix(&self, d: usize) -> Result<Mat> {
        let reps = self.reps()?;
        let cols = num_monomials(self.k, d);
        let mut data = Vec::with_capacity(self.n() * cols);
        for r in reps {
            data.extend(eval_monomials(&self.field, r, d));
        }
        Mat::from_vec(&self.field, self.n(), cols, data)
    }

    pub fn hilbert_function(&self) -> Result<HilbertData> {
        let n = self.n();
        let mut hf = Vec::new();
        let mut d = 0;
        loop {
            let h = self.evaluation_matrix(d)?.rank();
            hf.push(h);
            if h == n {
                break;
            }
            d += 1;
        }
        let delta = (0..hf.len()).map(|i| if i == 0 { hf[0] } else { hf[i] - hf[i - 1] }).collect();
        Ok(HilbertData { r: hf.len() - 1, hf, delta })
    }

    pub fn regularity_index(&self) -> Result<usize> {
        Ok(self.hilbert_function()?.r)
    }

    /// Basis of `(I_X)_d` as coefficient rows.
    pub fn ideal_piece_matrix(&self, d: usize) -> Result<Mat> {
        Ok(self.evaluation_matrix(d)?.kernel())
    }

    /// Basis of `(I_X)_d`.
    pub fn ideal_piece(&self, d: usize) -> Result<Vec<HomogPoly>> {
        let m = self.ideal_piece_matrix(d)?;
        (0..m.rows()).map(|i| HomogPoly::from_coeffs(&self.field, self.k, d, m.row(i).to_vec())).collect()
    }

    /// Reduced degrevlex Groebner basis of `I_X` and the order ideal of its reduction
    /// modulo `L`.
    pub fn buchberger_moller(&self) -> Result<(Vec<HomogPoly>, Vec<Monomial>)> {
        let hd = self.hilbert_function()?;
        let mut gb: Vec<HomogPoly> = Vec::new();
        let mut leading: Vec<Monomial> = Vec::new();
        for d in 1..=hd.r + 1 {
            let piece = self.ideal_piece_matrix(d)?.rref();
            let basis = monomial_basis(self.k, d);
            for (row, &pc) in piece.pivots.iter().enumerate() {
                let lt = &basis[pc];
                if leading.iter().any(|m| m.divides(lt)) {
                    continue;
                }
                gb.push(HomogPoly::from_coeffs(&self.field, self.k, d, piece.r.row(row).to_vec())?);
                leading.push(lt.clone());
            }
        }
        let order_ideal = crate::canonical::artinian_reduction(self)?.order_ideal;
        Ok((gb, order_ideal))
    }

    /// For each point, a degree-`r` form taking value 1 there and 0 at the others.
    pub fn separators(&self) -> Result<Vec<HomogPoly>> {
        let r = self.regularity_index()?;
        let e = self.evaluation_matrix(r)?;
        let f = &self.field;
        (0..self.n())
            .map(|i| {
                let mut b = vec![f.zero(); self.n()];
                b[i] = f.one();
                let c = e.solve(&b).ok_or(Error::InvalidInput("separator system inconsistent".into()))?;
                HomogPoly::from_coeffs(f, self.k, r, c)
            })
            .collect()
    }

    /// Least degree of a separator of point `i`.
    pub fn sepdeg(&self, i: usize) -> Result<usize> {
        let r = self.regularity_index()?;
        let others: Vec<usize> = (0..self.n()).filter(|&j| j != i).collect();
        for d in 0..=r {
            let e = self.evaluation_matrix(d)?;
            if e.select_rows(&others).rank() < e.rank() {
                return Ok(d);
            }
        }
        Ok(r)
    }

    /// Whether every point has separator degree `r`.
    pub fn cayley_bacharach(&self) -> Result<bool> {
        let r = self.regularity_index()?;
        for i in 0..self.n() {
            if self.sepdeg(i)? != r {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Points whose coordinate matrix `G'` is a kernel basis of `G D`, so `G' D G^T = 0`.
    pub fn gale_transform(&self, d: Option<&[FieldElem]>) -> Result<PointSet> {
        let n = self.n();
        if n <= self.k {
            return Err(Error::DimensionMismatch("need n > k".into()));
        }
        let f = &self.field;
        let ones = vec![f.one(); n];
        let d = d.unwrap_or(&ones);
        if d.len() != n || d.iter().any(|&x| f.is_zero(x)) {
            return Err(Error::InvalidInput("diagonal must be invertible of size n".into()));
        }
        let g = self.coordinate_matrix();
        let gd = g.mul(&Mat::diagonal(f, d))?;
        let gp = gd.kernel();
        debug_assert!(gp.mul(&gd.transpose())?.is_zero());
        let l = gp.rows();
        let cols: Vec<Vec<FieldElem>> = (0..n).map(|j| gp.col(j)).collect();
        match PointSet::new(f, l, cols) {
            Ok(x) => Ok(x),
            Err(Error::NotProjective) => Err(Error::Degenerate),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(f: &Field, rows: &[&[i64]]) -> Vec<Vec<FieldElem>> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect()
    }

    #[test]
    fn from_code_examples() {
        let f3 = Field::prime(3).unwrap();
        let c = LinearCode::new(Mat::identity(&f3, 2)).unwrap();
        assert_eq!(PointSet::from_code(&c).unwrap().points(), pts(&f3, &[&[1, 0], &[0, 1]]).as_slice());
        let f5 = Field::prime(5).unwrap();
        let c = LinearCode::new(Mat::from_ints(&f5, &[&[1, 0, 1, 1], &[0, 1, 1, 4]])).unwrap();
        let x = PointSet::from_code(&c).unwrap();
        assert_eq!(x.points(), pts(&f5, &[&[1, 0], &[0, 1], &[1, 1], &[1, 4]]).as_slice());
        let dup = LinearCode::new(Mat::from_ints(&f5, &[&[1, 2, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(PointSet::from_code(&dup).unwrap_err(), Error::NotProjective);
    }

    #[test]
    fn form_scan() {
        let f3 = Field::prime(3).unwrap();
        let x = PointSet::new(&f3, 2, pts(&f3, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        let l = x.find_nonvanishing_linear_form().unwrap();
        assert_eq!(l, HomogPoly::linear(&f3, &pts(&f3, &[&[1, 1]])[0]));
        let all = PointSet::new(&f3, 2, pts(&f3, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]])).unwrap();
        assert_eq!(all.find_nonvanishing_linear_form().unwrap_err(), Error::BlockingSet);
        let single = PointSet::new(&f3, 1, pts(&f3, &[&[1]])).unwrap();
        assert_eq!(single.find_nonvanishing_linear_form().unwrap(), HomogPoly::linear(&f3, &[f3.one()]));
    }

    #[test]
    fn evaluation_and_hilbert() {
        let f3 = Field::prime(3).unwrap();
        let x = PointSet::new(&f3, 2, pts(&f3, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(x.evaluation_matrix(1).unwrap_err(), Error::MissingL);
        let l = HomogPoly::linear(&f3, &[f3.one(), f3.from_int(2)]);
        let x = x.with_form(l).unwrap();
        assert_eq!(x.evaluation_matrix(0).unwrap(), Mat::from_ints(&f3, &[&[1], &[1]]));
        assert_eq!(x.evaluation_matrix(1).unwrap(), Mat::from_ints(&f3, &[&[1, 0], &[0, 2]]));
        let f5 = Field::prime(5).unwrap();
        let x3 = PointSet::new(&f5, 2, pts(&f5, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap().with_default_form().unwrap();
        let h = x3.hilbert_function().unwrap();
        assert_eq!((h.hf, h.r), (vec![1, 2, 3], 2));
        let x4 = PointSet::new(&f5, 2, pts(&f5, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]])).unwrap().with_default_form().unwrap();
        let h = x4.hilbert_function().unwrap();
        assert_eq!((h.delta, h.r), (vec![1, 1, 1, 1], 3));
    }

    #[test]
    fn ideal_pieces_and_gb() {
        let f3 = Field::prime(3).unwrap();
        let x = PointSet::new(&f3, 2, pts(&f3, &[&[1, 0], &[0, 1]])).unwrap().with_default_form().unwrap();
        assert!(x.ideal_piece(0).unwrap().is_empty());
        assert_eq!(x.ideal_piece(2).unwrap(), vec![HomogPoly::basis_elem(&f3, &[1, 1])]);
        let (gb, oi) = x.buchberger_moller().unwrap();
        assert_eq!(gb, vec![HomogPoly::basis_elem(&f3, &[1, 1])]);
        assert_eq!(oi, vec![Monomial::new(vec![0, 0]), Monomial::new(vec![0, 1])]);
        let single = PointSet::new(&f3, 1, pts(&f3, &[&[1]])).unwrap().with_default_form().unwrap();
        let (gb, oi) = single.buchberger_moller().unwrap();
        assert!(gb.is_empty());
        assert_eq!(oi, vec![Monomial::new(vec![0])]);
    }

    #[test]
    fn cayley_bacharach_examples() {
        let f5 = Field::prime(5).unwrap();
        let line = PointSet::new(&f5, 2, pts(&f5, &[&[1, 0], &[0, 1], &[1, 1], &[1, 3]])).unwrap().with_default_form().unwrap();
        assert!(line.cayley_bacharach().unwrap());
        let x = PointSet::new(&f5, 3, pts(&f5, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]))
            .unwrap()
            .with_default_form()
            .unwrap();
        assert_eq!(x.regularity_index().unwrap(), 2);
        assert_eq!(x.sepdeg(2).unwrap(), 1);
        assert!(!x.cayley_bacharach().unwrap());
        let single = PointSet::new(&f5, 1, pts(&f5, &[&[1]])).unwrap().with_default_form().unwrap();
        assert!(single.cayley_bacharach().unwrap());
    }

    #[test]
    fn separators_three_points() {
        let f5 = Field::prime(5).unwrap();
        let x = PointSet::new(&f5, 2, pts(&f5, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap().with_default_form().unwrap();
        let seps = x.separators().unwrap();
        let reps = x.reps().unwrap();
        for (i, s) in seps.iter().enumerate() {
            assert_eq!(s.degree(), 2);
            for (j, r) in reps.iter().enumerate() {
                assert_eq!(s.evaluate(r).unwrap(), if i == j { f5.one() } else { f5.zero() });
            }
        }
    }
}
