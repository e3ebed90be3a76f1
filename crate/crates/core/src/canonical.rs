//! Canonical module and canonical ideal of a point set, doublings, Artinian reduction.
//!
//! Elements of the canonical ideal in degree `r + j` are stored as coefficient vectors
//! `c` standing for `L^j (c_1 f_1 + ... + c_n f_n)`, where `f_i` are the degree-`r`
//! separators. Multiplication by `x_m` acts diagonally through the values `x_m(rep_i)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::linalg::Mat;
use crate::points::PointSet;
use crate::poly::{monomial_basis, num_monomials, HomogPoly, Monomial};

/// The space `V_j` of coefficient vectors of the canonical ideal in degree `r + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPiece {
    pub j: usize,
    /// Rows form an RREF basis of `V_j`.
    pub basis: Mat,
}

impl CanonicalPiece {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn contains(&self, c: &[FieldElem]) -> bool {
        self.basis.row_space_contains(c)
    }
}

pub fn canonical_piece(x: &PointSet, j: usize) -> Result<CanonicalPiece> {
    let r = x.regularity_index()?;
    let basis = if j >= r {
        Mat::identity(x.field(), x.n())
    } else {
        x.evaluation_matrix(r - 1 - j)?.transpose().kernel().row_space()
    };
    Ok(CanonicalPiece { j, basis })
}

/// Values of `x_m` at the normalized representatives.
fn variable_values(x: &PointSet, m: usize) -> Result<Vec<FieldElem>> {
    Ok(x.reps()?.iter().map(|p| p[m]).collect())
}

fn diag_mul(x: &PointSet, m: usize, c: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let f = x.field();
    Ok(variable_values(x, m)?.iter().zip(c).map(|(&v, &ci)| f.mul(v, ci)).collect())
}

/// `x_m` times the element `c` of `V_j`, as an element of `V_{j+1}`.
pub fn multiply_into_piece(x: &PointSet, m: usize, c: &[FieldElem], j: usize) -> Result<Vec<FieldElem>> {
    if m >= x.k() || c.len() != x.n() {
        return Err(Error::DimensionMismatch("variable or vector out of range".into()));
    }
    if !canonical_piece(x, j)?.contains(c) {
        return Err(Error::NotInPiece);
    }
    let out = diag_mul(x, m, c)?;
    if !canonical_piece(x, j + 1)?.contains(&out) {
        return Err(Error::NotInPiece);
    }
    Ok(out)
}

/// Span of `x_m V` over all variables, as rows.
fn multiplied_span(x: &PointSet, v: &Mat) -> Result<Mat> {
    let mut rows = Vec::new();
    for i in 0..v.rows() {
        for m in 0..x.k() {
            rows.push(diag_mul(x, m, v.row(i))?);
        }
    }
    Mat::from_rows(x.field(), x.n(), &rows)
}

/// Minimal generators of the canonical ideal: pairs `(j, c)` with `c` in `V_j`.
pub fn minimal_generators(x: &PointSet) -> Result<Vec<(usize, Vec<FieldElem>)>> {
    let r = x.regularity_index()?;
    let mut gens = Vec::new();
    let mut prev: Option<Mat> = None;
    for j in 0..=r {
        let vj = canonical_piece(x, j)?.basis;
        let mut span = match &prev {
            Some(p) => multiplied_span(x, p)?,
            None => Mat::zeros(x.field(), 0, x.n()),
        };
        let mut rank = span.rank();
        for i in 0..vj.rows() {
            let cand = span.vstack(&Mat::from_rows(x.field(), x.n(), &[vj.row(i).to_vec()])?)?;
            let rk = cand.rank();
            if rk > rank {
                gens.push((j, vj.row(i).to_vec()));
                span = cand;
                rank = rk;
            }
        }
        prev = Some(vj);
    }
    Ok(gens)
}

/// Degrees of minimal generators of the canonical module, sorted ascending.
pub fn omega_min_gen_degrees(x: &PointSet) -> Result<Vec<i64>> {
    let r = x.regularity_index()? as i64;
    let mut d: Vec<i64> = minimal_generators(x)?.iter().map(|(j, _)| -r + 1 + *j as i64).collect();
    d.sort_unstable();
    Ok(d)
}

/// A single point is treated as indecomposable.
pub fn is_indecomposable(x: &PointSet) -> Result<bool> {
    if x.n() == 1 {
        return Ok(true);
    }
    Ok(omega_min_gen_degrees(x)?.iter().all(|&d| d <= -1))
}

pub fn is_arith_gorenstein(x: &PointSet) -> Result<bool> {
    let h = x.hilbert_function()?;
    let r = h.r;
    let symmetric = (0..=r).all(|i| h.delta[i] == h.delta[r - i]);
    Ok(symmetric && x.cayley_bacharach()?)
}

pub fn iso_dual_profile(x: &PointSet) -> Result<bool> {
    let k = x.k();
    if x.n() != 2 * k {
        return Ok(false);
    }
    let h = x.hilbert_function()?;
    Ok(h.delta == [1, k - 1, k - 1, 1] && is_arith_gorenstein(x)?)
}

/// Lifts `L^j sum c_i fhat_i` of the minimal generators.
pub fn canonical_ideal_generators(x: &PointSet) -> Result<Vec<HomogPoly>> {
    let seps = x.separators()?;
    let l = x.form().ok_or(Error::MissingL)?.clone();
    minimal_generators(x)?.iter().map(|(j, c)| lift_coefficients(x, &seps, &l, *j, c)).collect()
}

fn lift_coefficients(x: &PointSet, seps: &[HomogPoly], l: &HomogPoly, j: usize, c: &[FieldElem]) -> Result<HomogPoly> {
    let f = x.field();
    let r = seps[0].degree();
    let mut s = HomogPoly::zero(f, x.k(), r);
    for (ci, fi) in c.iter().zip(seps) {
        if !f.is_zero(*ci) {
            s = s.add(&fi.scale(*ci))?;
        }
    }
    l.pow(j).mul(&s)
}

/// Reduction of the coordinate ring modulo the distinguished linear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinianReduction {
    pub form: HomogPoly,
    /// Variable solved for from `L`.
    pub pivot: usize,
    /// Original indices of the remaining variables `y_1, ..., y_{k-1}`.
    pub others: Vec<usize>,
    /// RREF bases of the reduced ideal in degrees `0..=r+1`, in `k-1` variables.
    pub pieces: Vec<Mat>,
    /// Hilbert function of the quotient in degrees `0..=r+1`.
    pub hf: Vec<usize>,
    pub socle_degree: usize,
    /// Standard monomials of the reduced ideal, written in the original variables.
    pub order_ideal: Vec<Monomial>,
}

impl ArtinianReduction {
    /// Image of a form under `x_pivot -> -(1/L_pivot) sum L_m y_m`, other `x_m -> y_m`.
    pub fn reduce(&self, g: &HomogPoly) -> Result<HomogPoly> {
        let m = reduction_matrix(&self.form, self.pivot, &self.others, g.degree())?;
        HomogPoly::from_coeffs(g.field(), self.others.len(), g.degree(), m.mul_vec(g.coeffs())?)
    }

    /// Express a form in `y` variables in the original variables.
    pub fn embed(&self, g: &HomogPoly, k: usize) -> HomogPoly {
        let f = g.field();
        let terms: Vec<(FieldElem, Vec<u32>)> = g
            .terms()
            .into_iter()
            .map(|(c, m)| {
                let mut e = vec![0u32; k];
                for (s, &orig) in self.others.iter().enumerate() {
                    e[orig] = m.exps[s];
                }
                (c, e)
            })
            .collect();
        HomogPoly::from_terms(f, k, g.degree(), &terms).expect("degrees match")
    }
}

/// Columns: images of the degree-`d` monomials in the `y` variables.
fn reduction_matrix(l: &HomogPoly, pivot: usize, others: &[usize], d: usize) -> Result<Mat> {
    let f = l.field();
    let k = l.k();
    let kk = others.len();
    let lp_inv = f.inv(l.coeffs()[pivot])?;
    let lin_coeffs: Vec<FieldElem> =
        others.iter().map(|&m| f.neg(f.mul(lp_inv, l.coeffs()[m]))).collect();
    let lin = HomogPoly::linear(f, &lin_coeffs);
    let mut lin_pows = vec![HomogPoly::one(f, kk)];
    for t in 1..=d {
        lin_pows.push(lin_pows[t - 1].mul(&lin)?);
    }
    let basis = monomial_basis(k, d);
    let mut m = Mat::zeros(f, num_monomials(kk, d), basis.len());
    for (col, mono) in basis.iter().enumerate() {
        let rest: Vec<u32> = others.iter().map(|&o| mono.exps[o]).collect();
        let img = lin_pows[mono.exps[pivot] as usize].mul_monomial(&Monomial::new(rest));
        for (row, &c) in img.coeffs().iter().enumerate() {
            m.set(row, col, c);
        }
    }
    Ok(m)
}

pub fn artinian_reduction(x: &PointSet) -> Result<ArtinianReduction> {
    let l = x.form().ok_or(Error::MissingL)?.clone();
    let f = x.field();
    let k = x.k();
    let r = x.regularity_index()?;
    let pivot = l.coeffs().iter().position(|c| !f.is_zero(*c)).ok_or(Error::MissingL)?;
    let others: Vec<usize> = (0..k).filter(|&m| m != pivot).collect();
    let mut pieces = Vec::new();
    let mut hf = Vec::new();
    let mut order_ideal = Vec::new();
    for d in 0..=r + 1 {
        let eta = reduction_matrix(&l, pivot, &others, d)?;
        let ideal = x.ideal_piece_matrix(d)?;
        let img = ideal.mul(&eta.transpose())?.row_space();
        let nd = num_monomials(k - 1, d);
        hf.push(nd - img.rows());
        let pivots = img.rref().pivots;
        for (idx, m) in monomial_basis(k - 1, d).into_iter().enumerate() {
            if !pivots.contains(&idx) {
                let mut e = vec![0u32; k];
                for (s, &orig) in others.iter().enumerate() {
                    e[orig] = m.exps[s];
                }
                order_ideal.push(Monomial::new(e));
            }
        }
        pieces.push(img);
    }
    Ok(ArtinianReduction { form: l, pivot, others, pieces, hf, socle_degree: r, order_ideal })
}

/// The generator `pi = f_1 + beta_2 f_2 + ... + beta_n f_n` of the canonical ideal of a
/// point set with the iso-dual profile, and `(1, beta_2, ..., beta_n)`.
pub fn iso_dual_canonical_generator(x: &PointSet) -> Result<(HomogPoly, Vec<FieldElem>)> {
    if !iso_dual_profile(x)? {
        return Err(Error::NotIsoDualProfile);
    }
    let f = x.field();
    let ar = artinian_reduction(x)?;
    // functional on the reduced degree-3 forms vanishing on the reduced ideal
    let lam = ar.pieces[3].kernel();
    if lam.rows() != 1 {
        return Err(Error::NotIsoDualProfile);
    }
    let lam = lam.row(0).to_vec();
    let seps = x.separators()?;
    let vals: Vec<FieldElem> = seps
        .iter()
        .map(|s| Ok(crate::linalg::dot(f, &lam, ar.reduce(s)?.coeffs())))
        .collect::<Result<_>>()?;
    let v1 = vals[0];
    if f.is_zero(v1) {
        return Err(Error::NotIsoDualProfile);
    }
    let betas: Vec<FieldElem> = vals.iter().map(|&v| f.div(v, v1)).collect::<Result<_>>()?;
    let l = x.form().ok_or(Error::MissingL)?.clone();
    let pi = lift_coefficients(x, &seps, &l, 0, &betas)?;
    Ok((pi, betas))
}

/// Span of all monomial multiples of `gens` in degree `d`, as RREF rows.
pub fn ideal_span(field: &crate::gf::Field, k: usize, gens: &[HomogPoly], d: usize) -> Result<Mat> {
    let mut rows: Vec<Vec<FieldElem>> = Vec::new();
    for g in gens {
        if g.degree() > d {
            continue;
        }
        for m in monomial_basis(k, d - g.degree()) {
            rows.push(g.mul_monomial(&m).coeffs().to_vec());
        }
    }
    Ok(Mat::from_rows(field, num_monomials(k, d), &rows)?.row_space())
}

/// The ideal `I_X + L^i Jhat` whose quotient is the `i`-th doubling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingIdeal {
    pub i: usize,
    pub generators: Vec<HomogPoly>,
    pub r: usize,
    pub socle_degree: usize,
}

/// Minimal generators of `I_X` through degree `r + 1`.
pub fn vanishing_ideal_generators(x: &PointSet) -> Result<Vec<HomogPoly>> {
    let r = x.regularity_index()?;
    let mut gens: Vec<HomogPoly> = Vec::new();
    for d in 1..=r + 1 {
        let piece = x.ideal_piece_matrix(d)?;
        let mut span = ideal_span(x.field(), x.k(), &gens, d)?;
        let mut rank = span.rows();
        for i in 0..piece.rows() {
            let cand = span.vstack(&Mat::from_rows(x.field(), piece.cols(), &[piece.row(i).to_vec()])?)?;
            let rk = cand.rank();
            if rk > rank {
                gens.push(HomogPoly::from_coeffs(x.field(), x.k(), d, piece.row(i).to_vec())?);
                span = cand;
                rank = rk;
            }
        }
    }
    Ok(gens)
}

pub fn doubling_ideal(x: &PointSet, i: usize) -> Result<DoublingIdeal> {
    let r = x.regularity_index()?;
    let l = x.form().ok_or(Error::MissingL)?;
    let li = l.pow(i);
    let mut generators = vanishing_ideal_generators(x)?;
    for g in canonical_ideal_generators(x)? {
        generators.push(li.mul(&g)?);
    }
    Ok(DoublingIdeal { i, generators, r, socle_degree: 2 * r + i - 1 })
}

impl DoublingIdeal {
    /// RREF basis of the degree-`d` piece.
    pub fn piece(&self, field: &crate::gf::Field, k: usize, d: usize) -> Result<Mat> {
        ideal_span(field, k, &self.generators, d)
    }
}

/// Hilbert function of the doubling in degrees `0..=socle_degree`.
pub fn doubling_hf(x: &PointSet, i: usize) -> Result<Vec<usize>> {
    let dbl = doubling_ideal(x, i)?;
    let k = x.k();
    (0..=dbl.socle_degree)
        .map(|d| Ok(num_monomials(k, d) - dbl.piece(x.field(), k, d)?.rows()))
        .collect()
}

/// The expected doubling Hilbert function from that of the point set.
pub fn doubling_hf_formula(x: &PointSet, i: usize) -> Result<Vec<usize>> {
    let h = x.hilbert_function()?;
    let r = h.r;
    Ok((0..2 * r + i)
        .map(|d| if d < r + i { h.at(d) } else { h.at(r - 1 - (d - r - i)) })
        .collect())
}
