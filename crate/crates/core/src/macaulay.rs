//! Macaulay inverse systems: the inverse polynomial of a doubling, the cubic of the
//! Artinian reduction, annihilator ideals, and the duality self-check.

use alloc::vec::Vec;

use crate::canonical::{artinian_reduction, doubling_ideal, iso_dual_profile};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::points::PointSet;
use crate::poly::{monomial_basis, num_monomials, DualPoly, HomogPoly};

/// Default bound on the number of coefficients of an inverse polynomial.
pub const DEFAULT_COEFF_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseKind {
    /// Inverse polynomial of the doubling with the given shift.
    Doubling { shift: usize },
    /// Cubic generating the inverse system of the Artinian reduction.
    ArtinianCubic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversePolynomial {
    /// Normalized so the first nonzero coefficient is 1.
    pub phi: DualPoly,
    pub kind: InverseKind,
    pub r: usize,
}

/// Power sums `sum_i rep_i^alpha`, `|alpha| = 2r - 1 + shift`, normalized.
pub fn inverse_polynomial_with(x: &PointSet, shift: usize, cap: usize) -> Result<InversePolynomial> {
    let reps = x.reps()?;
    let r = x.regularity_index()?;
    if r == 0 && shift == 0 {
        return Err(Error::InvalidInput("a single point has no inverse polynomial of degree 2r-1".into()));
    }
    let d = 2 * r + shift - 1;
    let k = x.k();
    if num_monomials(k, d) > cap {
        return Err(Error::TooLarge("inverse polynomial exceeds the coefficient cap".into()));
    }
    let f = x.field();
    let mut coeffs = alloc::vec![f.zero(); num_monomials(k, d)];
    for p in reps {
        for (c, v) in coeffs.iter_mut().zip(crate::poly::eval_monomials(f, p, d)) {
            *c = f.add(*c, v);
        }
    }
    let phi = DualPoly::from_coeffs(f, k, d, coeffs)?.normalized();
    if phi.is_zero() {
        return Err(Error::DualityViolation(d));
    }
    Ok(InversePolynomial { phi, kind: InverseKind::Doubling { shift }, r })
}

pub fn inverse_polynomial(x: &PointSet) -> Result<InversePolynomial> {
    inverse_polynomial_with(x, 0, DEFAULT_COEFF_CAP)
}

/// Matrix of `P_a -> D_{d-a}, f -> f o phi`; rows indexed by the target basis.
fn contraction_matrix(phi: &DualPoly, a: usize) -> Mat {
    let f = phi.field();
    let k = phi.k();
    let d = phi.degree();
    let src = monomial_basis(k, a);
    let dst = monomial_basis(k, d - a);
    let mut m = Mat::zeros(f, dst.len(), src.len());
    for (g, mg) in dst.iter().enumerate() {
        for (al, ma) in src.iter().enumerate() {
            m.set(g, al, phi.coeffs()[ma.mul(mg).index()]);
        }
    }
    m
}

/// RREF basis of `{f in P_a : f o phi = 0}` as coefficient rows.
pub fn annihilator_matrix(phi: &DualPoly, a: usize) -> Mat {
    if a > phi.degree() {
        return Mat::identity(phi.field(), num_monomials(phi.k(), a));
    }
    contraction_matrix(phi, a).kernel().row_space()
}

pub fn annihilator_piece(phi: &DualPoly, a: usize) -> Vec<HomogPoly> {
    let m = annihilator_matrix(phi, a);
    (0..m.rows())
        .map(|i| HomogPoly::from_coeffs(phi.field(), phi.k(), a, m.row(i).to_vec()).expect("sizes match"))
        .collect()
}

/// The cubic whose annihilator is the reduced ideal, in `k - 1` variables.
pub fn inverse_cubic(x: &PointSet) -> Result<InversePolynomial> {
    if !iso_dual_profile(x)? {
        return Err(Error::NotIsoDualProfile);
    }
    let ar = artinian_reduction(x)?;
    let f = x.field();
    let kk = x.k() - 1;
    let ker = ar.pieces[3].kernel();
    if ker.rows() != 1 {
        return Err(Error::NotIsoDualProfile);
    }
    let phi = DualPoly::from_coeffs(f, kk, 3, ker.row(0).to_vec())?.normalized();
    for d in 1..=3 {
        if annihilator_matrix(&phi, d) != ar.pieces[d] {
            return Err(Error::DualityViolation(d));
        }
    }
    Ok(InversePolynomial { phi, kind: InverseKind::ArtinianCubic, r: 3 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: usize,
    pub annihilator_dim: usize,
    pub ideal_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub shift: usize,
    pub socle_degree: usize,
    pub degrees: Vec<DegreeComparison>,
    /// Dimension of the quotient in the socle degree.
    pub socle_dim: usize,
}

/// Compares the annihilator of the inverse polynomial with the doubling ideal degree by
/// degree up to the socle degree.
pub fn check_macaulay_duality(x: &PointSet, shift: usize) -> Result<DualityReport> {
    let inv = inverse_polynomial_with(x, shift, DEFAULT_COEFF_CAP)?;
    let dbl = doubling_ideal(x, shift)?;
    let k = x.k();
    let mut degrees = Vec::new();
    for d in 0..=dbl.socle_degree {
        let ann = annihilator_matrix(&inv.phi, d);
        let ideal = dbl.piece(x.field(), k, d)?;
        if ann != ideal {
            return Err(Error::DualityViolation(d));
        }
        degrees.push(DegreeComparison { degree: d, annihilator_dim: ann.rows(), ideal_dim: ideal.rows() });
    }
    let last = degrees.last().expect("nonempty");
    let socle_dim = num_monomials(k, dbl.socle_degree) - last.ideal_dim;
    if socle_dim != 1 {
        return Err(Error::DualityViolation(dbl.socle_degree));
    }
    Ok(DualityReport { shift, socle_degree: dbl.socle_degree, degrees, socle_dim })
}
