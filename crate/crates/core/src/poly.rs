//! Homogeneous polynomials, the divided-power dual, contraction, and the GL action.
//!
//! Monomials of a fixed degree are indexed in descending degree-reverse-lexicographic
//! order, e.g. `x1^2, x1 x2, x2^2, x1 x3, x2 x3, x3^2`. The same index space is used for
//! the dual basis `pi^[beta]`.
//!
//! The primal action is substitution, `(A * f)(x) = f(A x)`. The dual action is the
//! transpose of substitution: `dual_gl_act(A, phi)` pairs with `f` as `phi` pairs with
//! `A * f`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::linalg::Mat;

/// Exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }
    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }
    pub fn index(&self) -> usize {
        monomial_index(&self.exps)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.iter().all(|&e| e == 0) {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

fn binom(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Number of monomials of degree `d` in `k` variables.
pub fn num_monomials(k: usize, d: usize) -> usize {
    if k == 0 {
        return usize::from(d == 0);
    }
    binom(d + k - 1, k - 1)
}

/// All monomials of degree `d` in `k` variables, in canonical order.
pub fn monomial_basis(k: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(num_monomials(k, d));
    let mut cur = vec![0u32; k];
    fill_basis(k, d, &mut cur, &mut out);
    out
}

fn fill_basis(k: usize, d: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if k == 0 {
        if d == 0 {
            out.push(Monomial { exps: cur.clone() });
        }
        return;
    }
    if k == 1 {
        cur[0] = d as u32;
        out.push(Monomial { exps: cur.clone() });
        return;
    }
    for t in 0..=d {
        cur[k - 1] = t as u32;
        for x in cur.iter_mut().take(k - 1) {
            *x = 0;
        }
        fill_basis(k - 1, d - t, cur, out);
    }
    cur[k - 1] = 0;
}

/// Position of an exponent vector in `monomial_basis(k, |exps|)`.
pub fn monomial_index(exps: &[u32]) -> usize {
    let mut k = exps.len();
    let mut d: usize = exps.iter().map(|&e| e as usize).sum();
    let mut idx = 0;
    while k > 1 {
        let last = exps[k - 1] as usize;
        for t in 0..last {
            idx += num_monomials(k - 1, d - t);
        }
        d -= last;
        k -= 1;
    }
    idx
}

/// `up[j][i]` is the index in degree `t` of `m_i * x_j`, `m_i` the i-th monomial of degree `t-1`.
pub(crate) fn up_table(k: usize, t: usize) -> Vec<Vec<usize>> {
    let basis = monomial_basis(k, t - 1);
    (0..k)
        .map(|j| {
            basis
                .iter()
                .map(|m| {
                    let mut e = m.exps.clone();
                    e[j] += 1;
                    monomial_index(&e)
                })
                .collect()
        })
        .collect()
}

macro_rules! dense_common {
    ($t:ident) => {
        impl $t {
            pub fn zero(field: &Field, k: usize, degree: usize) -> $t {
                $t { field: field.clone(), k, degree, coeffs: vec![field.zero(); num_monomials(k, degree)] }
            }

            pub fn from_coeffs(field: &Field, k: usize, degree: usize, coeffs: Vec<FieldElem>) -> Result<$t> {
                if coeffs.len() != num_monomials(k, degree) {
                    return Err(Error::DimensionMismatch("coefficient count".into()));
                }
                Ok($t { field: field.clone(), k, degree, coeffs })
            }

            /// Sum of `c * basis(exps)` terms; all exponent vectors must have the given degree.
            pub fn from_terms(field: &Field, k: usize, degree: usize, terms: &[(FieldElem, Vec<u32>)]) -> Result<$t> {
                let mut p = $t::zero(field, k, degree);
                for (c, e) in terms {
                    if e.len() != k || e.iter().map(|&x| x as usize).sum::<usize>() != degree {
                        return Err(Error::DegreeMismatch);
                    }
                    let i = monomial_index(e);
                    p.coeffs[i] = field.add(p.coeffs[i], *c);
                }
                Ok(p)
            }

            /// A single basis element with coefficient 1.
            pub fn basis_elem(field: &Field, exps: &[u32]) -> $t {
                let d = exps.iter().map(|&e| e as usize).sum();
                let mut p = $t::zero(field, exps.len(), d);
                p.coeffs[monomial_index(exps)] = field.one();
                p
            }

            pub fn field(&self) -> &Field {
                &self.field
            }
            pub fn k(&self) -> usize {
                self.k
            }
            pub fn degree(&self) -> usize {
                self.degree
            }
            pub fn coeffs(&self) -> &[FieldElem] {
                &self.coeffs
            }
            pub fn coeff(&self, exps: &[u32]) -> FieldElem {
                self.coeffs[monomial_index(exps)]
            }
            pub fn is_zero(&self) -> bool {
                self.coeffs.iter().all(|c| c.index() == 0)
            }

            fn check_compat(&self, other: &$t) -> Result<()> {
                if self.field != other.field || self.k != other.k {
                    return Err(Error::DimensionMismatch("incompatible operands".into()));
                }
                if self.degree != other.degree {
                    return Err(Error::DegreeMismatch);
                }
                Ok(())
            }

            pub fn add(&self, other: &$t) -> Result<$t> {
                self.check_compat(other)?;
                let f = &self.field;
                let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
                Ok($t { coeffs, ..self.clone() })
            }

            pub fn sub(&self, other: &$t) -> Result<$t> {
                self.check_compat(other)?;
                let f = &self.field;
                let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.sub(a, b)).collect();
                Ok($t { coeffs, ..self.clone() })
            }

            pub fn scale(&self, c: FieldElem) -> $t {
                let f = &self.field;
                $t { coeffs: self.coeffs.iter().map(|&a| f.mul(c, a)).collect(), ..self.clone() }
            }

            /// Scaled so the first nonzero coefficient is 1; zero stays zero.
            pub fn normalized(&self) -> $t {
                let mut p = self.clone();
                crate::linalg::normalize_first_nonzero(&self.field, &mut p.coeffs);
                p
            }

            /// Nonzero terms in canonical order.
            pub fn terms(&self) -> Vec<(FieldElem, Monomial)> {
                monomial_basis(self.k, self.degree)
                    .into_iter()
                    .zip(&self.coeffs)
                    .filter(|(_, c)| c.index() != 0)
                    .map(|(m, &c)| (c, m))
                    .collect()
            }
        }
    };
}

/// Homogeneous polynomial of fixed degree in `k` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogPoly {
    field: Field,
    k: usize,
    degree: usize,
    coeffs: Vec<FieldElem>,
}

/// Element of the divided-power dual, in the basis `pi^[beta]`, `|beta| = degree`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualPoly {
    field: Field,
    k: usize,
    degree: usize,
    coeffs: Vec<FieldElem>,
}

dense_common!(HomogPoly);
dense_common!(DualPoly);

impl HomogPoly {
    /// The linear form `sum c_i x_i`.
    pub fn linear(field: &Field, c: &[FieldElem]) -> HomogPoly {
        HomogPoly { field: field.clone(), k: c.len(), degree: 1, coeffs: c.to_vec() }
    }

    pub fn one(field: &Field, k: usize) -> HomogPoly {
        let mut p = HomogPoly::zero(field, k, 0);
        p.coeffs[0] = field.one();
        p
    }

    pub fn mul(&self, other: &HomogPoly) -> Result<HomogPoly> {
        if self.field != other.field || self.k != other.k {
            return Err(Error::DimensionMismatch("incompatible operands".into()));
        }
        let f = &self.field;
        let mut out = HomogPoly::zero(f, self.k, self.degree + other.degree);
        let ba = monomial_basis(self.k, self.degree);
        let bb = monomial_basis(self.k, other.degree);
        for (ma, &ca) in ba.iter().zip(&self.coeffs) {
            if f.is_zero(ca) {
                continue;
            }
            for (mb, &cb) in bb.iter().zip(&other.coeffs) {
                if f.is_zero(cb) {
                    continue;
                }
                let i = ma.mul(mb).index();
                out.coeffs[i] = f.add(out.coeffs[i], f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> HomogPoly {
        let f = &self.field;
        let mut out = HomogPoly::zero(f, self.k, self.degree + m.degree());
        for (mono, &c) in monomial_basis(self.k, self.degree).iter().zip(&self.coeffs) {
            if !f.is_zero(c) {
                out.coeffs[mono.mul(m).index()] = c;
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> HomogPoly {
        let mut acc = HomogPoly::one(&self.field, self.k);
        for _ in 0..n {
            acc = acc.mul(self).expect("compatible");
        }
        acc
    }

    /// `f(v)`.
    pub fn evaluate(&self, v: &[FieldElem]) -> Result<FieldElem> {
        if v.len() != self.k {
            return Err(Error::DimensionMismatch("point length".into()));
        }
        Ok(eval_monomials(&self.field, v, self.degree)
            .iter()
            .zip(&self.coeffs)
            .fold(self.field.zero(), |acc, (&m, &c)| self.field.add(acc, self.field.mul(m, c))))
    }
}

/// Values `v^alpha` for all `alpha` of degree `d`, in canonical order.
pub fn eval_monomials(f: &Field, v: &[FieldElem], d: usize) -> Vec<FieldElem> {
    let k = v.len();
    let mut cur = vec![f.one()];
    for t in 1..=d {
        let mut next = vec![f.zero(); num_monomials(k, t)];
        // each monomial of degree t is reached from its first variable
        for (i, m) in monomial_basis(k, t).iter().enumerate() {
            let j = m.exps.iter().position(|&e| e > 0).expect("positive degree");
            let mut e = m.exps.clone();
            e[j] -= 1;
            next[i] = f.mul(cur[monomial_index(&e)], v[j]);
        }
        cur = next;
    }
    cur
}

/// Matrix of `f -> A * f` on degree-`d` forms in the canonical basis.
pub fn substitution_matrix(a: &Mat, d: usize) -> Result<Mat> {
    let k = a.rows();
    if a.cols() != k {
        return Err(Error::DimensionMismatch("substitution matrix must be square".into()));
    }
    let f = a.field();
    // images[i] = coefficients of (A * x^alpha_i) for the current degree
    let mut images: Vec<Vec<FieldElem>> = vec![vec![f.one()]];
    for t in 1..=d {
        let up = up_table(k, t);
        let basis = monomial_basis(k, t);
        let n = basis.len();
        let mut next = Vec::with_capacity(n);
        for m in &basis {
            let j = m.exps.iter().position(|&e| e > 0).expect("positive degree");
            let mut e = m.exps.clone();
            e[j] -= 1;
            let src = &images[monomial_index(&e)];
            let mut img = vec![f.zero(); n];
            for (g, &c) in src.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                for l in 0..k {
                    let ajl = a.get(j, l);
                    if !f.is_zero(ajl) {
                        let dst = up[l][g];
                        img[dst] = f.add(img[dst], f.mul(c, ajl));
                    }
                }
            }
            next.push(img);
        }
        images = next;
    }
    let n = images.len();
    let mut m = Mat::zeros(f, n, n);
    for (col, img) in images.iter().enumerate() {
        for (row, &c) in img.iter().enumerate() {
            m.set(row, col, c);
        }
    }
    Ok(m)
}

/// `A * f = f(A x)`.
pub fn gl_act(a: &Mat, f: &HomogPoly) -> Result<HomogPoly> {
    if a.rows() != f.k || a.cols() != f.k {
        return Err(Error::DimensionMismatch("action matrix size".into()));
    }
    if !a.is_invertible() {
        return Err(Error::Singular);
    }
    let m = substitution_matrix(a, f.degree)?;
    HomogPoly::from_coeffs(&f.field, f.k, f.degree, m.mul_vec(&f.coeffs)?)
}

/// The dual `psi` with `pairing(g, psi) = pairing(A * g, phi)` for all `g`.
pub fn dual_gl_act(a: &Mat, phi: &DualPoly) -> Result<DualPoly> {
    if a.rows() != phi.k || a.cols() != phi.k {
        return Err(Error::DimensionMismatch("action matrix size".into()));
    }
    if !a.is_invertible() {
        return Err(Error::Singular);
    }
    let m = substitution_matrix(a, phi.degree)?;
    DualPoly::from_coeffs(&phi.field, phi.k, phi.degree, m.vec_mul(&phi.coeffs)?)
}

/// `f o phi`, lowering the degree of `phi` by `deg f`.
pub fn contract(f: &HomogPoly, phi: &DualPoly) -> Result<DualPoly> {
    if f.field != phi.field || f.k != phi.k {
        return Err(Error::DimensionMismatch("incompatible operands".into()));
    }
    if f.degree > phi.degree {
        return Err(Error::DegreeMismatch);
    }
    let fd = &f.field;
    let k = f.k;
    let out_deg = phi.degree - f.degree;
    let out_basis = monomial_basis(k, out_deg);
    let mut out = DualPoly::zero(fd, k, out_deg);
    for (ma, &ca) in monomial_basis(k, f.degree).iter().zip(&f.coeffs) {
        if fd.is_zero(ca) {
            continue;
        }
        for (g, mg) in out_basis.iter().enumerate() {
            let c = phi.coeffs[ma.mul(mg).index()];
            if !fd.is_zero(c) {
                out.coeffs[g] = fd.add(out.coeffs[g], fd.mul(ca, c));
            }
        }
    }
    Ok(out)
}

/// The perfect pairing of degree-`d` forms with degree-`d` duals.
pub fn pairing(f: &HomogPoly, phi: &DualPoly) -> Result<FieldElem> {
    if f.degree != phi.degree {
        return Err(Error::DegreeMismatch);
    }
    Ok(contract(f, phi)?.coeffs[0])
}

fn binom_mod_p(n: u64, r: u64, f: &Field) -> FieldElem {
    // Lucas: product of digit binomials
    let p = f.p();
    let (mut n, mut r) = (n, r);
    let mut acc = f.one();
    while n > 0 || r > 0 {
        let (a, b) = (n % p, r % p);
        if b > a {
            return f.zero();
        }
        let mut c = f.one();
        for i in 0..b {
            c = f.mul(c, f.from_int((a - i) as i64));
            c = f.div(c, f.from_int((i + 1) as i64)).expect("i+1 < p");
        }
        acc = f.mul(acc, c);
        n /= p;
        r /= p;
    }
    acc
}

/// Divided-power product: `pi^[b] pi^[c] = prod binom(b_i + c_i, b_i) pi^[b+c]`.
pub fn dual_mul(phi: &DualPoly, psi: &DualPoly) -> Result<DualPoly> {
    if phi.field != psi.field || phi.k != psi.k {
        return Err(Error::DimensionMismatch("incompatible operands".into()));
    }
    let f = &phi.field;
    let mut out = DualPoly::zero(f, phi.k, phi.degree + psi.degree);
    let bb = monomial_basis(phi.k, phi.degree);
    let bc = monomial_basis(phi.k, psi.degree);
    for (mb, &cb) in bb.iter().zip(&phi.coeffs) {
        if f.is_zero(cb) {
            continue;
        }
        for (mc, &cc) in bc.iter().zip(&psi.coeffs) {
            if f.is_zero(cc) {
                continue;
            }
            let mut mult = f.one();
            for (&x, &y) in mb.exps.iter().zip(&mc.exps) {
                mult = f.mul(mult, binom_mod_p((x + y) as u64, x as u64, f));
            }
            let i = mb.mul(mc).index();
            out.coeffs[i] = f.add(out.coeffs[i], f.mul(mult, f.mul(cb, cc)));
        }
    }
    Ok(out)
}

/// `Some(c)` with `c != 0` and `phi = c psi`, if such `c` exists.
pub fn projective_equal(phi: &DualPoly, psi: &DualPoly) -> Option<FieldElem> {
    projective_ratio(&phi.field, &phi.coeffs, &psi.coeffs)
}

/// Same as [`projective_equal`] for primal forms.
pub fn projective_equal_forms(f: &HomogPoly, g: &HomogPoly) -> Option<FieldElem> {
    projective_ratio(&f.field, &f.coeffs, &g.coeffs)
}

fn projective_ratio(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> Option<FieldElem> {
    if a.len() != b.len() {
        return None;
    }
    let Some(j) = b.iter().position(|x| x.index() != 0) else {
        return a.iter().all(|x| x.index() == 0).then(|| f.one());
    };
    let c = f.div(a[j], b[j]).expect("nonzero");
    if f.is_zero(c) {
        return None;
    }
    a.iter().zip(b).all(|(&x, &y)| x == f.mul(c, y)).then_some(c)
}
