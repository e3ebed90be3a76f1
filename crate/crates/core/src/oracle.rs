//! Exhaustive solvers for PI, PSE and LCE at tiny scale.
//!
//! `GL_k(F_q)` is enumerated row by row, each row outside the span of the previous ones.
//! Row `i` runs through all vectors in lexicographic order rotated to start at `e_i`, so
//! the identity is the first matrix visited.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::{dual_code, LinearCode};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::linalg::{normalize_first_nonzero, Mat, MonomialWitness};
use crate::points::PointSet;
use crate::poly::{gl_act, monomial_index, num_monomials, projective_equal_forms, up_table, DualPoly, HomogPoly};

/// Limits for exhaustive searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchCaps {
    /// Largest `|GL_k(F_q)|` that may be enumerated.
    pub max_gl: u64,
    /// Largest number of monomial maps `n! (q-1)^n` that may be enumerated.
    pub max_perm_words: u64,
    /// Wall-clock budget in milliseconds; only enforced when `clock` is set.
    pub time_budget_ms: Option<u64>,
    /// Millisecond clock supplied by the caller.
    pub clock: Option<fn() -> u64>,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { max_gl: 10_000_000, max_perm_words: 10_000_000, time_budget_ms: None, clock: None }
    }
}

struct Deadline {
    clock: Option<fn() -> u64>,
    end: u64,
    ticks: u32,
}

impl Deadline {
    fn new(caps: &SearchCaps) -> Deadline {
        match (caps.clock, caps.time_budget_ms) {
            (Some(c), Some(b)) => Deadline { clock: Some(c), end: c().saturating_add(b), ticks: 0 },
            _ => Deadline { clock: None, end: 0, ticks: 0 },
        }
    }
    fn check(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks % 1024 == 0 {
            if let Some(c) = self.clock {
                if c() > self.end {
                    return Err(Error::CapExceeded);
                }
            }
        }
        Ok(())
    }
}

/// `|GL_k(F_q)| = prod (q^k - q^i)`, saturating.
pub fn gl_order(q: u64, k: usize) -> u128 {
    let qk = (q as u128).saturating_pow(k as u32);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(qk - (q as u128).pow(i as u32)))
}

fn check_gl_cap(q: u64, k: usize, caps: &SearchCaps) -> Result<()> {
    if gl_order(q, k) > caps.max_gl as u128 {
        return Err(Error::CapExceeded);
    }
    Ok(())
}

pub(crate) enum Step {
    Continue,
    Prune,
    Stop,
}

fn vec_of_index(f: &Field, k: usize, mut idx: u64) -> Vec<FieldElem> {
    let q = f.q();
    let mut v = vec![f.zero(); k];
    for i in (0..k).rev() {
        v[i] = f.elem(idx % q).expect("in range");
        idx /= q;
    }
    v
}

fn index_of_vec(f: &Field, v: &[FieldElem]) -> u64 {
    v.iter().fold(0u64, |acc, x| acc * f.q() + x.index())
}

/// Depth-first enumeration of `GL_k`; `on_row(i, rows)` is called after row `i` is set.
/// Returns whether the callback stopped the search.
pub(crate) fn gl_dfs(
    f: &Field,
    k: usize,
    caps: &SearchCaps,
    on_row: &mut dyn FnMut(usize, &[Vec<FieldElem>]) -> Result<Step>,
) -> Result<bool> {
    let total = f.q().pow(k as u32);
    let vectors: Vec<Vec<FieldElem>> = (0..total).map(|i| vec_of_index(f, k, i)).collect();
    // span[i] marks the vectors in the span of the first i rows
    let mut span: Vec<Vec<bool>> = vec![vec![false; total as usize]; k + 1];
    span[0][0] = true;
    let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(k);
    let mut deadline = Deadline::new(caps);
    fn rec(
        f: &Field,
        k: usize,
        level: usize,
        total: u64,
        vectors: &[Vec<FieldElem>],
        span: &mut Vec<Vec<bool>>,
        rows: &mut Vec<Vec<FieldElem>>,
        deadline: &mut Deadline,
        on_row: &mut dyn FnMut(usize, &[Vec<FieldElem>]) -> Result<Step>,
    ) -> Result<bool> {
        let start = f.q().pow((k - 1 - level) as u32);
        for t in 0..total {
            let idx = ((start + t) % total) as usize;
            if span[level][idx] {
                continue;
            }
            deadline.check()?;
            rows.push(vectors[idx].clone());
            let step = on_row(level, rows)?;
            match step {
                Step::Stop => return Ok(true),
                Step::Prune => {}
                Step::Continue => {
                    if level + 1 < k {
                        let mut next = vec![false; total as usize];
                        for (j, &inside) in span[level].iter().enumerate() {
                            if !inside {
                                continue;
                            }
                            for c in f.elements() {
                                let w: Vec<FieldElem> =
                                    vectors[j].iter().zip(&vectors[idx]).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect();
                                next[index_of_vec(f, &w) as usize] = true;
                            }
                        }
                        span[level + 1] = next;
                        if rec(f, k, level + 1, total, vectors, span, rows, deadline, on_row)? {
                            return Ok(true);
                        }
                    }
                }
            }
            rows.pop();
        }
        Ok(false)
    }
    rec(f, k, 0, total, &vectors, &mut span, &mut rows, &mut deadline, on_row)
}

fn rows_to_mat(f: &Field, k: usize, rows: &[Vec<FieldElem>]) -> Mat {
    Mat::from_rows(f, k, rows).expect("square")
}

/// First `A` in enumeration order with `A * f` projectively equal to `g`.
pub fn brute_pi(f: &HomogPoly, g: &HomogPoly, caps: &SearchCaps) -> Result<Option<Mat>> {
    if f.k() != g.k() || f.degree() != g.degree() || f.field() != g.field() {
        return Ok(None);
    }
    let field = f.field();
    let k = f.k();
    check_gl_cap(field.q(), k, caps)?;
    let mut found = None;
    gl_dfs(field, k, caps, &mut |level, rows| {
        if level + 1 < k {
            return Ok(Step::Continue);
        }
        let a = rows_to_mat(field, k, rows);
        if projective_equal_forms(&gl_act(&a, f)?, g).is_some() {
            found = Some(a);
            return Ok(Step::Stop);
        }
        Ok(Step::Continue)
    })?;
    Ok(found)
}

/// First `A` in enumeration order with `dual_gl_act(A, f)` projectively equal to `g`.
pub fn brute_pi_dual(f: &DualPoly, g: &DualPoly, caps: &SearchCaps) -> Result<Option<Mat>> {
    brute_pi_dual_each(f, g, caps, &mut |_, _| Ok(true))
}

/// Enumerates every `A` with `dual_gl_act(A, f) = c g`, `c != 0`, calling `accept(A, c)`;
/// stops at and returns the first accepted one.
///
/// The coefficient of `pi^[beta]` in `dual_gl_act(A, f)` is `f` evaluated on the product
/// of `(row_m . x)^{beta_m}`, so it depends only on rows up to the last variable in
/// `beta`; such coefficients are checked as soon as those rows are chosen.
pub fn brute_pi_dual_each(
    f: &DualPoly,
    g: &DualPoly,
    caps: &SearchCaps,
    accept: &mut dyn FnMut(&Mat, FieldElem) -> Result<bool>,
) -> Result<Option<Mat>> {
    if f.k() != g.k() || f.degree() != g.degree() || f.field() != g.field() {
        return Ok(None);
    }
    let field = f.field().clone();
    let k = f.k();
    let d = f.degree();
    check_gl_cap(field.q(), k, caps)?;
    if f.is_zero() || g.is_zero() {
        if f.is_zero() && g.is_zero() {
            let id = Mat::identity(&field, k);
            return Ok(accept(&id, field.one())?.then_some(id));
        }
        return Ok(None);
    }
    let up: Vec<Vec<Vec<usize>>> = (0..=d).map(|t| if t == 0 { Vec::new() } else { up_table(k, t) }).collect();
    let contract_linear = |row: &[FieldElem], psi: &[FieldElem], t: usize| -> Vec<FieldElem> {
        // psi has degree t; result degree t - 1
        let n = num_monomials(k, t - 1);
        let mut out = vec![field.zero(); n];
        for (j, &rj) in row.iter().enumerate() {
            if field.is_zero(rj) {
                continue;
            }
            let u = &up[t][j];
            for (i, o) in out.iter_mut().enumerate() {
                let v = psi[u[i]];
                if !field.is_zero(v) {
                    *o = field.add(*o, field.mul(rj, v));
                }
            }
        }
        out
    };
    // prefix states per level: (beta restricted to earlier variables, contracted dual)
    type Prefix = (Vec<u32>, Vec<FieldElem>);
    let mut levels: Vec<Vec<Prefix>> = vec![Vec::new(); k + 1];
    levels[0] = vec![(vec![0u32; k], f.coeffs().to_vec())];
    let mut scalars: Vec<Option<FieldElem>> = vec![None; k + 1];
    let gc = g.coeffs();
    let mut found = None;
    gl_dfs(&field, k, caps, &mut |level, rows| {
        let row = &rows[level];
        let mut c = scalars[level];
        let mut next: Vec<Prefix> = Vec::new();
        for (beta, psi) in &levels[level] {
            let used: u32 = beta.iter().sum();
            let e = d - used as usize;
            let mut cur = psi.clone();
            for t in 0..=e {
                if t == e {
                    let mut b = beta.clone();
                    b[level] = t as u32;
                    let v = cur[0];
                    let target = gc[monomial_index(&b)];
                    if field.is_zero(target) {
                        if !field.is_zero(v) {
                            return Ok(Step::Prune);
                        }
                    } else {
                        match c {
                            None => {
                                if field.is_zero(v) {
                                    return Ok(Step::Prune);
                                }
                                c = Some(field.div(v, target)?);
                            }
                            Some(s) => {
                                if v != field.mul(s, target) {
                                    return Ok(Step::Prune);
                                }
                            }
                        }
                    }
                } else {
                    if level + 1 < k {
                        let mut b = beta.clone();
                        b[level] = t as u32;
                        next.push((b, cur.clone()));
                    }
                    cur = contract_linear(row, &cur, e - t);
                }
            }
        }
        if level + 1 == k {
            let a = rows_to_mat(&field, k, rows);
            let s = c.expect("target nonzero");
            if accept(&a, s)? {
                found = Some(a);
                return Ok(Step::Stop);
            }
            return Ok(Step::Continue);
        }
        // shortest remaining chains first, so mismatches surface early
        next.sort_by_key(|(_, psi)| psi.len());
        levels[level + 1] = next;
        scalars[level + 1] = c;
        Ok(Step::Continue)
    })?;
    Ok(found)
}

fn normalized_set(x: &PointSet) -> BTreeSet<Vec<FieldElem>> {
    x.points().iter().cloned().collect()
}

fn maps_onto(a_rows: &[Vec<FieldElem>], x: &PointSet, target: &BTreeSet<Vec<FieldElem>>) -> bool {
    let f = x.field();
    x.points().iter().all(|p| {
        let mut v: Vec<FieldElem> = a_rows.iter().map(|r| crate::linalg::dot(f, r, p)).collect();
        normalize_first_nonzero(f, &mut v).is_some() && target.contains(&v)
    })
}

/// First `A` in enumeration order with `A X = X'`.
pub fn brute_pse(x: &PointSet, x2: &PointSet, caps: &SearchCaps) -> Result<Option<Mat>> {
    brute_pse_each(x, x2, caps, &mut |_| Ok(true))
}

/// Enumerates every `A` with `A X = X'`, stopping at the first accepted one.
pub fn brute_pse_each(
    x: &PointSet,
    x2: &PointSet,
    caps: &SearchCaps,
    accept: &mut dyn FnMut(&Mat) -> Result<bool>,
) -> Result<Option<Mat>> {
    if x.n() != x2.n() || x.k() != x2.k() || x.field() != x2.field() {
        return Ok(None);
    }
    let f = x.field();
    let k = x.k();
    check_gl_cap(f.q(), k, caps)?;
    let target = normalized_set(x2);
    let mut found = None;
    gl_dfs(f, k, caps, &mut |level, rows| {
        if level + 1 < k {
            return Ok(Step::Continue);
        }
        if maps_onto(rows, x, &target) {
            let a = rows_to_mat(f, k, rows);
            if accept(&a)? {
                found = Some(a);
                return Ok(Step::Stop);
            }
        }
        Ok(Step::Continue)
    })?;
    Ok(found)
}

/// LCE by exhaustive PSE on the projectivized codes.
pub fn brute_lce(c: &LinearCode, c2: &LinearCode, caps: &SearchCaps) -> Result<Option<MonomialWitness>> {
    if c.n() != c2.n() || c.k() != c2.k() || c.field() != c2.field() {
        return Ok(None);
    }
    let red = match crate::reduce::lce_to_pse(c, c2) {
        Ok(r) => r,
        Err(Error::ProfileMismatch) => return Ok(None),
        Err(e) => return Err(e),
    };
    // repeated columns make the point sets weighted
    let Some(a) = brute_pse_each(&red.x, &red.x2, caps, &mut |a| Ok(red.respects_multiplicities(a)))? else {
        return Ok(None);
    };
    let w = crate::reduce::pse_witness_to_lce_witness(c, c2, &red, &a)?;
    Ok(Some(w))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// LCE by direct enumeration of all monomial maps `D P`, solving for `A`.
pub fn brute_lce_monomial(c: &LinearCode, c2: &LinearCode, caps: &SearchCaps) -> Result<Option<MonomialWitness>> {
    if c.n() != c2.n() || c.k() != c2.k() || c.field() != c2.field() {
        return Ok(None);
    }
    let f = c.field();
    let (n, k) = (c.n(), c.k());
    let mut words: u128 = (1..=n as u128).product();
    words = words.saturating_mul(((f.q() - 1) as u128).saturating_pow(n as u32));
    if words > caps.max_perm_words as u128 {
        return Err(Error::CapExceeded);
    }
    let g = c.generator();
    let g2 = c2.generator();
    let piv = g.rref().pivots;
    let g_piv = g.select_cols(&piv);
    let units: Vec<FieldElem> = f.units().collect();
    let mut deadline = Deadline::new(caps);
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        // A is determined by the pivot columns: A G_piv diag(d_piv) = G'[:, perm(piv)]
        let target = g2.select_cols(&piv.iter().map(|&i| perm[i]).collect::<Vec<_>>());
        let mut dpiv = vec![0usize; k];
        loop {
            deadline.check()?;
            let dv: Vec<FieldElem> = dpiv.iter().map(|&i| units[i]).collect();
            let src = g_piv.mul(&Mat::diagonal(f, &dv))?;
            let a = target.mul(&src.invert()?)?;
            if a.is_invertible() {
                let ag = a.mul(g)?;
                // remaining scalars are forced column by column
                let mut d = vec![f.one(); n];
                for (t, &i) in piv.iter().enumerate() {
                    d[i] = dv[t];
                }
                let mut ok = true;
                for j in 0..n {
                    if piv.contains(&j) {
                        continue;
                    }
                    let col = ag.col(j);
                    let tcol = g2.col(perm[j]);
                    match col.iter().position(|x| !f.is_zero(*x)) {
                        None => {
                            ok = tcol.iter().all(|x| f.is_zero(*x));
                        }
                        Some(p) => {
                            let s = f.div(tcol[p], col[p])?;
                            ok = !f.is_zero(s) && col.iter().zip(&tcol).all(|(&a1, &b1)| f.mul(s, a1) == b1);
                            d[j] = s;
                        }
                    }
                    if !ok {
                        break;
                    }
                }
                if ok {
                    let w = MonomialWitness { a, d, perm: perm.clone() };
                    if crate::code::verify_witness(c, c2, &w)? {
                        return Ok(Some(w));
                    }
                }
            }
            // advance pivot scalars
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                dpiv[i] += 1;
                if dpiv[i] < units.len() {
                    break;
                }
                dpiv[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

/// Whether `X` is equivalent to its Gale transform.
pub fn is_self_associated(x: &PointSet, caps: &SearchCaps) -> Result<bool> {
    if x.n() != 2 * x.k() {
        return Ok(false);
    }
    match x.gale_transform(None) {
        Ok(g) => Ok(brute_pse(x, &g, caps)?.is_some()),
        Err(Error::Degenerate) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Whether `C` is equivalent to its dual.
pub fn is_iso_dual(c: &LinearCode, caps: &SearchCaps) -> Result<bool> {
    if c.n() != 2 * c.k() {
        return Ok(false);
    }
    Ok(brute_lce(c, &dual_code(c)?, caps)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::dual_gl_act;

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 3), 168);
        assert_eq!(gl_order(3, 2), 48);
        let f = Field::prime(3).unwrap();
        let mut count = 0u64;
        gl_dfs(&f, 2, &SearchCaps::default(), &mut |level, _| {
            if level == 1 {
                count += 1;
            }
            Ok(Step::Continue)
        })
        .unwrap();
        assert_eq!(count, 48);
    }

    #[test]
    fn identity_first_and_swap() {
        let f = Field::prime(5).unwrap();
        let g = HomogPoly::from_terms(&f, 2, 3, &[(f.one(), vec![3, 0]), (f.from_int(2), vec![1, 2])]).unwrap();
        assert_eq!(brute_pi(&g, &g, &SearchCaps::default()).unwrap(), Some(Mat::identity(&f, 2)));
        let x13 = HomogPoly::basis_elem(&f, &[3, 0]);
        let x23 = HomogPoly::basis_elem(&f, &[0, 3]);
        let swap = Mat::from_ints(&f, &[&[0, 1], &[1, 0]]);
        assert_eq!(brute_pi(&x13, &x23, &SearchCaps::default()).unwrap(), Some(swap));
    }

    #[test]
    fn dual_search_finds_planted() {
        let f = Field::prime(3).unwrap();
        let phi = DualPoly::from_terms(
            &f,
            3,
            3,
            &[(f.one(), vec![3, 0, 0]), (f.from_int(2), vec![1, 1, 1]), (f.one(), vec![0, 1, 2])],
        )
        .unwrap();
        let a = Mat::random_invertible(&f, 3, 4);
        let psi = dual_gl_act(&a, &phi).unwrap();
        let found = brute_pi_dual(&phi, &psi, &SearchCaps::default()).unwrap().unwrap();
        assert!(crate::poly::projective_equal(&dual_gl_act(&found, &phi).unwrap(), &psi).is_some());
        assert_eq!(brute_pi_dual(&phi, &phi, &SearchCaps::default()).unwrap(), Some(Mat::identity(&f, 3)));
    }

    #[test]
    fn cap_exceeded() {
        let f = Field::prime(7).unwrap();
        let caps = SearchCaps { max_gl: 1000, ..SearchCaps::default() };
        let g = HomogPoly::basis_elem(&f, &[1, 1, 1]);
        assert_eq!(brute_pi(&g, &g, &caps).unwrap_err(), Error::CapExceeded);
    }
}
