//! Reduction pipelines: LCE to PSE, PSE to PI through inverse polynomials, iso-dual codes
//! to cubic PI, and lifting of solutions back to monomial witnesses.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::canonical::iso_dual_profile;
use crate::code::{lift_witness, min_distance, projectivize, strip_zero_columns, verify_witness, LinearCode, ProjectivizationMap};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};
use crate::linalg::{normalize_first_nonzero, Mat, MonomialWitness};
use crate::macaulay::{inverse_cubic, inverse_polynomial};
use crate::oracle::{brute_pi_dual_each, brute_pse_each, SearchCaps};
use crate::points::PointSet;
use crate::poly::{DualPoly, HomogPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Lce,
    Pse,
    Pi,
    Reduction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Inverse polynomials of degree `2r - 1`.
    Doubling,
    /// Cubics of the Artinian reductions, for sets with the iso-dual profile.
    Cubic,
    /// Exhaustive PSE search, used when both sets are blocking.
    Direct,
    /// One point in `P^0`.
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inequivalence {
    Shape,
    ColumnProfile,
    MinDistance,
    BlockingSet,
    HilbertFunction,
    /// Every candidate of an exhaustive search was rejected.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Equivalent,
    Inequivalent(Inequivalence),
    /// The search ended without a witness and without a proof.
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Monomial(MonomialWitness),
    Matrix(Mat),
    None,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub route: Option<Route>,
    pub form: Option<HomogPoly>,
    pub form2: Option<HomogPoly>,
    pub r: Option<usize>,
    pub phi: Option<(DualPoly, DualPoly)>,
    /// Matrix with `A X = X'`.
    pub pse: Option<Mat>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub claim: Claim,
    pub outcome: Outcome,
    pub witness: Witness,
    pub transcript: Transcript,
    pub verified: bool,
}

impl Certificate {
    fn new(claim: Claim, outcome: Outcome) -> Certificate {
        Certificate { claim, outcome, witness: Witness::None, transcript: Transcript::default(), verified: false }
    }
    fn inequivalent(claim: Claim, why: Inequivalence) -> Certificate {
        // invariant screens are recomputable, so they count as verified
        let mut c = Certificate::new(claim, Outcome::Inequivalent(why));
        c.verified = why != Inequivalence::Exhausted;
        c
    }
}

/// Point sets of two codes after removing zero and proportional columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseReduction {
    pub x: PointSet,
    pub x2: PointSet,
    /// Nonzero columns of each original code.
    pub nonzero: Vec<usize>,
    pub nonzero2: Vec<usize>,
    /// Projectivization of the codes restricted to `nonzero`.
    pub map: ProjectivizationMap,
    pub map2: ProjectivizationMap,
    pub certificate: Certificate,
}

impl PseReduction {
    /// Number of original columns on each point of `X` and `X'`.
    pub fn multiplicities(&self) -> (Vec<usize>, Vec<usize>) {
        (column_counts(&self.map), column_counts(&self.map2))
    }

    /// Whether `A X = X'` with every point sent to one of the same multiplicity.
    pub fn respects_multiplicities(&self, a: &Mat) -> bool {
        let f = self.x.field();
        let (m, m2) = self.multiplicities();
        self.x.points().iter().zip(&m).all(|(p, &mult)| {
            let Ok(mut v) = a.mul_vec(p) else { return false };
            if normalize_first_nonzero(f, &mut v).is_none() {
                return false;
            }
            self.x2.points().iter().position(|p2| *p2 == v).is_some_and(|j| m2[j] == mult)
        })
    }
}

fn column_counts(map: &ProjectivizationMap) -> Vec<usize> {
    map.kept.iter().map(|&c| 1 + map.hints.iter().filter(|h| h.source == c).count()).collect()
}

fn class_sizes(map: &ProjectivizationMap) -> Vec<usize> {
    let mut sizes = column_counts(map);
    sizes.sort_unstable();
    sizes
}

pub fn lce_to_pse(c: &LinearCode, c2: &LinearCode) -> Result<PseReduction> {
    if c.field() != c2.field() || c.n() != c2.n() || c.k() != c2.k() {
        return Err(Error::ProfileMismatch);
    }
    let (s, nonzero) = strip_zero_columns(c)?;
    let (s2, nonzero2) = strip_zero_columns(c2)?;
    if nonzero.len() != nonzero2.len() {
        return Err(Error::ProfileMismatch);
    }
    let (p, map) = projectivize(&s)?;
    let (p2, map2) = projectivize(&s2)?;
    if class_sizes(&map) != class_sizes(&map2) {
        return Err(Error::ProfileMismatch);
    }
    let x = PointSet::from_code(&p)?;
    let x2 = PointSet::from_code(&p2)?;
    let certificate = Certificate::new(Claim::Reduction, Outcome::Inconclusive("reduction only".into()));
    Ok(PseReduction { x, x2, nonzero, nonzero2, map, map2, certificate })
}

/// Turns `A` with `A X = X'` into a monomial witness between the original codes.
pub fn pse_witness_to_lce_witness(
    c: &LinearCode,
    c2: &LinearCode,
    red: &PseReduction,
    a: &Mat,
) -> Result<MonomialWitness> {
    let f = c.field();
    let k = c.k();
    if a.rows() != k || a.cols() != k || !a.is_invertible() {
        return Err(Error::NotAWitness);
    }
    let restricted = |code: &LinearCode, nz: &[usize], map: &ProjectivizationMap| -> Mat {
        let cols: Vec<usize> = map.kept.iter().map(|&i| nz[i]).collect();
        code.generator().select_cols(&cols)
    };
    let g = restricted(c, &red.nonzero, &red.map);
    let g2 = restricted(c2, &red.nonzero2, &red.map2);
    let m = g.cols();
    // normalized target columns with their scale factors
    let targets: Vec<(Vec<FieldElem>, FieldElem)> = (0..m)
        .map(|j| {
            let mut v = g2.col(j);
            let s = normalize_first_nonzero(f, &mut v).expect("nonzero column");
            (v, s)
        })
        .collect();
    let mut d = Vec::with_capacity(m);
    let mut perm = Vec::with_capacity(m);
    let mut used = vec![false; m];
    for i in 0..m {
        let mut v = a.mul_vec(&g.col(i))?;
        let s = normalize_first_nonzero(f, &mut v).ok_or(Error::NotAWitness)?;
        let j = (0..m).find(|&j| !used[j] && targets[j].0 == v).ok_or(Error::NotAWitness)?;
        used[j] = true;
        // G'_j = (s / s'_j) A G_i
        d.push(f.div(s, targets[j].1)?);
        perm.push(j);
    }
    let wbar = MonomialWitness { a: a.clone(), d, perm };
    let sc = LinearCode::new(c.generator().select_cols(&red.nonzero))?;
    let sc2 = LinearCode::new(c2.generator().select_cols(&red.nonzero2))?;
    let ws = lift_witness(&sc, &sc2, &red.map, &red.map2, &wbar).map_err(|e| match e {
        Error::ProfileMismatch => Error::NotAWitness,
        e => e,
    })?;
    // zero columns are matched in order with scalar 1
    let n = c.n();
    let zeros: Vec<usize> = (0..n).filter(|i| !red.nonzero.contains(i)).collect();
    let zeros2: Vec<usize> = (0..n).filter(|i| !red.nonzero2.contains(i)).collect();
    let mut full_d = vec![f.one(); n];
    let mut full_perm = vec![0usize; n];
    for (u, &col) in red.nonzero.iter().enumerate() {
        full_d[col] = ws.d[u];
        full_perm[col] = red.nonzero2[ws.perm[u]];
    }
    for (&z, &z2) in zeros.iter().zip(&zeros2) {
        full_perm[z] = z2;
    }
    let w = MonomialWitness { a: a.clone(), d: full_d, perm: full_perm };
    if !verify_witness(c, c2, &w)? {
        return Err(Error::NotAWitness);
    }
    Ok(w)
}

/// Pair of inverse polynomials whose PI solutions are PSE candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiInstance {
    pub phi: DualPoly,
    pub phi2: DualPoly,
    pub certificate: Certificate,
}

pub fn pse_to_pi(x: &PointSet, x2: &PointSet) -> Result<PiInstance> {
    let l = x.form().ok_or(Error::MissingL)?.clone();
    let l2 = x2.form().ok_or(Error::MissingL)?.clone();
    if x.k() != x2.k() || x.n() != x2.n() || x.hilbert_function()? != x2.hilbert_function()? {
        return Err(Error::HfMismatch);
    }
    let a = inverse_polynomial(x)?;
    let b = inverse_polynomial(x2)?;
    let mut certificate = Certificate::new(Claim::Reduction, Outcome::Inconclusive("reduction only".into()));
    certificate.transcript = Transcript {
        route: Some(Route::Doubling),
        form: Some(l),
        form2: Some(l2),
        r: Some(a.r),
        phi: Some((a.phi.clone(), b.phi.clone())),
        pse: None,
        notes: Vec::new(),
    };
    Ok(PiInstance { phi: a.phi, phi2: b.phi, certificate })
}

/// Checks a candidate directly: `A X = X'` as sets.
pub fn pi_solution_to_pse(x: &PointSet, x2: &PointSet, a: &Mat) -> Option<Certificate> {
    if a.rows() != x.k() || a.cols() != x.k() || x.k() != x2.k() || !a.is_invertible() {
        return None;
    }
    let img = x.apply(a).ok()?;
    if !img.same_points(x2) {
        return None;
    }
    let mut c = Certificate::new(Claim::Pse, Outcome::Equivalent);
    c.witness = Witness::Matrix(a.clone());
    c.transcript.pse = Some(a.clone());
    c.verified = true;
    Some(c)
}

/// `T(v) = (L(v), v_m for m != pivot)`.
fn form_coordinates(l: &HomogPoly) -> Result<(Mat, usize)> {
    let f = l.field();
    let k = l.k();
    let pivot = l.coeffs().iter().position(|c| !f.is_zero(*c)).ok_or(Error::MissingL)?;
    let mut t = Mat::zeros(f, k, k);
    for j in 0..k {
        t.set(0, j, l.coeffs()[j]);
    }
    let mut row = 1;
    for m in (0..k).filter(|&m| m != pivot) {
        t.set(row, m, f.one());
        row += 1;
    }
    Ok((t, pivot))
}

/// Cubic PI instance of two point sets with the iso-dual profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicInstance {
    pub phi: DualPoly,
    pub phi2: DualPoly,
    t: Mat,
    t2_inv: Mat,
    pub certificate: Certificate,
}

impl CubicInstance {
    /// All `k x k` matrices `A` with `L' A = L` inducing `B` between the hyperplanes.
    pub fn promotions(&self, b: &Mat) -> Result<Vec<Mat>> {
        let f = self.t.field().clone();
        let k = self.t.rows();
        let mut out = Vec::new();
        let q = f.q();
        let total = q.pow((k - 1) as u32);
        for idx in 0..total {
            let mut m = Mat::zeros(&f, k, k);
            m.set(0, 0, f.one());
            let mut rest = idx;
            for i in (1..k).rev() {
                m.set(i, 0, f.elem(rest % q).expect("in range"));
                rest /= q;
            }
            for i in 1..k {
                for j in 1..k {
                    m.set(i, j, b.get(i - 1, j - 1));
                }
            }
            out.push(self.t2_inv.mul(&m)?.mul(&self.t)?);
        }
        Ok(out)
    }
}

pub fn isodual_to_pi3(x: &PointSet, x2: &PointSet) -> Result<CubicInstance> {
    if !iso_dual_profile(x)? || !iso_dual_profile(x2)? {
        return Err(Error::NotIsoDualProfile);
    }
    let a = inverse_cubic(x)?;
    let b = inverse_cubic(x2)?;
    let l = x.form().ok_or(Error::MissingL)?.clone();
    let l2 = x2.form().ok_or(Error::MissingL)?.clone();
    let (t, p) = form_coordinates(&l)?;
    let (t2, p2) = form_coordinates(&l2)?;
    let mut certificate = Certificate::new(Claim::Reduction, Outcome::Inconclusive("reduction only".into()));
    certificate.transcript = Transcript {
        route: Some(Route::Cubic),
        form: Some(l),
        form2: Some(l2),
        r: Some(3),
        phi: Some((a.phi.clone(), b.phi.clone())),
        pse: None,
        notes: vec![alloc::format!("pivots {p} {p2}")],
    };
    Ok(CubicInstance { phi: a.phi, phi2: b.phi, t, t2_inv: t2.invert()?, certificate })
}

/// A PI search engine for dual forms: finds `A` with `dual_gl_act(A, f) = c g`.
pub trait PiSolver {
    /// Whether running out of candidates proves that no solution exists.
    fn exhaustive(&self) -> bool;
    /// Offers each solution to `accept` and returns the first accepted one.
    fn solve(
        &self,
        f: &DualPoly,
        g: &DualPoly,
        caps: &SearchCaps,
        accept: &mut dyn FnMut(&Mat) -> Result<bool>,
    ) -> Result<Option<Mat>>;
}

/// Exhaustive pruned search over `GL_k`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BruteSolver;

impl PiSolver for BruteSolver {
    fn exhaustive(&self) -> bool {
        true
    }
    fn solve(
        &self,
        f: &DualPoly,
        g: &DualPoly,
        caps: &SearchCaps,
        accept: &mut dyn FnMut(&Mat) -> Result<bool>,
    ) -> Result<Option<Mat>> {
        brute_pi_dual_each(f, g, caps, &mut |a, _| accept(a))
    }
}

fn hf_screen(x: &PointSet, x2: &PointSet) -> Result<bool> {
    Ok(x.hilbert_function()? == x2.hilbert_function()?)
}

fn equivalent(c: &LinearCode, c2: &LinearCode, red: &PseReduction, a: &Mat, transcript: Transcript) -> Result<Certificate> {
    let w = pse_witness_to_lce_witness(c, c2, red, a)?;
    let mut cert = Certificate::new(Claim::Lce, Outcome::Equivalent);
    cert.witness = Witness::Monomial(w);
    cert.transcript = transcript;
    cert.transcript.pse = Some(a.clone());
    cert.verified = true;
    Ok(cert)
}

/// Full pipeline from two codes to a verified certificate.
///
/// Every admissible `L'` on `X'` is tried in scan order against the first admissible `L`
/// on `X`, so an exhaustive solver decides equivalence.
pub fn end_to_end(c: &LinearCode, c2: &LinearCode, solver: &dyn PiSolver, caps: &SearchCaps) -> Result<Certificate> {
    if c.field() != c2.field() || c.n() != c2.n() || c.k() != c2.k() {
        return Ok(Certificate::inequivalent(Claim::Lce, Inequivalence::Shape));
    }
    let red = match lce_to_pse(c, c2) {
        Ok(r) => r,
        Err(Error::ProfileMismatch) => return Ok(Certificate::inequivalent(Claim::Lce, Inequivalence::ColumnProfile)),
        Err(e) => return Err(e),
    };
    let f: &Field = c.field();
    if (f.q() as u128).saturating_pow(c.k() as u32) <= 1_000_000 {
        let cap = crate::code::DEFAULT_DISTANCE_CAP;
        if min_distance(c, cap)? != min_distance(c2, cap)? {
            return Ok(Certificate::inequivalent(Claim::Lce, Inequivalence::MinDistance));
        }
    }
    let (x, x2) = (&red.x, &red.x2);
    if x.k() == 1 {
        let a = Mat::identity(f, 1);
        let t = Transcript { route: Some(Route::Trivial), ..Transcript::default() };
        return equivalent(c, c2, &red, &a, t);
    }
    let forms = (x.find_nonvanishing_linear_form(), x2.find_nonvanishing_linear_form());
    let (l, _) = match forms {
        (Ok(l), Ok(l2)) => (l, l2),
        (Err(Error::BlockingSet), Err(Error::BlockingSet)) => return direct(c, c2, &red, caps),
        (Err(Error::BlockingSet), Ok(_)) | (Ok(_), Err(Error::BlockingSet)) => {
            return Ok(Certificate::inequivalent(Claim::Lce, Inequivalence::BlockingSet))
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let xl = x.clone().with_form(l.clone())?;
    let x2d = x2.clone().with_default_form()?;
    if !hf_screen(&xl, &x2d)? {
        return Ok(Certificate::inequivalent(Claim::Lce, Inequivalence::HilbertFunction));
    }
    let cubic = iso_dual_profile(&xl)? && iso_dual_profile(&x2d)?;
    let mut found: Option<(Mat, Transcript)> = None;
    for l2 in x2.admissible_forms() {
        let x2l = x2.clone().with_form(l2)?;
        if cubic {
            let inst = isodual_to_pi3(&xl, &x2l)?;
            let mut hit = None;
            solver.solve(&inst.phi, &inst.phi2, caps, &mut |b| {
                for a in inst.promotions(b)? {
                    if pi_solution_to_pse(&xl, &x2l, &a).is_some() && red.respects_multiplicities(&a) {
                        hit = Some(a);
                        return Ok(true);
                    }
                }
                Ok(false)
            })?;
            if let Some(a) = hit {
                found = Some((a, inst.certificate.transcript));
                break;
            }
        } else {
            let inst = pse_to_pi(&xl, &x2l)?;
            let hit = solver.solve(&inst.phi, &inst.phi2, caps, &mut |a| {
                Ok(pi_solution_to_pse(&xl, &x2l, a).is_some() && red.respects_multiplicities(a))
            })?;
            if let Some(a) = hit {
                found = Some((a, inst.certificate.transcript));
                break;
            }
        }
    }
    match found {
        Some((a, t)) => equivalent(c, c2, &red, &a, t),
        None => {
            let route = if cubic { Route::Cubic } else { Route::Doubling };
            let mut cert = if solver.exhaustive() {
                Certificate::inequivalent(Claim::Lce, Inequivalence::Exhausted)
            } else {
                Certificate::new(Claim::Lce, Outcome::Inconclusive("no witness found".into()))
            };
            cert.transcript.route = Some(route);
            cert.transcript.form = Some(l);
            Ok(cert)
        }
    }
}

fn direct(c: &LinearCode, c2: &LinearCode, red: &PseReduction, caps: &SearchCaps) -> Result<Certificate> {
    let t = Transcript { route: Some(Route::Direct), ..Transcript::default() };
    match brute_pse_each(&red.x, &red.x2, caps, &mut |a| Ok(red.respects_multiplicities(a)))? {
        Some(a) => equivalent(c, c2, red, &a, t),
        None => {
            let mut cert = Certificate::inequivalent(Claim::Lce, Inequivalence::Exhausted);
            cert.transcript = t;
            Ok(cert)
        }
    }
}

/// Re-checks a certificate against the two codes: witnesses by matrix algebra, invariant
/// screens by recomputation, exhaustion by rerunning the direct search.
pub fn verify_certificate(c: &LinearCode, c2: &LinearCode, cert: &Certificate, caps: &SearchCaps) -> Result<bool> {
    match (&cert.outcome, &cert.witness) {
        (Outcome::Equivalent, Witness::Monomial(w)) => {
            if c.n() != c2.n() || c.k() != c2.k() || c.field() != c2.field() {
                return Ok(false);
            }
            verify_witness(c, c2, w)
        }
        (Outcome::Equivalent, _) => Ok(false),
        (Outcome::Inequivalent(why), _) => {
            let shape = c.field() != c2.field() || c.n() != c2.n() || c.k() != c2.k();
            if *why == Inequivalence::Shape || shape {
                return Ok(shape && *why == Inequivalence::Shape);
            }
            let red = match lce_to_pse(c, c2) {
                Ok(r) => r,
                Err(Error::ProfileMismatch) => return Ok(*why == Inequivalence::ColumnProfile),
                Err(e) => return Err(e),
            };
            match why {
                Inequivalence::Shape | Inequivalence::ColumnProfile => Ok(false),
                Inequivalence::MinDistance => {
                    let cap = crate::code::DEFAULT_DISTANCE_CAP;
                    Ok(min_distance(c, cap)? != min_distance(c2, cap)?)
                }
                Inequivalence::BlockingSet => Ok(red.x.find_nonvanishing_linear_form().is_ok()
                    != red.x2.find_nonvanishing_linear_form().is_ok()),
                Inequivalence::HilbertFunction => {
                    let (Ok(x), Ok(x2)) = (red.x.clone().with_default_form(), red.x2.clone().with_default_form()) else {
                        return Ok(false);
                    };
                    Ok(!hf_screen(&x, &x2)?)
                }
                Inequivalence::Exhausted => {
                    Ok(brute_pse_each(&red.x, &red.x2, caps, &mut |a| Ok(red.respects_multiplicities(a)))?.is_none())
                }
            }
        }
        (Outcome::Inconclusive(_), _) => Ok(false),
    }
}
