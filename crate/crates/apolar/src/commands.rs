//! The five commands behind the `apolar` binary, callable in-process.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;

use apolar_core::canonical::{is_arith_gorenstein, iso_dual_profile};
use apolar_core::code::{
    all_projective_points, gen_code_with_repeats, gen_equivalent_pair_with_repeats, gen_self_dual, gen_self_dual_any,
    min_distance, verify_witness, LinearCode, DEFAULT_DISTANCE_CAP,
};
use apolar_core::gf::Field;
use apolar_core::linalg::{Mat, MonomialWitness};
use apolar_core::macaulay::DEFAULT_COEFF_CAP;
use apolar_core::oracle::{brute_pi_dual, SearchCaps};
use apolar_core::points::PointSet;
use apolar_core::poly::{dual_gl_act, num_monomials, projective_equal, DualPoly, HomogPoly};
use apolar_core::reduce::{
    end_to_end, isodual_to_pi3, lce_to_pse, pse_to_pi, verify_certificate, BruteSolver, Certificate, Claim,
    Inequivalence, Outcome, Route, Transcript, Witness,
};
use apolar_core::Error;
use serde_json::{json, Value};

use crate::format::{self, FormatError};
use crate::instance::{digest, read_text, InstanceFile, Kind};

/// Failure of a command, carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Data(String),
    VerifyFail(String),
    Cap(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFail(_) => exit::VERIFY_FAIL,
            CliError::Cap(_) => exit::INCONCLUSIVE,
            CliError::Usage(_) => exit::USAGE,
            CliError::Data(_) => exit::DATA,
            CliError::Internal(_) => exit::INTERNAL,
            CliError::Io(_) => exit::IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::VerifyFail(m) => write!(f, "verification failed: {m}"),
            CliError::Cap(m) => write!(f, "inconclusive: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Data(e.0)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded | Error::TooLarge(_) => CliError::Cap(e.to_string()),
            Error::BlockingSet => CliError::Data(format!("{e}; every point set over a larger field has one, so re-run over an extension of F_q")),
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFY_FAIL: u8 = 1;
    pub const INEQUIVALENT: u8 = 3;
    pub const INCONCLUSIVE: u8 = 4;
    pub const USAGE: u8 = 64;
    pub const DATA: u8 = 65;
    pub const INTERNAL: u8 = 70;
    pub const IO: u8 = 74;
}

pub type CResult<T> = Result<T, CliError>;

/// Text for standard output and the exit code of a finished command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: u8,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub gl: u64,
    pub words: u64,
    pub time_ms: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        let d = SearchCaps::default();
        Caps { gl: d.max_gl, words: d.max_perm_words, time_ms: None }
    }
}

fn now_ms() -> u64 {
    static START: OnceLock<Instant> = OnceLock::new();
    START.get_or_init(Instant::now).elapsed().as_millis() as u64
}

impl Caps {
    pub fn search(&self) -> SearchCaps {
        SearchCaps {
            max_gl: self.gl,
            max_perm_words: self.words,
            time_budget_ms: self.time_ms,
            clock: self.time_ms.map(|_| now_ms as fn() -> u64),
        }
    }
}

/// `F_q` with the default modulus.
pub fn field_for_q(q: u64) -> CResult<Field> {
    if q < 2 {
        return Err(CliError::Usage(format!("q = {q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q >= 2");
    let (mut rest, mut e) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(CliError::Usage(format!("q = {q} is not a prime power")));
    }
    Field::new(p, e, None).map_err(|e| CliError::Usage(e.to_string()))
}

fn write_file(path: &Path, file: &InstanceFile) -> CResult<()> {
    std::fs::write(path, file.render()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes to `out`, or returns the rendered file when there is no path.
fn emit(out: Option<&Path>, file: &InstanceFile, summary: String) -> CResult<String> {
    match out {
        Some(p) => {
            write_file(p, file)?;
            Ok(format!("{summary}\nwrote {}\n", p.display()))
        }
        None => Ok(file.render()),
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".witness.json");
    PathBuf::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Random code with distinct projective columns plus optional repeats.
    Code,
    /// Equivalent pair with a planted monomial witness.
    Pair,
    /// Self-dual `[2k, k]` code.
    SelfDual,
    /// Self-dual code and a random monomial image of it.
    SelfDualPair,
    /// Code whose columns are all points of `P^{k-1}`.
    Blocking,
}

#[derive(Clone, Debug)]
pub struct GenArgs {
    pub kind: GenKind,
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub dup: usize,
    pub zero: usize,
    pub seed: u64,
    /// Put the planted witness inside the pair file instead of a sidecar.
    pub embed_witness: bool,
    /// Drop projectivity and indecomposability from the self-dual generator.
    pub any: bool,
    pub out: Option<PathBuf>,
}

fn gen_params(a: &GenArgs) -> Value {
    json!({ "q": a.q, "n": a.n, "k": a.k, "dup": a.dup, "zero": a.zero, "any": a.any })
}

fn self_dual(f: &Field, a: &GenArgs) -> CResult<LinearCode> {
    if a.any {
        return Ok(gen_self_dual_any(f, a.k, a.seed, 200)?);
    }
    gen_self_dual(f, a.k, a.seed, 200).map_err(|e| match e {
        Error::RetriesExhausted => CliError::Data(format!(
            "no projective indecomposable self-dual [{}, {}]_{} code found; --any drops both conditions",
            2 * a.k,
            a.k,
            a.q
        )),
        e => e.into(),
    })
}

pub fn cmd_gen(a: &GenArgs) -> CResult<Report> {
    let f = field_for_q(a.q)?;
    let meta = |file: InstanceFile| file.with_meta(Some(a.seed), gen_params(a));
    let out = a.out.as_deref();
    let (file, witness, summary) = match a.kind {
        GenKind::Code => {
            let c = gen_code_with_repeats(&f, a.n, a.k, a.dup, a.zero, a.seed)?;
            let s = format!("code [{}, {}] over F_{}", c.n(), c.k(), a.q);
            (meta(InstanceFile::new(Kind::Code, format::code_to_json(&c))), None, s)
        }
        GenKind::SelfDual => {
            let c = self_dual(&f, a)?;
            let s = format!("self-dual code [{}, {}] over F_{}", c.n(), c.k(), a.q);
            (meta(InstanceFile::new(Kind::Code, format::code_to_json(&c))), None, s)
        }
        GenKind::Blocking => {
            let g = Mat::from_rows(&f, a.k, &all_projective_points(&f, a.k))?.transpose();
            let c = LinearCode::new(g)?;
            let s = format!("blocking code [{}, {}] over F_{}", c.n(), c.k(), a.q);
            (meta(InstanceFile::new(Kind::Code, format::code_to_json(&c))), None, s)
        }
        GenKind::Pair | GenKind::SelfDualPair => {
            let (c, c2, w) = if a.kind == GenKind::Pair {
                gen_equivalent_pair_with_repeats(&f, a.n, a.k, a.dup, a.zero, a.seed)?
            } else {
                let c = self_dual(&f, a)?;
                let w = MonomialWitness::random(&f, c.k(), c.n(), a.seed ^ 0x5eed);
                let c2 = apolar_core::code::apply_witness(&c, &w)?;
                (c, c2, w)
            };
            let embedded = a.embed_witness.then_some(&w);
            let s = format!("equivalent pair [{}, {}] over F_{}", c.n(), c.k(), a.q);
            let file = meta(InstanceFile::new(Kind::CodePair, format::pair_to_json(&c, &c2, embedded)));
            // the sidecar is a planted certificate, checkable with `verify`
            let side = (!a.embed_witness).then(|| {
                let cert = Certificate {
                    claim: Claim::Lce,
                    outcome: Outcome::Equivalent,
                    witness: Witness::Monomial(w.clone()),
                    transcript: Transcript::default(),
                    verified: true,
                };
                meta(certificate_file(&f, &cert, &code_digests(&c, &c2), "planted"))
            });
            (file, side, s)
        }
    };
    let mut text = emit(out, &file, summary)?;
    if let (Some(side), Some(p)) = (witness, out) {
        let sp = sidecar_path(p);
        write_file(&sp, &side)?;
        text.push_str(&format!("wrote {}\n", sp.display()));
    }
    Ok(Report { code: exit::OK, text })
}

fn load_codes(paths: &[PathBuf]) -> CResult<(LinearCode, LinearCode, Option<MonomialWitness>)> {
    match paths {
        [one] => {
            let file = InstanceFile::read(one)?.expect(Kind::CodePair)?;
            Ok(format::pair_from_json(&file.payload)?)
        }
        [a, b] => {
            let c = format::code_from_json(&InstanceFile::read(a)?.expect(Kind::Code)?.payload)?;
            let c2 = format::code_from_json(&InstanceFile::read(b)?.expect(Kind::Code)?.payload)?;
            Ok((c, c2, None))
        }
        _ => Err(CliError::Usage("expected one pair file or two code files".into())),
    }
}

fn code_digests(c: &LinearCode, c2: &LinearCode) -> Vec<String> {
    vec![digest(&format::code_to_json(c)), digest(&format::code_to_json(c2))]
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn form_text(l: &HomogPoly) -> String {
    let f = l.field();
    let parts: Vec<String> = l
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(**c))
        .map(|(i, &c)| if c == f.one() { format!("x{}", i + 1) } else { format!("{}*x{}", format::elem_to_json(f, c), i + 1) })
        .collect();
    parts.join(" + ")
}

/// Point set of a code after dropping zero columns and merging proportional ones.
fn points_of_code(c: &LinearCode) -> CResult<(PointSet, Vec<usize>)> {
    let pair = lce_to_pse(c, c)?;
    let mult = pair.multiplicities().0;
    Ok((pair.x, mult))
}

fn info_of(x: PointSet, code: Option<&LinearCode>, mult: Option<Vec<usize>>) -> CResult<Value> {
    let f = x.field().clone();
    let x = if x.form().is_some() { x } else { x.with_default_form()? };
    let h = x.hilbert_function()?;
    let seps: Vec<usize> = (0..x.n()).map(|i| x.sepdeg(i)).collect::<Result<_, _>>()?;
    let k = x.k();
    let distance = match code {
        Some(c) if (f.q() as u128).saturating_pow(c.k() as u32) <= 1_000_000 => Some(min_distance(c, DEFAULT_DISTANCE_CAP)?),
        _ => None,
    };
    Ok(json!({
        "n": x.n(),
        "k": k,
        "q": f.q(),
        "length": code.map(LinearCode::n),
        "multiplicities": mult,
        "L": format::homog_to_json(x.form().expect("set above")),
        "L_text": form_text(x.form().expect("set above")),
        "hf": h.hf,
        "delta_hf": h.delta,
        "r": h.r,
        "separator_degrees": seps,
        "cayley_bacharach": x.cayley_bacharach()?,
        "arithmetically_gorenstein": is_arith_gorenstein(&x)?,
        "iso_dual_profile": k >= 2 && iso_dual_profile(&x)?,
        "min_distance": distance,
    }))
}

fn info_text(v: &Value) -> String {
    let list = |key: &str| v[key].as_array().map(|a| join(&a.iter().map(|x| x.to_string()).collect::<Vec<_>>())).unwrap_or_default();
    let mut s = String::new();
    s.push_str(&format!("n = {}, k = {}, q = {}\n", v["n"], v["k"], v["q"]));
    if !v["length"].is_null() {
        s.push_str(&format!("code length: {}, column multiplicities: {}\n", v["length"], list("multiplicities")));
    }
    s.push_str(&format!("L: {}\n", v["L_text"].as_str().unwrap_or_default()));
    s.push_str(&format!("HF: {}, r = {}\n", list("hf"), v["r"]));
    s.push_str(&format!("ΔHF: {}\n", list("delta_hf")));
    s.push_str(&format!("separator degrees: {}\n", list("separator_degrees")));
    s.push_str(&format!("Cayley-Bacharach: {}\n", v["cayley_bacharach"]));
    s.push_str(&format!("arithmetically Gorenstein: {}\n", v["arithmetically_gorenstein"]));
    s.push_str(&format!("iso-dual profile: {}\n", v["iso_dual_profile"]));
    match v["min_distance"].as_u64() {
        Some(d) => s.push_str(&format!("minimum distance: {d}\n")),
        None => s.push_str("minimum distance: skipped (over cap)\n"),
    }
    s
}

pub fn cmd_info(path: &Path, fmt: OutputFormat) -> CResult<Report> {
    let file = InstanceFile::read(path)?;
    let reports: Vec<Value> = match file.kind {
        Kind::Code => {
            let c = format::code_from_json(&file.payload)?;
            let (x, m) = points_of_code(&c)?;
            vec![info_of(x, Some(&c), Some(m))?]
        }
        Kind::CodePair => {
            let (c, c2, _) = format::pair_from_json(&file.payload)?;
            let mut out = Vec::new();
            for code in [&c, &c2] {
                let (x, m) = points_of_code(code)?;
                out.push(info_of(x, Some(code), Some(m))?);
            }
            out
        }
        Kind::PointSet => vec![info_of(format::pointset_from_json(&file.payload)?, None, None)?],
        k => return Err(CliError::Usage(format!("info does not apply to {k} files"))),
    };
    let text = match fmt {
        OutputFormat::Json => {
            let v = if reports.len() == 1 { reports[0].clone() } else { Value::Array(reports) };
            format!("{}\n", serde_json::to_string_pretty(&v).expect("values always serialize"))
        }
        OutputFormat::Text => reports.iter().map(info_text).collect::<Vec<_>>().join("\n"),
    };
    Ok(Report { code: exit::OK, text })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteChoice {
    Auto,
    Doubling,
    Cubic,
}

fn certificate_file(f: &Field, cert: &Certificate, digests: &[String], provenance: &str) -> InstanceFile {
    InstanceFile::new(Kind::Certificate, format::certificate_to_json(f, cert, digests, provenance))
}

fn screen_certificate(why: Inequivalence) -> Certificate {
    Certificate {
        claim: Claim::Lce,
        outcome: Outcome::Inequivalent(why),
        witness: Witness::None,
        transcript: Transcript::default(),
        verified: true,
    }
}

pub fn cmd_reduce(path: &Path, route: RouteChoice, max_coeffs: Option<usize>, out: Option<&Path>) -> CResult<Report> {
    let (c, c2, _) = load_codes(&[path.to_path_buf()])?;
    let f = c.field().clone();
    let digests = code_digests(&c, &c2);
    let inequivalent = |why| -> CResult<Report> {
        let file = certificate_file(&f, &screen_certificate(why), &digests, "invariant");
        let text = emit(out, &file, format!("inequivalent ({})", format::reason_name(why)))?;
        Ok(Report { code: exit::INEQUIVALENT, text })
    };
    if c.n() != c2.n() || c.k() != c2.k() {
        return inequivalent(Inequivalence::Shape);
    }
    let red = match lce_to_pse(&c, &c2) {
        Ok(r) => r,
        Err(Error::ProfileMismatch) => return inequivalent(Inequivalence::ColumnProfile),
        Err(e) => return Err(e.into()),
    };
    if red.x.k() < 2 {
        return Err(CliError::Data("codes of dimension 1 need no reduction".into()));
    }
    let x = red.x.clone().with_default_form()?;
    let x2 = red.x2.clone().with_default_form()?;
    if x.hilbert_function()? != x2.hilbert_function()? {
        return inequivalent(Inequivalence::HilbertFunction);
    }
    let cubic = match route {
        RouteChoice::Cubic => true,
        RouteChoice::Doubling => false,
        RouteChoice::Auto => iso_dual_profile(&x)? && iso_dual_profile(&x2)?,
    };
    let (phi, phi2, t) = if cubic {
        let inst = isodual_to_pi3(&x, &x2)?;
        (inst.phi, inst.phi2, inst.certificate.transcript)
    } else {
        let r = x.regularity_index()?;
        let size = num_monomials(x.k(), 2 * r.max(1) - 1);
        if size > max_coeffs.unwrap_or(DEFAULT_COEFF_CAP) {
            return Err(CliError::Cap(format!("inverse polynomial has {size} coefficients")));
        }
        let inst = pse_to_pi(&x, &x2)?;
        (inst.phi, inst.phi2, inst.certificate.transcript)
    };
    let route_name = format::route_name(t.route.unwrap_or(Route::Doubling));
    let summary = format!("{route_name} route: degree {} forms in {} variables", phi.degree(), phi.k());
    let params = json!({ "route": route_name, "source": digests });
    let file = InstanceFile::new(Kind::Polynomial, format::pi_instance_to_json(&f, &phi, &phi2, &t)).with_meta(None, params);
    Ok(Report { code: exit::OK, text: emit(out, &file, summary)? })
}

fn outcome_code(o: &Outcome) -> u8 {
    match o {
        Outcome::Equivalent => exit::OK,
        Outcome::Inequivalent(_) => exit::INEQUIVALENT,
        Outcome::Inconclusive(_) => exit::INCONCLUSIVE,
    }
}

fn outcome_text(o: &Outcome) -> String {
    match o {
        Outcome::Equivalent => "equivalent".into(),
        Outcome::Inequivalent(r) => format!("inequivalent ({})", format::reason_name(*r)),
        Outcome::Inconclusive(why) => format!("inconclusive: {why}"),
    }
}

fn solve_pi(phi: &DualPoly, phi2: &DualPoly, caps: &SearchCaps) -> CResult<Certificate> {
    let mut cert = Certificate {
        claim: Claim::Pi,
        outcome: Outcome::Inequivalent(Inequivalence::Exhausted),
        witness: Witness::None,
        transcript: Transcript::default(),
        verified: false,
    };
    if phi.k() != phi2.k() || phi.degree() != phi2.degree() {
        cert.outcome = Outcome::Inequivalent(Inequivalence::Shape);
        cert.verified = true;
        return Ok(cert);
    }
    match brute_pi_dual(phi, phi2, caps) {
        Ok(Some(a)) => {
            cert.outcome = Outcome::Equivalent;
            cert.witness = Witness::Matrix(a);
            cert.verified = true;
        }
        Ok(None) => {}
        Err(Error::CapExceeded) => cert.outcome = Outcome::Inconclusive("search cap exceeded".into()),
        Err(e) => return Err(e.into()),
    }
    Ok(cert)
}

pub fn cmd_solve(path: &Path, caps: &Caps, out: Option<&Path>) -> CResult<Report> {
    let file = InstanceFile::read(path)?;
    let sc = caps.search();
    let (f, cert, digests) = match file.kind {
        Kind::CodePair => {
            let (c, c2, planted) = format::pair_from_json(&file.payload)?;
            let cert = match end_to_end(&c, &c2, &BruteSolver, &sc) {
                Ok(cert) => cert,
                Err(Error::CapExceeded) => Certificate {
                    claim: Claim::Lce,
                    outcome: Outcome::Inconclusive("search cap exceeded".into()),
                    witness: Witness::None,
                    transcript: Transcript::default(),
                    verified: false,
                },
                Err(e) => return Err(e.into()),
            };
            if let (Some(w), Outcome::Inequivalent(_)) = (&planted, &cert.outcome) {
                if verify_witness(&c, &c2, w)? {
                    return Err(CliError::Internal("inequivalence claimed for a pair with a valid planted witness".into()));
                }
            }
            (c.field().clone(), cert, code_digests(&c, &c2))
        }
        Kind::Polynomial => {
            let f = format::payload_field(&file.payload)?;
            let (phi, phi2, _) = format::pi_instance_from_json(&file.payload)?;
            (f, solve_pi(&phi, &phi2, &sc)?, vec![file.digest()])
        }
        k => return Err(CliError::Usage(format!("solve does not apply to {k} files"))),
    };
    let code = outcome_code(&cert.outcome);
    let out_file = certificate_file(&f, &cert, &digests, "exhaustive");
    Ok(Report { code, text: emit(out, &out_file, outcome_text(&cert.outcome))? })
}

fn verify_pi(cert: &Certificate, phi: &DualPoly, phi2: &DualPoly, caps: &SearchCaps) -> CResult<bool> {
    Ok(match (&cert.outcome, &cert.witness) {
        (Outcome::Equivalent, Witness::Matrix(a)) => {
            a.rows() == phi.k()
                && a.is_invertible()
                && phi.k() == phi2.k()
                && phi.degree() == phi2.degree()
                && projective_equal(&dual_gl_act(a, phi)?, phi2).is_some()
        }
        (Outcome::Inequivalent(Inequivalence::Shape), _) => phi.k() != phi2.k() || phi.degree() != phi2.degree(),
        (Outcome::Inequivalent(Inequivalence::Exhausted), _) => {
            phi.k() == phi2.k() && phi.degree() == phi2.degree() && brute_pi_dual(phi, phi2, caps)?.is_none()
        }
        _ => false,
    })
}

/// Re-checks a certificate from the files alone; exit 0 on pass.
pub fn cmd_verify(cert_path: &Path, instances: &[PathBuf], caps: &Caps) -> CResult<Report> {
    let (file, intact) = InstanceFile::parse_envelope(&read_text(cert_path)?)?;
    let file = file.expect(Kind::Certificate)?;
    if !intact {
        return Err(CliError::VerifyFail("certificate digest does not match its contents".into()));
    }
    let (cert, digests) = format::certificate_from_json(&file.payload)?;
    let sc = caps.search();
    let ok = match cert.claim {
        Claim::Pi => {
            let [p] = instances else { return Err(CliError::Usage("a PI certificate needs its polynomial file".into())) };
            let inst = InstanceFile::read(p)?.expect(Kind::Polynomial)?;
            if digests != [inst.digest()] {
                return Err(CliError::VerifyFail("certificate refers to a different instance".into()));
            }
            let (phi, phi2, _) = format::pi_instance_from_json(&inst.payload)?;
            verify_pi(&cert, &phi, &phi2, &sc)?
        }
        Claim::Lce => {
            let (c, c2, _) = load_codes(instances)?;
            if digests != code_digests(&c, &c2) {
                return Err(CliError::VerifyFail("certificate refers to different codes".into()));
            }
            verify_certificate(&c, &c2, &cert, &sc)?
        }
        Claim::Pse | Claim::Reduction => return Err(CliError::Usage("only LCE and PI certificates are verifiable".into())),
    };
    if !ok {
        return Err(CliError::VerifyFail(format!("{} claim does not check", outcome_text(&cert.outcome))));
    }
    Ok(Report { code: exit::OK, text: format!("verified: {}\n", outcome_text(&cert.outcome)) })
}
