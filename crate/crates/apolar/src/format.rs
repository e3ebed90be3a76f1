//! JSON encodings of fields, matrices, witnesses, polynomials, codes, point sets and
//! certificates.
//!
//! Objects are `serde_json::Value`s, whose maps keep keys sorted, so compact output is the
//! canonical serialization used for digests.

use apolar_core::code::LinearCode;
use apolar_core::gf::{Field, FieldElem};
use apolar_core::linalg::{Mat, MonomialWitness};
use apolar_core::points::PointSet;
use apolar_core::poly::{DualPoly, HomogPoly};
use apolar_core::reduce::{Certificate, Claim, Inequivalence, Outcome, Route, Transcript, Witness};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "malformed input: {}", self.0)
    }
}

impl std::error::Error for FormatError {}

impl From<apolar_core::Error> for FormatError {
    fn from(e: apolar_core::Error) -> Self {
        FormatError(e.to_string())
    }
}

pub type FResult<T> = Result<T, FormatError>;

fn bad(what: &str) -> FormatError {
    FormatError(what.to_string())
}

fn get<'a>(v: &'a Value, key: &str) -> FResult<&'a Value> {
    v.get(key).ok_or_else(|| FormatError(format!("missing key {key:?}")))
}

fn as_u64(v: &Value, what: &str) -> FResult<u64> {
    v.as_u64().ok_or_else(|| FormatError(format!("{what} must be a nonnegative integer")))
}

fn as_usize(v: &Value, what: &str) -> FResult<usize> {
    as_u64(v, what).map(|x| x as usize)
}

fn as_array<'a>(v: &'a Value, what: &str) -> FResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| FormatError(format!("{what} must be an array")))
}

pub fn field_to_json(f: &Field) -> Value {
    json!({ "p": f.p(), "e": f.e(), "modulus": f.modulus() })
}

pub fn field_from_json(v: &Value) -> FResult<Field> {
    let p = as_u64(get(v, "p")?, "p")?;
    let e = as_u64(get(v, "e")?, "e")? as u32;
    let modulus = match v.get("modulus") {
        None | Some(Value::Null) => None,
        Some(m) => Some(as_array(m, "modulus")?.iter().map(|c| as_u64(c, "modulus coefficient")).collect::<FResult<Vec<_>>>()?),
    };
    Ok(Field::new(p, e, modulus.as_deref())?)
}

pub fn elem_to_json(f: &Field, a: FieldElem) -> Value {
    if f.e() == 1 {
        json!(a.index())
    } else {
        json!(f.coeffs(a))
    }
}

pub fn elem_from_json(f: &Field, v: &Value) -> FResult<FieldElem> {
    match v {
        Value::Number(_) if f.e() == 1 => {
            let x = as_u64(v, "field element")?;
            if x >= f.p() {
                return Err(bad("field element out of range"));
            }
            Ok(f.elem(x).expect("in range"))
        }
        Value::Array(cs) => {
            if cs.len() != f.e() as usize {
                return Err(bad("field element has the wrong length"));
            }
            let cs = cs.iter().map(|c| as_u64(c, "coefficient")).collect::<FResult<Vec<_>>>()?;
            if cs.iter().any(|&c| c >= f.p()) {
                return Err(bad("coefficient out of range"));
            }
            Ok(f.from_coeffs(&cs)?)
        }
        _ => Err(bad("field element must be an integer or an array")),
    }
}

fn vec_to_json(f: &Field, v: &[FieldElem]) -> Value {
    Value::Array(v.iter().map(|&a| elem_to_json(f, a)).collect())
}

fn vec_from_json(f: &Field, v: &Value) -> FResult<Vec<FieldElem>> {
    as_array(v, "vector")?.iter().map(|x| elem_from_json(f, x)).collect()
}

pub fn mat_to_json(m: &Mat) -> Value {
    let f = m.field();
    let rows: Vec<Value> = (0..m.rows()).map(|i| vec_to_json(f, m.row(i))).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

pub fn mat_from_json(f: &Field, v: &Value) -> FResult<Mat> {
    let rows = as_usize(get(v, "rows")?, "rows")?;
    let cols = as_usize(get(v, "cols")?, "cols")?;
    let entries = as_array(get(v, "entries")?, "entries")?;
    if entries.len() != rows {
        return Err(bad("row count does not match entries"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in entries {
        let r = vec_from_json(f, r)?;
        if r.len() != cols {
            return Err(bad("column count does not match entries"));
        }
        data.extend(r);
    }
    Ok(Mat::from_vec(f, rows, cols, data)?)
}

pub fn witness_to_json(w: &MonomialWitness) -> Value {
    json!({ "A": mat_to_json(&w.a), "D": vec_to_json(w.a.field(), &w.d), "P": w.perm })
}

pub fn witness_from_json(f: &Field, v: &Value) -> FResult<MonomialWitness> {
    let a = mat_from_json(f, get(v, "A")?)?;
    let d = vec_from_json(f, get(v, "D")?)?;
    let perm = as_array(get(v, "P")?, "P")?.iter().map(|x| as_usize(x, "P entry")).collect::<FResult<Vec<_>>>()?;
    let w = MonomialWitness { a, d, perm };
    w.validate()?;
    Ok(w)
}

macro_rules! poly_json {
    ($to:ident, $from:ident, $t:ty, $dual:expr) => {
        pub fn $to(p: &$t) -> Value {
            let f = p.field();
            let terms: Vec<Value> = p.terms().into_iter().map(|(c, m)| json!([elem_to_json(f, c), m.exps])).collect();
            json!({ "k": p.k(), "degree": p.degree(), "dual": $dual, "terms": terms })
        }

        pub fn $from(f: &Field, v: &Value) -> FResult<$t> {
            if get(v, "dual")?.as_bool() != Some($dual) {
                return Err(bad("polynomial has the wrong kind"));
            }
            let k = as_usize(get(v, "k")?, "k")?;
            let degree = as_usize(get(v, "degree")?, "degree")?;
            let mut terms = Vec::new();
            for t in as_array(get(v, "terms")?, "terms")? {
                let t = as_array(t, "term")?;
                if t.len() != 2 {
                    return Err(bad("a term is [coefficient, exponents]"));
                }
                let c = elem_from_json(f, &t[0])?;
                let exps = as_array(&t[1], "exponents")?
                    .iter()
                    .map(|e| as_u64(e, "exponent").map(|e| e as u32))
                    .collect::<FResult<Vec<_>>>()?;
                terms.push((c, exps));
            }
            Ok(<$t>::from_terms(f, k, degree, &terms)?)
        }
    };
}

poly_json!(homog_to_json, homog_from_json, HomogPoly, false);
poly_json!(dual_to_json, dual_from_json, DualPoly, true);

pub fn code_to_json(c: &LinearCode) -> Value {
    json!({ "field": field_to_json(c.field()), "n": c.n(), "k": c.k(), "G": mat_to_json(c.generator()) })
}

pub fn code_from_json(v: &Value) -> FResult<LinearCode> {
    let f = field_from_json(get(v, "field")?)?;
    let g = mat_from_json(&f, get(v, "G")?)?;
    let c = LinearCode::new(g)?;
    if as_usize(get(v, "n")?, "n")? != c.n() || as_usize(get(v, "k")?, "k")? != c.k() {
        return Err(bad("n or k does not match G"));
    }
    Ok(c)
}

pub fn pair_to_json(c: &LinearCode, c2: &LinearCode, witness: Option<&MonomialWitness>) -> Value {
    json!({
        "first": code_to_json(c),
        "second": code_to_json(c2),
        "witness": witness.map(witness_to_json),
    })
}

pub fn pair_from_json(v: &Value) -> FResult<(LinearCode, LinearCode, Option<MonomialWitness>)> {
    let c = code_from_json(get(v, "first")?)?;
    let c2 = code_from_json(get(v, "second")?)?;
    if c.field() != c2.field() {
        return Err(bad("the two codes live over different fields"));
    }
    let w = match v.get("witness") {
        None | Some(Value::Null) => None,
        Some(w) => Some(witness_from_json(c.field(), w)?),
    };
    Ok((c, c2, w))
}

pub fn pointset_to_json(x: &PointSet) -> Value {
    let f = x.field();
    let pts: Vec<Value> = x.points().iter().map(|p| vec_to_json(f, p)).collect();
    json!({ "field": field_to_json(f), "k": x.k(), "points": pts, "L": x.form().map(homog_to_json) })
}

pub fn pointset_from_json(v: &Value) -> FResult<PointSet> {
    let f = field_from_json(get(v, "field")?)?;
    let k = as_usize(get(v, "k")?, "k")?;
    let pts = as_array(get(v, "points")?, "points")?.iter().map(|p| vec_from_json(&f, p)).collect::<FResult<Vec<_>>>()?;
    let x = PointSet::new(&f, k, pts)?;
    match v.get("L") {
        None | Some(Value::Null) => Ok(x),
        Some(l) => Ok(x.with_form(homog_from_json(&f, l)?)?),
    }
}

fn claim_name(c: Claim) -> &'static str {
    match c {
        Claim::Lce => "lce",
        Claim::Pse => "pse",
        Claim::Pi => "pi",
        Claim::Reduction => "reduction",
    }
}

fn claim_from(s: &str) -> FResult<Claim> {
    Ok(match s {
        "lce" => Claim::Lce,
        "pse" => Claim::Pse,
        "pi" => Claim::Pi,
        "reduction" => Claim::Reduction,
        _ => return Err(bad("unknown claim")),
    })
}

pub fn route_name(r: Route) -> &'static str {
    match r {
        Route::Doubling => "doubling",
        Route::Cubic => "cubic",
        Route::Direct => "direct",
        Route::Trivial => "trivial",
    }
}

fn route_from(s: &str) -> FResult<Route> {
    Ok(match s {
        "doubling" => Route::Doubling,
        "cubic" => Route::Cubic,
        "direct" => Route::Direct,
        "trivial" => Route::Trivial,
        _ => return Err(bad("unknown route")),
    })
}

pub fn reason_name(r: Inequivalence) -> &'static str {
    match r {
        Inequivalence::Shape => "shape",
        Inequivalence::ColumnProfile => "column_profile",
        Inequivalence::MinDistance => "min_distance",
        Inequivalence::BlockingSet => "blocking_set",
        Inequivalence::HilbertFunction => "hilbert_function",
        Inequivalence::Exhausted => "exhausted",
    }
}

fn reason_from(s: &str) -> FResult<Inequivalence> {
    Ok(match s {
        "shape" => Inequivalence::Shape,
        "column_profile" => Inequivalence::ColumnProfile,
        "min_distance" => Inequivalence::MinDistance,
        "blocking_set" => Inequivalence::BlockingSet,
        "hilbert_function" => Inequivalence::HilbertFunction,
        "exhausted" => Inequivalence::Exhausted,
        _ => return Err(bad("unknown inequivalence reason")),
    })
}

fn outcome_to_json(o: &Outcome) -> Value {
    match o {
        Outcome::Equivalent => json!({ "status": "equivalent" }),
        Outcome::Inequivalent(r) => json!({ "status": "inequivalent", "reason": reason_name(*r) }),
        Outcome::Inconclusive(why) => json!({ "status": "inconclusive", "reason": why }),
    }
}

fn outcome_from_json(v: &Value) -> FResult<Outcome> {
    let status = get(v, "status")?.as_str().ok_or_else(|| bad("status must be a string"))?;
    let reason = v.get("reason").and_then(Value::as_str);
    Ok(match status {
        "equivalent" => Outcome::Equivalent,
        "inequivalent" => Outcome::Inequivalent(reason_from(reason.ok_or_else(|| bad("missing reason"))?)?),
        "inconclusive" => Outcome::Inconclusive(reason.unwrap_or_default().to_string()),
        _ => return Err(bad("unknown status")),
    })
}

fn transcript_to_json(t: &Transcript) -> Value {
    json!({
        "route": t.route.map(route_name),
        "L": t.form.as_ref().map(homog_to_json),
        "L2": t.form2.as_ref().map(homog_to_json),
        "r": t.r,
        "phi": t.phi.as_ref().map(|(a, b)| json!([dual_to_json(a), dual_to_json(b)])),
        "pse": t.pse.as_ref().map(mat_to_json),
        "notes": t.notes,
    })
}

fn opt<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.get(key).filter(|x| !x.is_null())
}

fn transcript_from_json(f: &Field, v: &Value) -> FResult<Transcript> {
    let phi = match opt(v, "phi") {
        None => None,
        Some(p) => {
            let p = as_array(p, "phi")?;
            if p.len() != 2 {
                return Err(bad("phi is a pair"));
            }
            Some((dual_from_json(f, &p[0])?, dual_from_json(f, &p[1])?))
        }
    };
    Ok(Transcript {
        route: opt(v, "route").map(|r| route_from(r.as_str().unwrap_or_default())).transpose()?,
        form: opt(v, "L").map(|l| homog_from_json(f, l)).transpose()?,
        form2: opt(v, "L2").map(|l| homog_from_json(f, l)).transpose()?,
        r: opt(v, "r").map(|r| as_usize(r, "r")).transpose()?,
        phi,
        pse: opt(v, "pse").map(|m| mat_from_json(f, m)).transpose()?,
        notes: match opt(v, "notes") {
            None => Vec::new(),
            Some(n) => as_array(n, "notes")?.iter().map(|s| s.as_str().unwrap_or_default().to_string()).collect(),
        },
    })
}

/// Certificate payload; `digests` names the instance contents it speaks about.
pub fn certificate_to_json(f: &Field, c: &Certificate, digests: &[String], provenance: &str) -> Value {
    let witness = match &c.witness {
        Witness::Monomial(w) => json!({ "monomial": witness_to_json(w) }),
        Witness::Matrix(m) => json!({ "matrix": mat_to_json(m) }),
        Witness::None => Value::Null,
    };
    json!({
        "field": field_to_json(f),
        "claim": claim_name(c.claim),
        "outcome": outcome_to_json(&c.outcome),
        "witness": witness,
        "transcript": transcript_to_json(&c.transcript),
        "verified": c.verified,
        "digests": digests,
        "provenance": provenance,
    })
}

pub fn certificate_from_json(v: &Value) -> FResult<(Certificate, Vec<String>)> {
    let f = field_from_json(get(v, "field")?)?;
    let claim = claim_from(get(v, "claim")?.as_str().ok_or_else(|| bad("claim must be a string"))?)?;
    let outcome = outcome_from_json(get(v, "outcome")?)?;
    let witness = match opt(v, "witness") {
        None => Witness::None,
        Some(w) => match (w.get("monomial"), w.get("matrix")) {
            (Some(m), None) => Witness::Monomial(witness_from_json(&f, m)?),
            (None, Some(m)) => Witness::Matrix(mat_from_json(&f, m)?),
            _ => return Err(bad("witness is either monomial or matrix")),
        },
    };
    let transcript = transcript_from_json(&f, get(v, "transcript")?)?;
    let verified = get(v, "verified")?.as_bool().ok_or_else(|| bad("verified must be a boolean"))?;
    let digests = as_array(get(v, "digests")?, "digests")?
        .iter()
        .map(|d| d.as_str().map(str::to_string).ok_or_else(|| bad("digest must be a string")))
        .collect::<FResult<Vec<_>>>()?;
    Ok((Certificate { claim, outcome, witness, transcript, verified }, digests))
}

/// PI instance produced by a reduction: two dual forms with the reduction data.
pub fn pi_instance_to_json(f: &Field, phi: &DualPoly, phi2: &DualPoly, t: &Transcript) -> Value {
    json!({
        "field": field_to_json(f),
        "first": dual_to_json(phi),
        "second": dual_to_json(phi2),
        "transcript": transcript_to_json(t),
    })
}

pub fn pi_instance_from_json(v: &Value) -> FResult<(DualPoly, DualPoly, Transcript)> {
    let f = field_from_json(get(v, "field")?)?;
    let phi = dual_from_json(&f, get(v, "first")?)?;
    let phi2 = dual_from_json(&f, get(v, "second")?)?;
    let t = transcript_from_json(&f, get(v, "transcript")?)?;
    Ok((phi, phi2, t))
}

/// Field of a payload that carries one, directly or through its codes.
pub fn payload_field(v: &Value) -> FResult<Field> {
    match v.get("field") {
        Some(f) => field_from_json(f),
        None => field_from_json(get(get(v, "first")?, "field")?),
    }
}
