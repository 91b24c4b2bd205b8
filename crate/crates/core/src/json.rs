//! JSON interchange: elements, matrices, lattices, forms and reports.
//!
//! Elements of `O_k` are written as half-coordinate pairs `[u, v]` meaning
//! `(u + v*sqrt(D))/2`; anything else uses the textual syntax. Entries of
//! rational matrices are integers or `"a/b"` strings.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Number, Value};

use crate::catalog::{CaseProfile, CaseReport};
use crate::cycles::RepSolutionSet;
use crate::lattice::forms::{FormKind, ZForm};
use crate::lattice::{ChainReport, DiscGroup, HermLattice, ModPiReduction};
use crate::linalg::Matrix;
use crate::ring::{fmt_rational, KElem, KRational, Ring};
use crate::{Error, Result};

pub fn int(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

fn num(n: impl ToString) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

pub fn ring_to_json(ring: Ring) -> Value {
    if ring.is_integers() {
        json!("Z")
    } else {
        json!(ring.disc())
    }
}

fn big_from_json(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            n.to_string().parse::<BigInt>().map_err(|_| Error::parse(path, format!("expected an integer, got {n}")))
        }
        other => Err(Error::parse(path, format!("expected an integer, got {other}"))),
    }
}

fn usize_from_json(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::parse(path, format!("expected a non-negative integer, got {v}")))
}

pub fn ring_from_json(v: &Value, path: &str) -> Result<Ring> {
    match v {
        Value::String(s) if s == "Z" || s == "Q" => Ok(Ring::integers()),
        Value::Number(_) => {
            let d = v.as_i64().ok_or_else(|| Error::parse(path, format!("expected a discriminant, got {v}")))?;
            Ring::new(d).map_err(|e| Error::parse(path, e.to_string()))
        }
        other => Err(Error::parse(path, format!("expected a discriminant or \"Z\", got {other}"))),
    }
}

pub fn elem_to_json(x: &KRational) -> Value {
    if x.ring().is_integers() {
        return match x.as_rational() {
            Some(r) if r.denom().is_one() => int(r.numer()),
            Some(r) => json!(fmt_rational(&r)),
            None => json!(x.to_string()),
        };
    }
    if x.denominator().is_one() {
        json!([int(x.numerator().u()), int(x.numerator().v())])
    } else {
        json!(x.to_string())
    }
}

pub fn kelem_to_json(x: &KElem) -> Value {
    elem_to_json(&KRational::from(x.clone()))
}

pub fn elem_from_json(ring: Ring, v: &Value, path: &str) -> Result<KRational> {
    match v {
        Value::Number(_) => Ok(KRational::from_int(ring, big_from_json(v, path)?)),
        Value::String(s) => ring.parse(s).map_err(|m| Error::parse(path, m)),
        Value::Array(a) if a.len() == 2 => {
            if ring.is_integers() {
                return Err(Error::parse(path, "pairs are not allowed over Z"));
            }
            let u = big_from_json(&a[0], &format!("{path}[0]"))?;
            let v = big_from_json(&a[1], &format!("{path}[1]"))?;
            if (&u - &v * ring.disc()) % 2u8 != BigInt::from(0) {
                return Err(Error::parse(path, "pair [u, v] needs u = v*D mod 2"));
            }
            Ok(KRational::from(ring.elem(u, v)))
        }
        other => Err(Error::parse(path, format!("expected an element, got {other}"))),
    }
}

pub fn integral_from_json(ring: Ring, v: &Value, path: &str) -> Result<KElem> {
    elem_from_json(ring, v, path)?.to_integral().ok_or_else(|| Error::parse(path, "element must be integral"))
}

pub fn vector_from_json(ring: Ring, v: &Value, path: &str) -> Result<Vec<KRational>> {
    let a = v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))?;
    a.iter().enumerate().map(|(i, x)| elem_from_json(ring, x, &format!("{path}[{i}]"))).collect()
}

pub fn vector_to_json(v: &[KRational]) -> Value {
    Value::Array(v.iter().map(elem_to_json).collect())
}

fn rows_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(&m.row(i))).collect())
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let ring = if m.ring().is_integers() && !m.is_integral() { json!("Q") } else { ring_to_json(m.ring()) };
    json!({
        "ring": ring,
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": rows_to_json(m),
    })
}

fn rows_from_json(ring: Ring, v: &Value, path: &str) -> Result<Matrix> {
    let rows = v.as_array().ok_or_else(|| Error::parse(path, "expected an array of rows"))?;
    let mut data = Vec::new();
    let mut width = None;
    for (i, row) in rows.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let r = vector_from_json(ring, row, &p)?;
        match width {
            None => width = Some(r.len()),
            Some(w) if w != r.len() => {
                return Err(Error::parse(p, format!("row has {} entries, expected {w}", r.len())));
            }
            _ => {}
        }
        data.extend(r);
    }
    let cols = width.unwrap_or(0);
    Matrix::new(ring, rows.len(), cols, data).map_err(|e| Error::parse(path, e.to_string()))
}

/// Read a matrix given either as a nested array (ring taken from `ring`) or as
/// a matrix object.
pub fn matrix_from_json(ring: Option<Ring>, v: &Value, path: &str) -> Result<Matrix> {
    match v {
        Value::Array(_) => {
            let ring = ring.ok_or_else(|| Error::parse(path, "nested array needs a ring"))?;
            rows_from_json(ring, v, path)
        }
        Value::Object(o) => {
            let r = match o.get("ring") {
                Some(x) => ring_from_json(x, &format!("{path}.ring"))?,
                None => ring.ok_or_else(|| Error::parse(format!("{path}.ring"), "missing"))?,
            };
            if let Some(outer) = ring {
                if outer != r {
                    return Err(Error::parse(
                        format!("{path}.ring"),
                        format!("ring {} does not match {}", r.disc(), outer.disc()),
                    ));
                }
            }
            let entries = o.get("entries").ok_or_else(|| Error::parse(format!("{path}.entries"), "missing"))?;
            let m = rows_from_json(r, entries, &format!("{path}.entries"))?;
            for (key, actual) in [("rows", m.rows()), ("cols", m.cols())] {
                if let Some(x) = o.get(key) {
                    let p = format!("{path}.{key}");
                    let declared = usize_from_json(x, &p)?;
                    if declared != actual && !(m.rows() == 0 && key == "cols") {
                        return Err(Error::parse(p, format!("declared {declared}, entries give {actual}")));
                    }
                }
            }
            Ok(m)
        }
        other => Err(Error::parse(path, format!("expected a matrix, got {other}"))),
    }
}

pub fn lattice_to_json(l: &HermLattice) -> Value {
    json!({
        "ring": ring_to_json(l.ring()),
        "gram": matrix_to_json(l.gram()),
        "basis": matrix_to_json(l.basis()),
        "lattice_gram": matrix_to_json(&l.lattice_gram()),
    })
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| Error::parse(join(path, key), "missing"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| {
        let p = if path.is_empty() { "$" } else { path };
        Error::parse(p, "expected an object")
    })
}

/// Lattice from `{"ring", "gram", "basis"?}`; other keys are ignored.
pub fn lattice_from_json(v: &Value, path: &str) -> Result<HermLattice> {
    let o = object(v, path)?;
    let ring = ring_from_json(field(o, "ring", path)?, &join(path, "ring"))?;
    let gp = join(path, "gram");
    let gram = matrix_from_json(Some(ring), field(o, "gram", path)?, &gp)?;
    let basis = match o.get("basis") {
        Some(b) => Some(matrix_from_json(Some(ring), b, &join(path, "basis"))?),
        None => None,
    };
    lattice_from_parts(ring, gram, basis, &gp, &join(path, "basis"))
}

pub fn lattice_from_parts(
    ring: Ring,
    gram: Matrix,
    basis: Option<Matrix>,
    gram_path: &str,
    basis_path: &str,
) -> Result<HermLattice> {
    if ring.is_integers() {
        return Err(Error::parse("ring", "lattices need an imaginary quadratic ring"));
    }
    if !gram.is_square() {
        return Err(Error::parse(gram_path, "gram must be square"));
    }
    if !gram.is_hermitian() {
        return Err(Error::parse(gram_path, Error::NotHermitian.to_string()));
    }
    let basis = basis.unwrap_or_else(|| Matrix::identity(ring, gram.rows()));
    if basis.rows() != gram.rows() {
        return Err(Error::parse(basis_path, "basis must have one row per gram row"));
    }
    HermLattice::new(gram, basis)
}

pub fn zform_to_json(z: &ZForm) -> Value {
    json!({
        "ring": ring_to_json(z.ring()),
        "kind": z.kind().as_str(),
        "s": matrix_to_json(z.s()),
        "j": matrix_to_json(z.j()),
    })
}

pub fn zform_from_json(v: &Value, path: &str) -> Result<ZForm> {
    let o = object(v, path)?;
    let ring = ring_from_json(field(o, "ring", path)?, &join(path, "ring"))?;
    let kp = join(path, "kind");
    let kind = match field(o, "kind", path)?.as_str() {
        Some("alternating") => FormKind::Alternating,
        Some("symmetric") => FormKind::Symmetric,
        _ => return Err(Error::parse(kp, "expected \"alternating\" or \"symmetric\"")),
    };
    let z = Ring::integers();
    let s = matrix_from_json(Some(z), field(o, "s", path)?, &join(path, "s"))?;
    let j = matrix_from_json(Some(z), field(o, "j", path)?, &join(path, "j"))?;
    ZForm::new(ring, kind, s, j)
}

pub fn signature_to_json(sig: (usize, usize)) -> Value {
    json!({ "p": sig.0, "q": sig.1 })
}

fn shape_to_json(shape: &[BigInt]) -> Value {
    Value::Array(shape.iter().map(int).collect())
}

pub fn disc_group_to_json(g: &DiscGroup) -> Value {
    json!({
        "order": int(&g.order),
        "divisors": Value::Array(g.divisors.iter().map(kelem_to_json).collect()),
        "shape": shape_to_json(&g.shape),
    })
}

pub fn chain_to_json(c: &ChainReport) -> Value {
    let group = |g: &Option<DiscGroup>| g.as_ref().map_or(Value::Null, disc_group_to_json);
    json!({
        "holds": c.holds,
        "lower": group(&c.lower),
        "upper": group(&c.upper),
        "index": int(&c.index),
        "multiplicative": c.multiplicative,
    })
}

pub fn reduction_to_json(r: &ModPiReduction) -> Value {
    json!({
        "p": r.p,
        "radical_dim": r.radical_dim,
        "form": r.form,
        "radical_basis": r.radical_basis,
    })
}

pub fn reps_to_json(r: &RepSolutionSet) -> Value {
    let vectors: Vec<Value> = r.vectors.iter().map(|v| Value::Array(v.iter().map(kelem_to_json).collect())).collect();
    json!({ "t": r.t, "count": r.count(), "vectors": vectors })
}

fn shape_u64(shape: &[u64]) -> Value {
    json!(shape)
}

pub fn profile_to_json(p: &CaseProfile) -> Value {
    let l_level = p.l_level.as_ref().map_or(Value::Null, |f| {
        json!({
            "dual_quotient": shape_u64(&f.dual_quotient),
            "dual_over_pi_inverse": f.dual_over_pi_inverse,
            "sym_quotient": shape_u64(&f.sym_quotient),
            "zrank": f.zrank,
        })
    });
    json!({
        "case": p.name,
        "ring": p.disc,
        "d": p.d,
        "n": p.n,
        "signature": signature_to_json(p.signature),
        "dim_a": p.dim_a,
        "pol_degree": num(p.pol_degree),
        "quotient_1": shape_u64(&p.quotient_1),
        "quotient_2": shape_u64(&p.quotient_2),
        "zrank": p.zrank,
        "excluded_cycle_t": p.excluded_cycle_t,
        "l_level": l_level,
    })
}

pub fn report_to_json(r: &CaseReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({ "id": c.id, "expected": c.expected, "actual": c.actual, "pass": c.pass }))
        .collect();
    json!({ "case": r.case, "checks": checks, "pass": r.pass, "note": r.note })
}
