//! JSON file formats. Integers are JSON numbers when they fit in 53 bits and
//! decimal strings otherwise; both forms are accepted on input. Errors carry
//! a JSON pointer to the offending value.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::kinv::{KInvariant, SixTermData};
use crate::kunneth::KunnethResult;
use crate::linalg::{IntMatrix, Partition};
use crate::rmod::{FgAbelian, FgRModule, GradedZpModule, Presentation, ZpModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {}: {message}", if .pointer.is_empty() { "/" } else { .pointer.as_str() })]
pub struct JsonError {
    pub pointer: String,
    pub message: String,
}

impl JsonError {
    pub fn new(pointer: &str, message: impl Into<String>) -> Self {
        JsonError {
            pointer: pointer.to_string(),
            message: message.into(),
        }
    }
}

type Result<T> = std::result::Result<T, JsonError>;

/// Parses text, reporting syntax errors with line and column.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        JsonError::new(
            "",
            format!(
                "invalid JSON at line {}, column {}: {e}",
                e.line(),
                e.column()
            ),
        )
    })
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn child(pointer: &str, key: &str) -> String {
    format!("{pointer}/{}", key.replace('~', "~0").replace('/', "~1"))
}

pub fn index(pointer: &str, i: usize) -> String {
    format!("{pointer}/{i}")
}

pub fn object<'a>(v: &'a Value, ptr: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| JsonError::new(ptr, "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(JsonError::new(
            &child(ptr, k),
            format!("unexpected key; allowed keys are {allowed:?}"),
        ));
    }
    Ok(obj)
}

pub fn field<'a>(obj: &'a Map<String, Value>, ptr: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| JsonError::new(ptr, format!("missing key {key:?}")))
}

pub fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| JsonError::new(ptr, "expected an array"))
}

pub fn string<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| JsonError::new(ptr, "expected a string"))
}

pub fn boolean(v: &Value, ptr: &str) -> Result<bool> {
    v.as_bool()
        .ok_or_else(|| JsonError::new(ptr, "expected a boolean"))
}

pub fn int_from_json(v: &Value, ptr: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(JsonError::new(ptr, "expected an integer, found a float"))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| JsonError::new(ptr, format!("{s:?} is not a decimal integer"))),
        _ => Err(JsonError::new(ptr, "expected an integer")),
    }
}

pub fn int_to_json(x: &BigInt) -> Value {
    const LIMIT: i64 = 1 << 53;
    match x.to_i64() {
        Some(i) if i.abs() < LIMIT => Value::from(i),
        _ => Value::String(x.to_string()),
    }
}

pub fn usize_from_json(v: &Value, ptr: &str) -> Result<usize> {
    let x = int_from_json(v, ptr)?;
    if x.is_negative() {
        return Err(JsonError::new(ptr, "expected a nonnegative integer"));
    }
    x.to_usize()
        .ok_or_else(|| JsonError::new(ptr, "integer too large"))
}

fn int_list(v: &Value, ptr: &str, len: usize, what: &str) -> Result<Vec<BigInt>> {
    let items = array(v, ptr)?;
    if items.len() != len {
        return Err(JsonError::new(
            ptr,
            format!("{what} has length {}, expected {len}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| int_from_json(x, &index(ptr, i)))
        .collect()
}

/// A `rows × cols` matrix written as a list of rows.
pub fn matrix_from_json(v: &Value, ptr: &str, rows: usize, cols: usize) -> Result<IntMatrix> {
    let items = array(v, ptr)?;
    if items.len() != rows {
        return Err(JsonError::new(
            ptr,
            format!("matrix has {} rows, expected {rows}x{cols}", items.len()),
        ));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in items.iter().enumerate() {
        data.extend(int_list(row, &index(ptr, i), cols, "row")?);
    }
    Ok(IntMatrix::new(rows, cols, data).expect("sizes checked"))
}

/// A matrix of unknown shape written as a list of rows.
pub fn any_matrix_from_json(v: &Value, ptr: &str) -> Result<IntMatrix> {
    let items = array(v, ptr)?;
    let cols = match items.first() {
        Some(first) => array(first, &index(ptr, 0))?.len(),
        None => 0,
    };
    matrix_from_json(v, ptr, items.len(), cols)
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(int_to_json).collect()))
            .collect(),
    )
}

/// Relation columns of length `rows`.
fn columns_from_json(v: &Value, ptr: &str, rows: usize) -> Result<IntMatrix> {
    let items = array(v, ptr)?;
    let cols = items
        .iter()
        .enumerate()
        .map(|(j, c)| int_list(c, &index(ptr, j), rows, "relation column"))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_columns(rows, &cols).expect("lengths checked"))
}

fn columns_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.columns()
            .iter()
            .map(|c| Value::Array(c.iter().map(int_to_json).collect()))
            .collect(),
    )
}

/// `{"gens": n, "rels": [column, ...]}`.
pub fn presentation_from_json(v: &Value, ptr: &str) -> Result<Presentation> {
    let obj = object(v, ptr, &["gens", "rels"])?;
    let (gens, rels) = gens_and_rels(obj, ptr)?;
    Ok(Presentation::new(gens, rels).expect("rows checked"))
}

fn gens_and_rels(obj: &Map<String, Value>, ptr: &str) -> Result<(usize, IntMatrix)> {
    let gens = usize_from_json(field(obj, ptr, "gens")?, &child(ptr, "gens"))?;
    let rels = match obj.get("rels") {
        Some(r) => columns_from_json(r, &child(ptr, "rels"), gens)?,
        None => IntMatrix::zeros(gens, 0),
    };
    Ok((gens, rels))
}

pub fn presentation_to_json(p: &Presentation) -> Value {
    let mut obj = Map::new();
    obj.insert("gens".into(), Value::from(p.gens()));
    obj.insert("rels".into(), columns_to_json(p.rels()));
    Value::Object(obj)
}

/// `{"gens": n, "rels": [column, ...], "t": [row, ...]}`.
pub fn module_from_json(v: &Value, ptr: &str) -> Result<FgRModule> {
    let obj = object(v, ptr, &["gens", "rels", "t"])?;
    let (n, rels) = gens_and_rels(obj, ptr)?;
    let t = matrix_from_json(field(obj, ptr, "t")?, &child(ptr, "t"), n, n)?;
    Ok(FgRModule::new(n, rels, t).expect("shapes checked"))
}

pub fn module_to_json(m: &FgRModule) -> Value {
    let mut obj = Map::new();
    obj.insert("gens".into(), Value::from(m.gens()));
    obj.insert("rels".into(), columns_to_json(m.rels()));
    obj.insert("t".into(), matrix_to_json(m.t_action()));
    Value::Object(obj)
}

fn graded_pair<T>(
    v: &Value,
    ptr: &str,
    mut parse: impl FnMut(&Value, &str, usize) -> Result<T>,
) -> Result<[T; 2]> {
    let obj = object(v, ptr, &["0", "1"])?;
    let a = parse(field(obj, ptr, "0")?, &child(ptr, "0"), 0)?;
    let b = parse(field(obj, ptr, "1")?, &child(ptr, "1"), 1)?;
    Ok([a, b])
}

fn pair_to_json<T>(items: &[T; 2], f: impl Fn(&T) -> Value) -> Value {
    let mut obj = Map::new();
    obj.insert("0".into(), f(&items[0]));
    obj.insert("1".into(), f(&items[1]));
    Value::Object(obj)
}

pub fn kinvariant_from_json(v: &Value, ptr: &str) -> Result<KInvariant> {
    let obj = object(v, ptr, &["kG", "kGminus", "phi", "psi"])?;
    let kg = graded_pair(field(obj, ptr, "kG")?, &child(ptr, "kG"), |v, p, _| {
        module_from_json(v, p)
    })?;
    let kgm = graded_pair(
        field(obj, ptr, "kGminus")?,
        &child(ptr, "kGminus"),
        |v, p, _| module_from_json(v, p),
    )?;
    let phi = graded_pair(field(obj, ptr, "phi")?, &child(ptr, "phi"), |v, p, i| {
        matrix_from_json(v, p, kg[i].gens(), kgm[i].gens())
    })?;
    let psi = graded_pair(field(obj, ptr, "psi")?, &child(ptr, "psi"), |v, p, i| {
        matrix_from_json(v, p, kgm[i].gens(), kg[i].gens())
    })?;
    Ok(KInvariant::new(kg, kgm, phi, psi).expect("shapes checked"))
}

pub fn kinvariant_to_json(k: &KInvariant) -> Value {
    let mut obj = Map::new();
    obj.insert("kG".into(), pair_to_json(&k.kg, module_to_json));
    obj.insert("kGminus".into(), pair_to_json(&k.kgm, module_to_json));
    obj.insert("phi".into(), pair_to_json(&k.phi, matrix_to_json));
    obj.insert("psi".into(), pair_to_json(&k.psi, matrix_to_json));
    Value::Object(obj)
}

/// Six-term data stored alongside a 𝕂-invariant: keys `K`, `f`, `boundary`
/// in `obj`, with the invariant itself already parsed.
pub fn six_term_from_json(
    obj: &Map<String, Value>,
    ptr: &str,
    kinv: KInvariant,
) -> Result<SixTermData> {
    let k = graded_pair(field(obj, ptr, "K")?, &child(ptr, "K"), |v, p, _| {
        presentation_from_json(v, p)
    })?;
    let f = graded_pair(field(obj, ptr, "f")?, &child(ptr, "f"), |v, p, i| {
        matrix_from_json(v, p, k[i].gens(), kinv.kg[i].gens())
    })?;
    let boundary = graded_pair(
        field(obj, ptr, "boundary")?,
        &child(ptr, "boundary"),
        |v, p, i| matrix_from_json(v, p, kinv.kgm[1 - i].gens(), k[i].gens()),
    )?;
    Ok(SixTermData {
        kinv,
        k,
        f,
        boundary,
    })
}

pub fn six_term_to_json(d: &SixTermData, obj: &mut Map<String, Value>) {
    obj.insert("kinvariant".into(), kinvariant_to_json(&d.kinv));
    obj.insert("K".into(), pair_to_json(&d.k, presentation_to_json));
    obj.insert("f".into(), pair_to_json(&d.f, matrix_to_json));
    obj.insert("boundary".into(), pair_to_json(&d.boundary, matrix_to_json));
}

pub fn abelian_to_json(a: &FgAbelian) -> Value {
    let mut obj = Map::new();
    obj.insert("rank".into(), Value::from(a.rank));
    obj.insert(
        "invariants".into(),
        Value::Array(a.invariants.iter().map(int_to_json).collect()),
    );
    Value::Object(obj)
}

/// `{"p": p, "rank": r, "torsion": [k₁ ≥ k₂ ≥ …]}`.
pub fn zp_from_json(v: &Value, ptr: &str) -> Result<ZpModule> {
    let obj = object(v, ptr, &["p", "rank", "torsion"])?;
    let p_ptr = child(ptr, "p");
    let p = int_from_json(field(obj, ptr, "p")?, &p_ptr)?
        .to_u64()
        .ok_or_else(|| JsonError::new(&p_ptr, "prime must fit in 64 bits"))?;
    let rank = usize_from_json(field(obj, ptr, "rank")?, &child(ptr, "rank"))?;
    let t_ptr = child(ptr, "torsion");
    let parts = match obj.get("torsion") {
        Some(t) => array(t, &t_ptr)?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let xp = index(&t_ptr, i);
                u32::try_from(usize_from_json(x, &xp)?)
                    .map_err(|_| JsonError::new(&xp, "exponent too large"))
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let torsion = Partition::new(parts).map_err(|e| JsonError::new(&t_ptr, e.to_string()))?;
    ZpModule::new(p, rank, torsion).map_err(|e| JsonError::new(&p_ptr, e.to_string()))
}

pub fn zp_to_json(m: &ZpModule) -> Value {
    let mut obj = Map::new();
    obj.insert("p".into(), Value::from(m.p()));
    obj.insert("rank".into(), Value::from(m.rank()));
    obj.insert(
        "torsion".into(),
        Value::Array(
            m.torsion()
                .parts()
                .iter()
                .map(|&k| Value::from(k))
                .collect(),
        ),
    );
    Value::Object(obj)
}

/// `{"even": zp, "odd": zp}`.
pub fn graded_from_json(v: &Value, ptr: &str) -> Result<GradedZpModule> {
    let obj = object(v, ptr, &["even", "odd"])?;
    let even = zp_from_json(field(obj, ptr, "even")?, &child(ptr, "even"))?;
    let odd = zp_from_json(field(obj, ptr, "odd")?, &child(ptr, "odd"))?;
    GradedZpModule::new(even, odd).map_err(|e| JsonError::new(ptr, e.to_string()))
}

pub fn graded_to_json(m: &GradedZpModule) -> Value {
    let mut obj = Map::new();
    obj.insert("even".into(), zp_to_json(&m.even));
    obj.insert("odd".into(), zp_to_json(&m.odd));
    Value::Object(obj)
}

pub fn kunneth_result_to_json(r: &KunnethResult, checks: Vec<Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("prime".into(), Value::from(r.prime.to_string()));
    obj.insert("tensor".into(), graded_to_json(&r.tensor));
    obj.insert("tor".into(), graded_to_json(&r.tor));
    obj.insert("middle".into(), graded_to_json(&r.middle));
    obj.insert("ambiguous".into(), Value::Bool(r.ambiguous));
    obj.insert("checks".into(), Value::Array(checks));
    Value::Object(obj)
}
