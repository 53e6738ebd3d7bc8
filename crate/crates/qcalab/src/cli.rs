//! JSON documents and the batch commands behind the `qcalab` binary.
//!
//! A document is `{"version": 1, "kind": K, "field": "Q" | "Fp:<p>", "payload": …}` with
//! `K` one of `space`, `system`, `element`, `homo`, `chain`, `matrix`. Rationals are strings
//! `"n/d"` in lowest terms (bare integers `"n"` are accepted); residues are strings `"0".."p-1"`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 schema violation, 3 semantic failure.

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Map, Value};

use crate::coarse::{self, Chain0, Chain1, Homology, PrimeVector};
use crate::exactalg::{Field, Mat, Scalar};
use crate::index::{index, index_all_cuts, AzClass, Cut};
use crate::kone::k1_class;
use crate::qca::{verify, Homo};
use crate::shiftnorm::normalize_to_shift;
use crate::space::{MetricSpace, SpaceKind};
use crate::spin::{Element, Entries, SpinSystem};
use crate::Error;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Io(String),
    Schema(String),
    Semantic(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Semantic(_) => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, msg) = match self {
            CliError::Io(m) => ("io", m),
            CliError::Schema(m) => ("schema", m),
            CliError::Semantic(m) => ("semantic", m),
        };
        json!({"error": kind, "message": msg})
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Metric(_) | Error::Homo(_) | Error::Normalize(_) | Error::Cut(_) | Error::Factor(_) | Error::Subalgebra(_) => CliError::Semantic(e.to_string()),
            _ => CliError::Schema(e.to_string()),
        }
    }
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// Exit code and JSON written to standard output.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
}

impl Outcome {
    fn from_result(r: Result<Value, CliError>) -> Outcome {
        match r {
            Ok(v) => Outcome { code: 0, output: v },
            Err(e) => Outcome { code: e.code(), output: e.to_json() },
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.output).expect("JSON values always serialize")
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Space(Arc<MetricSpace>),
    System(Arc<SpinSystem>),
    Element(Element),
    Homo(Homo),
    Chain0 { space: Arc<MetricSpace>, chain: Chain0 },
    Chain1 { space: Arc<MetricSpace>, chain: Chain1 },
    Matrix(Mat),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Space(_) => "space",
            Payload::System(_) => "system",
            Payload::Element(_) => "element",
            Payload::Homo(_) => "homo",
            Payload::Chain0 { .. } | Payload::Chain1 { .. } => "chain",
            Payload::Matrix(_) => "matrix",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    pub field: Field,
    pub payload: Payload,
}

// ---------- primitive parsers ----------

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| schema(format!("{what} must be an object")))
}

fn get<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value, CliError> {
    m.get(key).ok_or_else(|| schema(format!("{what} is missing \"{key}\"")))
}

fn arr<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))
}

fn uint(v: &Value, what: &str) -> Result<usize, CliError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(format!("{what} must be a nonnegative integer")))
}

fn int(v: &Value, what: &str) -> Result<i64, CliError> {
    v.as_i64().ok_or_else(|| schema(format!("{what} must be an integer")))
}

fn key_uint(k: &str, what: &str) -> Result<usize, CliError> {
    if k.is_empty() || !k.bytes().all(|b| b.is_ascii_digit()) || (k.len() > 1 && k.starts_with('0')) {
        return Err(schema(format!("{what} key \"{k}\" is not a canonical nonnegative integer")));
    }
    k.parse().map_err(|_| schema(format!("{what} key \"{k}\" is out of range")))
}

fn canonical_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let ok = !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) && (digits.len() == 1 || !digits.starts_with('0')) && s != "-0";
    ok.then(|| s.parse().ok()).flatten()
}

/// Parses `"n"` or `"n/d"` with `d ≥ 1` and `gcd(n, d) = 1`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    match s.split_once('/') {
        None => canonical_int(s).map(BigRational::from_integer).ok_or_else(|| schema(format!("\"{s}\" is not a rational"))),
        Some((n, d)) => {
            let (n, d) = match (canonical_int(n), canonical_int(d)) {
                (Some(n), Some(d)) => (n, d),
                _ => return Err(schema(format!("\"{s}\" is not a rational"))),
            };
            if !d.is_positive() {
                return Err(schema(format!("\"{s}\" has a nonpositive denominator")));
            }
            if !n.gcd(&d).is_one() {
                return Err(schema(format!("\"{s}\" is not in lowest terms")));
            }
            Ok(BigRational::new_raw(n, d))
        }
    }
}

fn rational_value(v: &Value, what: &str) -> Result<BigRational, CliError> {
    parse_rational(v.as_str().ok_or_else(|| schema(format!("{what} must be a rational string")))?)
}

/// Canonical text of a rational: `"n/d"` with `d ≥ 1`.
pub fn fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_field(s: &str) -> Result<Field, CliError> {
    if s == "Q" {
        return Ok(Field::Q);
    }
    let p = s.strip_prefix("Fp:").and_then(|p| p.parse::<u64>().ok()).ok_or_else(|| schema(format!("unknown field \"{s}\"")))?;
    Field::fp(p).map_err(|e| schema(e.to_string()))
}

pub fn parse_scalar(field: Field, v: &Value) -> Result<Scalar, CliError> {
    let s = v.as_str().ok_or_else(|| schema("scalars must be strings"))?;
    match field {
        Field::Q => Ok(Scalar::Q(parse_rational(s)?)),
        Field::Fp(p) => {
            let r = canonical_int(s).ok_or_else(|| schema(format!("\"{s}\" is not a residue")))?;
            if r.is_negative() || r >= BigInt::from(p) {
                return Err(schema(format!("residue \"{s}\" is not in 0..{p}")));
            }
            Ok(field.int(r.try_into().unwrap()))
        }
    }
}

pub fn scalar_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

// ---------- spaces and systems ----------

pub fn parse_space(v: &Value) -> Result<MetricSpace, CliError> {
    let m = obj(v, "space")?;
    let kind = get(m, "kind", "space")?.as_str().ok_or_else(|| schema("space kind must be a string"))?;
    if kind == "explicit" {
        let rows = arr(get(m, "dist", "explicit space")?, "dist")?;
        let table = rows
            .iter()
            .map(|r| arr(r, "dist row")?.iter().map(|x| rational_value(x, "distance")).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(MetricSpace::explicit(table)?);
    }
    let params = obj(get(m, "params", "space")?, "space params")?;
    let space = match kind {
        "interval" => MetricSpace::interval(uint(get(params, "n", "interval")?, "n")?)?,
        "circle" => MetricSpace::circle(uint(get(params, "n", "circle")?, "n")?)?,
        "grid" => {
            let dims = arr(get(params, "dims", "grid")?, "dims")?.iter().map(|d| uint(d, "grid dim")).collect::<Result<Vec<_>, _>>()?;
            MetricSpace::grid(&dims)?
        }
        "product" => parse_space(get(params, "left", "product")?)?.product(&parse_space(get(params, "right", "product")?)?),
        other => return Err(schema(format!("unknown space kind \"{other}\""))),
    };
    Ok(space)
}

fn builder_json(kind: &SpaceKind) -> Option<Value> {
    Some(match kind {
        SpaceKind::Interval(n) => json!({"kind": "interval", "params": {"n": n}}),
        SpaceKind::Circle(n) => json!({"kind": "circle", "params": {"n": n}}),
        SpaceKind::Grid(d) => json!({"kind": "grid", "params": {"dims": d}}),
        SpaceKind::Product(a, b) => json!({"kind": "product", "params": {"left": builder_json(a)?, "right": builder_json(b)?}}),
        SpaceKind::Explicit => return None,
    })
}

/// Builder form when the space came from builders, the distance table otherwise.
pub fn space_json(space: &MetricSpace) -> Value {
    builder_json(space.kind()).unwrap_or_else(|| {
        let n = space.len();
        let dist: Vec<Vec<String>> = (0..n).map(|x| (0..n).map(|y| space.d(x, y).to_string()).collect()).collect();
        json!({"kind": "explicit", "dist": dist})
    })
}

/// `{"space": …, "q": {site: dim}}`; omitted sites have dimension 1.
pub fn parse_system(v: &Value) -> Result<SpinSystem, CliError> {
    let m = obj(v, "system")?;
    let space = Arc::new(parse_space(get(m, "space", "system")?)?);
    let mut q = vec![1; space.len()];
    for (k, d) in obj(get(m, "q", "system")?, "q")? {
        let x = key_uint(k, "q")?;
        if x >= q.len() {
            return Err(schema(format!("site {x} outside the space")));
        }
        q[x] = uint(d, "site dimension")?;
    }
    Ok(SpinSystem::new(space, q)?)
}

pub fn system_json(sys: &SpinSystem) -> Value {
    let q: Map<String, Value> = sys.dims().iter().enumerate().map(|(x, d)| (x.to_string(), json!(d))).collect();
    json!({"space": space_json(sys.space()), "q": q})
}

// ---------- elements, homomorphisms, matrices ----------

fn parse_element_body(sys: &Arc<SpinSystem>, field: Field, v: &Value) -> Result<Element, CliError> {
    let m = obj(v, "element")?;
    let support = arr(get(m, "support", "element")?, "support")?.iter().map(|x| uint(x, "support site")).collect::<Result<Vec<_>, _>>()?;
    let mut entries = Entries::new();
    for e in arr(get(m, "entries", "element")?, "entries")? {
        let t = arr(e, "entry")?;
        if t.len() != 3 {
            return Err(schema("entries are [row, col, scalar] triples"));
        }
        let (i, j) = (uint(&t[0], "row")?, uint(&t[1], "col")?);
        let s = parse_scalar(field, &t[2])?;
        if entries.contains_key(&(i, j)) {
            return Err(schema(format!("entry ({i}, {j}) listed twice")));
        }
        if s.is_zero() {
            return Err(schema(format!("entry ({i}, {j}) is an explicit zero")));
        }
        entries.insert((i, j), s);
    }
    Ok(Element::from_entries(sys.clone(), support, field, entries)?)
}

fn element_body_json(e: &Element) -> Value {
    let entries: Vec<Value> = e.entries().iter().map(|(&(i, j), s)| json!([i, j, scalar_json(s)])).collect();
    json!({"support": e.support(), "entries": entries})
}

pub fn parse_homo(field: Field, v: &Value) -> Result<Homo, CliError> {
    let m = obj(v, "homo")?;
    let source = Arc::new(parse_system(get(m, "source", "homo")?)?);
    let target = Arc::new(parse_system(get(m, "target", "homo")?)?);
    let images = obj(get(m, "images", "homo")?, "images")?;
    let mut lists = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let q = source.q(x);
        let site = match images.get(&x.to_string()) {
            Some(s) => obj(s, "site images")?,
            None => return Err(schema(format!("images for site {x} are missing"))),
        };
        let mut list = Vec::with_capacity(q * q);
        for i in 0..q {
            for j in 0..q {
                let e = site.get(&format!("{i},{j}")).ok_or_else(|| schema(format!("image of e_{i}{j} at site {x} is missing")))?;
                list.push(parse_element_body(&target, field, e)?);
            }
        }
        if site.len() != q * q {
            return Err(schema(format!("site {x} lists {} images, expected {}", site.len(), q * q)));
        }
        lists.push(list);
    }
    if images.len() != source.len() {
        return Err(schema("images list sites outside the source"));
    }
    Ok(Homo::new(source, target, field, lists)?)
}

pub fn homo_json(h: &Homo) -> Value {
    let mut images = Map::new();
    for x in 0..h.source().len() {
        let q = h.source().q(x);
        let mut site = Map::new();
        for i in 0..q {
            for j in 0..q {
                site.insert(format!("{i},{j}"), element_body_json(h.image(x, i, j)));
            }
        }
        images.insert(x.to_string(), Value::Object(site));
    }
    json!({"source": system_json(h.source()), "target": system_json(h.target()), "images": images})
}

pub fn parse_matrix(field: Field, v: &Value) -> Result<Mat, CliError> {
    let rows = arr(get(obj(v, "matrix")?, "rows", "matrix")?, "rows")?;
    let rows = rows.iter().map(|r| arr(r, "matrix row")?.iter().map(|s| parse_scalar(field, s)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(schema("matrix has no rows"));
    }
    Ok(Mat::from_rows(field, rows)?)
}

pub fn matrix_json(m: &Mat) -> Value {
    let rows: Vec<Vec<Value>> = (0..m.rows()).map(|i| m.row(i).iter().map(scalar_json).collect()).collect();
    json!({"rows": rows})
}

// ---------- chains ----------

fn prime_vector(v: &Value) -> Result<PrimeVector, CliError> {
    let mut out = PrimeVector::zero();
    for (k, n) in obj(v, "prime vector")? {
        let p = key_uint(k, "prime")? as u64;
        if !crate::exactalg::is_prime(p) {
            return Err(schema(format!("{p} is not prime")));
        }
        let n = int(n, "coefficient")?;
        if n == 0 {
            return Err(schema(format!("explicit zero coefficient at prime {p}")));
        }
        out.add_at(p, n);
    }
    Ok(out)
}

pub fn prime_vector_json(v: &PrimeVector) -> Value {
    Value::Object(v.entries().iter().map(|(p, n)| (p.to_string(), json!(n))).collect())
}

pub fn chain0_json(c: &Chain0) -> Value {
    Value::Object(c.entries().iter().map(|(x, v)| (x.to_string(), prime_vector_json(v))).collect())
}

pub fn chain1_json(c: &Chain1) -> Value {
    let terms: Vec<Value> = c.terms().iter().map(|(&(x0, x1), v)| json!([x0, x1, prime_vector_json(v)])).collect();
    json!({"bound": c.bound().to_string(), "terms": terms})
}

/// `{"space", "degree": 0, "terms": {site: {prime: n}}}` or
/// `{"space", "degree": 1, "bound": "l", "terms": [[x0, x1, {prime: n}]]}`.
fn parse_chain(v: &Value) -> Result<Payload, CliError> {
    let m = obj(v, "chain")?;
    let space = Arc::new(parse_space(get(m, "space", "chain")?)?);
    let terms = get(m, "terms", "chain")?;
    match uint(get(m, "degree", "chain")?, "degree")? {
        0 => {
            let mut c = Chain0::zero();
            for (k, pv) in obj(terms, "chain terms")? {
                let x = key_uint(k, "site")?;
                if x >= space.len() {
                    return Err(CliError::Semantic(format!("site {x} outside the space")));
                }
                c.add_at(x, &prime_vector(pv)?);
            }
            Ok(Payload::Chain0 { space, chain: c })
        }
        1 => {
            let bound = rational_value(get(m, "bound", "chain")?, "bound")?;
            let mut c = Chain1::new(bound);
            for t in arr(terms, "chain terms")? {
                let t = arr(t, "chain term")?;
                if t.len() != 3 {
                    return Err(schema("1-chain terms are [x0, x1, {prime: n}]"));
                }
                let (x0, x1) = (uint(&t[0], "site")?, uint(&t[1], "site")?);
                if x0.max(x1) >= space.len() {
                    return Err(CliError::Semantic(format!("pair ({x0}, {x1}) outside the space")));
                }
                c.add_term(&space, x0, x1, &prime_vector(&t[2])?).map_err(|e| CliError::Semantic(e.to_string()))?;
            }
            Ok(Payload::Chain1 { space, chain: c })
        }
        d => Err(schema(format!("chains of degree {d} are not supported"))),
    }
}

// ---------- documents ----------

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema(format!("invalid JSON: {e}")))?;
    let m = obj(&v, "document")?;
    let version = get(m, "version", "document")?.as_u64().ok_or_else(|| schema("version must be an integer"))?;
    if version != FORMAT_VERSION {
        return Err(schema(format!("unsupported version {version}")));
    }
    let field = parse_field(get(m, "field", "document")?.as_str().ok_or_else(|| schema("field must be a string"))?)?;
    let payload = get(m, "payload", "document")?;
    let payload = match get(m, "kind", "document")?.as_str().ok_or_else(|| schema("kind must be a string"))? {
        "space" => Payload::Space(Arc::new(parse_space(payload)?)),
        "system" => Payload::System(Arc::new(parse_system(payload)?)),
        "element" => {
            let sys = Arc::new(parse_system(get(obj(payload, "element")?, "system", "element")?)?);
            Payload::Element(parse_element_body(&sys, field, payload)?)
        }
        "homo" => Payload::Homo(parse_homo(field, payload)?),
        "chain" => parse_chain(payload)?,
        "matrix" => Payload::Matrix(parse_matrix(field, payload)?),
        other => return Err(schema(format!("unknown kind \"{other}\""))),
    };
    Ok(Document { field, payload })
}

pub fn payload_json(p: &Payload) -> Value {
    match p {
        Payload::Space(s) => space_json(s),
        Payload::System(s) => system_json(s),
        Payload::Element(e) => {
            let mut body = element_body_json(e);
            body.as_object_mut().unwrap().insert("system".into(), system_json(e.system()));
            body
        }
        Payload::Homo(h) => homo_json(h),
        Payload::Chain0 { space, chain } => json!({"space": space_json(space), "degree": 0, "terms": chain0_json(chain)}),
        Payload::Chain1 { space, chain } => {
            let mut body = chain1_json(chain);
            let m = body.as_object_mut().unwrap();
            m.insert("space".into(), space_json(space));
            m.insert("degree".into(), json!(1));
            body
        }
        Payload::Matrix(m) => matrix_json(m),
    }
}

pub fn document_json(doc: &Document) -> Value {
    json!({"version": FORMAT_VERSION, "kind": doc.payload.kind(), "field": doc.field.to_string(), "payload": payload_json(&doc.payload)})
}

pub fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

fn read_homo(path: &Path) -> Result<Homo, CliError> {
    match read_document(path)?.payload {
        Payload::Homo(h) => Ok(h),
        other => Err(schema(format!("expected a homo document, found {}", other.kind()))),
    }
}

/// A verified unital homomorphism out of a simple algebra is injective, so equal total
/// dimension makes it an isomorphism.
fn require_iso(h: &Homo) -> Result<(), CliError> {
    let report = verify(h);
    if !report.is_ok() {
        return Err(CliError::Semantic(format!("not a homomorphism: {}", report.violations.join("; "))));
    }
    let total = |s: &SpinSystem| s.dims().iter().map(|&d| BigInt::from(d)).product::<BigInt>();
    if total(h.source()) != total(h.target()) {
        return Err(CliError::Semantic("source and target dimensions differ, not an isomorphism".into()));
    }
    Ok(())
}

// ---------- commands ----------

pub fn cmd_validate(path: &Path) -> Outcome {
    Outcome::from_result((|| {
        let doc = read_document(path)?;
        let mut violations: Vec<String> = Vec::new();
        match &doc.payload {
            Payload::Space(s) => {
                if let Err(e) = s.validate() {
                    violations.push(e.to_string());
                }
            }
            Payload::Homo(h) => violations.extend(verify(h).violations),
            Payload::Chain1 { space, chain } => {
                if !chain.respects_bound(space) {
                    violations.push("a pair exceeds twice the bound".into());
                }
            }
            _ => {}
        }
        if violations.is_empty() {
            Ok(json!({"valid": true, "kind": doc.payload.kind(), "field": doc.field.to_string()}))
        } else {
            Err(CliError::Semantic(violations.join("; ")))
        }
    })())
}

fn class_json(c: &AzClass) -> Value {
    json!({
        "index": fraction(&c.value),
        "dimB": c.dim_b.to_string(),
        "certificates": {
            "commute": c.certificates.tensor_pair.commute,
            "dims_multiply": c.certificates.tensor_pair.dims_multiply,
            "multiplication_full_rank": c.certificates.tensor_pair.multiplication_full_rank,
            "trivial_intersection": c.certificates.tensor_pair.trivial_intersection,
            "left_images": c.certificates.left_images,
        },
    })
}

pub fn cmd_index(path: &Path, cut: Option<usize>, radius: usize, all_cuts: bool) -> Outcome {
    Outcome::from_result((|| {
        let h = read_homo(path)?;
        require_iso(&h)?;
        if all_cuts {
            let all = index_all_cuts(&h, radius)?;
            let first = all.first().ok_or_else(|| CliError::Semantic(format!("no cut admits radius {radius}")))?;
            let independent = all.iter().all(|(_, c)| c.value == first.1.value);
            let cuts: Vec<Value> = all.iter().map(|(cut, c)| json!({"cut": cut.gamma, "class": class_json(c)})).collect();
            if !independent {
                return Err(CliError::Semantic("index depends on the cut".into()));
            }
            let mut out = class_json(&first.1);
            let m = out.as_object_mut().unwrap();
            m.insert("radius".into(), json!(radius));
            m.insert("cut_independent".into(), json!(independent));
            m.insert("cuts".into(), Value::Array(cuts));
            return Ok(out);
        }
        let (n, _) = h.source().space().line().ok_or_else(|| CliError::Semantic("cuts need an interval or a circle".into()))?;
        let gamma = cut.unwrap_or(n / 2 - 1);
        let c = index(&h, &Cut::new(gamma, radius))?;
        let mut out = class_json(&c);
        let m = out.as_object_mut().unwrap();
        m.insert("cut".into(), json!(gamma));
        m.insert("radius".into(), json!(radius));
        Ok(out)
    })())
}

fn homo_document(h: &Homo) -> Value {
    document_json(&Document { field: h.field(), payload: Payload::Homo(h.clone()) })
}

pub fn cmd_normalize(path: &Path) -> Outcome {
    Outcome::from_result((|| {
        let h = read_homo(path)?;
        require_iso(&h)?;
        let n = normalize_to_shift(&h)?;
        let transport: Vec<Value> = n
            .moves
            .iter()
            .map(|m| json!({"prime": m.prime, "from_site": m.from_site, "from_leg": m.from_leg, "to_site": m.to_site, "to_leg": m.to_leg}))
            .collect();
        Ok(json!({
            "transport": transport,
            "spreads": {"alpha": h.spread().to_string(), "sigma": n.sigma.spread().to_string(), "f": n.f.spread().to_string()},
            "sigma": homo_document(&n.sigma),
            "f": homo_document(&n.f),
        }))
    })())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoarseMode {
    Deg,
    Class,
    Homologous,
}

fn degree_input(path: &Path) -> Result<(Arc<MetricSpace>, Chain0), CliError> {
    match read_document(path)?.payload {
        Payload::System(s) => Ok((s.space().clone(), coarse::deg(&s))),
        Payload::Chain0 { space, chain } => Ok((space, chain)),
        other => Err(schema(format!("expected a system or a 0-chain, found {}", other.kind()))),
    }
}

pub fn cmd_coarse(mode: CoarseMode, inputs: &[&Path], bound: Option<&str>) -> Outcome {
    Outcome::from_result((|| {
        let want = if mode == CoarseMode::Homologous { 2 } else { 1 };
        if inputs.len() != want {
            return Err(schema(format!("expected {want} input file(s), got {}", inputs.len())));
        }
        let (space, a) = degree_input(inputs[0])?;
        match mode {
            CoarseMode::Deg => Ok(chain0_json(&a)),
            CoarseMode::Class => Ok(json!({"class": prime_vector_json(&a.total())})),
            CoarseMode::Homologous => {
                let l = parse_rational(bound.ok_or_else(|| schema("homologous needs --bound"))?)?;
                if l.is_negative() {
                    return Err(schema("the bound must be nonnegative"));
                }
                let (space_b, b) = degree_input(inputs[1])?;
                if space != space_b {
                    return Err(CliError::Semantic("chains live on different spaces".into()));
                }
                match coarse::l_homologous(&space, &a, &b, &l)? {
                    Homology::Homologous(c) => {
                        let check = coarse::boundary(&c) == a.sub(&b);
                        Ok(json!({"homologous": true, "bound": l.to_string(), "certificate": chain1_json(&c), "boundary_matches": check}))
                    }
                    Homology::NotHomologous(o) => Ok(json!({
                        "homologous": false,
                        "bound": l.to_string(),
                        "obstruction": {"prime": o.prime, "component": o.component, "sum_a": o.sum_a, "sum_b": o.sum_b},
                    })),
                }
            }
        }
    })())
}

pub fn cmd_k1(path: &Path, size: Option<usize>) -> Outcome {
    Outcome::from_result((|| {
        let m = match read_document(path)?.payload {
            Payload::Matrix(m) => m,
            other => return Err(schema(format!("expected a matrix document, found {}", other.kind()))),
        };
        let n = size.unwrap_or(m.rows());
        if m.is_square() && m.det_ff()?.is_zero() {
            return Err(CliError::Semantic("singular matrix".into()));
        }
        let class = k1_class(&m, n)?;
        let class: Map<String, Value> = class.exponents().iter().map(|(p, e)| (p.to_string(), Value::String(e.to_string()))).collect();
        Ok(json!({"class": class}))
    })())
}

/// Writes `doc` as pretty JSON.
pub fn write_document(path: &Path, doc: &Document) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&document_json(doc)).expect("JSON values always serialize");
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
