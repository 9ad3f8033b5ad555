//! JSON formats for families and certificates. Semantic errors in a family
//! file carry the line and column of the offending value.

use std::fmt;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::criteria::Certificate;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::tensor::{symmetric_lift, ProductFamily, ProductTensor, SymmetricFamily};

pub const SCHEMA: u64 = 1;
pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const TOP_KEYS: &[&str] = &[
    "schema",
    "name",
    "description",
    "field",
    "mode_dims",
    "tensors",
    "symmetric",
];

/// A family as stored in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Product(ProductFamily),
    Symmetric(SymmetricFamily),
}

impl Family {
    /// The product family, lifting a symmetric one.
    pub fn product(&self) -> Result<ProductFamily> {
        match self {
            Family::Product(f) => Ok(f.clone()),
            Family::Symmetric(s) => symmetric_lift(s),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Family::Product(f) => f.field(),
            Family::Symmetric(s) => s.field(),
        }
    }

    pub fn symmetric(&self) -> Option<&SymmetricFamily> {
        match self {
            Family::Symmetric(s) => Some(s),
            Family::Product(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Seg {
    Key(String),
    Index(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct JsonPath(Vec<Seg>);

impl JsonPath {
    fn key(&self, k: &str) -> JsonPath {
        let mut p = self.clone();
        p.0.push(Seg::Key(k.into()));
        p
    }

    fn index(&self, i: usize) -> JsonPath {
        let mut p = self.clone();
        p.0.push(Seg::Index(i));
        p
    }
}

impl fmt::Display for JsonPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(root)");
        }
        for (i, s) in self.0.iter().enumerate() {
            match s {
                Seg::Key(k) if i == 0 => write!(f, "{k}")?,
                Seg::Key(k) => write!(f, ".{k}")?,
                Seg::Index(n) => write!(f, "[{n}]")?,
            }
        }
        Ok(())
    }
}

/// Byte offset of the value at `path` in `text`, found by a tolerant scan.
fn locate(text: &str, path: &JsonPath) -> Option<usize> {
    let b = text.as_bytes();
    let mut i = skip_ws(b, 0);
    for seg in &path.0 {
        match seg {
            Seg::Index(k) => {
                if b.get(i) != Some(&b'[') {
                    return None;
                }
                i = skip_ws(b, i + 1);
                for _ in 0..*k {
                    i = skip_ws(b, skip_value(b, i)?);
                    if b.get(i) != Some(&b',') {
                        return None;
                    }
                    i = skip_ws(b, i + 1);
                }
            }
            Seg::Key(name) => {
                if b.get(i) != Some(&b'{') {
                    return None;
                }
                i = skip_ws(b, i + 1);
                loop {
                    let end = skip_value(b, i)?;
                    let key = text.get(i + 1..end - 1)?;
                    i = skip_ws(b, end);
                    if b.get(i) != Some(&b':') {
                        return None;
                    }
                    i = skip_ws(b, i + 1);
                    if key == name {
                        break;
                    }
                    i = skip_ws(b, skip_value(b, i)?);
                    if b.get(i) != Some(&b',') {
                        return None;
                    }
                    i = skip_ws(b, i + 1);
                }
            }
        }
    }
    Some(i)
}

fn skip_ws(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

fn skip_value(b: &[u8], mut i: usize) -> Option<usize> {
    match *b.get(i)? {
        b'"' => {
            i += 1;
            while *b.get(i)? != b'"' {
                i += if b[i] == b'\\' { 2 } else { 1 };
            }
            Some(i + 1)
        }
        b'[' | b'{' => {
            let mut depth = 0usize;
            loop {
                match *b.get(i)? {
                    b'"' => {
                        i = skip_value(b, i)?;
                        continue;
                    }
                    b'[' | b'{' => depth += 1,
                    b']' | b'}' => {
                        depth -= 1;
                        if depth == 0 {
                            return Some(i + 1);
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
        }
        _ => {
            while i < b.len() && !matches!(b[i], b',' | b']' | b'}') && !b[i].is_ascii_whitespace()
            {
                i += 1;
            }
            Some(i)
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rfind('\n')
        .map_or(before.len(), |p| before.len() - p - 1)
        + 1;
    (line, col)
}

struct Parser<'a> {
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, path: &JsonPath, msg: impl fmt::Display) -> Error {
        match locate(self.text, path) {
            Some(off) => {
                let (l, c) = line_col(self.text, off);
                Error::Parse(format!("line {l}, column {c}: {path}: {msg}"))
            }
            None => Error::Parse(format!("{path}: {msg}")),
        }
    }

    fn object<'v>(&self, v: &'v Value, path: &JsonPath) -> Result<&'v Map<String, Value>> {
        v.as_object()
            .ok_or_else(|| self.err(path, "expected an object"))
    }

    fn array<'v>(&self, v: &'v Value, path: &JsonPath) -> Result<&'v Vec<Value>> {
        v.as_array()
            .ok_or_else(|| self.err(path, "expected an array"))
    }

    fn count(&self, v: &Value, path: &JsonPath) -> Result<usize> {
        v.as_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| self.err(path, "expected a non-negative integer"))
    }

    fn scalar(&self, field: Field, v: &Value, path: &JsonPath) -> Result<Scalar> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(field.from_i64(i))
                } else if let Some(u) = n.as_u64() {
                    Ok(field.from_u64(u))
                } else {
                    Err(self.err(
                        path,
                        "non-integer number; write rationals as \"p/q\" strings",
                    ))
                }
            }
            Value::String(s) => field.parse(s).map_err(|e| self.err(path, e)),
            _ => Err(self.err(path, "expected an integer or a \"p/q\" string")),
        }
    }

    fn vector(&self, field: Field, v: &Value, path: &JsonPath) -> Result<Vec<Scalar>> {
        self.array(v, path)?
            .iter()
            .enumerate()
            .map(|(i, x)| self.scalar(field, x, &path.index(i)))
            .collect()
    }

    fn field(&self, v: &Value, path: &JsonPath) -> Result<Field> {
        let obj = self.object(v, path)?;
        match obj.get("type").and_then(Value::as_str) {
            Some("rational") => Ok(Field::Rational),
            Some("prime") => {
                let pp = path.key("p");
                let p = obj
                    .get("p")
                    .ok_or_else(|| self.err(path, "prime field needs \"p\""))?;
                let p = p
                    .as_u64()
                    .ok_or_else(|| self.err(&pp, "expected a positive integer"))?;
                Field::prime(p).map_err(|e| self.err(&pp, e))
            }
            _ => Err(self.err(&path.key("type"), "expected \"rational\" or \"prime\"")),
        }
    }

    fn tensor(
        &self,
        field: Field,
        dims: &[usize],
        v: &Value,
        path: &JsonPath,
    ) -> Result<ProductTensor> {
        let (fpath, factors, coeff) = match v {
            Value::Array(_) => (path.clone(), v, field.one()),
            Value::Object(o) => {
                if let Some(k) = o.keys().find(|k| *k != "factors" && *k != "coeff") {
                    return Err(self.err(&path.key(k), "unknown key"));
                }
                let fpath = path.key("factors");
                let factors = o
                    .get("factors")
                    .ok_or_else(|| self.err(path, "missing \"factors\""))?;
                let coeff = match o.get("coeff") {
                    Some(c) => self.scalar(field, c, &path.key("coeff"))?,
                    None => field.one(),
                };
                (fpath, factors, coeff)
            }
            _ => {
                return Err(self.err(
                    path,
                    "expected an array of factors or an object with \"factors\"",
                ))
            }
        };
        if coeff.is_zero() {
            return Err(self.err(&path.key("coeff"), "coefficient is zero"));
        }
        let arr = self.array(factors, &fpath)?;
        if arr.len() != dims.len() {
            return Err(self.err(
                &fpath,
                format!("{} factors but {} modes", arr.len(), dims.len()),
            ));
        }
        let mut out = Vec::with_capacity(arr.len());
        for (j, x) in arr.iter().enumerate() {
            let xp = fpath.index(j);
            let vec = self.vector(field, x, &xp)?;
            if vec.len() != dims[j] {
                return Err(self.err(
                    &xp,
                    format!(
                        "length {} but mode {} has dimension {}",
                        vec.len(),
                        j + 1,
                        dims[j]
                    ),
                ));
            }
            if vec.iter().all(Scalar::is_zero) {
                return Err(self.err(&xp, "zero factor"));
            }
            out.push(vec);
        }
        ProductTensor::new(out, coeff).map_err(|e| self.err(path, e))
    }

    fn symmetric(&self, field: Field, v: &Value, path: &JsonPath) -> Result<SymmetricFamily> {
        let obj = self.object(v, path)?;
        if let Some(k) = obj
            .keys()
            .find(|k| !["m", "base_vectors", "coeffs"].contains(&k.as_str()))
        {
            return Err(self.err(&path.key(k), "unknown key"));
        }
        let m = self.count(
            obj.get("m")
                .ok_or_else(|| self.err(path, "missing \"m\""))?,
            &path.key("m"),
        )?;
        let bp = path.key("base_vectors");
        let base_v = obj
            .get("base_vectors")
            .ok_or_else(|| self.err(path, "missing \"base_vectors\""))?;
        let base = self
            .array(base_v, &bp)?
            .iter()
            .enumerate()
            .map(|(a, x)| {
                let vec = self.vector(field, x, &bp.index(a))?;
                if vec.iter().all(Scalar::is_zero) {
                    return Err(self.err(&bp.index(a), "zero base vector"));
                }
                Ok(vec)
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(a) = base.iter().position(|v| v.len() != base[0].len()) {
            return Err(self.err(&bp.index(a), "base vectors differ in length"));
        }
        let coeffs = match obj.get("coeffs") {
            Some(c) => self.vector(field, c, &path.key("coeffs"))?,
            None => vec![field.one(); base.len()],
        };
        SymmetricFamily::new(field, m, base, coeffs).map_err(|e| self.err(path, e))
    }

    fn family(&self) -> Result<Family> {
        let root: Value = serde_json::from_str(self.text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        let top = JsonPath::default();
        let obj = self.object(&root, &top)?;
        if let Some(k) = obj.keys().find(|k| !TOP_KEYS.contains(&k.as_str())) {
            return Err(self.err(&top.key(k), "unknown key"));
        }
        if let Some(s) = obj.get("schema") {
            if s.as_u64() != Some(SCHEMA) {
                return Err(self.err(
                    &top.key("schema"),
                    format!("unsupported schema, expected {SCHEMA}"),
                ));
            }
        }
        let field = self.field(
            obj.get("field")
                .ok_or_else(|| self.err(&top, "missing \"field\""))?,
            &top.key("field"),
        )?;
        let sym = obj
            .get("symmetric")
            .map(|v| self.symmetric(field, v, &top.key("symmetric")))
            .transpose()?;
        let dims = match obj.get("mode_dims") {
            Some(v) => {
                let dp = top.key("mode_dims");
                let dims = self
                    .array(v, &dp)?
                    .iter()
                    .enumerate()
                    .map(|(j, x)| self.count(x, &dp.index(j)))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(j) = dims.iter().position(|&d| d == 0) {
                    return Err(self.err(&dp.index(j), "mode dimension must be positive"));
                }
                if let Some(s) = &sym {
                    if dims != vec![s.dim(); s.m()] {
                        return Err(self.err(&dp, "does not match the symmetric block"));
                    }
                }
                dims
            }
            None => match &sym {
                Some(s) => vec![s.dim(); s.m()],
                None => return Err(self.err(&top, "missing \"mode_dims\"")),
            },
        };
        let tensors = match obj.get("tensors") {
            Some(v) => {
                let tp = top.key("tensors");
                let ts = self
                    .array(v, &tp)?
                    .iter()
                    .enumerate()
                    .map(|(a, t)| self.tensor(field, &dims, t, &tp.index(a)))
                    .collect::<Result<Vec<_>>>()?;
                Some(ts)
            }
            None => None,
        };
        match (sym, tensors) {
            (Some(s), None) => Ok(Family::Symmetric(s)),
            (Some(s), Some(ts)) => {
                let lift = symmetric_lift(&s)?;
                if lift.tensors() != ts.as_slice() {
                    return Err(self.err(&top.key("tensors"), "does not match the symmetric block"));
                }
                Ok(Family::Symmetric(s))
            }
            (None, Some(ts)) => {
                if ts.is_empty() {
                    return Err(self.err(&top.key("tensors"), "needs at least one tensor"));
                }
                ProductFamily::new(field, dims, ts)
                    .map(Family::Product)
                    .map_err(|e| self.err(&top, e))
            }
            (None, None) => Err(self.err(&top, "missing \"tensors\"")),
        }
    }
}

pub fn parse_family(text: &str) -> Result<Family> {
    Parser { text }.family()
}

fn scalar_json(x: &Scalar) -> Value {
    match x {
        Scalar::Mod(_) => Value::from(x.as_residue().expect("prime field")),
        Scalar::Rational(q) if q.denom().is_one() => match q.numer().to_i64() {
            Some(i) => Value::from(i),
            None => Value::from(x.to_string()),
        },
        Scalar::Rational(_) => Value::from(x.to_string()),
    }
}

fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("json value")
}

/// Serializes a family with one tensor or base vector per line.
pub fn family_to_json(f: &Family, name: Option<&str>) -> String {
    let mut lines = vec![format!("  \"schema\": {SCHEMA}")];
    if let Some(n) = name {
        lines.push(format!("  \"name\": {}", compact(&Value::from(n))));
    }
    lines.push(format!(
        "  \"field\": {}",
        compact(&serde_json::to_value(f.field()).expect("field"))
    ));
    match f {
        Family::Product(p) => {
            lines.push(format!(
                "  \"mode_dims\": {}",
                compact(&Value::from(p.mode_dims().to_vec()))
            ));
            let ts: Vec<String> = p
                .tensors()
                .iter()
                .map(|t| {
                    let factors =
                        Value::Array(t.factors().iter().map(|x| vector_json(x)).collect());
                    if t.coeff().is_one() {
                        format!("    {}", compact(&factors))
                    } else {
                        format!(
                            "    {{\"factors\": {}, \"coeff\": {}}}",
                            compact(&factors),
                            compact(&scalar_json(t.coeff()))
                        )
                    }
                })
                .collect();
            lines.push(format!("  \"tensors\": [\n{}\n  ]", ts.join(",\n")));
        }
        Family::Symmetric(s) => {
            lines.push(format!(
                "  \"mode_dims\": {}",
                compact(&Value::from(vec![s.dim(); s.m()]))
            ));
            let base: Vec<String> = s
                .base_vectors()
                .iter()
                .map(|v| format!("      {}", compact(&vector_json(v))))
                .collect();
            lines.push(format!(
                "  \"symmetric\": {{\n    \"m\": {},\n    \"base_vectors\": [\n{}\n    ],\n    \"coeffs\": {}\n  }}",
                s.m(),
                base.join(",\n"),
                compact(&vector_json(s.coeffs()))
            ));
        }
    }
    format!("{{\n{}\n}}\n", lines.join(",\n"))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// A certificate with the tool version and a hash of the input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: u64,
    pub tool: String,
    pub version: String,
    pub input: InputEcho,
    #[serde(flatten)]
    pub certificate: Certificate,
}

impl CertificateFile {
    pub fn new(
        certificate: Certificate,
        input_bytes: &[u8],
        path: Option<String>,
    ) -> CertificateFile {
        CertificateFile {
            schema: SCHEMA,
            tool: TOOL.into(),
            version: VERSION.into(),
            input: InputEcho {
                sha256: sha256_hex(input_bytes),
                path,
            },
            certificate,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    pub fn parse(text: &str) -> Result<CertificateFile> {
        let c: CertificateFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if c.schema != SCHEMA {
            return Err(Error::Parse(format!(
                "unsupported certificate schema {}",
                c.schema
            )));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::check_kgen;
    use crate::generators::{fixture_catalog, symmetric_identity};

    #[test]
    fn round_trip_catalog() {
        for fx in fixture_catalog() {
            let text = family_to_json(&fx.family, Some(&fx.name));
            assert_eq!(parse_family(&text).unwrap(), fx.family, "{}", fx.name);
        }
    }

    #[test]
    fn rational_and_coefficients() {
        let text = r#"{"field": {"type": "rational"}, "mode_dims": [2, 2],
            "tensors": [{"factors": [["1/2", -3], [0, 1]], "coeff": "-2/3"}, [[1, 1], [1, 0]]]}"#;
        let f = parse_family(text).unwrap();
        let back = parse_family(&family_to_json(&f, None)).unwrap();
        assert_eq!(f, back);
        let p = f.product().unwrap();
        assert_eq!(p.tensor(0).coeff().to_string(), "-2/3");
        assert_eq!(p.tensor(0).factor(0)[0].to_string(), "1/2");
    }

    #[test]
    fn zero_factor_located() {
        let text = "{\n  \"field\": {\"type\": \"prime\", \"p\": 5},\n  \"mode_dims\": [2, 2],\n  \"tensors\": [\n    [[1, 0], [0, 1]],\n    [[0, 1], [5, 0]]\n  ]\n}";
        let err = parse_family(text).unwrap_err().to_string();
        assert!(err.contains("line 6, column 14"), "{err}");
        assert!(err.contains("tensors[1][1]"), "{err}");
        assert!(err.contains("zero factor"), "{err}");
    }

    #[test]
    fn malformed_fields_named() {
        let cases = [
            (
                r#"{"field": {"type": "prime", "p": 4}, "mode_dims": [2,2], "tensors": [[[1,0],[1,0]]]}"#,
                "field.p",
            ),
            (
                r#"{"field": {"type": "rational"}, "mode_dims": [2,2], "tensors": [[[1,0],[1,0,0]]]}"#,
                "tensors[0][1]",
            ),
            (
                r#"{"field": {"type": "rational"}, "mode_dims": [2,2], "tensors": [[[1.5,0],[1,0]]]}"#,
                "tensors[0][0][0]",
            ),
            (
                r#"{"field": {"type": "rational"}, "mode_dims": [2,2], "tensor": []}"#,
                "tensor",
            ),
            (
                r#"{"field": {"type": "rational"}, "mode_dims": [2,2], "tensors": [{"factors": [[1,0],[1,0]], "coeff": 0}]}"#,
                "tensors[0].coeff",
            ),
            (
                r#"{"field": {"type": "rational"}, "mode_dims": [2,2], "tensors": [[[1,0],[1,0]]"#,
                "line 1",
            ),
        ];
        for (text, needle) in cases {
            let err = parse_family(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{err} lacks {needle}");
        }
    }

    #[test]
    fn symmetric_block() {
        let s = symmetric_identity(Field::prime(7).unwrap(), 3, 4).unwrap();
        let text = family_to_json(&Family::Symmetric(s.clone()), None);
        assert_eq!(parse_family(&text).unwrap(), Family::Symmetric(s));
        let bad = r#"{"field": {"type": "prime", "p": 3}, "symmetric": {"m": 3, "base_vectors": [[1, 0]]}}"#;
        assert!(parse_family(bad).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let fx = crate::generators::fixture_by_name("example_8_1").unwrap();
        let f = fx.family.product().unwrap();
        let cert = check_kgen(&f, None).unwrap();
        let file = CertificateFile::new(cert, b"input", Some("x.json".into()));
        let back = CertificateFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert!(back.certificate.is_consistent());
        assert_eq!(back.input.sha256.len(), 64);
    }
}
