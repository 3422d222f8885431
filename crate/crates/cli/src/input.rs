//! Input documents: TOML text with a fixed schema per kind, exact scalars
//! written as integers or `"p/q"` strings.

use std::collections::BTreeMap;

use grla_core::exactfield::{parse_scalar, Scalar};
use thiserror::Error;
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("bad scalar at {path}: {value:?} ({msg})")]
    BadScalar {
        path: String,
        value: String,
        msg: String,
    },
}

fn schema<T>(path: &str, msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError::Schema {
        path: path.to_string(),
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Grrs,
    LieAlg,
    Affinize,
    FixedPoint,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Grrs => "grrs",
            Kind::LieAlg => "liealg",
            Kind::Affinize => "affinize",
            Kind::FixedPoint => "fixedpoint",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        [Kind::Grrs, Kind::LieAlg, Kind::Affinize, Kind::FixedPoint]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub window: Option<i64>,
    pub string_cap: Option<u32>,
}

pub type ScalarMatrix = Vec<Vec<Scalar>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInput {
    pub base: Vec<Scalar>,
    /// Generators of the modulus lattice.
    pub modulus: Vec<Vec<i64>>,
    pub residues: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrrsInput {
    pub gram: ScalarMatrix,
    /// Ambient images of the null lattice basis.
    pub null_basis: ScalarMatrix,
    pub families: Vec<FamilyInput>,
}

/// `[x, y] = sum c * label`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketInput {
    pub x: String,
    pub y: String,
    pub value: Vec<(Scalar, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Brackets {
        form: ScalarMatrix,
        brackets: Vec<BracketInput>,
    },
    /// One matrix per basis element, in basis order; the form is the trace form.
    Matrices(Vec<ScalarMatrix>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraInput {
    pub basis: Vec<String>,
    pub cartan: Vec<String>,
    pub structure: Structure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismInput {
    pub order: u32,
    /// Column `j` is the image of basis element `j`.
    pub matrix: ScalarMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Grrs(GrrsInput),
    LieAlg(AlgebraInput),
    Affinize(AlgebraInput),
    FixedPoint(AlgebraInput, AutomorphismInput),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub name: Option<String>,
    pub options: Options,
    pub payload: Payload,
}

impl InputDocument {
    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Grrs(_) => Kind::Grrs,
            Payload::LieAlg(_) => Kind::LieAlg,
            Payload::Affinize(_) => Kind::Affinize,
            Payload::FixedPoint(..) => Kind::FixedPoint,
        }
    }

    pub fn algebra(&self) -> Option<&AlgebraInput> {
        match &self.payload {
            Payload::Grrs(_) => None,
            Payload::LieAlg(a) | Payload::Affinize(a) | Payload::FixedPoint(a, _) => Some(a),
        }
    }
}

/// Parses and validates a document.
pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        InputError::Parse {
            line,
            msg: e.message().to_string(),
        }
    })?;
    let mut top = Fields::new(&table, "");
    let kind_s = top.req_str("kind")?;
    let Some(kind) = Kind::parse(&kind_s) else {
        return schema(
            "kind",
            format!(
                "unknown kind {:?}; expected grrs, liealg, affinize or fixedpoint",
                kind_s
            ),
        );
    };
    let name = top.opt_str("name")?;
    let options = match top.opt_table("options")? {
        None => Options::default(),
        Some(t) => {
            let mut f = Fields::new(t, "options");
            let window = f.opt_int("window")?;
            if window.is_some_and(|w| w < 0) {
                return schema("options.window", "must be nonnegative");
            }
            let cap = f.opt_int("string_cap")?;
            let string_cap = match cap {
                None => None,
                Some(c) if (1..=64).contains(&c) => Some(c as u32),
                Some(_) => return schema("options.string_cap", "must be between 1 and 64"),
            };
            f.finish()?;
            Options { window, string_cap }
        }
    };
    let payload = match kind {
        Kind::Grrs => Payload::Grrs(parse_grrs(top.req_table("grrs")?, "grrs")?),
        Kind::LieAlg => Payload::LieAlg(parse_algebra(top.req_table("algebra")?, "algebra")?),
        Kind::Affinize => Payload::Affinize(parse_algebra(top.req_table("algebra")?, "algebra")?),
        Kind::FixedPoint => {
            let a = parse_algebra(top.req_table("algebra")?, "algebra")?;
            let s = parse_automorphism(
                top.req_table("automorphism")?,
                "automorphism",
                a.basis.len(),
            )?;
            Payload::FixedPoint(a, s)
        }
    };
    top.finish()?;
    Ok(InputDocument {
        name,
        options,
        payload,
    })
}

/// Key access that records which keys were consumed, so leftovers are reported.
struct Fields<'a> {
    table: &'a Table,
    prefix: String,
    used: Vec<&'a str>,
}

impl<'a> Fields<'a> {
    fn new(table: &'a Table, prefix: &str) -> Self {
        Fields {
            table,
            prefix: prefix.to_string(),
            used: Vec::new(),
        }
    }

    fn path(&self, key: &str) -> String {
        if self.prefix.is_empty() {
            key.to_string()
        } else {
            format!("{}.{}", self.prefix, key)
        }
    }

    fn get(&mut self, key: &str) -> Option<&'a Value> {
        let (k, v) = self.table.get_key_value(key)?;
        self.used.push(k.as_str());
        Some(v)
    }

    fn req(&mut self, key: &str) -> Result<&'a Value, InputError> {
        match self.get(key) {
            Some(v) => Ok(v),
            None => schema(&self.path(key), "missing"),
        }
    }

    fn req_str(&mut self, key: &str) -> Result<String, InputError> {
        let path = self.path(key);
        match self.req(key)? {
            Value::String(s) => Ok(s.clone()),
            _ => schema(&path, "expected a string"),
        }
    }

    fn opt_str(&mut self, key: &str) -> Result<Option<String>, InputError> {
        let path = self.path(key);
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => schema(&path, "expected a string"),
        }
    }

    fn opt_int(&mut self, key: &str) -> Result<Option<i64>, InputError> {
        let path = self.path(key);
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(*i)),
            Some(_) => schema(&path, "expected an integer"),
        }
    }

    fn req_table(&mut self, key: &str) -> Result<&'a Table, InputError> {
        let path = self.path(key);
        match self.req(key)? {
            Value::Table(t) => Ok(t),
            _ => schema(&path, "expected a table"),
        }
    }

    fn opt_table(&mut self, key: &str) -> Result<Option<&'a Table>, InputError> {
        let path = self.path(key);
        match self.get(key) {
            None => Ok(None),
            Some(Value::Table(t)) => Ok(Some(t)),
            Some(_) => schema(&path, "expected a table"),
        }
    }

    fn finish(self) -> Result<(), InputError> {
        for k in self.table.keys() {
            if !self.used.contains(&k.as_str()) {
                return schema(&self.path(k), "unknown key");
            }
        }
        Ok(())
    }
}

fn scalar(v: &Value, path: &str) -> Result<Scalar, InputError> {
    match v {
        Value::Integer(i) => Ok(Scalar::int(*i)),
        Value::String(s) => parse_scalar(s.trim()).map_err(|e| InputError::BadScalar {
            path: path.to_string(),
            value: s.clone(),
            msg: e.to_string(),
        }),
        Value::Float(x) => Err(InputError::BadScalar {
            path: path.to_string(),
            value: x.to_string(),
            msg: "floating point values are not exact; write \"p/q\"".into(),
        }),
        _ => schema(path, "expected an integer or a \"p/q\" string"),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, InputError> {
    match v {
        Value::Array(a) => Ok(a),
        _ => schema(path, "expected an array"),
    }
}

fn scalar_vec(v: &Value, path: &str, len: Option<usize>) -> Result<Vec<Scalar>, InputError> {
    let a = array(v, path)?;
    if let Some(n) = len {
        if a.len() != n {
            return schema(path, format!("expected {} entries, found {}", n, a.len()));
        }
    }
    a.iter()
        .enumerate()
        .map(|(i, x)| scalar(x, &format!("{}[{}]", path, i)))
        .collect()
}

fn scalar_matrix(
    v: &Value,
    path: &str,
    rows: Option<usize>,
    cols: Option<usize>,
) -> Result<ScalarMatrix, InputError> {
    let a = array(v, path)?;
    if let Some(n) = rows {
        if a.len() != n {
            return schema(path, format!("expected {} rows, found {}", n, a.len()));
        }
    }
    let cols = cols.or_else(|| a.first().and_then(|r| r.as_array()).map(|r| r.len()));
    a.iter()
        .enumerate()
        .map(|(i, r)| scalar_vec(r, &format!("{}[{}]", path, i), cols))
        .collect()
}

fn int_vec(v: &Value, path: &str, len: usize) -> Result<Vec<i64>, InputError> {
    let a = array(v, path)?;
    if a.len() != len {
        return schema(path, format!("expected {} entries, found {}", len, a.len()));
    }
    a.iter()
        .enumerate()
        .map(|(i, x)| match x {
            Value::Integer(k) => Ok(*k),
            _ => schema(&format!("{}[{}]", path, i), "expected an integer"),
        })
        .collect()
}

fn int_rows(v: &Value, path: &str, len: usize) -> Result<Vec<Vec<i64>>, InputError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| int_vec(r, &format!("{}[{}]", path, i), len))
        .collect()
}

fn check_symmetric(m: &ScalarMatrix, path: &str) -> Result<(), InputError> {
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate().take(i) {
            if *x != m[j][i] {
                return schema(
                    path,
                    format!(
                        "not symmetric: entry ({}, {}) differs from ({}, {})",
                        i, j, j, i
                    ),
                );
            }
        }
    }
    Ok(())
}

fn parse_grrs(t: &Table, prefix: &str) -> Result<GrrsInput, InputError> {
    let mut f = Fields::new(t, prefix);
    let gram_path = f.path("gram");
    let gram = scalar_matrix(f.req("gram")?, &gram_path, None, None)?;
    let dim = gram.len();
    if dim == 0 {
        return schema(&gram_path, "empty form");
    }
    if gram.iter().any(|r| r.len() != dim) {
        return schema(&gram_path, "form must be square");
    }
    check_symmetric(&gram, &gram_path)?;
    let nb_path = f.path("null_basis");
    let null_basis = match f.get("null_basis") {
        None => Vec::new(),
        Some(v) => scalar_matrix(v, &nb_path, None, Some(dim))?,
    };
    let nu = null_basis.len();
    let fam_path = f.path("family");
    let fams = array(f.req("family")?, &fam_path)?;
    let mut families = Vec::new();
    for (i, fv) in fams.iter().enumerate() {
        let p = format!("{}[{}]", fam_path, i);
        let Value::Table(ft) = fv else {
            return schema(&p, "expected a table");
        };
        let mut ff = Fields::new(ft, &p);
        let base = scalar_vec(ff.req("base")?, &ff.path("base"), Some(dim))?;
        let modulus = match ff.get("modulus") {
            None => (0..nu)
                .map(|k| (0..nu).map(|j| i64::from(j == k)).collect())
                .collect(),
            Some(v) => int_rows(v, &ff.path("modulus"), nu)?,
        };
        let residues = match ff.get("residues") {
            None => vec![vec![0; nu]],
            Some(v) => int_rows(v, &ff.path("residues"), nu)?,
        };
        if residues.is_empty() {
            return schema(&ff.path("residues"), "a family needs at least one residue");
        }
        ff.finish()?;
        families.push(FamilyInput {
            base,
            modulus,
            residues,
        });
    }
    f.finish()?;
    Ok(GrrsInput {
        gram,
        null_basis,
        families,
    })
}

fn label_ok(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_algebra(t: &Table, prefix: &str) -> Result<AlgebraInput, InputError> {
    let mut f = Fields::new(t, prefix);
    let basis_path = f.path("basis");
    let basis: Vec<String> = array(f.req("basis")?, &basis_path)?
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Value::String(s) if label_ok(s) => Ok(s.clone()),
            _ => schema(
                &format!("{}[{}]", basis_path, i),
                "expected a label (a letter, then letters, digits or _)",
            ),
        })
        .collect::<Result<_, _>>()?;
    if basis.is_empty() {
        return schema(&basis_path, "empty basis");
    }
    for (i, b) in basis.iter().enumerate() {
        if basis[..i].contains(b) {
            return schema(&basis_path, format!("label {:?} repeated", b));
        }
    }
    let index = |s: &str, path: &str| -> Result<usize, InputError> {
        basis
            .iter()
            .position(|b| b == s)
            .map_or_else(|| schema(path, format!("unknown basis label {:?}", s)), Ok)
    };
    let cartan_path = f.path("cartan");
    let mut cartan = Vec::new();
    for (i, v) in array(f.req("cartan")?, &cartan_path)?.iter().enumerate() {
        let p = format!("{}[{}]", cartan_path, i);
        let Value::String(s) = v else {
            return schema(&p, "expected a label");
        };
        index(s, &p)?;
        cartan.push(s.clone());
    }
    let n = basis.len();
    let structure = match f.opt_table("matrices")? {
        Some(mt) => {
            if f.get("form").is_some() || f.get("brackets").is_some() {
                return schema(
                    prefix,
                    "give either matrices or form and brackets, not both",
                );
            }
            let mp = f.path("matrices");
            let mut mf = Fields::new(mt, &mp);
            let mut mats = Vec::new();
            let mut size = None;
            for b in &basis {
                let p = mf.path(b);
                let m = scalar_matrix(mf.req(b)?, &p, size, size)?;
                if m.is_empty() || m.iter().any(|r| r.len() != m.len()) {
                    return schema(&p, "expected a nonempty square matrix");
                }
                size = Some(m.len());
                mats.push(m);
            }
            mf.finish()?;
            Structure::Matrices(mats)
        }
        None => {
            let form_path = f.path("form");
            let form = scalar_matrix(f.req("form")?, &form_path, Some(n), Some(n))?;
            check_symmetric(&form, &form_path)?;
            let br_path = f.path("brackets");
            let mut brackets = Vec::new();
            if let Some(v) = f.get("brackets") {
                for (i, b) in array(v, &br_path)?.iter().enumerate() {
                    let p = format!("{}[{}]", br_path, i);
                    let Value::String(s) = b else {
                        return schema(&p, "expected a string \"[x, y] = ...\"");
                    };
                    let b = parse_bracket(s, &p)?;
                    index(&b.x, &p)?;
                    index(&b.y, &p)?;
                    for (_, l) in &b.value {
                        index(l, &p)?;
                    }
                    if brackets
                        .iter()
                        .any(|o: &BracketInput| o.x == b.x && o.y == b.y)
                    {
                        return schema(&p, format!("[{}, {}] given twice", b.x, b.y));
                    }
                    brackets.push(b);
                }
            }
            Structure::Brackets { form, brackets }
        }
    };
    f.finish()?;
    Ok(AlgebraInput {
        basis,
        cartan,
        structure,
    })
}

fn parse_automorphism(t: &Table, prefix: &str, n: usize) -> Result<AutomorphismInput, InputError> {
    let mut f = Fields::new(t, prefix);
    let order_path = f.path("order");
    let order = match f.req("order")? {
        Value::Integer(m) if (1..=64).contains(m) => *m as u32,
        _ => return schema(&order_path, "expected an integer between 1 and 64"),
    };
    let matrix = scalar_matrix(f.req("matrix")?, &f.path("matrix"), Some(n), Some(n))?;
    f.finish()?;
    Ok(AutomorphismInput { order, matrix })
}

/// Parses `"[x, y] = c1*l1 + c2*l2 - l3"`; coefficients are rationals or parenthesized scalars.
pub fn parse_bracket(s: &str, path: &str) -> Result<BracketInput, InputError> {
    fn bad<T>(path: &str, s: &str, msg: &str) -> Result<T, InputError> {
        schema(path, format!("{} in {:?}", msg, s))
    }
    let Some((lhs, rhs)) = s.split_once('=') else {
        return bad(path, s, "missing '='");
    };
    let lhs = lhs.trim();
    let Some(inner) = lhs.strip_prefix('[').and_then(|x| x.strip_suffix(']')) else {
        return bad(path, s, "left side must be [x, y]");
    };
    let Some((x, y)) = inner.split_once(',') else {
        return bad(path, s, "left side must be [x, y]");
    };
    let (x, y) = (x.trim().to_string(), y.trim().to_string());
    if !label_ok(&x) || !label_ok(&y) {
        return bad(path, s, "bad label on the left side");
    }
    let value = parse_combination(rhs, path).or_else(|e| match e {
        InputError::Schema { msg, .. } => bad(path, s, &msg),
        other => Err(other),
    })?;
    Ok(BracketInput { x, y, value })
}

fn parse_combination(s: &str, path: &str) -> Result<Vec<(Scalar, String)>, InputError> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let skip = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let mut terms: BTreeMap<String, Scalar> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    skip(&mut i);
    if chars[i..].iter().collect::<String>().trim() == "0" {
        return Ok(Vec::new());
    }
    let mut first = true;
    while i < chars.len() {
        let mut sign = Scalar::one();
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = Scalar::int(-1);
            }
            i += 1;
            skip(&mut i);
        } else if !first {
            return schema(path, "expected '+' or '-'");
        }
        first = false;
        let mut coef = Scalar::one();
        if i < chars.len() && chars[i] == '(' {
            let start = i + 1;
            let mut depth = 1;
            i += 1;
            while i < chars.len() && depth > 0 {
                match chars[i] {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                i += 1;
            }
            if depth != 0 {
                return schema(path, "unbalanced parentheses");
            }
            let text: String = chars[start..i - 1].iter().collect();
            coef = parse_scalar(text.trim()).map_err(|e| InputError::BadScalar {
                path: path.to_string(),
                value: text.clone(),
                msg: e.to_string(),
            })?;
            skip(&mut i);
            if i >= chars.len() || chars[i] != '*' {
                return schema(path, "expected '*' after a coefficient");
            }
            i += 1;
            skip(&mut i);
        } else if i < chars.len() && chars[i].is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            coef = parse_scalar(&text).map_err(|e| InputError::BadScalar {
                path: path.to_string(),
                value: text.clone(),
                msg: e.to_string(),
            })?;
            skip(&mut i);
            if i >= chars.len() || chars[i] != '*' {
                return schema(path, "expected '*' after a coefficient");
            }
            i += 1;
            skip(&mut i);
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
            i += 1;
        }
        let label: String = chars[start..i].iter().collect();
        if !label_ok(&label) {
            return schema(path, "expected a basis label");
        }
        let c = &sign * &coef;
        match terms.get_mut(&label) {
            Some(e) => *e = &*e + &c,
            None => {
                order.push(label.clone());
                terms.insert(label, c);
            }
        }
        skip(&mut i);
    }
    if first {
        return schema(path, "empty right side");
    }
    Ok(order
        .into_iter()
        .filter_map(|l| terms.remove(&l).filter(|c| !c.is_zero()).map(|c| (c, l)))
        .collect())
}

fn scalar_value(s: &Scalar) -> Value {
    match s.to_i64() {
        Some(i) => Value::Integer(i),
        None => Value::String(s.to_string()),
    }
}

fn matrix_value(m: &ScalarMatrix) -> Value {
    Value::Array(
        m.iter()
            .map(|r| Value::Array(r.iter().map(scalar_value).collect()))
            .collect(),
    )
}

fn int_rows_value(m: &[Vec<i64>]) -> Value {
    Value::Array(
        m.iter()
            .map(|r| Value::Array(r.iter().map(|&x| Value::Integer(x)).collect()))
            .collect(),
    )
}

/// `c*label` terms joined canonically.
pub fn format_combination(terms: &[(Scalar, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, l)) in terms.iter().enumerate() {
        let (neg, abs) = if c.is_rational() && c.signum() == Some(std::cmp::Ordering::Less) {
            (true, -c)
        } else {
            (false, c.clone())
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            if abs.is_rational() {
                out.push_str(&format!("{}*", abs));
            } else {
                out.push_str(&format!("({})*", abs));
            }
        }
        out.push_str(l);
    }
    out
}

fn algebra_table(a: &AlgebraInput) -> Table {
    let mut t = Table::new();
    t.insert(
        "basis".into(),
        Value::Array(a.basis.iter().map(|b| Value::String(b.clone())).collect()),
    );
    t.insert(
        "cartan".into(),
        Value::Array(a.cartan.iter().map(|b| Value::String(b.clone())).collect()),
    );
    match &a.structure {
        Structure::Brackets { form, brackets } => {
            t.insert("form".into(), matrix_value(form));
            let bs = brackets
                .iter()
                .map(|b| {
                    Value::String(format!(
                        "[{}, {}] = {}",
                        b.x,
                        b.y,
                        format_combination(&b.value)
                    ))
                })
                .collect();
            t.insert("brackets".into(), Value::Array(bs));
        }
        Structure::Matrices(ms) => {
            let mut mt = Table::new();
            for (b, m) in a.basis.iter().zip(ms) {
                mt.insert(b.clone(), matrix_value(m));
            }
            t.insert("matrices".into(), Value::Table(mt));
        }
    }
    t
}

/// Canonical text of a document; parsing it gives back an equal document.
pub fn serialize(doc: &InputDocument) -> String {
    let mut t = Table::new();
    t.insert("kind".into(), Value::String(doc.kind().name().into()));
    if let Some(n) = &doc.name {
        t.insert("name".into(), Value::String(n.clone()));
    }
    let mut o = Table::new();
    if let Some(w) = doc.options.window {
        o.insert("window".into(), Value::Integer(w));
    }
    if let Some(c) = doc.options.string_cap {
        o.insert("string_cap".into(), Value::Integer(c as i64));
    }
    if !o.is_empty() {
        t.insert("options".into(), Value::Table(o));
    }
    match &doc.payload {
        Payload::Grrs(g) => {
            let mut gt = Table::new();
            gt.insert("gram".into(), matrix_value(&g.gram));
            if !g.null_basis.is_empty() {
                gt.insert("null_basis".into(), matrix_value(&g.null_basis));
            }
            let fams = g
                .families
                .iter()
                .map(|f| {
                    let mut ft = Table::new();
                    ft.insert(
                        "base".into(),
                        Value::Array(f.base.iter().map(scalar_value).collect()),
                    );
                    ft.insert("modulus".into(), int_rows_value(&f.modulus));
                    ft.insert("residues".into(), int_rows_value(&f.residues));
                    Value::Table(ft)
                })
                .collect();
            gt.insert("family".into(), Value::Array(fams));
            t.insert("grrs".into(), Value::Table(gt));
        }
        Payload::LieAlg(a) | Payload::Affinize(a) => {
            t.insert("algebra".into(), Value::Table(algebra_table(a)));
        }
        Payload::FixedPoint(a, s) => {
            t.insert("algebra".into(), Value::Table(algebra_table(a)));
            let mut st = Table::new();
            st.insert("order".into(), Value::Integer(s.order as i64));
            st.insert("matrix".into(), matrix_value(&s.matrix));
            t.insert("automorphism".into(), Value::Table(st));
        }
    }
    toml::to_string(&t).expect("tables of plain values serialize")
}
