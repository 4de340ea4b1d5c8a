//! JSON file formats and the infix polynomial syntax.
//!
//! Coefficients are `{"rat":"a/b"}` or `{"cyc":{"n":n,"terms":[["a/b",k],...]}}`,
//! series are arrays of `{"c":coeff,"e":"q/p"}`, polynomials arrays of
//! `{"c":coeff,"ex":[a,b]}` and semidegrees `{"phi":series,"r":"q/p"}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::branch::{from_one_place_branch, OnePlaceData};
use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElem, Rat};
use crate::laurent::LaurentPoly2;
use crate::semidegree::Semidegree;
use crate::series::{Dwps, Exp};
use crate::surface::{FamilyEntry, Surface};

pub const FORMAT_VERSION: u64 = 1;

/// Where a surface comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceSource {
    Semidegrees(Vec<Semidegree>),
    Branch(Dwps),
}

/// Contents of a surface file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFile {
    pub version: u64,
    pub field: Option<FieldConfig>,
    pub source: SurfaceSource,
    /// Entries carry 0-based `i`; the file stores them 1-based.
    pub family: Option<Vec<FamilyEntry>>,
}

impl SurfaceFile {
    pub fn config(&self) -> FieldConfig {
        self.field.unwrap_or_default()
    }

    pub fn build(&self) -> Result<(Surface, Option<OnePlaceData>)> {
        let cfg = self.config();
        match &self.source {
            SurfaceSource::Semidegrees(s) => Ok((Surface::build(s.clone(), self.family.clone(), cfg)?, None)),
            SurfaceSource::Branch(phi) => {
                let (s, d) = from_one_place_branch(phi, &cfg)?;
                Ok((s, Some(d)))
            }
        }
    }
}

fn perr(path: &str, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), message: message.into() }
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let m = v.as_object().ok_or_else(|| perr(path, "expected an object"))?;
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::UnknownField { path: path.to_string(), field: k.clone() });
        }
    }
    Ok(m)
}

fn field<'a>(m: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| perr(path, format!("missing field {:?}", key)))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(path, "expected an array"))
}

fn int(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| perr(path, "expected an integer"))
}

fn parse_fraction_parts(text: &str, path: &str) -> Result<(BigInt, BigInt)> {
    let bad = || perr(path, format!("{:?} is not a fraction", text));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?),
        None => (text.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if !d.is_positive() {
        return Err(perr(path, format!("{:?} needs a positive denominator", text)));
    }
    if !n.gcd(&d).is_one() && !(n.is_zero() && d.is_one()) {
        return Err(Error::UnreducedFraction { path: path.to_string(), text: text.to_string() });
    }
    Ok((n, d))
}

/// A reduced fraction `"a/b"` or an integer `"a"`.
pub fn parse_rational(text: &str, path: &str) -> Result<Rat> {
    let (n, d) = parse_fraction_parts(text, path)?;
    Ok(Rat::new(n, d))
}

pub fn parse_exponent(text: &str, path: &str) -> Result<Exp> {
    let (n, d) = parse_fraction_parts(text, path)?;
    let conv = |b: BigInt| i64::try_from(b).map_err(|_| perr(path, format!("exponent {:?} is too large", text)));
    Ok(Exp::new(conv(n)?, conv(d)?))
}

fn rat_text(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn exp_text(e: &Exp) -> String {
    format!("{}/{}", e.numer(), e.denom())
}

pub fn coeff_from_json(v: &Value, path: &str) -> Result<FieldElem> {
    let m = object(v, path, &["rat", "cyc"])?;
    match (m.get("rat"), m.get("cyc")) {
        (Some(_), Some(_)) => Err(Error::ExclusiveFields(format!("\"rat\" and \"cyc\" at {}", path))),
        (Some(r), None) => {
            let p = format!("{}.rat", path);
            let s = r.as_str().ok_or_else(|| perr(&p, "expected a string"))?;
            Ok(FieldElem::rational(parse_rational(s, &p)?))
        }
        (None, Some(c)) => {
            let p = format!("{}.cyc", path);
            let cm = object(c, &p, &["n", "terms"])?;
            let n = int(field(cm, &p, "n")?, &format!("{}.n", p))?;
            if n < 1 {
                return Err(perr(&format!("{}.n", p), "cyclotomic order must be positive"));
            }
            let tp = format!("{}.terms", p);
            let mut terms = Vec::new();
            for (k, t) in array(field(cm, &p, "terms")?, &tp)?.iter().enumerate() {
                let ep = format!("{}[{}]", tp, k);
                let pair = array(t, &ep)?;
                if pair.len() != 2 {
                    return Err(perr(&ep, "expected [\"a/b\", k]"));
                }
                let q = pair[0].as_str().ok_or_else(|| perr(&format!("{}[0]", ep), "expected a string"))?;
                let q = parse_rational(q, &format!("{}[0]", ep))?;
                let pw = int(&pair[1], &format!("{}[1]", ep))?;
                terms.push((q, pw.rem_euclid(n) as u64));
            }
            Ok(FieldElem::from_powers(n as u64, &terms))
        }
        (None, None) => Err(perr(path, "expected \"rat\" or \"cyc\"")),
    }
}

pub fn coeff_to_json(c: &FieldElem) -> Value {
    match c.as_rational() {
        Some(q) => json!({ "rat": rat_text(q) }),
        None => {
            let terms: Vec<Value> = c
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(k, q)| json!([rat_text(q), k]))
                .collect();
            json!({ "cyc": { "n": c.order(), "terms": terms } })
        }
    }
}

pub fn series_from_json(v: &Value, path: &str) -> Result<Dwps> {
    let mut terms = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (k, t) in array(v, path)?.iter().enumerate() {
        let tp = format!("{}[{}]", path, k);
        let m = object(t, &tp, &["c", "e"])?;
        let c = coeff_from_json(field(m, &tp, "c")?, &format!("{}.c", tp))?;
        let ep = format!("{}.e", tp);
        let e = field(m, &tp, "e")?.as_str().ok_or_else(|| perr(&ep, "expected a string"))?;
        let e = parse_exponent(e, &ep)?;
        if !seen.insert(e) {
            return Err(perr(&ep, "repeated exponent"));
        }
        terms.push((e, c));
    }
    Ok(Dwps::from_terms(terms))
}

pub fn series_to_json(s: &Dwps) -> Value {
    Value::Array(s.terms().iter().map(|(e, c)| json!({ "c": coeff_to_json(c), "e": exp_text(e) })).collect())
}

pub fn poly_from_json(v: &Value, path: &str) -> Result<LaurentPoly2> {
    let mut terms = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (k, t) in array(v, path)?.iter().enumerate() {
        let tp = format!("{}[{}]", path, k);
        let m = object(t, &tp, &["c", "ex"])?;
        let c = coeff_from_json(field(m, &tp, "c")?, &format!("{}.c", tp))?;
        let xp = format!("{}.ex", tp);
        let ex = array(field(m, &tp, "ex")?, &xp)?;
        if ex.len() != 2 {
            return Err(perr(&xp, "expected [a, b]"));
        }
        let a = int(&ex[0], &format!("{}[0]", xp))?;
        let b = int(&ex[1], &format!("{}[1]", xp))?;
        if b < 0 {
            return Err(perr(&format!("{}[1]", xp), "negative power of y"));
        }
        if !seen.insert((a, b)) {
            return Err(perr(&xp, "repeated monomial"));
        }
        terms.push(((a, b), c));
    }
    Ok(LaurentPoly2::from_terms(terms))
}

/// Terms by descending `y`, then descending `x`.
pub fn poly_to_json(p: &LaurentPoly2) -> Value {
    let mut terms: Vec<(&(i64, i64), &FieldElem)> = p.terms().collect();
    terms.sort_by(|a, b| (b.0 .1, b.0 .0).cmp(&(a.0 .1, a.0 .0)));
    Value::Array(terms.into_iter().map(|((a, b), c)| json!({ "c": coeff_to_json(c), "ex": [a, b] })).collect())
}

pub fn semidegree_from_json(v: &Value, path: &str) -> Result<Semidegree> {
    let m = object(v, path, &["phi", "r"])?;
    let phi = series_from_json(field(m, path, "phi")?, &format!("{}.phi", path))?;
    let rp = format!("{}.r", path);
    let r = field(m, path, "r")?.as_str().ok_or_else(|| perr(&rp, "expected a string"))?;
    let r = parse_exponent(r, &rp)?;
    Semidegree::new(phi, r)
}

pub fn semidegree_to_json(d: &Semidegree) -> Value {
    json!({ "phi": series_to_json(d.phi()), "r": exp_text(&d.r()) })
}

fn field_from_json(v: &Value) -> Result<FieldConfig> {
    let m = object(v, "$.field", &["order", "max_order"])?;
    let def = FieldConfig::default();
    let get = |k: &str, d: u64| -> Result<u64> {
        match m.get(k) {
            None => Ok(d),
            Some(x) => x.as_u64().filter(|&n| n > 0).ok_or_else(|| perr(&format!("$.field.{}", k), "expected a positive integer")),
        }
    };
    let order = get("order", def.order)?;
    let max_order = get("max_order", def.max_order)?;
    if order > max_order {
        return Err(perr("$.field", format!("order {} exceeds max_order {}", order, max_order)));
    }
    Ok(FieldConfig { order, max_order })
}

pub fn surface_file_from_value(v: &Value) -> Result<SurfaceFile> {
    let m = object(v, "$", &["version", "field", "semidegrees", "branch", "family"])?;
    let version = field(m, "$", "version")?.as_u64().ok_or_else(|| perr("$.version", "expected a positive integer"))?;
    if version != FORMAT_VERSION {
        return Err(perr("$.version", format!("unsupported version {}", version)));
    }
    let field_cfg = m.get("field").map(field_from_json).transpose()?;
    let source = match (m.get("semidegrees"), m.get("branch")) {
        (Some(_), Some(_)) => return Err(Error::ExclusiveFields("\"semidegrees\" and \"branch\"".into())),
        (None, None) => return Err(perr("$", "one of \"semidegrees\" or \"branch\" is required")),
        (Some(s), None) => {
            let list = array(s, "$.semidegrees")?;
            if list.is_empty() {
                return Err(perr("$.semidegrees", "at least one semidegree is required"));
            }
            let ds = list
                .iter()
                .enumerate()
                .map(|(k, d)| semidegree_from_json(d, &format!("$.semidegrees[{}]", k)))
                .collect::<Result<Vec<_>>>()?;
            SurfaceSource::Semidegrees(ds)
        }
        (None, Some(b)) => SurfaceSource::Branch(series_from_json(b, "$.branch")?),
    };
    let family = match m.get("family") {
        None => None,
        Some(_) if matches!(source, SurfaceSource::Branch(_)) => {
            return Err(Error::ExclusiveFields("\"branch\" and \"family\"".into()));
        }
        Some(f) => {
            let mut out = Vec::new();
            for (k, e) in array(f, "$.family")?.iter().enumerate() {
                let p = format!("$.family[{}]", k);
                let em = object(e, &p, &["i", "j", "poly"])?;
                let i = int(field(em, &p, "i")?, &format!("{}.i", p))?;
                let j = int(field(em, &p, "j")?, &format!("{}.j", p))?;
                if i < 1 || j < 0 {
                    return Err(perr(&p, "i must be at least 1 and j nonnegative"));
                }
                let poly = poly_from_json(field(em, &p, "poly")?, &format!("{}.poly", p))?;
                out.push(FamilyEntry { i: (i - 1) as usize, j: j as usize, poly });
            }
            out.sort_by_key(|e| (e.i, e.j));
            Some(out)
        }
    };
    Ok(SurfaceFile { version, field: field_cfg, source, family })
}

pub fn parse_surface_file(text: &str) -> Result<SurfaceFile> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| perr("$", format!("line {} column {}: {}", e.line(), e.column(), e)))?;
    surface_file_from_value(&v)
}

pub fn surface_file_to_value(f: &SurfaceFile) -> Value {
    let mut m = Map::new();
    m.insert("version".into(), json!(f.version));
    if let Some(c) = &f.field {
        m.insert("field".into(), json!({ "order": c.order, "max_order": c.max_order }));
    }
    match &f.source {
        SurfaceSource::Semidegrees(ds) => {
            m.insert("semidegrees".into(), Value::Array(ds.iter().map(semidegree_to_json).collect()));
        }
        SurfaceSource::Branch(phi) => {
            m.insert("branch".into(), series_to_json(phi));
        }
    }
    if let Some(fam) = &f.family {
        let entries = fam.iter().map(|e| json!({ "i": e.i + 1, "j": e.j, "poly": poly_to_json(&e.poly) })).collect();
        m.insert("family".into(), Value::Array(entries));
    }
    Value::Object(m)
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn serialize_surface_file(f: &SurfaceFile) -> String {
    let mut s = serde_json::to_string_pretty(&surface_file_to_value(f)).expect("values serialize");
    s.push('\n');
    s
}

/// The semidegrees and family of a built surface, as a file.
pub fn surface_to_file(surface: &Surface) -> SurfaceFile {
    let mut family = Vec::new();
    for (i, d) in surface.index_data().iter().enumerate() {
        for j in 0..=d.l {
            family.push(FamilyEntry { i, j, poly: surface.family(i, j).clone() });
        }
    }
    SurfaceFile {
        version: FORMAT_VERSION,
        field: Some(*surface.config()),
        source: SurfaceSource::Semidegrees(surface.semidegrees().to_vec()),
        family: Some(family),
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { path: format!("column {}", self.pos + 1), message: message.into() }
    }

    fn skip(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn expr(&mut self) -> Result<LaurentPoly2> {
        let mut acc = if self.eat(b'-') { self.term()?.neg() } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly2> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') || matches!(self.peek(), Some(b'x' | b'y' | b'(' | b'0'..=b'9')) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<LaurentPoly2> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let k = self.number()?;
        let k = i64::try_from(k).map_err(|_| self.err("exponent too large"))?;
        if !neg {
            let k = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        let mut terms = base.terms();
        match (terms.next(), terms.next()) {
            (Some((&(a, 0), c)), None) if c.is_one() => Ok(LaurentPoly2::one().shift_x(-a * k)),
            _ => Err(self.err("negative powers are allowed only on powers of x")),
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly2> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(LaurentPoly2::x())
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(LaurentPoly2::y())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'0'..=b'9') => {
                let n = self.number()?;
                let q = if self.eat(b'/') {
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Rat::new(n, d)
                } else {
                    Rat::from_integer(n)
                };
                Ok(LaurentPoly2::monomial(FieldElem::rational(q), 0, 0))
            }
            Some(c) => Err(self.err(format!("unexpected {:?}", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses sums of products of `x`, `y`, rationals and parentheses, with
/// `^k` powers; `k` may be negative on powers of `x`.
pub fn parse_poly(text: &str) -> Result<LaurentPoly2> {
    let mut p = PolyParser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Comma-separated integers.
pub fn parse_vector(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .enumerate()
        .map(|(k, s)| {
            s.trim().parse::<i64>().map_err(|_| Error::Parse {
                path: format!("entry {}", k + 1),
                message: format!("{:?} is not an integer", s.trim()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exp;

    #[test]
    fn minimal_file() {
        let f = parse_surface_file(r#"{"version":1,"semidegrees":[{"phi":[],"r":"1/1"}]}"#).unwrap();
        let (s, _) = f.build().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.omega(), &[vec![1]]);
    }

    #[test]
    fn rejects_bad_files() {
        let e = parse_surface_file(r#"{"version":1,"semidegrees":[{"phi":[],"r":"2/4"}]}"#).unwrap_err();
        assert_eq!(e, Error::UnreducedFraction { path: "$.semidegrees[0].r".into(), text: "2/4".into() });
        let e = parse_surface_file(r#"{"version":1,"semidegrees":[],"branch":[]}"#).unwrap_err();
        assert_eq!(e.kind(), "ExclusiveFields");
        let e = parse_surface_file(r#"{"version":1,"semidegrees":[{"phi":[],"r":"1","s":2}]}"#).unwrap_err();
        assert_eq!(e, Error::UnknownField { path: "$.semidegrees[0]".into(), field: "s".into() });
        let e = parse_surface_file(r#"{"version":1,"semidegrees":[}"#).unwrap_err();
        assert_eq!(e.kind(), "Parse");
        let e = parse_surface_file(
            r#"{"version":1,"semidegrees":[{"phi":[{"c":{"rat":"1"},"e":"6/4"}],"r":"1/2"}]}"#,
        )
        .unwrap_err();
        assert_eq!(e, Error::UnreducedFraction { path: "$.semidegrees[0].phi[0].e".into(), text: "6/4".into() });
    }

    #[test]
    fn round_trip() {
        let text = r#"{"version":1,"field":{"order":360,"max_order":5040},
            "semidegrees":[{"phi":[{"c":{"cyc":{"n":4,"terms":[["1/2",1]]}},"e":"2/3"},{"c":{"rat":"-3"},"e":"1/3"}],"r":"-1/1"}]}"#;
        let f = parse_surface_file(text).unwrap();
        let canon = serialize_surface_file(&f);
        let again = parse_surface_file(&canon).unwrap();
        assert_eq!(again, f);
        assert_eq!(serialize_surface_file(&again), canon);
        assert!(canon.contains("\"-3/1\""));
    }

    #[test]
    fn surface_export_round_trip() {
        let phi = Dwps::from_terms(vec![(exp(2, 3), FieldElem::one())]);
        let (s, _) = from_one_place_branch(&phi, &FieldConfig::default()).unwrap();
        let f = surface_to_file(&s);
        let text = serialize_surface_file(&f);
        let back = parse_surface_file(&text).unwrap();
        let (t, _) = back.build().unwrap();
        assert_eq!(t.omega(), s.omega());
        assert_eq!(t.delta_table(), s.delta_table());
    }

    #[test]
    fn infix_polynomials() {
        assert_eq!(parse_poly("y^2-x^3").unwrap().to_string(), "y^2 - x^3");
        assert_eq!(parse_poly("y^2 - 2*x^-1*y - x^5 - 2x").unwrap().to_string(), "y^2 - 2*x^-1*y - x^5 - 2*x");
        assert_eq!(parse_poly("(y - x)^2").unwrap().to_string(), "y^2 - 2*x*y + x^2");
        assert_eq!(parse_poly("1/2 x y").unwrap(), parse_poly("1/2*x*y").unwrap());
        assert!(parse_poly("x*y/2").is_err());
        assert!(parse_poly("(x+1)^-1").is_err());
        assert!(parse_poly("y^").is_err());
        assert!(parse_poly("x +").is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("6, 6").unwrap(), vec![6, 6]);
        assert_eq!(parse_vector("-1").unwrap(), vec![-1]);
        assert!(parse_vector("1,a").is_err());
    }
}
