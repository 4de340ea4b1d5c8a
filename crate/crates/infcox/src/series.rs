//! Finite degree-wise Puiseux series: sums of `c * x^e` with rational `e`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElem};
use crate::laurent::LaurentPoly2;

/// Rational exponent of `x`.
pub type Exp = Ratio<i64>;

/// Degree of a series; `None` is the degree of zero, below every exponent.
pub type Degree = Option<Exp>;

pub fn exp(n: i64, d: i64) -> Exp {
    Ratio::new(n, d)
}

/// A finite series with strictly decreasing exponents and nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Dwps {
    terms: Vec<(Exp, FieldElem)>,
}

/// Polydromy order, Puiseux pairs and characteristic exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxData {
    pub polydromy: i64,
    pub pairs: Vec<(i64, i64)>,
    pub char_exponents: Vec<Exp>,
}

impl Dwps {
    pub fn zero() -> Self {
        Dwps { terms: Vec::new() }
    }

    pub fn monomial(c: FieldElem, e: Exp) -> Self {
        Self::from_terms(vec![(e, c)])
    }

    /// Collects terms in any order, merging equal exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Exp, FieldElem)>>(terms: I) -> Self {
        let mut map: BTreeMap<Exp, FieldElem> = BTreeMap::new();
        for (e, c) in terms {
            match map.get_mut(&e) {
                Some(old) => *old = old.add(&c),
                None => {
                    map.insert(e, c);
                }
            }
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<Exp, FieldElem>) -> Self {
        Dwps { terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Terms with exponents in decreasing order.
    pub fn terms(&self) -> &[(Exp, FieldElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.terms.first().map(|t| t.0)
    }

    /// Lowest exponent, `None` for zero.
    pub fn order(&self) -> Option<Exp> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading(&self) -> Option<&(Exp, FieldElem)> {
        self.terms.first()
    }

    pub fn coefficient(&self, e: Exp) -> FieldElem {
        self.terms
            .iter()
            .find(|t| t.0 == e)
            .map(|t| t.1.clone())
            .unwrap_or_else(FieldElem::zero)
    }

    pub fn polydromy(&self) -> i64 {
        self.terms.iter().fold(1i64, |acc, (e, _)| acc.lcm(e.denom()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn neg(&self) -> Self {
        Dwps { terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (*e, a.mul(c))))
    }

    pub fn shift(&self, by: Exp) -> Self {
        Dwps { terms: self.terms.iter().map(|(e, c)| (*e + by, c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map: BTreeMap<Exp, FieldElem> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let c = c1.mul(c2);
                let e = *e1 + *e2;
                match map.get_mut(&e) {
                    Some(old) => *old = old.add(&c),
                    None => {
                        map.insert(e, c);
                    }
                }
            }
        }
        Self::from_map(map)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Dwps::monomial(FieldElem::one(), Exp::zero());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Terms with exponent strictly above `r`.
    pub fn truncate_above(&self, r: Exp) -> Self {
        Dwps { terms: self.terms.iter().filter(|t| t.0 > r).cloned().collect() }
    }

    /// Terms with exponent at least `r`.
    pub fn truncate_geq(&self, r: Exp) -> Self {
        Dwps { terms: self.terms.iter().filter(|t| t.0 >= r).cloned().collect() }
    }

    /// Polydromy order and Puiseux pairs.
    pub fn analyze(&self) -> PuiseuxData {
        let mut d = 1i64;
        let mut pairs = Vec::new();
        let mut chars = Vec::new();
        for (e, _) in &self.terms {
            if d % e.denom() != 0 {
                let dn = d.lcm(e.denom());
                pairs.push((e.numer() * (dn / e.denom()), dn / d));
                chars.push(*e);
                d = dn;
            }
        }
        PuiseuxData { polydromy: d, pairs, char_exponents: chars }
    }

    /// `zeta_p^j` acting termwise: `x^(q/p) -> zeta_p^(j q) x^(q/p)`.
    pub fn conjugate(&self, p: i64, j: i64) -> Self {
        Dwps {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let q = (*e * Exp::from_integer(p)).to_integer();
                    (*e, c.mul(&FieldElem::root_of_unity(p as u64, j * q)))
                })
                .collect(),
        }
    }

    /// The `p` conjugates, starting with the series itself.
    pub fn conjugates(&self, cfg: &FieldConfig) -> Result<Vec<Dwps>> {
        let p = self.polydromy();
        cfg.admit(p as u64)?;
        Ok((0..p).map(|j| self.conjugate(p, j)).collect())
    }

    /// `sum a_q c^(q r / p) x^(q/p)`.
    pub fn star(&self, c: &FieldElem, r: i64) -> Result<Self> {
        let p = self.polydromy();
        if r % p != 0 {
            return Err(Error::NotMultiple { r, polydromy: p });
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, a) in &self.terms {
            let k = (*e * Exp::from_integer(r)).to_integer();
            out.push((*e, a.mul(&c.pow(k)?)));
        }
        Ok(Self::from_terms(out))
    }

    /// Smallest conjugate under the canonical order on coefficient vectors.
    pub fn canonical_conjugate(&self, cfg: &FieldConfig) -> Result<Dwps> {
        let mut all = self.conjugates(cfg)?;
        all.sort_by(cmp_series);
        Ok(all.swap_remove(0))
    }

    /// `prod_j (y - phi_j)` over the conjugates and whether it is a polynomial.
    pub fn minpoly(&self, cfg: &FieldConfig) -> Result<(LaurentPoly2, bool)> {
        let mut coeffs: Vec<Dwps> = vec![Dwps::monomial(FieldElem::one(), Exp::zero())];
        for conj in self.conjugates(cfg)? {
            let mut next = vec![Dwps::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&c.mul(&conj));
            }
            coeffs = next;
        }
        let poly = LaurentPoly2::from_y_coeffs(&coeffs)
            .expect("conjugate-closed products have integral exponents");
        let polynomial = poly.is_polynomial();
        Ok((poly, polynomial))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_integer())
    }
}

/// Lexicographic order on series: exponents descending, then coefficients.
pub fn cmp_series(a: &Dwps, b: &Dwps) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (s, t) in a.terms.iter().zip(b.terms.iter()) {
        match t.0.cmp(&s.0) {
            Ordering::Equal => {}
            o => return o,
        }
        match s.1.canonical_cmp(&t.1) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

pub fn fmt_exp(e: &Exp) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

impl fmt::Display for Dwps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = match c.as_rational() {
                Some(q) if q < &num_rational::BigRational::zero() => ("-", FieldElem::rational(-q.clone())),
                _ => ("+", c.clone()),
            };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let unit = mag.is_one();
            if e.is_zero() {
                write!(f, "{}", mag)?;
            } else {
                if !unit {
                    write!(f, "{}*", mag)?;
                }
                if e.is_one() {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{}", fmt_exp(e))?;
                }
            }
        }
        Ok(())
    }
}
