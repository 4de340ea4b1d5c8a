//! Semidegrees given by a generic series `phi(x) + xi * x^r`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElem};
use crate::laurent::LaurentPoly2;
use crate::series::{fmt_exp, Dwps, Exp};

/// Polynomial in the generic coefficient `xi`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct XiPoly {
    coeffs: Vec<FieldElem>,
}

/// Shape `unit * xi^s * (xi^P - w)^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialShape {
    pub unit: FieldElem,
    pub s: usize,
    pub w: Option<FieldElem>,
    pub t: usize,
}

impl XiPoly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        XiPoly { coeffs }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::new(vec![c])
    }

    pub fn xi() -> Self {
        Self::new(vec![FieldElem::zero(), FieldElem::one()])
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `xi`; `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> FieldElem {
        self.coeffs.last().cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = FieldElem::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z).add(other.coeffs.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![FieldElem::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(FieldElem::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, v: &FieldElem) -> FieldElem {
        self.coeffs.iter().rev().fold(FieldElem::zero(), |acc, c| acc.mul(v).add(c))
    }

    /// Multiplicity of `c` as a root.
    pub fn ord_at(&self, c: &FieldElem) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut cur = self.coeffs.clone();
        let mut k = 0;
        loop {
            // synthetic division by (xi - c)
            let n = cur.len();
            if n <= 1 {
                return k;
            }
            let mut q = vec![FieldElem::zero(); n - 1];
            let mut carry = FieldElem::zero();
            for i in (0..n).rev() {
                let v = cur[i].add(&carry.mul(c));
                if i == 0 {
                    if !v.is_zero() {
                        return k;
                    }
                } else {
                    q[i - 1] = v.clone();
                }
                carry = v;
            }
            cur = q;
            k += 1;
        }
    }

    /// Reads the shape `unit * xi^s * (xi^P - w)^t`, if it has it.
    pub fn binomial_shape(&self, big_p: usize) -> Option<BinomialShape> {
        if self.is_zero() || big_p == 0 {
            return None;
        }
        let s = self.coeffs.iter().position(|c| !c.is_zero())?;
        let unit = self.leading();
        let rest = &self.coeffs[s..];
        let deg = rest.len() - 1;
        if deg == 0 {
            return Some(BinomialShape { unit, s, w: None, t: 0 });
        }
        if deg % big_p != 0 {
            return None;
        }
        let t = deg / big_p;
        let monic = XiPoly::new(rest.to_vec()).scale(&unit.inv().ok()?);
        let w = monic.coeffs[deg - big_p].div(&FieldElem::from_i64(-(t as i64))).ok()?;
        let mut base = vec![FieldElem::zero(); big_p + 1];
        base[0] = w.neg();
        base[big_p] = FieldElem::one();
        if XiPoly::new(base).pow(t as u32) == monic {
            Some(BinomialShape { unit, s, w: Some(w), t })
        } else {
            None
        }
    }
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match c.as_rational() {
                Some(q) if q.is_negative() => (true, FieldElem::rational(-q.clone())),
                _ => (false, c.clone()),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let coef = if mag.is_one() { String::new() } else { format!("{}*", mag) };
            match k {
                0 => write!(f, "{}", mag)?,
                1 => write!(f, "{}xi", coef)?,
                _ => write!(f, "{}xi^{}", coef, k)?,
            }
        }
        Ok(())
    }
}

/// Finite series in `x` whose coefficients are polynomials in `xi`.
#[derive(Clone, Debug, Default)]
struct XiSeries {
    terms: BTreeMap<Exp, XiPoly>,
}

impl XiSeries {
    fn insert_add(&mut self, e: Exp, c: XiPoly) {
        let sum = match self.terms.remove(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    fn add_series(&mut self, s: &Dwps) {
        for (e, c) in s.terms() {
            self.insert_add(*e, XiPoly::constant(c.clone()));
        }
    }

    fn mul(&self, other: &XiSeries) -> XiSeries {
        let mut out = XiSeries::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert_add(*e1 + *e2, c1.mul(c2));
            }
        }
        out
    }

    fn top(&self) -> Option<(&Exp, &XiPoly)> {
        self.terms.iter().next_back()
    }
}

/// Formal Puiseux data of a generic series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalData {
    /// Genuine pairs followed by the formal last pair.
    pub pairs: Vec<(i64, i64)>,
    /// Characteristic exponents followed by `r`.
    pub char_exponents: Vec<Exp>,
    /// Number of genuine pairs.
    pub l: usize,
    /// Product of the genuine `p_j`.
    pub p: i64,
    /// Value on `x`.
    pub p_tilde: i64,
}

impl FormalData {
    /// The last formal `p`, i.e. `p_tilde / p`.
    pub fn p_last(&self) -> i64 {
        self.p_tilde / self.p
    }
}

/// A semidegree `delta` given by `phi + xi x^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semidegree {
    phi: Dwps,
    r: Exp,
    data: FormalData,
}

impl Semidegree {
    pub fn new(phi: Dwps, r: Exp) -> Result<Self> {
        if let Some(low) = phi.order() {
            if r >= low {
                return Err(Error::InvalidSemidegree(format!(
                    "r = {} must lie below the lowest exponent {} of phi",
                    fmt_exp(&r),
                    fmt_exp(&low)
                )));
            }
        }
        let a = phi.analyze();
        let p = a.polydromy;
        let rp = r * Exp::from_integer(p);
        let mut pairs = a.pairs;
        pairs.push((*rp.numer(), *rp.denom()));
        let mut chars = a.char_exponents;
        chars.push(r);
        let data = FormalData { l: pairs.len() - 1, pairs, char_exponents: chars, p, p_tilde: p * rp.denom() };
        Ok(Semidegree { phi, r, data })
    }

    /// The usual degree: `phi = 0`, `r = 1`.
    pub fn degree() -> Self {
        Self::new(Dwps::zero(), Exp::from_integer(1)).expect("degree is valid")
    }

    pub fn phi(&self) -> &Dwps {
        &self.phi
    }

    pub fn r(&self) -> Exp {
        self.r
    }

    pub fn formal(&self) -> &FormalData {
        &self.data
    }

    pub fn p_tilde(&self) -> i64 {
        self.data.p_tilde
    }

    fn substitute(&self, f: &LaurentPoly2) -> XiSeries {
        let mut y = XiSeries::default();
        y.add_series(&self.phi);
        y.insert_add(self.r, XiPoly::xi());
        let mut acc = XiSeries::default();
        for c in f.y_coeffs().iter().rev() {
            acc = acc.mul(&y);
            acc.add_series(c);
        }
        acc
    }

    fn top(&self, f: &LaurentPoly2) -> Result<(Exp, XiPoly)> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let s = self.substitute(f);
        let (e, c) = s.top().expect("substitution of a nonzero polynomial is nonzero");
        Ok((*e, c.clone()))
    }

    /// `delta(f) / delta(x)`.
    pub fn eval_norm(&self, f: &LaurentPoly2) -> Result<Exp> {
        Ok(self.top(f)?.0)
    }

    /// `delta(f)`, an integer.
    pub fn eval(&self, f: &LaurentPoly2) -> Result<i64> {
        let v = self.eval_norm(f)? * Exp::from_integer(self.data.p_tilde);
        if !v.is_integer() {
            return Err(Error::NonIntegral(format!("semidegree value {}", fmt_exp(&v))));
        }
        Ok(v.to_integer())
    }

    /// Value and leading `xi`-coefficient together.
    pub fn eval_lc(&self, f: &LaurentPoly2) -> Result<(i64, XiPoly)> {
        let (e, c) = self.top(f)?;
        let v = e * Exp::from_integer(self.data.p_tilde);
        if !v.is_integer() {
            return Err(Error::NonIntegral(format!("semidegree value {}", fmt_exp(&v))));
        }
        Ok((v.to_integer(), c))
    }

    /// Leading coefficient as a polynomial in `xi`.
    pub fn lc(&self, f: &LaurentPoly2) -> Result<XiPoly> {
        Ok(self.top(f)?.1)
    }

    /// True when both describe the same semidegree.
    pub fn same_as(&self, other: &Semidegree, cfg: &FieldConfig) -> Result<bool> {
        if self.r != other.r || self.phi.polydromy() != other.phi.polydromy() {
            return Ok(false);
        }
        Ok(other.phi.conjugates(cfg)?.contains(&self.phi))
    }

    /// Whether the ball of `other` lies inside the ball of `self`.
    pub fn contains(&self, other: &Semidegree, cfg: &FieldConfig) -> Result<bool> {
        if other.r > self.r {
            return Ok(false);
        }
        for c in other.phi.conjugates(cfg)? {
            if c.sub(&self.phi).degree().is_none_or(|d| d <= self.r) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Semidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phi.is_zero() {
            write!(f, "xi*x^{}", fmt_exp(&self.r))
        } else {
            write!(f, "{} + xi*x^{}", self.phi, fmt_exp(&self.r))
        }
    }
}

/// `gcd` of a slice of integers, 0 for the empty slice.
pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &a| g.gcd(&a))
}

/// Whether an exponent is a multiple of `1/den`.
pub fn on_grid(e: Exp, den: i64) -> bool {
    (e * Exp::from_integer(den)).is_integer() || e.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exp;

    fn s(terms: &[(i64, i64, i64)]) -> Dwps {
        Dwps::from_terms(terms.iter().map(|&(c, n, d)| (exp(n, d), FieldElem::from_i64(c))))
    }

    fn x() -> LaurentPoly2 {
        LaurentPoly2::x()
    }

    fn y() -> LaurentPoly2 {
        LaurentPoly2::y()
    }

    fn k(v: i64) -> FieldElem {
        FieldElem::from_i64(v)
    }

    #[test]
    fn weighted_degree() {
        let d = Semidegree::new(Dwps::zero(), exp(3, 2)).unwrap();
        assert_eq!(d.eval(&x().mul(&y())).unwrap(), 5);
        assert_eq!(d.eval(&x()).unwrap(), 2);
        let f = y().pow(2).sub(&x().pow(3));
        assert_eq!(d.eval(&f).unwrap(), 6);
        assert_eq!(d.lc(&f).unwrap().to_string(), "xi^2 - 1");
        assert_eq!(d.formal().pairs, vec![(3, 2)]);
        assert_eq!((d.p_tilde(), d.formal().l), (2, 0));
    }

    #[test]
    fn row_three_values() {
        let d = Semidegree::new(s(&[(1, 5, 2), (1, -3, 2)]), exp(-5, 2)).unwrap();
        let f = y().pow(2).sub(&x().pow(5));
        assert_eq!(d.eval(&f).unwrap(), 2);
        assert_eq!(d.lc(&f).unwrap(), XiPoly::constant(k(2)));
        let g = f.sub(&x().scale(&k(2)));
        assert_eq!(d.eval(&g).unwrap(), 0);
        assert_eq!(d.lc(&g).unwrap(), XiPoly::xi().scale(&k(2)));
        assert_eq!(d.eval(&x()).unwrap(), d.p_tilde());
        assert_eq!(d.lc(&x()).unwrap(), XiPoly::constant(k(1)));
        assert_eq!(d.formal().pairs, vec![(5, 2), (-5, 1)]);
        assert_eq!((d.p_tilde(), d.formal().l), (2, 1));
    }

    #[test]
    fn degree_data() {
        let d = Semidegree::degree();
        assert_eq!(d.formal().pairs, vec![(1, 1)]);
        assert_eq!((d.p_tilde(), d.formal().l), (1, 0));
        assert_eq!(d.eval(&LaurentPoly2::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn rejects_r_above_phi() {
        assert!(matches!(
            Semidegree::new(s(&[(1, 1, 2)]), exp(1, 2)),
            Err(Error::InvalidSemidegree(_))
        ));
    }

    #[test]
    fn xi_poly_shapes() {
        // 3 xi^2 (xi^2 - 4)^2
        let b = XiPoly::new(vec![k(-4), k(0), k(1)]);
        let f = XiPoly::xi().pow(2).mul(&b.pow(2)).scale(&k(3));
        let shape = f.binomial_shape(2).unwrap();
        assert_eq!((shape.s, shape.t, shape.unit.clone()), (2, 2, k(3)));
        assert_eq!(shape.w, Some(k(4)));
        assert!(f.binomial_shape(1).is_none());
        assert_eq!(f.ord_at(&k(2)), 2);
        assert_eq!(f.ord_at(&k(0)), 2);
        assert_eq!(f.ord_at(&k(1)), 0);
        let c = XiPoly::constant(k(5)).binomial_shape(3).unwrap();
        assert_eq!((c.s, c.t, c.w), (0, 0, None));
    }
}
