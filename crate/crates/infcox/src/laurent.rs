//! Sparse elements of `K[x, 1/x, y]`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::field::FieldElem;
use crate::series::{Dwps, Exp};

/// Sparse Laurent polynomial; the key `(a, b)` stands for `x^a y^b`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), FieldElem>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(FieldElem::one(), 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(FieldElem::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(FieldElem::one(), 0, 1)
    }

    pub fn monomial(c: FieldElem, a: i64, b: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), FieldElem)>>(it: I) -> Self {
        let mut p = Self::zero();
        for ((a, b), c) in it {
            p.add_term(a, b, c);
        }
        p
    }

    fn add_term(&mut self, a: i64, b: i64, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let sum = match self.terms.get(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    /// Builds `sum_b c_b(x) y^b`; `None` if some exponent of `x` is fractional.
    pub fn from_y_coeffs(coeffs: &[Dwps]) -> Option<Self> {
        let mut p = Self::zero();
        for (b, c) in coeffs.iter().enumerate() {
            for (e, v) in c.terms() {
                if !e.is_integer() {
                    return None;
                }
                p.add_term(e.to_integer(), b as i64, v.clone());
            }
        }
        Some(p)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, a: i64, b: i64) -> FieldElem {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(FieldElem::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|&(a, _)| a >= 0)
    }

    /// Degree in `y`; `-1` for zero.
    pub fn deg_y(&self) -> i64 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(-1)
    }

    /// Coefficients of `y^0, y^1, ...` as series in `x`.
    pub fn y_coeffs(&self) -> Vec<Dwps> {
        let n = (self.deg_y() + 1).max(0) as usize;
        let mut buckets: Vec<Vec<(Exp, FieldElem)>> = vec![Vec::new(); n];
        for (&(a, b), c) in &self.terms {
            buckets[b as usize].push((Exp::from_integer(a), c.clone()));
        }
        buckets.into_iter().map(Dwps::from_terms).collect()
    }

    /// Leading coefficient in `y` as a series in `x`.
    pub fn lc_y(&self) -> Dwps {
        self.y_coeffs().pop().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (&(a, b), c) in &other.terms {
            p.add_term(a, b, c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v.mul(c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                p.add_term(a1 + a2, b1 + b2, c1.mul(c2));
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by `x^k` for any integer `k`.
    pub fn shift_x(&self, k: i64) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(&(a, b), c)| ((a + k, b), c.clone())).collect() }
    }

    /// Substitutes a series for `y`.
    pub fn eval_y(&self, y: &Dwps) -> Dwps {
        let mut acc = Dwps::zero();
        for c in self.y_coeffs().iter().rev() {
            acc = acc.mul(y).add(c);
        }
        acc
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, a: i64, b: i64) -> fmt::Result {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push("x".to_string()),
        _ => parts.push(format!("x^{}", a)),
    }
    match b {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{}", b)),
    }
    write!(f, "{}", parts.join("*"))
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(i64, i64)> = self.terms.keys().collect();
        keys.sort_by(|p, q| (q.1, q.0).cmp(&(p.1, p.0)));
        for (n, key) in keys.into_iter().enumerate() {
            let c = &self.terms[key];
            let (neg, mag) = match c.as_rational() {
                Some(q) if q.is_negative() => (true, FieldElem::rational(-q.clone())),
                _ => (false, c.clone()),
            };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let constant = *key == (0, 0);
            if constant {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                fmt_monomial(f, key.0, key.1)?;
            }
        }
        Ok(())
    }
}
