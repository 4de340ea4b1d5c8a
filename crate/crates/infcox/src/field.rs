//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! Every element remembers the cyclotomic order it was built in. Binary
//! operations move both operands into the field of the lcm order, and results
//! whose irrational part vanishes drop back to order 1.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Default working order and the hard cap for field extensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldConfig {
    pub order: u64,
    pub max_order: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { order: 360, max_order: 5040 }
    }
}

impl FieldConfig {
    pub fn with_max(max_order: u64) -> Self {
        FieldConfig { max_order, ..Self::default() }
    }

    /// Checks that `zeta_n` may be introduced.
    ///
    /// Orders dividing the working order are always available; anything else
    /// must keep the lcm with the working order below the cap.
    pub fn admit(&self, n: u64) -> Result<()> {
        if self.order % n == 0 {
            return Ok(());
        }
        let needed = self.order.lcm(&n);
        if needed > self.max_order {
            Err(Error::CyclotomicOverflow { needed, max: self.max_order })
        } else {
            Ok(())
        }
    }
}

pub fn totient(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    let divs = divisors(n);
    let mut table: Vec<(u64, Vec<i64>)> = Vec::with_capacity(divs.len());
    for &d in &divs {
        // x^d - 1 divided by all earlier Phi_e with e | d
        let mut num = vec![0i64; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for (e, phi) in &table {
            if d % e == 0 {
                num = exact_div_monic(&num, phi);
            }
        }
        table.push((d, num));
    }
    table.pop().map(|(_, p)| p).unwrap_or_else(|| vec![0, 1])
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &b) in den.iter().enumerate() {
                rem[k + i] -= c * b;
            }
        }
    }
    q
}

/// Reduces a raw coefficient vector (powers of `zeta_n`, any length) to the
/// canonical basis `1, zeta, ..., zeta^(phi(n)-1)`.
fn reduce(n: u64, raw: Vec<Rat>) -> Vec<Rat> {
    let n_us = n as usize;
    let mut folded: Vec<Rat> = vec![Rat::zero(); n_us];
    for (i, c) in raw.into_iter().enumerate() {
        if !c.is_zero() {
            folded[i % n_us] += c;
        }
    }
    if n == 1 {
        return folded;
    }
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    for k in (deg..n_us).rev() {
        let c = std::mem::replace(&mut folded[k], Rat::zero());
        if c.is_zero() {
            continue;
        }
        let shift = k - deg;
        for (i, &b) in phi.iter().enumerate().take(deg) {
            if b != 0 {
                folded[shift + i] -= &c * Rat::from_integer(BigInt::from(b));
            }
        }
    }
    folded.truncate(deg);
    folded
}

/// An element of `Q(zeta_n)` in the power basis.
#[derive(Clone, Debug)]
pub struct FieldElem {
    order: u64,
    coeffs: Vec<Rat>,
}

impl FieldElem {
    fn from_parts(order: u64, coeffs: Vec<Rat>) -> Self {
        let mut e = FieldElem { order, coeffs };
        e.simplify();
        e
    }

    fn simplify(&mut self) {
        if self.order != 1 && self.coeffs.iter().skip(1).all(Zero::is_zero) {
            let c0 = self.coeffs.first().cloned().unwrap_or_else(Rat::zero);
            self.order = 1;
            self.coeffs = vec![c0];
        }
    }

    /// Builds `sum c_k zeta_n^k` from arbitrary (possibly large) powers.
    pub fn from_powers(n: u64, terms: &[(Rat, u64)]) -> Self {
        let mut raw = vec![Rat::zero(); n as usize];
        for (c, k) in terms {
            raw[(*k % n) as usize] += c.clone();
        }
        FieldElem::from_parts(n, reduce(n, raw))
    }

    pub fn rational(q: Rat) -> Self {
        FieldElem { order: 1, coeffs: vec![q] }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::rational(Rat::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(Rat::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// `zeta_n^k` with `zeta_n = exp(2 pi i / n)`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as u64;
        Self::from_powers(n, &[(Rat::one(), k)])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients in the power basis of `Q(zeta_order)`.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.order == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// The coefficient vector after moving into `Q(zeta_m)`; `order` must divide `m`.
    fn embed(&self, m: u64) -> Vec<Rat> {
        if m == self.order {
            return self.coeffs.clone();
        }
        let step = (m / self.order) as usize;
        let mut raw = vec![Rat::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        reduce(m, raw)
    }

    fn common(&self, other: &Self) -> (u64, Vec<Rat>, Vec<Rat>) {
        let m = self.order.lcm(&other.order);
        (m, self.embed(m), other.embed(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::rational(&self.coeffs[0] + &other.coeffs[0]);
        }
        let (m, a, b) = self.common(other);
        let c = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        FieldElem::from_parts(m, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FieldElem { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::rational(&self.coeffs[0] * &other.coeffs[0]);
        }
        if other.order == 1 {
            return self.scale(&other.coeffs[0]);
        }
        if self.order == 1 {
            return other.scale(&self.coeffs[0]);
        }
        let (m, a, b) = self.common(other);
        let mut raw = vec![Rat::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        FieldElem::from_parts(m, reduce(m, raw))
    }

    pub fn scale(&self, q: &Rat) -> Self {
        let c: Vec<Rat> = self.coeffs.iter().map(|c| c * q).collect();
        FieldElem::from_parts(self.order, c)
    }

    /// Image under the automorphism `zeta -> zeta^k`.
    pub fn galois(&self, k: u64) -> Self {
        let n = self.order;
        let mut raw = vec![Rat::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[((i as u64 * k) % n) as usize] += c.clone();
        }
        FieldElem::from_parts(n, reduce(n, raw))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::rational(q.recip()));
        }
        // product of the other Galois conjugates over the norm
        let n = self.order;
        let mut others = FieldElem::one();
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = others.mul(&self.galois(k));
            }
        }
        let norm = self.mul(&others);
        let q = norm
            .as_rational()
            .cloned()
            .expect("norm of a cyclotomic element is rational");
        Ok(others.scale(&q.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = FieldElem::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Writes a nonzero element as `q * exp(2 pi i theta)` with `q > 0` when possible.
    pub fn polar_form(&self) -> Option<(Rat, Ratio<i64>)> {
        if self.is_zero() {
            return None;
        }
        let n = self.order as i64;
        for k in 0..n {
            let b = self.mul(&FieldElem::root_of_unity(self.order, -k));
            if let Some(q) = b.as_rational() {
                let mut theta = Ratio::new(k, n);
                let mut q = q.clone();
                if q.is_negative() {
                    q = -q;
                    theta += Ratio::new(1, 2);
                    if theta >= Ratio::one() {
                        theta -= Ratio::one();
                    }
                }
                return Some((q, theta));
            }
        }
        None
    }

    /// All `m`-th roots when the element is a root of unity times a rational
    /// `m`-th power; `None` otherwise.
    pub fn nth_roots(&self, m: u64, cfg: &FieldConfig) -> Result<Option<Vec<FieldElem>>> {
        if self.is_zero() {
            return Ok(Some(vec![FieldElem::zero(); m as usize]));
        }
        let Some((q, theta)) = self.polar_form() else {
            return Ok(None);
        };
        let Some(w) = rational_nth_root(&q, m) else {
            return Ok(None);
        };
        let mut out = Vec::with_capacity(m as usize);
        for j in 0..m as i64 {
            let angle = (theta + Ratio::from_integer(j)) / Ratio::from_integer(m as i64);
            let den = *angle.denom() as u64;
            cfg.admit(den)?;
            let z = FieldElem::root_of_unity(den, *angle.numer());
            out.push(z.scale(&w));
        }
        Ok(Some(out))
    }

    /// The same element written over the smallest `Q(zeta_m)` containing it.
    fn minimal_form(&self) -> (u64, Vec<Rat>) {
        for m in divisors(self.order) {
            if m == self.order {
                break;
            }
            if let Some(c) = self.coordinates_in(m) {
                return (m, c);
            }
        }
        (self.order, self.coeffs.clone())
    }

    /// Coordinates over the basis `zeta_m^j`, `j < phi(m)`, if the element
    /// lies in `Q(zeta_m)`.
    fn coordinates_in(&self, m: u64) -> Option<Vec<Rat>> {
        let cols: Vec<Vec<Rat>> =
            (0..totient(m) as i64).map(|j| FieldElem::root_of_unity(m, j).embed(self.order)).collect();
        let rows = self.coeffs.len();
        let mut a: Vec<Vec<Rat>> = (0..rows)
            .map(|i| cols.iter().map(|c| c[i].clone()).chain([self.coeffs[i].clone()]).collect())
            .collect();
        let k = cols.len();
        let mut pivots = Vec::with_capacity(k);
        let mut r = 0;
        for c in 0..k {
            let p = (r..rows).find(|&i| !a[i][c].is_zero())?;
            a.swap(r, p);
            let piv = a[r][c].clone();
            for v in a[r].iter_mut() {
                *v /= &piv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    let row = a[r].clone();
                    for (v, w) in a[i].iter_mut().zip(row) {
                        *v -= &f * w;
                    }
                }
            }
            pivots.push(r);
            r += 1;
        }
        if a[r..].iter().any(|row| !row[k].is_zero()) {
            return None;
        }
        Some(pivots.iter().map(|&i| a[i][k].clone()).collect())
    }

    /// Total order used for canonical choices: elements are rewritten over
    /// their smallest cyclotomic field, then ordered by that order and the
    /// coefficient vector.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        if self.order == other.order && self.order == 1 {
            return self.coeffs.cmp(&other.coeffs);
        }
        self.minimal_form().cmp(&other.minimal_form())
    }
}

/// Exact `m`-th root of a nonnegative rational, if it exists.
pub fn rational_nth_root(q: &Rat, m: u64) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let m32 = m as u32;
    let n = q.numer().nth_root(m32);
    let d = q.denom().nth_root(m32);
    if num_traits::pow(n.clone(), m as usize) == *q.numer()
        && num_traits::pow(d.clone(), m as usize) == *q.denom()
    {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Eq for FieldElem {}

impl From<i64> for FieldElem {
    fn from(v: i64) -> Self {
        FieldElem::from_i64(v)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", q);
        }
        write!(f, "(")?;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c)?,
                _ => write!(f, "{}*z{}^{}", c, self.order, k)?,
            }
        }
        write!(f, ")")
    }
}
