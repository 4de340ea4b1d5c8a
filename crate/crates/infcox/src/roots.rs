//! Roots of `f(x, y)` as degree-wise Puiseux series, via Newton polygons at
//! infinity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElem};
use crate::laurent::LaurentPoly2;
use crate::series::{cmp_series, Dwps, Exp};

/// One root, truncated at the requested depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootExpansion {
    pub series: Dwps,
    pub multiplicity: usize,
    /// True when the series is an exact root rather than a truncation.
    pub exact: bool,
}

/// `f = unit * x^x_power * prod (y - root)`, roots grouped by conjugacy.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub unit: FieldElem,
    pub x_power: i64,
    pub classes: Vec<Vec<RootExpansion>>,
}

impl RootSet {
    /// Every root truncation, repeated by multiplicity.
    pub fn truncations(&self) -> Vec<Dwps> {
        let mut out = Vec::new();
        for class in &self.classes {
            for r in class {
                for _ in 0..r.multiplicity {
                    out.push(r.series.clone());
                }
            }
        }
        out
    }
}

/// Expands the roots of `f` in `y` down to exponents `>= depth`.
pub fn dwps_roots(f: &LaurentPoly2, depth: Exp, cfg: &FieldConfig) -> Result<RootSet> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut coeffs = f.y_coeffs();
    let lead = coeffs.last().cloned().unwrap_or_default();
    if lead.terms().len() != 1 || !lead.terms()[0].0.is_integer() {
        return Err(Error::NotMonic);
    }
    let (m, unit) = lead.terms()[0].clone();
    let inv = unit.inv()?;
    for c in coeffs.iter_mut() {
        *c = c.scale(&inv).shift(-m);
    }
    let mut found = Vec::new();
    expand(&coeffs, Dwps::zero(), None, depth, cfg, &mut found)?;
    let classes = group_conjugates(found, cfg)?;
    Ok(RootSet { unit, x_power: m.to_integer(), classes })
}

fn expand(
    f: &[Dwps],
    prefix: Dwps,
    bound: Option<Exp>,
    depth: Exp,
    cfg: &FieldConfig,
    out: &mut Vec<RootExpansion>,
) -> Result<()> {
    let k0 = f.iter().position(|c| !c.is_zero()).expect("monic polynomial is nonzero");
    if k0 > 0 {
        out.push(RootExpansion { series: prefix.clone(), multiplicity: k0, exact: true });
    }
    let pts: Vec<(usize, Exp)> = f
        .iter()
        .enumerate()
        .skip(k0)
        .filter_map(|(b, c)| c.degree().map(|h| (b, h)))
        .collect();
    for (b1, b2, e) in upper_hull(&pts) {
        if bound.is_some_and(|bd| e >= bd) {
            continue;
        }
        if e < depth {
            out.push(RootExpansion { series: prefix.clone(), multiplicity: b2 - b1, exact: false });
            continue;
        }
        let level = pts.iter().find(|p| p.0 == b1).unwrap().1 + Exp::from_integer(b1 as i64) * e;
        let mut edge = vec![FieldElem::zero(); b2 - b1 + 1];
        for &(b, h) in &pts {
            if b >= b1 && b <= b2 && h + Exp::from_integer(b as i64) * e == level {
                edge[b - b1] = f[b].coefficient(h);
            }
        }
        for (c, _) in solve_edge(&edge, cfg)? {
            let mono = Dwps::monomial(c.clone(), e);
            let shifted = taylor_shift(f, &mono);
            expand(&shifted, prefix.add(&mono), Some(e), depth, cfg, out)?;
        }
    }
    Ok(())
}

/// Edges `(b1, b2, e)` of the upper hull of `(b, h_b)`; `e` is minus the slope.
fn upper_hull(pts: &[(usize, Exp)]) -> Vec<(usize, usize, Exp)> {
    let mut edges = Vec::new();
    let mut i = 0;
    while i + 1 < pts.len() {
        let (bi, hi) = pts[i];
        let mut best = i + 1;
        let mut best_slope = (pts[best].1 - hi) / Exp::from_integer((pts[best].0 - bi) as i64);
        for (j, &(bj, hj)) in pts.iter().enumerate().skip(i + 2) {
            let s = (hj - hi) / Exp::from_integer((bj - bi) as i64);
            if s >= best_slope {
                best = j;
                best_slope = s;
            }
        }
        edges.push((bi, pts[best].0, -best_slope));
        i = best;
    }
    edges
}

/// `F(y + m)` with coefficients listed by power of `y`.
fn taylor_shift(f: &[Dwps], m: &Dwps) -> Vec<Dwps> {
    let n = f.len();
    let mut pows = vec![Dwps::monomial(FieldElem::one(), Exp::zero())];
    for k in 1..n {
        pows.push(pows[k - 1].mul(m));
    }
    let mut out = vec![Dwps::zero(); n];
    for (b, fb) in f.iter().enumerate() {
        if fb.is_zero() {
            continue;
        }
        let mut binom = BigInt::one();
        for j in (0..=b).rev() {
            // binom = C(b, j)
            let term = fb.mul(&pows[b - j]).scale(&FieldElem::rational(BigRational::from_integer(binom.clone())));
            out[j] = out[j].add(&term);
            if j > 0 {
                binom = binom * BigInt::from(j) / BigInt::from(b - j + 1);
            }
        }
    }
    out
}

fn group_conjugates(found: Vec<RootExpansion>, cfg: &FieldConfig) -> Result<Vec<Vec<RootExpansion>>> {
    let mut classes: Vec<Vec<RootExpansion>> = Vec::new();
    let mut pending = found;
    pending.sort_by(|a, b| cmp_series(&a.series, &b.series));
    while !pending.is_empty() {
        let head = pending.remove(0);
        let conj = head.series.conjugates(cfg)?;
        let mut class = vec![head];
        let mut rest = Vec::new();
        for r in pending {
            if conj.contains(&r.series) {
                class.push(r);
            } else {
                rest.push(r);
            }
        }
        pending = rest;
        classes.push(class);
    }
    Ok(classes)
}

fn poly_text(q: &[FieldElem]) -> String {
    let mut parts = Vec::new();
    for (k, c) in q.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        parts.push(match k {
            0 => format!("{}", c),
            1 => format!("{}*c", c),
            _ => format!("{}*c^{}", c, k),
        });
    }
    parts.join(" + ")
}

fn expand_binomial(m: usize, w: &FieldElem, t: usize) -> Vec<FieldElem> {
    let mut base = vec![FieldElem::zero(); m + 1];
    base[0] = w.neg();
    base[m] = FieldElem::one();
    let mut acc = vec![FieldElem::one()];
    for _ in 0..t {
        let mut next = vec![FieldElem::zero(); acc.len() + m];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in base.iter().enumerate() {
                if !b.is_zero() {
                    next[i + j] = next[i + j].add(&a.mul(b));
                }
            }
        }
        acc = next;
    }
    acc
}

/// Roots of a monic polynomial of the shape `(c^m - w)^t`.
fn try_binomial(q: &[FieldElem], cfg: &FieldConfig) -> Result<Option<Vec<(FieldElem, usize)>>> {
    let deg = q.len() - 1;
    for t in (1..=deg).rev() {
        if deg % t != 0 {
            continue;
        }
        let m = deg / t;
        let w = q[deg - m].div(&FieldElem::from_i64(-(t as i64)))?;
        if w.is_zero() || expand_binomial(m, &w, t) != q {
            continue;
        }
        if let Some(roots) = w.nth_roots(m as u64, cfg)? {
            return Ok(Some(roots.into_iter().map(|c| (c, t)).collect()));
        }
    }
    Ok(None)
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let v = n.abs().to_u64()?;
    if v > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn divide_linear(q: &[FieldElem], c: &FieldElem) -> (Vec<FieldElem>, FieldElem) {
    let n = q.len();
    let mut out = vec![FieldElem::zero(); n - 1];
    let mut carry = FieldElem::zero();
    for i in (1..n).rev() {
        carry = q[i].add(&carry.mul(c));
        out[i - 1] = carry.clone();
    }
    let rem = q[0].add(&carry.mul(c));
    (out, rem)
}

/// Rational roots with multiplicity, and the cofactor left over.
fn strip_rational_roots(q: &[FieldElem]) -> Option<(Vec<(FieldElem, usize)>, Vec<FieldElem>)> {
    let rats: Vec<BigRational> = q.iter().map(|c| c.as_rational().cloned()).collect::<Option<_>>()?;
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints.first()?;
    let an = ints.last()?;
    let nums = small_divisors(a0)?;
    let dens = small_divisors(an)?;
    let mut found = Vec::new();
    let mut cur = q.to_vec();
    let mut cands = Vec::new();
    for p in &nums {
        for d in &dens {
            let r = BigRational::new(p.clone(), d.clone());
            for v in [r.clone(), -r] {
                if !cands.contains(&v) {
                    cands.push(v);
                }
            }
        }
    }
    for r in cands {
        let c = FieldElem::rational(r);
        let mut mult = 0;
        while cur.len() > 1 {
            let (quot, rem) = divide_linear(&cur, &c);
            if !rem.is_zero() {
                break;
            }
            cur = quot;
            mult += 1;
        }
        if mult > 0 {
            found.push((c, mult));
        }
    }
    Some((found, cur))
}

/// Exact roots of a Newton edge polynomial, lowest degree first.
pub fn solve_edge(q: &[FieldElem], cfg: &FieldConfig) -> Result<Vec<(FieldElem, usize)>> {
    let lead = q.last().expect("edge polynomial is nonempty").clone();
    let inv = lead.inv()?;
    let monic: Vec<FieldElem> = q.iter().map(|c| c.mul(&inv)).collect();
    if let Some(r) = try_binomial(&monic, cfg)? {
        return Ok(r);
    }
    if let Some((mut roots, rest)) = strip_rational_roots(&monic) {
        if rest.len() == 1 {
            return Ok(roots);
        }
        if let Some(more) = try_binomial(&rest, cfg)? {
            roots.extend(more);
            return Ok(roots);
        }
    }
    Err(Error::UnsolvableEdge(poly_text(q)))
}
