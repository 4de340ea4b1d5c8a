//! Global sections, Cox ring generators and the Enriques semigroup.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly2;
use crate::surface::Surface;

/// Exponents of `x`, `y` and the distinct family members in a product.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectionIndex {
    pub alpha: u32,
    pub beta: u32,
    /// Indexed like `Surface::generators()[2..]`.
    pub gamma: Vec<u32>,
}

impl SectionIndex {
    fn from_exponents(v: &[u32]) -> Self {
        SectionIndex { alpha: v[0], beta: v[1], gamma: v[2..].to_vec() }
    }

    /// All exponents, generator by generator.
    pub fn exponents(&self) -> Vec<u32> {
        let mut v = vec![self.alpha, self.beta];
        v.extend_from_slice(&self.gamma);
        v
    }

    pub fn poly(&self, surface: &Surface) -> LaurentPoly2 {
        let mut acc = LaurentPoly2::one();
        for (g, &e) in surface.generators().iter().zip(self.exponents().iter()) {
            if e > 0 {
                acc = acc.mul(&g.pow(e));
            }
        }
        acc
    }

    /// Values of every semidegree on the product.
    pub fn delta_vector(&self, surface: &Surface) -> Vec<i64> {
        let e = self.exponents();
        surface
            .delta_table()
            .iter()
            .map(|row| row.iter().zip(e.iter()).map(|(v, &k)| v * k as i64).sum())
            .collect()
    }

    /// The pair `(a, b)`: the power of `x` and the total degree in `y`.
    pub fn ab(&self, surface: &Surface) -> (u32, u64) {
        let b = self.exponents()[1..]
            .iter()
            .zip(surface.generators()[1..].iter())
            .map(|(&e, g)| e as u64 * g.deg_y() as u64)
            .sum();
        (self.alpha, b)
    }
}

/// Sections of the divisor class `d`.
#[derive(Clone, Debug)]
pub struct SectionEnumeration {
    pub d: Vec<i64>,
    /// All indices, in lexicographic order.
    pub indices: Vec<SectionIndex>,
    /// Basis: each `(a, b)` with its lexicographically smallest witness.
    pub basis: Vec<((u32, u64), SectionIndex)>,
    /// Maximum of each semidegree over the sections, `None` when there are none.
    pub maxima: Vec<Option<i64>>,
}

impl SectionEnumeration {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Lattice points `v >= 0` with `g v <= d`, in lexicographic order.
///
/// `lambda` must satisfy `lambda >= 0` and `lambda^T g > 0` on every column.
pub fn enumerate_exponents(g: &[Vec<i64>], d: &[i64], lambda: &[i64]) -> Vec<Vec<u32>> {
    let rows = g.len();
    let cols = g.first().map_or(0, Vec::len);
    let budget: i64 = lambda.iter().zip(d).map(|(l, x)| l * x).sum();
    if budget < 0 {
        return Vec::new();
    }
    let w: Vec<i64> = (0..cols).map(|j| (0..rows).map(|k| lambda[k] * g[k][j]).sum()).collect();
    let ub: Vec<i64> = w.iter().map(|&wj| budget / wj).collect();
    // most negative contribution still available from columns j.. on each row
    let mut neg_tail = vec![vec![0i64; cols + 1]; rows];
    for k in 0..rows {
        for j in (0..cols).rev() {
            neg_tail[k][j] = neg_tail[k][j + 1] + g[k][j].min(0) * ub[j];
        }
    }
    struct Ctx<'a> {
        g: &'a [Vec<i64>],
        d: &'a [i64],
        w: Vec<i64>,
        neg_tail: Vec<Vec<i64>>,
        budget: i64,
    }
    fn dfs(c: &Ctx, j: usize, used: i64, partial: &mut [i64], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let cols = c.w.len();
        if j == cols {
            if partial.iter().zip(c.d).all(|(p, x)| p <= x) {
                out.push(cur.clone());
            }
            return;
        }
        let max = (c.budget - used) / c.w[j];
        for v in 0..=max {
            let mut ok = true;
            for k in 0..partial.len() {
                if partial[k] + v * c.g[k][j] + c.neg_tail[k][j + 1] > c.d[k] {
                    ok = false;
                    break;
                }
            }
            if ok {
                for k in 0..partial.len() {
                    partial[k] += v * c.g[k][j];
                }
                cur.push(v as u32);
                dfs(c, j + 1, used + v * c.w[j], partial, cur, out);
                cur.pop();
                for k in 0..partial.len() {
                    partial[k] -= v * c.g[k][j];
                }
            }
        }
    }
    let ctx = Ctx { g, d, w, neg_tail, budget };
    if cols == 0 {
        return if d.iter().all(|&x| x >= 0) { vec![Vec::new()] } else { Vec::new() };
    }
    let first_max = budget / ctx.w[0];
    let chunks: Vec<Vec<Vec<u32>>> = (0..=first_max)
        .into_par_iter()
        .map(|v0| {
            let mut out = Vec::new();
            let mut partial: Vec<i64> = (0..rows).map(|k| v0 * g[k][0]).collect();
            if (0..rows).any(|k| partial[k] + ctx.neg_tail[k][1] > d[k]) {
                return out;
            }
            let mut cur = vec![v0 as u32];
            dfs(&ctx, 1, v0 * ctx.w[0], &mut partial, &mut cur, &mut out);
            out
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

fn certificate(surface: &Surface) -> Result<&[i64]> {
    surface.recession_certificate().ok_or_else(|| {
        Error::UnboundedSections("some nonnegative combination of generators has no positive value".into())
    })
}

/// All sections of `d` with dimension, basis and maxima.
pub fn enumerate_sections(surface: &Surface, d: &[i64]) -> Result<SectionEnumeration> {
    surface.check_len(d)?;
    let lambda = certificate(surface)?;
    let raw = enumerate_exponents(surface.delta_table(), d, lambda);
    let indices: Vec<SectionIndex> = raw.iter().map(|v| SectionIndex::from_exponents(v)).collect();
    let mut seen: BTreeMap<(u32, u64), SectionIndex> = BTreeMap::new();
    let mut maxima: Vec<Option<i64>> = vec![None; surface.len()];
    for idx in &indices {
        seen.entry(idx.ab(surface)).or_insert_with(|| idx.clone());
        for (m, v) in maxima.iter_mut().zip(idx.delta_vector(surface)) {
            *m = Some(m.map_or(v, |old| old.max(v)));
        }
    }
    Ok(SectionEnumeration { d: d.to_vec(), indices, basis: seen.into_iter().collect(), maxima })
}

pub fn dimension(surface: &Surface, d: &[i64]) -> Result<usize> {
    Ok(enumerate_sections(surface, d)?.dim())
}

/// A generator of the Cox ring: a polynomial (or `1`) in a given degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxGenerator {
    /// `None` stands for the section `1` of a unit class.
    pub poly: Option<LaurentPoly2>,
    pub degree: Vec<i64>,
}

pub fn cox_generators(surface: &Surface) -> Vec<CoxGenerator> {
    let n = surface.len();
    let table = surface.delta_table();
    let mut out: Vec<CoxGenerator> = surface
        .generators()
        .iter()
        .enumerate()
        .map(|(g, p)| CoxGenerator { poly: Some(p.clone()), degree: (0..n).map(|k| table[k][g]).collect() })
        .collect();
    for j in 0..n {
        let mut e = vec![0i64; n];
        e[j] = 1;
        out.push(CoxGenerator { poly: None, degree: e });
    }
    out
}

/// Outcome of the Enriques membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnriquesResult {
    pub member: bool,
    pub maxima: Vec<Option<i64>>,
    /// Smallest index attaining each maximum.
    pub witnesses: Vec<Option<SectionIndex>>,
}

pub fn enriques_member(surface: &Surface, d: &[i64]) -> Result<EnriquesResult> {
    let en = enumerate_sections(surface, d)?;
    Ok(enriques_from(surface, &en))
}

pub fn enriques_from(surface: &Surface, en: &SectionEnumeration) -> EnriquesResult {
    let n = surface.len();
    let mut witnesses: Vec<Option<SectionIndex>> = vec![None; n];
    for idx in &en.indices {
        let v = idx.delta_vector(surface);
        for j in 0..n {
            if witnesses[j].is_none() && Some(v[j]) == en.maxima[j] {
                witnesses[j] = Some(idx.clone());
            }
        }
    }
    let member = !en.indices.is_empty() && (0..n).all(|j| en.maxima[j] == Some(en.d[j]));
    EnriquesResult { member, maxima: en.maxima.clone(), witnesses }
}

/// Smallest subset of the box `[lo, hi]` containing the generators and closed
/// under sums and coordinatewise maxima that stay in the box.
pub fn tropical_closure(generators: &[Vec<i64>], lo: &[i64], hi: &[i64]) -> BTreeSet<Vec<i64>> {
    let inside = |v: &Vec<i64>| v.iter().zip(lo).zip(hi).all(|((x, l), h)| l <= x && x <= h);
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut list: Vec<Vec<i64>> = Vec::new();
    let mut queue: Vec<Vec<i64>> = generators.iter().filter(|v| inside(v)).cloned().collect();
    while let Some(v) = queue.pop() {
        if !set.insert(v.clone()) {
            continue;
        }
        list.push(v.clone());
        for u in &list {
            let sum: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let max: Vec<i64> = u.iter().zip(&v).map(|(a, b)| *a.max(b)).collect();
            for c in [sum, max] {
                if inside(&c) && !set.contains(&c) {
                    queue.push(c);
                }
            }
        }
    }
    set
}

/// Dimensions at many classes, in parallel.
pub fn dimensions(surface: &Surface, points: &[Vec<i64>]) -> Result<Vec<usize>> {
    points.par_iter().map(|d| dimension(surface, d)).collect()
}

/// Every integer vector of the box `[lo, hi]`, last coordinate fastest.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &out {
            for v in *l..=*h {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
