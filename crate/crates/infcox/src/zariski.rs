//! Base points at infinity, the Zariski semigroup at infinity and the
//! comparison of equisingular branches.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::branch::{from_one_place_branch, same_pairs, OnePlaceData};
use crate::cox::{box_points, enriques_from, enumerate_exponents, enumerate_sections, SectionEnumeration};
use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElem};
use crate::lp::positive_combination;
use crate::series::Dwps;
use crate::surface::Surface;

type Q = BigRational;

/// The class `d_a` of a vector `a` together with its multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiData {
    pub a: Vec<i64>,
    pub d: Vec<i64>,
    pub m: Vec<i64>,
    /// `m_{i,c}` for every key `c` of the partition at `i`.
    pub m_c: Vec<Vec<(FieldElem, i64)>>,
    /// `m_{i,c}` at `c = c_{ii}`.
    pub m_diag: Vec<i64>,
}

fn weighted(surface: &Surface, i: usize, set: &[usize], a: &[i64]) -> Result<i64> {
    let idx = surface.index_data();
    let num: i64 = set.iter().map(|&k| idx[k].p_tilde * a[k]).sum();
    if num % idx[i].p != 0 {
        return Err(Error::NonIntegral(format!("multiplicity {}/{} at index {}", num, idx[i].p, i + 1)));
    }
    Ok(num / idx[i].p)
}

pub fn zariski_data(surface: &Surface, a: &[i64]) -> Result<ZariskiData> {
    surface.check_len(a)?;
    if a.iter().any(|&v| v < 0) {
        return Err(Error::IndexOutOfRange(format!("a = {:?} has a negative entry", a)));
    }
    let n = surface.len();
    let d = mat_vec(surface.omega(), a);
    let mut m = Vec::with_capacity(n);
    let mut m_c = Vec::with_capacity(n);
    let mut m_diag = Vec::with_capacity(n);
    for i in 0..n {
        let mi = weighted(surface, i, surface.neighborhood(i), a)?;
        let mut parts = Vec::new();
        for (c, set) in surface.partition(i) {
            let v = weighted(surface, i, set, a)?;
            if v > mi {
                return Err(Error::NonIntegral(format!("m_(i,c) exceeds m_i at index {}", i + 1)));
            }
            parts.push((c.clone(), v));
        }
        m_diag.push(weighted(surface, i, surface.partition_at(i, surface.c_diag(i)), a)?);
        m.push(mi);
        m_c.push(parts);
    }
    Ok(ZariskiData { a: a.to_vec(), d, m, m_c, m_diag })
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Conditions of the base-point-freeness test, in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    NoA,
    DMax,
    MaxXi,
    MinXi,
    MaxOrderXi,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::NoA => "no-a",
            Condition::DMax => "d-max",
            Condition::MaxXi => "max-xi",
            Condition::MinXi => "min-xi",
            Condition::MaxOrderXi => "max-order-xi",
        }
    }
}

/// First failed condition. `index` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub index: Option<usize>,
    pub expected: Option<i64>,
    pub found: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpfReport {
    pub bpf: bool,
    /// The vector `a` that passed, or the first one tried.
    pub a: Option<Vec<i64>>,
    pub candidates: usize,
    pub violation: Option<Violation>,
}

fn rational_solve(m: &[Vec<i64>], d: &[i64]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut t: Vec<Vec<Q>> = m
        .iter()
        .zip(d)
        .map(|(row, &b)| row.iter().map(|&v| Q::from_integer(v.into())).chain([Q::from_integer(b.into())]).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !t[r][col].is_zero())?;
        t.swap(col, piv);
        let p = t[col][col].clone();
        for v in t[col].iter_mut() {
            *v = &*v / &p;
        }
        let prow = t[col].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, w) in row.iter_mut().zip(&prow) {
                    *v -= &f * w;
                }
            }
        }
    }
    Some(t.into_iter().map(|row| row[n].clone()).collect())
}

/// Nonnegative integer vectors `a` with `omega a = d`, smallest first.
pub fn solutions(omega: &[Vec<i64>], d: &[i64]) -> Vec<Vec<i64>> {
    if let Some(x) = rational_solve(omega, d) {
        if x.iter().all(|q| q.is_integer() && !q.is_negative()) {
            return vec![x.iter().map(|q| q.to_integer().to_i64().expect("small solution")).collect()];
        }
        return Vec::new();
    }
    bounded_preimages(omega, d, d)
        .into_iter()
        .filter(|a| mat_vec(omega, a) == d)
        .collect()
}

/// Nonnegative `a` with `omega a <= hi`, or inside a fallback cube.
fn bounded_preimages(omega: &[Vec<i64>], hi: &[i64], scale: &[i64]) -> Vec<Vec<i64>> {
    let n = omega.len();
    if let Some(lam) = positive_combination(omega) {
        let den = lam.iter().fold(num_bigint::BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
        let lam: Vec<i64> = lam
            .iter()
            .map(|q| (q * Q::from_integer(den.clone())).to_integer().to_i64().expect("small multiplier"))
            .collect();
        return enumerate_exponents(omega, hi, &lam)
            .into_iter()
            .map(|v| v.into_iter().map(i64::from).collect())
            .collect();
    }
    let top = scale.iter().copied().max().unwrap_or(0).max(0);
    let min_col = (0..n)
        .map(|j| omega.iter().map(|r| r[j]).sum::<i64>())
        .filter(|&s| s > 0)
        .min()
        .unwrap_or(1);
    let bound = top / min_col;
    box_points(&vec![0; n], &vec![bound; n])
        .into_iter()
        .filter(|a| mat_vec(omega, a).iter().zip(hi).all(|(x, h)| x <= h))
        .collect()
}

/// A product of generators seen through the conditions: its values, and
/// per index the two numbers compared against `m_i` and `m_{i,c_ii}`.
struct Item {
    delta: Vec<i64>,
    top: Vec<i64>,
    order: Vec<i64>,
}

fn check(surface: &Surface, d: &[i64], items: &[Item]) -> Result<BpfReport> {
    let cands = solutions(surface.omega(), d);
    if cands.is_empty() {
        return Ok(BpfReport {
            bpf: false,
            a: None,
            candidates: 0,
            violation: Some(Violation { condition: Condition::NoA, index: None, expected: None, found: None }),
        });
    }
    let mut first: Option<(Vec<i64>, Violation)> = None;
    for a in &cands {
        match violation_for(surface, d, a, items)? {
            None => return Ok(BpfReport { bpf: true, a: Some(a.clone()), candidates: cands.len(), violation: None }),
            Some(v) => {
                if first.is_none() {
                    first = Some((a.clone(), v));
                }
            }
        }
    }
    let (a, v) = first.expect("at least one candidate");
    Ok(BpfReport { bpf: false, a: Some(a), candidates: cands.len(), violation: Some(v) })
}

fn violation_for(surface: &Surface, d: &[i64], a: &[i64], items: &[Item]) -> Result<Option<Violation>> {
    let z = zariski_data(surface, a)?;
    let idx = surface.index_data();
    let fail = |condition, i, expected, found| Some(Violation { condition, index: Some(i), expected, found });
    for i in 0..surface.len() {
        let max = items.iter().map(|it| it.delta[i]).max();
        if max != Some(d[i]) {
            return Ok(fail(Condition::DMax, i, Some(d[i]), max));
        }
        let top: Vec<&Item> = items.iter().filter(|it| it.delta[i] == d[i]).collect();
        let max_deg = top.iter().map(|it| it.top[i]).max();
        if max_deg != Some(z.m[i]) {
            return Ok(fail(Condition::MaxXi, i, Some(z.m[i]), max_deg));
        }
        let min_ord = top.iter().map(|it| it.order[i]).min();
        if min_ord != Some(z.m_diag[i]) {
            return Ok(fail(Condition::MinXi, i, Some(z.m_diag[i]), min_ord));
        }
        let max_ord = top.iter().map(|it| it.order[i]).max();
        let want = a[i] * idx[i].p_last + z.m_diag[i];
        if max_ord != Some(want) {
            return Ok(fail(Condition::MaxOrderXi, i, Some(want), max_ord));
        }
    }
    Ok(None)
}

/// `deg_xi` and `ord_{xi - c_ii}` of the leading coefficient of every
/// generator, indexed `[i][g]`.
pub fn lc_weights(surface: &Surface) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let table = surface.lc_table();
    let deg = table.iter().map(|row| row.iter().map(|p| p.degree()).collect()).collect();
    let ord = table
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().map(|p| p.ord_at(surface.c_diag(i)) as i64).collect())
        .collect();
    (deg, ord)
}

pub fn is_bpf_at_infinity(surface: &Surface, d: &[i64]) -> Result<BpfReport> {
    let en = enumerate_sections(surface, d)?;
    bpf_from(surface, &en)
}

/// The test on an enumeration already at hand.
pub fn bpf_from(surface: &Surface, en: &SectionEnumeration) -> Result<BpfReport> {
    let (deg, ord) = lc_weights(surface);
    let dot = |row: &[i64], e: &[u32]| row.iter().zip(e).map(|(w, &k)| w * k as i64).sum::<i64>();
    let items: Vec<Item> = en
        .indices
        .iter()
        .map(|idx| {
            let e = idx.exponents();
            Item {
                delta: idx.delta_vector(surface),
                top: deg.iter().map(|r| dot(r, &e)).collect(),
                order: ord.iter().map(|r| dot(r, &e)).collect(),
            }
        })
        .collect();
    check(surface, &en.d, &items)
}

/// Outcome of a bounded search in the Zariski semigroup at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Base-point-free classes summing to the target.
    Member(Vec<Vec<i64>>),
    /// No decomposition with parts in the box.
    NotWithinBound,
    /// The target lies outside the box.
    Unknown,
}

/// Base-point-free classes at infinity inside `[-bound, bound]^N`, nonzero.
pub fn bpf_classes_in_box(surface: &Surface, bound: i64) -> Result<Vec<Vec<i64>>> {
    let n = surface.len();
    let omega = surface.omega();
    let lo = vec![-bound; n];
    let hi = vec![bound; n];
    let mut classes: BTreeSet<Vec<i64>> = BTreeSet::new();
    for a in bounded_preimages(omega, &hi, &hi) {
        let d = mat_vec(omega, &a);
        if d.iter().zip(&lo).all(|(x, l)| x >= l) && d.iter().any(|&x| x != 0) {
            classes.insert(d);
        }
    }
    let classes: Vec<Vec<i64>> = classes.into_iter().collect();
    let flags: Vec<bool> = classes
        .par_iter()
        .map(|d| is_bpf_at_infinity(surface, d).map(|r| r.bpf))
        .collect::<Result<_>>()?;
    Ok(classes.into_iter().zip(flags).filter(|p| p.1).map(|p| p.0).collect())
}

pub fn semigroup_member_bounded(surface: &Surface, d: &[i64], bound: i64) -> Result<Membership> {
    surface.check_len(d)?;
    if d.iter().any(|x| x.abs() > bound) {
        return Ok(Membership::Unknown);
    }
    if d.iter().all(|&x| x == 0) {
        return Ok(Membership::Member(Vec::new()));
    }
    let gens = bpf_classes_in_box(surface, bound)?;
    let inside = |v: &Vec<i64>| v.iter().all(|x| x.abs() <= bound);
    let mut parent: BTreeMap<Vec<i64>, Option<(Vec<i64>, usize)>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for g in &gens {
        if parent.insert(g.clone(), None).is_none() {
            queue.push_back(g.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == d {
            let mut parts = Vec::new();
            let mut cur = v;
            while let Some(Some((prev, gi))) = parent.get(&cur).cloned() {
                parts.push(gens[gi].clone());
                cur = prev;
            }
            parts.push(cur);
            parts.sort();
            return Ok(Membership::Member(parts));
        }
        for (gi, g) in gens.iter().enumerate() {
            let w: Vec<i64> = v.iter().zip(g).map(|(x, y)| x + y).collect();
            if inside(&w) && !parent.contains_key(&w) {
                parent.insert(w.clone(), Some((v.clone(), gi)));
                queue.push_back(w);
            }
        }
    }
    Ok(Membership::NotWithinBound)
}

/// The pair `(mu_k, nu_k)` of an exponent vector over `g_0, ..., g_{s+1}`.
pub fn one_place_mu_nu(data: &OnePlaceData, alpha: &[i64], k: usize) -> Result<(i64, i64)> {
    if k >= data.l.len() {
        return Err(Error::IndexOutOfRange(format!("index {} with {} curves at infinity", k, data.l.len())));
    }
    if alpha.len() != data.g.len() {
        return Err(Error::DimensionMismatch { expected: data.g.len(), found: alpha.len() });
    }
    let lk = data.l[k];
    if !data.trunk[k] {
        return Ok((alpha[lk + 1], alpha[lk + 1]));
    }
    let mu: i64 = (lk + 1..alpha.len()).map(|i| alpha[i] * data.e(lk + 1, i)).sum();
    let nu = match data.char_level(k) {
        Some(q) => alpha[q],
        None => mu,
    };
    Ok((mu, nu))
}

/// The one-place form of the test, through `mu` and `nu` on products of the `g`'s.
pub fn one_place_bpf(surface: &Surface, data: &OnePlaceData, d: &[i64]) -> Result<BpfReport> {
    surface.check_len(d)?;
    let n = surface.len();
    let cols: Vec<Vec<i64>> = data.g.iter().map(|g| surface.delta_vector(g)).collect::<Result<_>>()?;
    let g_rows: Vec<Vec<i64>> = (0..n).map(|k| cols.iter().map(|c| c[k]).collect()).collect();
    let lam = surface
        .recession_certificate()
        .ok_or_else(|| Error::UnboundedSections("no recession certificate".into()))?;
    let items: Vec<Item> = enumerate_exponents(&g_rows, d, lam)
        .into_iter()
        .map(|v| {
            let alpha: Vec<i64> = v.into_iter().map(i64::from).collect();
            let delta = mat_vec(&g_rows, &alpha);
            let mut top = Vec::with_capacity(n);
            let mut order = Vec::with_capacity(n);
            for k in 0..n {
                let (mu, nu) = one_place_mu_nu(data, &alpha, k)?;
                top.push(mu);
                order.push(nu);
            }
            Ok(Item { delta, top, order })
        })
        .collect::<Result<_>>()?;
    check(surface, d, &items)
}

/// Box and sampling parameters for comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComparisonBox {
    /// Coordinates range over `0..side`.
    pub side: i64,
    /// Random points added when the box is too large to scan.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ComparisonBox {
    fn default() -> Self {
        ComparisonBox { side: 15, samples: 200, seed: 0x5eed }
    }
}

const FULL_SCAN_LIMIT: usize = 20_000;

/// Points of the box where two surfaces are compared: the whole box when it
/// is small, otherwise a seeded sample plus the classes `omega a` for small
/// `a`, generator values and their pairwise sums and maxima.
pub fn comparison_points(surfaces: &[&Surface], cmp: &ComparisonBox) -> Vec<Vec<i64>> {
    let n = surfaces[0].len();
    let lo = vec![0i64; n];
    let hi = vec![cmp.side - 1; n];
    let total = (cmp.side.max(0) as f64).powi(n as i32);
    if total <= FULL_SCAN_LIMIT as f64 {
        return box_points(&lo, &hi);
    }
    let inside = |v: &Vec<i64>| v.iter().all(|&x| 0 <= x && x < cmp.side);
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    set.insert(lo.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(cmp.seed);
    for _ in 0..cmp.samples {
        set.insert((0..n).map(|_| rng.gen_range(0..cmp.side)).collect());
    }
    for s in surfaces {
        let omega = s.omega();
        let mut base: Vec<Vec<i64>> = (0..n).map(|j| omega.iter().map(|r| r[j]).collect()).collect();
        let table = s.delta_table();
        base.extend((0..table[0].len()).map(|g| table.iter().map(|r| r[g]).collect::<Vec<i64>>()));
        for u in &base {
            for v in &base {
                set.insert(u.iter().zip(v).map(|(x, y)| x + y).collect());
                set.insert(u.iter().zip(v).map(|(x, y)| *x.max(y)).collect());
            }
            set.insert(u.clone());
        }
    }
    set.into_iter().filter(inside).collect()
}

/// Dimension, Enriques membership and base-point-freeness at one class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassProfile {
    pub dim: usize,
    pub enriques: bool,
    pub bpf: bool,
}

pub fn class_profile(surface: &Surface, d: &[i64]) -> Result<ClassProfile> {
    let en = enumerate_sections(surface, d)?;
    let enriques = enriques_from(surface, &en).member;
    let bpf = bpf_from(surface, &en)?.bpf;
    Ok(ClassProfile { dim: en.dim(), enriques, bpf })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonRow {
    pub d: Vec<i64>,
    pub first: ClassProfile,
    pub second: ClassProfile,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquisingularReport {
    pub len: usize,
    pub rows: Vec<ComparisonRow>,
    pub mismatches: Vec<Vec<i64>>,
}

/// Compares two surfaces index by index at the given classes.
pub fn compare_surfaces(a: &Surface, b: &Surface, points: &[Vec<i64>]) -> Result<EquisingularReport> {
    if a.len() != b.len() {
        return Err(Error::NotEquisingular(format!("{} and {} curves at infinity", a.len(), b.len())));
    }
    let rows: Vec<ComparisonRow> = points
        .par_iter()
        .map(|d| Ok(ComparisonRow { d: d.clone(), first: class_profile(a, d)?, second: class_profile(b, d)? }))
        .collect::<Result<_>>()?;
    let mismatches = rows.iter().filter(|r| r.first != r.second).map(|r| r.d.clone()).collect();
    Ok(EquisingularReport { len: a.len(), rows, mismatches })
}

pub fn equisingular_compare(phi_a: &Dwps, phi_b: &Dwps, cmp: &ComparisonBox, cfg: &FieldConfig) -> Result<EquisingularReport> {
    if !same_pairs(phi_a, phi_b) {
        return Err(Error::NotEquisingular(format!("{} and {} have different Puiseux pairs", phi_a, phi_b)));
    }
    if cmp.side <= 0 {
        return Err(Error::BoxInfeasible(format!("box side {} is not positive", cmp.side)));
    }
    let (sa, _) = from_one_place_branch(phi_a, cfg)?;
    let (sb, _) = from_one_place_branch(phi_b, cfg)?;
    if sa.len() != sb.len() {
        return Err(Error::NotEquisingular(format!("{} and {} curves at infinity", sa.len(), sb.len())));
    }
    let points = comparison_points(&[&sa, &sb], cmp);
    compare_surfaces(&sa, &sb, &points)
}
