//! Surfaces given by their semidegrees at infinity.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{FieldConfig, FieldElem};
use crate::keyforms::{key_forms, verify_root_agreement};
use crate::laurent::LaurentPoly2;
use crate::lp::positive_combination;
use crate::semidegree::{Semidegree, XiPoly};
use crate::series::Exp;

/// Per-index numbers read off the formal Puiseux data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexData {
    pub l: usize,
    pub p: i64,
    pub p_tilde: i64,
    pub p_last: i64,
    pub r: Exp,
}

/// A user-supplied family member for index `i` (0-based) and level `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyEntry {
    pub i: usize,
    pub j: usize,
    pub poly: LaurentPoly2,
}

/// A surface: semidegrees, curvette family and the data derived from them.
#[derive(Clone, Debug)]
pub struct Surface {
    cfg: FieldConfig,
    semidegrees: Vec<Semidegree>,
    index: Vec<IndexData>,
    family_gen: Vec<Vec<usize>>,
    generators: Vec<LaurentPoly2>,
    delta: Vec<Vec<i64>>,
    lcs: Vec<Vec<XiPoly>>,
    neighborhoods: Vec<Vec<usize>>,
    c_pow: Vec<Vec<Option<FieldElem>>>,
    c_diag: Vec<FieldElem>,
    partitions: Vec<Vec<(FieldElem, Vec<usize>)>>,
    omega: Vec<Vec<i64>>,
    recession: Option<Vec<i64>>,
}

fn index_data(d: &Semidegree) -> IndexData {
    let f = d.formal();
    IndexData { l: f.l, p: f.p, p_tilde: f.p_tilde, p_last: f.p_last(), r: d.r() }
}

/// Semidegree used to define the family member at level `j`.
pub fn level_semidegree(d: &Semidegree, j: usize) -> Semidegree {
    let r = d.formal().char_exponents[j];
    Semidegree::new(d.phi().truncate_above(r), r).expect("truncation keeps r below the series")
}

/// The family generated from last key forms.
pub fn curvette_family(semidegrees: &[Semidegree], cfg: &FieldConfig) -> Result<Vec<Vec<LaurentPoly2>>> {
    let mut out = Vec::with_capacity(semidegrees.len());
    for (i, d) in semidegrees.iter().enumerate() {
        let mut row = Vec::new();
        for j in 0..=d.formal().l {
            let seq = key_forms(&level_semidegree(d, j), cfg)?;
            if !seq.all_polynomial {
                return Err(Error::NotInSpol { i: i + 1, j });
            }
            row.push(seq.last().clone());
        }
        out.push(row);
    }
    Ok(out)
}

fn validate_family(
    semidegrees: &[Semidegree],
    entries: Vec<FamilyEntry>,
    cfg: &FieldConfig,
) -> Result<Vec<Vec<LaurentPoly2>>> {
    let mut slots: Vec<Vec<Option<LaurentPoly2>>> =
        semidegrees.iter().map(|d| vec![None; d.formal().l + 1]).collect();
    for e in entries {
        let bad = |reason: &str| Error::InvalidFamily { i: e.i + 1, j: e.j, reason: reason.to_string() };
        let slot = slots.get_mut(e.i).and_then(|r| r.get_mut(e.j)).ok_or_else(|| bad("index out of range"))?;
        if slot.is_some() {
            return Err(bad("given twice"));
        }
        if !e.poly.is_polynomial() {
            return Err(bad("not a polynomial"));
        }
        let level = level_semidegree(&semidegrees[e.i], e.j);
        verify_root_agreement(&e.poly, level.phi(), level.r(), cfg).map_err(|err| bad(&err.to_string()))?;
        *slot = Some(e.poly);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, p)| p.ok_or_else(|| Error::InvalidFamily { i: i + 1, j, reason: "missing".into() }))
                .collect()
        })
        .collect()
}

fn exact_div(num: i64, den: i64, what: &str) -> Result<i64> {
    if num % den != 0 {
        return Err(Error::NonIntegral(format!("{}: {}/{}", what, num, den)));
    }
    Ok(num / den)
}

impl Surface {
    /// Assembles a surface; the family is generated unless supplied.
    pub fn build(semidegrees: Vec<Semidegree>, family: Option<Vec<FamilyEntry>>, cfg: FieldConfig) -> Result<Self> {
        let n = semidegrees.len();
        if n == 0 {
            return Err(Error::InvalidSemidegree("a surface needs at least one semidegree".into()));
        }
        for i in 0..n {
            for k in i + 1..n {
                if semidegrees[i].same_as(&semidegrees[k], &cfg)? {
                    return Err(Error::DuplicateSemidegree(i + 1, k + 1));
                }
            }
        }
        let index: Vec<IndexData> = semidegrees.iter().map(index_data).collect();
        let family = match family {
            None => curvette_family(&semidegrees, &cfg)?,
            Some(entries) => validate_family(&semidegrees, entries, &cfg)?,
        };

        let mut generators = vec![LaurentPoly2::x(), LaurentPoly2::y()];
        let mut family_gen = Vec::with_capacity(n);
        for row in &family {
            let mut ids = Vec::with_capacity(row.len());
            for f in row {
                let id = match generators.iter().position(|g| g == f) {
                    Some(id) => id,
                    None => {
                        generators.push(f.clone());
                        generators.len() - 1
                    }
                };
                ids.push(id);
            }
            family_gen.push(ids);
        }

        let mut delta = Vec::with_capacity(n);
        let mut lcs = Vec::with_capacity(n);
        for d in &semidegrees {
            let mut drow = Vec::with_capacity(generators.len());
            let mut lrow = Vec::with_capacity(generators.len());
            for g in &generators {
                let (v, lc) = d.eval_lc(g)?;
                drow.push(v);
                lrow.push(lc);
            }
            delta.push(drow);
            lcs.push(lrow);
        }

        let mut neighborhoods = Vec::with_capacity(n);
        for i in 0..n {
            let mut nb = Vec::new();
            for k in 0..n {
                if k == i || semidegrees[i].contains(&semidegrees[k], &cfg)? {
                    nb.push(k);
                }
            }
            neighborhoods.push(nb);
        }

        let mut c_pow = vec![vec![None; n]; n];
        let mut c_diag = Vec::with_capacity(n);
        let mut partitions = Vec::with_capacity(n);
        for i in 0..n {
            let big_p = index[i].p_last as usize;
            for &k in &neighborhoods[i] {
                let g = family_gen[k][index[k].l];
                let lc = &lcs[i][g];
                let shape = lc.binomial_shape(big_p).ok_or_else(|| {
                    Error::LcShape(format!(
                        "lc of family member {} at semidegree {} is {}, expected unit*xi^s*(xi^{} - c)^t",
                        generators[g],
                        i + 1,
                        lc,
                        big_p
                    ))
                })?;
                c_pow[i][k] = Some(shape.w.unwrap_or_else(FieldElem::zero));
            }
            let cii = if big_p == 1 { c_pow[i][i].clone().unwrap() } else { FieldElem::zero() };
            c_diag.push(cii);
            let mut groups: Vec<(FieldElem, Vec<usize>)> = Vec::new();
            for &k in &neighborhoods[i] {
                if k == i {
                    continue;
                }
                let c = c_pow[i][k].clone().unwrap();
                match groups.iter_mut().find(|g| g.0 == c) {
                    Some(g) => g.1.push(k),
                    None => groups.push((c, vec![k])),
                }
            }
            groups.sort_by(|a, b| a.0.canonical_cmp(&b.0));
            partitions.push(groups);
        }

        for i in 0..n {
            for &k in &neighborhoods[i] {
                exact_div(index[k].p_tilde, index[i].p, "p_tilde over p in a neighborhood")?;
            }
        }

        let mut omega = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let g = family_gen[j][index[j].l];
                omega[i][j] = if neighborhoods[j].contains(&i) {
                    exact_div(index[j].p_last * index[i].p_tilde * delta[j][g], index[j].p_tilde, "omega entry")?
                } else {
                    index[j].p_last * delta[i][g]
                };
            }
        }

        let recession = positive_combination(&delta).map(|lam| {
            let den = lam.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            lam.iter()
                .map(|q| (q * BigRational::from_integer(den.clone())).to_integer().to_i64().expect("small multiplier"))
                .collect()
        });

        Ok(Surface {
            cfg,
            semidegrees,
            index,
            family_gen,
            generators,
            delta,
            lcs,
            neighborhoods,
            c_pow,
            c_diag,
            partitions,
            omega,
            recession,
        })
    }

    pub fn config(&self) -> &FieldConfig {
        &self.cfg
    }

    /// Number of semidegrees.
    pub fn len(&self) -> usize {
        self.semidegrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.semidegrees.is_empty()
    }

    pub fn semidegrees(&self) -> &[Semidegree] {
        &self.semidegrees
    }

    pub fn index_data(&self) -> &[IndexData] {
        &self.index
    }

    /// Family member at `(i, j)`, both 0-based in `i`.
    pub fn family(&self, i: usize, j: usize) -> &LaurentPoly2 {
        &self.generators[self.family_gen[i][j]]
    }

    /// Generator index of each family member.
    pub fn family_generators(&self) -> &[Vec<usize>] {
        &self.family_gen
    }

    /// `x`, `y`, then the distinct family members.
    pub fn generators(&self) -> &[LaurentPoly2] {
        &self.generators
    }

    /// `delta_table()[k][g]` is the value of semidegree `k` on generator `g`.
    pub fn delta_table(&self) -> &[Vec<i64>] {
        &self.delta
    }

    pub fn lc_table(&self) -> &[Vec<XiPoly>] {
        &self.lcs
    }

    /// The sum of `l_i + 1`.
    pub fn family_size(&self) -> usize {
        self.index.iter().map(|d| d.l + 1).sum()
    }

    pub fn neighborhood(&self, i: usize) -> &[usize] {
        &self.neighborhoods[i]
    }

    /// `c_{ik}^{p_{i,l_i+1}}` for `k` in the neighborhood of `i`.
    pub fn c_pow(&self, i: usize, k: usize) -> Option<&FieldElem> {
        self.c_pow[i][k].as_ref()
    }

    pub fn c_diag(&self, i: usize) -> &FieldElem {
        &self.c_diag[i]
    }

    /// The parts of the neighborhood of `i` other than `i`, keyed by c-value.
    pub fn partition(&self, i: usize) -> &[(FieldElem, Vec<usize>)] {
        &self.partitions[i]
    }

    /// Part of the partition with key `c`, empty if there is none.
    pub fn partition_at(&self, i: usize, c: &FieldElem) -> &[usize] {
        self.partitions[i].iter().find(|g| &g.0 == c).map_or(&[], |g| g.1.as_slice())
    }

    pub fn omega(&self) -> &[Vec<i64>] {
        &self.omega
    }

    /// Integer weights making every generator value positive, if they exist.
    pub fn recession_certificate(&self) -> Option<&[i64]> {
        self.recession.as_deref()
    }

    /// Values of every semidegree on `f`.
    pub fn delta_vector(&self, f: &LaurentPoly2) -> Result<Vec<i64>> {
        self.semidegrees.iter().map(|d| d.eval(f)).collect()
    }

    pub fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: v.len() });
        }
        Ok(())
    }
}

/// Canonical comparison of c-values.
pub fn cmp_c(a: &FieldElem, b: &FieldElem) -> Ordering {
    a.canonical_cmp(b)
}
