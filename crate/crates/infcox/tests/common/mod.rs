#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use infcox::field::{FieldConfig, FieldElem};
use infcox::semidegree::Semidegree;
use infcox::series::{exp, Dwps};
use infcox::surface::Surface;

pub type Q = BigRational;

pub fn series(terms: &[(i64, i64, i64)]) -> Dwps {
    Dwps::from_terms(terms.iter().map(|&(c, n, d)| (exp(n, d), FieldElem::from_i64(c))))
}

pub fn semidegree(terms: &[(i64, i64, i64)], rn: i64, rd: i64) -> Semidegree {
    Semidegree::new(series(terms), exp(rn, rd)).unwrap()
}

pub fn degree_surface() -> Surface {
    Surface::build(vec![Semidegree::degree()], None, FieldConfig::default()).unwrap()
}

/// `phi = x^{3/2}`, `r = 1/2`.
pub fn cusp_surface() -> Surface {
    Surface::build(vec![semidegree(&[(1, 3, 2)], 1, 2)], None, FieldConfig::default()).unwrap()
}

/// Weighted degree `(3, 2)` together with `phi = x^{2/3}`, `r = 1/3`.
pub fn two_delta_surface() -> Surface {
    Surface::build(vec![semidegree(&[], 2, 3), semidegree(&[(1, 2, 3)], 1, 3)], None, FieldConfig::default()).unwrap()
}

/// A semidegree given by `y = c x^{e0} + xi x^r`, `c` rational (zero allowed).
#[derive(Clone, Debug)]
pub struct MonomialBranch {
    pub c: Q,
    pub e0: Ratio<i64>,
    pub r: Ratio<i64>,
}

impl MonomialBranch {
    fn scale(&self) -> i64 {
        let mut l = self.r.denom().to_owned();
        if !self.c.is_zero() {
            l = l.lcm(self.e0.denom());
        }
        l
    }
}

fn binom(n: i64, k: i64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        let prow: Vec<Q> = rows[r].iter().map(|v| v / &piv).collect();
        for i in r + 1..rows.len() {
            if !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for (v, w) in rows[i].iter_mut().zip(&prow) {
                    *v -= &f * w;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of `{f : delta_k(f) <= d_k}` by substituting each branch into
/// every monomial allowed by `allowed` and row-reducing the conditions that
/// kill the coefficients of `xi^j x^e` with `scale * e > d_k`.
///
/// `allowed` must contain the support of every such `f`. Columns are split
/// by the weight `a + e0 b` of a branch with `c != 0`, which every
/// substitution preserves when `xi` gets weight `e0 - r`.
pub fn section_dim_oracle(branches: &[MonomialBranch], d: &[i64], allowed: &[(i64, i64)]) -> usize {
    let grading = branches.iter().find(|b| !b.c.is_zero()).map_or(Ratio::new(1, 1), |b| b.e0);
    let mut blocks: BTreeMap<Ratio<i64>, Vec<(i64, i64)>> = BTreeMap::new();
    for &(a, b) in allowed {
        blocks.entry(Ratio::from_integer(a) + grading * b).or_default().push((a, b));
    }
    let mut dim = 0;
    for cols in blocks.values() {
        let mut rows: BTreeMap<(usize, i64, Ratio<i64>), Vec<Q>> = BTreeMap::new();
        for (ci, &(a, b)) in cols.iter().enumerate() {
            for (k, br) in branches.iter().enumerate() {
                let s = br.scale();
                for j in 0..=b {
                    if br.c.is_zero() && j != b {
                        continue;
                    }
                    let e = Ratio::from_integer(a) + br.r * j + br.e0 * (b - j);
                    if e * s <= Ratio::from_integer(d[k]) {
                        continue;
                    }
                    let coef = Q::from_integer(binom(b, j)) * num_traits::pow(br.c.clone(), (b - j) as usize);
                    if coef.is_zero() {
                        continue;
                    }
                    let row = rows.entry((k, j, e)).or_insert_with(|| vec![Q::zero(); cols.len()]);
                    row[ci] += coef;
                }
            }
        }
        dim += cols.len() - rank(rows.into_values().collect());
    }
    dim
}

pub fn cusp_branches() -> Vec<MonomialBranch> {
    vec![MonomialBranch { c: Q::one(), e0: Ratio::new(3, 2), r: Ratio::new(1, 2) }]
}

pub fn two_delta_branches() -> Vec<MonomialBranch> {
    vec![
        MonomialBranch { c: Q::zero(), e0: Ratio::new(0, 1), r: Ratio::new(2, 3) },
        MonomialBranch { c: Q::one(), e0: Ratio::new(2, 3), r: Ratio::new(1, 3) },
    ]
}

/// Monomials that can occur in a section of class `d` on the cusp surface.
///
/// The coefficient of `xi^j` in `f(x, x^{3/2} + xi x^{1/2})` collects, on the
/// line `a + 3b/2 = K`, the terms `C(b, j) c_ab x^{K - j}`; these binomial
/// rows are triangular, so every line with `K > d/2 + deg_y f` is empty, and
/// the top power of `xi` forces `deg_y f <= d`.
pub fn cusp_support(d: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for b in 0..=d.max(-1) {
        for a in 0.. {
            if 2 * a + 3 * b > 3 * d {
                break;
            }
            out.push((a, b));
        }
    }
    out
}

/// The weighted degree `3a + 2b` is read off monomial by monomial.
pub fn two_delta_support(d1: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for b in 0.. {
        if 2 * b > d1 {
            break;
        }
        for a in 0.. {
            if 3 * a + 2 * b > d1 {
                break;
            }
            out.push((a, b));
        }
    }
    out
}
