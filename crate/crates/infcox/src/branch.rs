//! Surfaces attached to a curve with one place at infinity.
//!
//! The semidegrees follow the minimal resolution of the pencil spanned by the
//! curve and a multiple of the line at infinity: a Stern–Brocot descent towards
//! each exponent of the branch, then a chain of free blowups until the last
//! semidegree vanishes on the curve.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::keyforms::{classify_surface, key_forms};
use crate::laurent::LaurentPoly2;
use crate::semidegree::{gcd_all, Semidegree};
use crate::series::{fmt_exp, Dwps, Exp};
use crate::surface::{FamilyEntry, Surface};

/// Combinatorial data of a one-place surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePlaceData {
    /// `x`, the last key forms at each characteristic exponent, the curve.
    pub g: Vec<LaurentPoly2>,
    /// Degrees in `y` of the `g`'s.
    pub g_deg: Vec<i64>,
    /// Number of genuine Puiseux pairs at each index.
    pub l: Vec<usize>,
    /// Whether each index lies on the path from the degree to the last index.
    pub trunk: Vec<bool>,
    /// Index where each characteristic exponent is reached.
    pub j_nodes: Vec<usize>,
    /// Ends of the vertical segments, then the last index.
    pub i_nodes: Vec<usize>,
    /// Edges of the dual graph.
    pub edges: Vec<(usize, usize)>,
}

impl OnePlaceData {
    /// Number of characteristic exponents.
    pub fn s(&self) -> usize {
        self.g.len() - 2
    }

    /// `deg g_{k2} / deg g_{k1}` for `1 <= k1 <= k2`.
    pub fn e(&self, k1: usize, k2: usize) -> i64 {
        self.g_deg[k2] / self.g_deg[k1]
    }

    /// `q` with `j_q = k`, if `k` is one of the characteristic indices.
    pub fn char_level(&self, k: usize) -> Option<usize> {
        self.j_nodes.iter().position(|&j| j == k).map(|q| q + 1)
    }

    /// Indices hanging below `i` in the dual tree rooted at the degree.
    pub fn descendants(&self, i: usize) -> Vec<usize> {
        let n = self.l.len();
        let parent = parents(n, &self.edges);
        let mut out = Vec::new();
        for k in 0..n {
            let mut cur = k;
            while cur != 0 && cur != i {
                cur = parent[cur];
            }
            if cur == i && k != i {
                out.push(k);
            }
        }
        out
    }
}

fn parents(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; n];
    parent[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    parent
}

struct Builder {
    nodes: Vec<(Dwps, Exp)>,
    edges: BTreeSet<(usize, usize)>,
}

impl Builder {
    fn push(&mut self, psi: &Dwps, rho: Exp, left: usize, right: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push((psi.clone(), rho));
        self.edges.insert((left.min(id), left.max(id)));
        if let Some(r) = right {
            self.edges.insert((r.min(id), r.max(id)));
            self.edges.remove(&(left.min(r), left.max(r)));
        }
        id
    }
}

/// Builds the surface of a branch `y = phi(x)` with `deg phi <= 1`.
pub fn from_one_place_branch(phi: &Dwps, cfg: &FieldConfig) -> Result<(Surface, OnePlaceData)> {
    let one = Exp::one();
    if phi.degree().is_some_and(|d| d > one) {
        return Err(Error::BranchPrecondition(format!("degree of {} exceeds 1", phi)));
    }
    let (curve, polynomial) = phi.minpoly(cfg)?;
    if !polynomial {
        return Err(Error::BranchPrecondition(format!("minimal polynomial {} is not a polynomial", curve)));
    }
    let chars = phi.analyze().char_exponents;

    let mut b = Builder { nodes: vec![(Dwps::zero(), one)], edges: BTreeSet::new() };
    let mut free = 0usize;
    let mut prefix = phi.truncate_geq(one);
    let mut big_p = 1i64;
    let mut rho_star = one;
    let mut j_nodes = Vec::new();
    for (e, _) in phi.terms().iter().filter(|t| t.0 < one) {
        let target = (rho_star - *e) * Exp::from_integer(big_p);
        let (mut ln, mut ld, mut lnode) = (0i64, 1i64, free);
        let (mut rn, mut rd, mut rnode) = (1i64, 0i64, None);
        let last = loop {
            let (mn, md) = (ln + rn, ld + rd);
            let m = Exp::new(mn, md);
            let rho = rho_star - m / Exp::from_integer(big_p);
            let id = b.push(&prefix, rho, lnode, rnode);
            if m == target {
                break id;
            }
            if m < target {
                (ln, ld, lnode) = (mn, md, id);
            } else {
                (rn, rd, rnode) = (mn, md, Some(id));
            }
        };
        if chars.contains(e) {
            j_nodes.push(last);
        }
        free = last;
        prefix = phi.truncate_geq(*e);
        big_p = big_p.lcm(e.denom());
        rho_star = *e;
    }
    loop {
        let (psi, rho) = b.nodes[free].clone();
        let v = Semidegree::new(psi, rho)?.eval(&curve)?;
        if v == 0 {
            break;
        }
        if v < 0 {
            return Err(Error::BranchPrecondition(format!(
                "value on the curve turns negative at exponent {}",
                fmt_exp(&rho)
            )));
        }
        free = b.push(&prefix, rho - Exp::new(1, big_p), free, None);
    }
    let semidegrees: Vec<Semidegree> =
        b.nodes.iter().map(|(psi, rho)| Semidegree::new(psi.clone(), *rho)).collect::<Result<_>>()?;
    let n = semidegrees.len();

    let mut g = vec![LaurentPoly2::x()];
    for e in &chars {
        let d = Semidegree::new(phi.truncate_above(*e), *e)?;
        g.push(key_forms(&d, cfg)?.last().clone());
    }
    g.push(curve);
    let g_deg: Vec<i64> = g.iter().map(LaurentPoly2::deg_y).collect();

    let l: Vec<usize> = semidegrees.iter().map(|d| d.formal().l).collect();
    let mut family = Vec::new();
    for (k, &lk) in l.iter().enumerate() {
        for j in 0..=lk {
            family.push(FamilyEntry { i: k, j, poly: g[j + 1].clone() });
        }
    }

    let edges: Vec<(usize, usize)> = b.edges.into_iter().collect();
    let parent = parents(n, &edges);
    let mut trunk = vec![false; n];
    let mut cur = n - 1;
    trunk[cur] = true;
    while cur != 0 {
        cur = parent[cur];
        trunk[cur] = true;
    }
    let mut i_nodes = Vec::new();
    for &j in &j_nodes {
        let mut prev = j;
        let mut cur = (0..n).find(|&k| !trunk[k] && parent[k] == j).ok_or_else(|| {
            Error::BranchPrecondition("characteristic index without vertical segment".into())
        })?;
        loop {
            let next = (0..n).find(|&k| k != prev && parent[k] == cur);
            match next {
                Some(k) => {
                    prev = cur;
                    cur = k;
                }
                None => break,
            }
        }
        i_nodes.push(cur);
    }
    i_nodes.push(n - 1);

    for (k, d) in semidegrees.iter().enumerate() {
        let vals: Vec<i64> = g.iter().map(|f| d.eval(f)).collect::<Result<_>>()?;
        for j in 1..=l[k] + 1 {
            let expected = gcd_all(&vals[..j]) / gcd_all(&vals[..=j]);
            if d.formal().pairs[j - 1].1 != expected {
                return Err(Error::BranchPrecondition(format!("gcd identity fails at index {} level {}", k, j)));
            }
        }
    }
    let verdict = classify_surface(&semidegrees, cfg)?;
    if !verdict.in_s_pol_plus {
        return Err(Error::BranchPrecondition("surface is not in S_pol+".into()));
    }

    let surface = Surface::build(semidegrees, Some(family), *cfg)?;
    let data = OnePlaceData { g, g_deg, l, trunk, j_nodes, i_nodes, edges };
    Ok((surface, data))
}

/// Whether two branches have the same Puiseux pairs.
pub fn same_pairs(a: &Dwps, b: &Dwps) -> bool {
    a.analyze().pairs == b.analyze().pairs
}
