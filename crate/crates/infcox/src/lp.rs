//! Exact rational simplex, used for the recession-cone check.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

/// A point `x >= 0` with `A x = b`, or `None` if there is none.
///
/// Phase one of the simplex method with artificial variables and Bland's rule.
pub fn feasible_point(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // tableau columns: n structural, m artificial, then the right-hand side
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![Q::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Q::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // objective: minimize the sum of artificials, stored as reduced costs
    let mut obj = vec![Q::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(col) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut pivot: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][col].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][col];
                let better = match &pivot {
                    None => true,
                    Some((pi, pr)) => ratio < *pr || (ratio == *pr && basis[i] < basis[*pi]),
                };
                if better {
                    pivot = Some((i, ratio));
                }
            }
        }
        let (row, _) = pivot?;
        let p = t[row][col].clone();
        for v in t[row].iter_mut() {
            *v = &*v / &p;
        }
        let pr = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (v, w) in r.iter_mut().zip(pr.iter()) {
                    *v -= &f * w;
                }
            }
        }
        basis[row] = col;
    }
    if !t[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Finds `lambda >= 0` with `(lambda^T G)_j >= 1` for every column `j`.
///
/// `g` is given row by row (rows indexed by semidegrees).
pub fn positive_combination(g: &[Vec<i64>]) -> Option<Vec<Q>> {
    let rows = g.len();
    let cols = g.first().map_or(0, Vec::len);
    // variables: lambda (rows) then surplus (cols); one equation per column
    let mut a = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut eq = vec![Q::zero(); rows + cols];
        for k in 0..rows {
            eq[k] = Q::from_integer(g[k][j].into());
        }
        eq[rows + j] = -Q::one();
        a.push(eq);
    }
    let b = vec![Q::one(); cols];
    feasible_point(&a, &b).map(|x| x[..rows].to_vec())
}
