//! Hermite and Smith normal forms over a Euclidean order (or `Z`).

use num_bigint::BigInt;

use super::Matrix;
use crate::error::Result;
use crate::ring::{KElem, Ring};

type Grid = Vec<Vec<KElem>>;

fn to_matrix(ring: Ring, g: &Grid, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |i, j| g[i][j].clone().into())
}

fn identity(ring: Ring, n: usize) -> Grid {
    (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect()
}

/// `col_dst -= q * col_src` on every row of `g`.
fn col_axpy(g: &mut Grid, dst: usize, src: usize, q: &KElem) {
    if q.is_zero() {
        return;
    }
    for row in g.iter_mut() {
        let t = q * &row[src];
        row[dst] = &row[dst] - &t;
    }
}

fn col_swap(g: &mut Grid, a: usize, b: usize) {
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

fn col_scale(g: &mut Grid, c: usize, e: &KElem) {
    for row in g.iter_mut() {
        row[c] = e * &row[c];
    }
}

fn row_axpy(g: &mut Grid, dst: usize, src: usize, q: &KElem) {
    if q.is_zero() {
        return;
    }
    let s = g[src].clone();
    for (x, y) in g[dst].iter_mut().zip(&s) {
        *x = &*x - &(q * y);
    }
}

fn norm(x: &KElem) -> BigInt {
    x.norm_int()
}

/// Column-style Hermite normal form `H = M T` with `T` unimodular.
///
/// `H` is in column echelon form: the pivot of each nonzero column lies
/// strictly below the pivot of the previous one, pivots are canonical
/// associates and the entries to the left of a pivot are canonical
/// remainders modulo it.
pub fn hnf(m: &Matrix) -> Result<(Matrix, Matrix)> {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.to_elems()?;
    let mut t = identity(ring, cols);
    let mut c = 0;
    for i in 0..rows {
        if c == cols {
            break;
        }
        loop {
            let best = (c..cols).filter(|&j| !h[i][j].is_zero()).min_by(|&a, &b| norm(&h[i][a]).cmp(&norm(&h[i][b])));
            let Some(j) = best else { break };
            col_swap(&mut h, c, j);
            col_swap(&mut t, c, j);
            let mut done = true;
            for j in c + 1..cols {
                if h[i][j].is_zero() {
                    continue;
                }
                let (q, r) = ring.divmod(&h[i][j], &h[i][c])?;
                col_axpy(&mut h, j, c, &q);
                col_axpy(&mut t, j, c, &q);
                if !r.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[i][c].is_zero() {
            continue;
        }
        let e = ring.normalizing_unit(&h[i][c]);
        col_scale(&mut h, c, &e);
        col_scale(&mut t, c, &e);
        for j in 0..c {
            let (q, _) = ring.reduce_mod(&h[i][j], &h[i][c])?;
            col_axpy(&mut h, j, c, &q);
            col_axpy(&mut t, j, c, &q);
        }
        c += 1;
    }
    Ok((to_matrix(ring, &h, rows, cols), to_matrix(ring, &t, cols, cols)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: Matrix,
    pub v: Matrix,
    /// `min(rows, cols)` diagonal entries; zeros trail.
    pub divisors: Vec<KElem>,
}

/// Smith normal form `U M V = diag(divisors)`.
pub fn snf(m: &Matrix) -> Result<SnfResult> {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_elems()?;
    let mut u = identity(ring, rows);
    let mut v = identity(ring, cols);
    let steps = rows.min(cols);
    let mut divisors = Vec::with_capacity(steps);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize, BigInt)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    let n = norm(&a[i][j]);
                    if best.as_ref().is_none_or(|b| n < b.2) {
                        best = Some((i, j, n));
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, t, pj);
            col_swap(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = ring.divmod(&a[i][t], &a[t][t])?;
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= r.is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = ring.divmod(&a[t][j], &a[t][t])?;
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !ring.divides(&a[t][t], &a[i][j])));
            match bad {
                Some(i) => {
                    let minus_one = -&ring.one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        let e = ring.normalizing_unit(&a[t][t]);
        for x in a[t].iter_mut() {
            *x = &e * &*x;
        }
        for x in u[t].iter_mut() {
            *x = &e * &*x;
        }
        divisors.push(a[t][t].clone());
    }
    Ok(SnfResult { u: to_matrix(ring, &u, rows, rows), v: to_matrix(ring, &v, cols, cols), divisors })
}

impl SnfResult {
    /// Divisors that are neither units nor zero.
    pub fn nontrivial(&self, ring: Ring) -> Vec<KElem> {
        self.divisors.iter().filter(|d| !d.is_zero() && !ring.is_unit(d)).cloned().collect()
    }
}
