//! Dense exact matrices over `Z`, `Q`, `O_k` and `k`.
//!
//! Entries are always [`KRational`]; integer and order matrices are just
//! matrices whose entries happen to be integral.

mod normal_form;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{KElem, KRational, Ring};

pub use normal_form::{hnf, snf, SnfResult};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<KRational>,
}

impl Matrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, data: Vec<KRational>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(x) = data.iter().find(|x| x.ring() != ring) {
            return Err(Error::MixedRings(ring.disc(), x.ring().disc()));
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn from_fn(ring: Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> KRational) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring, rows, cols, data }
    }

    pub fn from_elems(ring: Ring, rows: Vec<Vec<KElem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Matrix::from_fn(ring, r, c, |i, j| rows[i][j].clone().into())
    }

    pub fn from_ints(ring: Ring, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Matrix::from_fn(ring, r, c, |i, j| KRational::from_int(ring, rows[i][j]))
    }

    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(ring, rows, cols, |_, _| KRational::zero(ring))
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        Matrix::from_fn(ring, n, n, |i, j| if i == j { KRational::one(ring) } else { KRational::zero(ring) })
    }

    pub fn diagonal(ring: Ring, d: &[KRational]) -> Matrix {
        let n = d.len();
        Matrix::from_fn(ring, n, n, |i, j| if i == j { d[i].clone() } else { KRational::zero(ring) })
    }

    /// Block diagonal sum.
    pub fn block_diag(ring: Ring, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &KRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: KRational) {
        assert_eq!(x.ring(), self.ring);
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[KRational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<KRational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<KRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_cols(ring: Ring, rows: usize, cols: &[Vec<KRational>]) -> Matrix {
        Matrix::from_fn(ring, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.ring, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, a: &KRational) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| a * self.get(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(KRational::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.ring, self.rows)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i..self.cols).all(|j| *self.get(i, j) == self.get(j, i).conj()))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(KRational::is_integral)
    }

    /// Smallest positive integer `m` with `m*M` integral.
    pub fn denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(&integral_denominator(x)))
    }

    /// Entries as ring elements; fails unless every entry is integral.
    pub fn to_elems(&self) -> Result<Vec<Vec<KElem>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_integral().ok_or(Error::NonIntegralEntries)).collect())
            .collect()
    }

    /// The same rational entries viewed over another ring.
    pub fn coerce(&self, ring: Ring) -> Option<Matrix> {
        let data = self.data.iter().map(|x| x.coerce(ring)).collect::<Option<Vec<_>>>()?;
        Some(Matrix { ring, rows: self.rows, cols: self.cols, data })
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::MixedRings(self.ring.disc(), other.ring.disc()));
        }
        let mut out = Matrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[KRational]) -> Vec<KRational> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(KRational::zero(self.ring), |acc, j| &acc + &(self.get(i, j) * &x[j])))
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<KRational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<KRational>> = (0..n).map(|i| self.row(i)).collect();
        let mut prev = KRational::one(self.ring);
        let mut sign = false;
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = !sign;
                    }
                    None => return Ok(KRational::zero(self.ring)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div(&prev)?;
                }
            }
            prev = a[k][k].clone();
        }
        let d = if n == 0 { KRational::one(self.ring) } else { a[n - 1][n - 1].clone() };
        Ok(if sign { -d } else { d })
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut a: Vec<Vec<KRational>> = (0..self.rows).map(|i| self.row(i)).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let inv = a[r][c].inv().expect("nonzero pivot");
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..self.cols {
                        let t = &f * &a[r][j];
                        a[i][j] = &a[i][j] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        let m = Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| a[i][j].clone());
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : M x = 0}` over `k`, as columns.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![KRational::zero(self.ring); self.cols];
            v[f] = KRational::one(self.ring);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f);
            }
            cols.push(v);
        }
        Matrix::from_cols(self.ring, self.cols, &cols)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.ring, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        Ok(r.submatrix(0, n, n, n))
    }

    /// Solution of `M X = B`; `M` must be square and nonsingular.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        if !self.is_square() || b.rows != self.rows {
            return Err(Error::DimensionMismatch("solve needs a square system".into()));
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(b).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        Ok(r.submatrix(0, n, n, b.cols))
    }

    pub fn solve_vec(&self, b: &[KRational]) -> Result<Vec<KRational>> {
        let bm = Matrix::from_cols(self.ring, b.len(), &[b.to_vec()]);
        Ok(self.solve(&bm)?.col(0))
    }

    /// Hermitian congruence diagonalization: returns `d` and nonsingular
    /// `P` with `P* G P = diag(d)`.
    pub fn congruence_diagonalize(&self) -> Result<(Vec<BigRational>, Matrix)> {
        if !self.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let n = self.rows;
        let ring = self.ring;
        let mut a: Vec<Vec<KRational>> = (0..n).map(|i| self.row(i)).collect();
        let mut p: Vec<Vec<KRational>> = (0..n).map(|i| Matrix::identity(ring, n).row(i)).collect();
        let mut d = Vec::with_capacity(n);

        // col_dst += c * col_src, then row_dst += conj(c) * row_src
        let add_cong =
            |a: &mut Vec<Vec<KRational>>, p: &mut Vec<Vec<KRational>>, dst: usize, src: usize, c: &KRational| {
                for row in a.iter_mut() {
                    row[dst] = &row[dst] + &(c * &row[src]);
                }
                let cc = c.conj();
                for j in 0..n {
                    let t = &cc * &a[src][j];
                    a[dst][j] = &a[dst][j] + &t;
                }
                for row in p.iter_mut() {
                    row[dst] = &row[dst] + &(c * &row[src]);
                }
            };
        let swap_cong = |a: &mut Vec<Vec<KRational>>, p: &mut Vec<Vec<KRational>>, i: usize, j: usize| {
            a.swap(i, j);
            for row in a.iter_mut() {
                row.swap(i, j);
            }
            for row in p.iter_mut() {
                row.swap(i, j);
            }
        };

        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    swap_cong(&mut a, &mut p, k, j);
                } else if let Some((i, j)) =
                    (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
                {
                    swap_cong(&mut a, &mut p, k, i);
                    let c = a[k][j].conj();
                    add_cong(&mut a, &mut p, k, j, &c);
                } else {
                    d.extend(std::iter::repeat_n(BigRational::zero(), n - k));
                    break;
                }
            }
            let piv = a[k][k].clone();
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let c = -&a[k][j].div(&piv)?;
                add_cong(&mut a, &mut p, j, k, &c);
            }
            d.push(piv.as_rational().expect("hermitian diagonal is rational"));
        }
        let pm = Matrix::from_fn(ring, n, n, |i, j| p[i][j].clone());
        Ok((d, pm))
    }

    /// `(positive, negative)` inertia of a hermitian matrix.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let (d, _) = self.congruence_diagonalize()?;
        let pos = d.iter().filter(|x| x.is_positive()).count();
        let neg = d.iter().filter(|x| x.is_negative()).count();
        Ok((pos, neg))
    }
}

/// Smallest positive integer `m` making `m*x` integral.
pub fn integral_denominator(x: &KRational) -> BigInt {
    let d = x.denominator().clone();
    if x.numerator().is_integral() {
        d
    } else {
        d * 2
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(ring: Ring, rows: &[&[&str]]) -> Matrix {
        Matrix::from_fn(ring, rows.len(), rows[0].len(), |i, j| ring.parse(rows[i][j]).unwrap())
    }

    #[test]
    fn determinants() {
        let g = Ring::new(-4).unwrap();
        let b2 = parse(g, &[&["2", "1+i"], &["1-i", "2"]]);
        assert_eq!(b2.det().unwrap(), KRational::from_int(g, 2));
        let e = Ring::new(-3).unwrap();
        let m = parse(e, &[&["3", "pi"], &["-pi", "0"]]);
        assert_eq!(m.det().unwrap(), KRational::from_int(e, -3));
        assert!(Matrix::identity(e, 3).inverse().unwrap().is_identity());
    }

    #[test]
    fn inverse_is_exact() {
        let e = Ring::new(-3).unwrap();
        let m = parse(e, &[&["2", "w", "0"], &["1", "3", "pi"], &["1/2", "0", "7"]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        let sing = parse(e, &[&["1", "w"], &["2", "2*w"]]);
        assert_eq!(sing.inverse(), Err(Error::SingularMatrix));
        assert!(sing.det().unwrap().is_zero());
    }

    #[test]
    fn congruence_examples() {
        let g = Ring::new(-4).unwrap();
        let b2 = parse(g, &[&["2", "1+i"], &["1-i", "2"]]);
        let (d, p) = b2.congruence_diagonalize().unwrap();
        let q = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(d, vec![q(2), q(1)]);
        let diag = &(&p.adjoint() * &b2) * &p;
        assert_eq!(diag, Matrix::diagonal(g, &[KRational::from_int(g, 2), KRational::from_int(g, 1)]));

        let e = Ring::new(-3).unwrap();
        let m = parse(e, &[&["3", "pi"], &["-pi", "0"]]);
        let (d, _) = m.congruence_diagonalize().unwrap();
        assert_eq!(d, vec![q(3), q(-1)]);
        assert_eq!(m.signature().unwrap(), (1, 1));
    }

    #[test]
    fn zero_pivot_repair() {
        let e = Ring::new(-3).unwrap();
        let h = parse(e, &[&["0", "pi", "0"], &["-pi", "0", "0"], &["0", "0", "0"]]);
        let (d, p) = h.congruence_diagonalize().unwrap();
        assert_eq!(h.signature().unwrap(), (1, 1));
        assert!(d[2].is_zero());
        let diag = &(&p.adjoint() * &h) * &p;
        let expect: Vec<KRational> = d.iter().map(|x| KRational::from_rational(e, x)).collect();
        assert_eq!(diag, Matrix::diagonal(e, &expect));
        assert_eq!(parse(e, &[&["1", "2"], &["3", "1"]]).signature(), Err(Error::NotHermitian));
    }

    #[test]
    fn kernel_and_rank() {
        let z = Ring::integers();
        let m = Matrix::from_ints(z, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
    }
}
