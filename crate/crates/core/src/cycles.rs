//! Vectors of prescribed hermitian norm, perpendicular sublattices and the
//! nonemptiness test for the divisor attached to a lattice vector.
//!
//! Enumeration runs on the integer quadratic form `Q(w) = tr h(x, x)` in the
//! `Z`-coordinates `w` of `x`. The search is Fincke-Pohst with every bound
//! kept exact: Schur complements are carried in fraction-free (Bareiss)
//! form, so each level reduces to an integer square root.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::forms::trace_sym_form;
use crate::lattice::HermLattice;
use crate::linalg::{hnf, Matrix};
use crate::ring::{KElem, KRational, Ring};

/// All lattice vectors with `h(x, x) = t`, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSolutionSet {
    pub t: u64,
    /// Lattice coordinates of each solution.
    pub vectors: Vec<Vec<KElem>>,
}

impl RepSolutionSet {
    pub fn count(&self) -> usize {
        self.vectors.len()
    }
}

/// Arithmetic needed by the search; `None` signals overflow.
trait SearchInt: Clone + Ord + Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn from_i64(x: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn div_floor(&self, o: &Self) -> Self;
    fn div_ceil(&self, o: &Self) -> Self;
    fn isqrt(&self) -> Self;
    fn is_negative(&self) -> bool;
    fn to_i64(&self) -> Option<i64>;
}

impl SearchInt for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn div_ceil(&self, o: &Self) -> Self {
        -Integer::div_floor(&-self, o)
    }
    fn isqrt(&self) -> Self {
        Roots::sqrt(self)
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
}

impl SearchInt for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn div_ceil(&self, o: &Self) -> Self {
        -Integer::div_floor(&-self, o)
    }
    fn isqrt(&self) -> Self {
        Roots::sqrt(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
}

/// Fraction-free Schur complements of a positive definite integer matrix.
struct Bareiss {
    /// `levels[k]` is the scaled complement on coordinates `k..m`.
    levels: Vec<Vec<Vec<BigInt>>>,
    /// `pivots[k] = levels[k][0][0]`, the leading principal minors.
    pivots: Vec<BigInt>,
}

impl Bareiss {
    fn new(a: Vec<Vec<BigInt>>) -> Option<Bareiss> {
        let m = a.len();
        let mut levels = vec![a];
        let mut pivots = Vec::with_capacity(m);
        let mut prev = BigInt::from(1);
        for k in 0..m {
            let cur = &levels[k];
            let p = cur[0][0].clone();
            if !p.is_positive() {
                return None;
            }
            let size = m - k - 1;
            let mut next = vec![vec![BigInt::zero(); size]; size];
            for i in 0..size {
                for j in 0..size {
                    let v = &p * &cur[i + 1][j + 1] - &cur[i + 1][0] * &cur[0][j + 1];
                    next[i][j] = v / &prev;
                }
            }
            prev = p.clone();
            pivots.push(p);
            levels.push(next);
        }
        Some(Bareiss { levels, pivots })
    }
}

/// Every nonzero `w` with `w^T A w <= r`, paired with its value.
fn search<T: SearchInt>(bar: &Bareiss, r: &BigInt) -> Option<Vec<(Vec<i64>, T)>> {
    let m = bar.pivots.len();
    let levels: Vec<Vec<Vec<T>>> = bar
        .levels
        .iter()
        .map(|l| l.iter().map(|row| row.iter().map(T::from_big).collect()).collect())
        .collect::<Option<_>>()?;
    let d: Vec<T> = bar.pivots.iter().map(T::from_big).collect::<Option<_>>()?;
    let r = T::from_big(r)?;
    let one = T::from_i64(1);
    let mut out = Vec::new();
    let mut w = vec![0i64; m];
    // i_val[k] = Q_{M_k}(w_k..w_m); i_val[m] = 0
    let mut i_val = vec![T::from_i64(0); m + 1];
    descend(m, &levels, &d, &r, &one, &mut w, &mut i_val, &mut out)?;
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn descend<T: SearchInt>(
    k1: usize,
    levels: &[Vec<Vec<T>>],
    d: &[T],
    r: &T,
    one: &T,
    w: &mut Vec<i64>,
    i_val: &mut Vec<T>,
    out: &mut Vec<(Vec<i64>, T)>,
) -> Option<()> {
    if k1 == 0 {
        if w.iter().any(|&x| x != 0) {
            out.push((w.clone(), i_val[0].clone()));
        }
        return Some(());
    }
    let k = k1 - 1;
    let m = w.len();
    let dk = &d[k];
    let dprev = if k == 0 { one } else { &d[k - 1] };
    let row = &levels[k][0];
    let mut s = T::from_i64(0);
    for j in 1..m - k {
        if w[k + j] != 0 {
            s = s.add(&row[j].mul(&T::from_i64(w[k + j]))?)?;
        }
    }
    // (d_k w_k + S)^2 <= d_k * r * d_{k-1} - d_{k-1} * I_{k+1}
    let cap = dk.mul(r)?.mul(dprev)?.sub(&dprev.mul(&i_val[k + 1])?)?;
    if cap.is_negative() {
        return Some(());
    }
    let root = cap.isqrt();
    let lo = root.add(&s)?;
    let lo = T::from_i64(0).sub(&lo)?.div_ceil(dk);
    let hi = root.sub(&s)?.div_floor(dk);
    let (lo, hi) = (lo.to_i64()?, hi.to_i64()?);
    for wk in lo..=hi {
        w[k] = wk;
        let x = dk.mul(&T::from_i64(wk))?.add(&s)?;
        let num = x.mul(&x)?.add(&dprev.mul(&i_val[k + 1])?)?;
        i_val[k] = num.div_exact(dk);
        descend(k, levels, d, r, one, w, i_val, out)?;
    }
    w[k] = 0;
    Some(())
}

/// Integer form `A` and scale `c` with `w^T A w = c * h(x, x)`.
fn integer_trace_form(l: &HermLattice) -> Result<(Vec<Vec<BigInt>>, BigInt)> {
    let den = l.lattice_gram().denominator();
    let g = l.gram().scale(&KRational::from_int(l.ring(), den.clone()));
    let lat = HermLattice::new(g, l.basis().clone())?;
    let s = trace_sym_form(&lat)?;
    let m = s.zrank();
    let a = (0..m).map(|i| (0..m).map(|j| s.s().get(i, j).as_rational().unwrap().to_integer()).collect()).collect();
    Ok((a, den * 2))
}

/// `Z`-coordinates `(a, b)` of `a + b*theta` to half coordinates.
fn to_elems(ring: Ring, w: &[i64]) -> Vec<KElem> {
    let n = w.len() / 2;
    (0..n).map(|j| ring.from_basis_coords(BigInt::from(w[j]), BigInt::from(w[n + j]))).collect()
}

fn cmp_vectors(a: &[KElem], b: &[KElem]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp_lex(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Nonzero lattice vectors with `h(x, x) <= t_max`, each with its norm,
/// sorted by norm and then canonically.
pub fn enumerate_ball(l: &HermLattice, t_max: u64) -> Result<Vec<(u64, Vec<KElem>)>> {
    if !l.is_positive_definite()? {
        return Err(Error::NotDefinite);
    }
    if t_max == 0 {
        return Ok(Vec::new());
    }
    let (a, c) = integer_trace_form(l)?;
    let bar = Bareiss::new(a).ok_or(Error::NotDefinite)?;
    let r = &c * BigInt::from(t_max);
    let raw: Vec<(Vec<i64>, BigInt)> = match search::<i128>(&bar, &r) {
        Some(v) => v.into_iter().map(|(w, q)| (w, BigInt::from(q))).collect(),
        None => search::<BigInt>(&bar, &r).expect("arbitrary precision cannot overflow"),
    };
    let mut out: Vec<(u64, Vec<KElem>)> = raw
        .into_iter()
        .filter(|(_, q)| (q % &c).is_zero())
        .map(|(w, q)| ((q / &c).to_u64().unwrap(), to_elems(l.ring(), &w)))
        .collect();
    out.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| cmp_vectors(&x.1, &y.1)));
    Ok(out)
}

/// Solutions of `h(x, x) = t`; empty for `t = 0`.
pub fn enumerate_vectors(l: &HermLattice, t: u64) -> Result<RepSolutionSet> {
    if !l.is_positive_definite()? {
        return Err(Error::NotDefinite);
    }
    if t == 0 {
        return Ok(RepSolutionSet { t, vectors: Vec::new() });
    }
    let vectors = enumerate_ball(l, t)?.into_iter().filter(|(q, _)| *q == t).map(|(_, v)| v).collect();
    Ok(RepSolutionSet { t, vectors })
}

pub fn rep_count(l: &HermLattice, t: u64) -> Result<usize> {
    Ok(enumerate_vectors(l, t)?.count())
}

/// `L ∩ x^⊥` with the restricted form; `embedding` holds its basis in the
/// lattice coordinates of `L`.
#[derive(Clone, Debug)]
pub struct Perp {
    pub lattice: HermLattice,
    pub embedding: Matrix,
}

fn lattice_vector(l: &HermLattice, x: &[KRational]) -> Result<Vec<KRational>> {
    if x.len() != l.rank() {
        return Err(Error::DimensionMismatch(format!("vector has {} entries, lattice rank is {}", x.len(), l.rank())));
    }
    if x.iter().any(|c| c.ring() != l.ring()) {
        return Err(Error::MixedRings(l.ring().disc(), x[0].ring().disc()));
    }
    if !x.iter().all(KRational::is_integral) {
        return Err(Error::NotInLattice);
    }
    Ok(x.to_vec())
}

/// `h(x, x)` for lattice coordinates `c`.
pub fn norm_of(l: &HermLattice, c: &[KRational]) -> KRational {
    let v = l.vector(c);
    l.h(&v, &v)
}

/// Perpendicular sublattice of a lattice vector given by its coordinates.
pub fn perp_lattice(l: &HermLattice, x: &[KRational]) -> Result<Perp> {
    let c = lattice_vector(l, x)?;
    if norm_of(l, &c).is_zero() {
        return Err(Error::IsotropicVector);
    }
    let ring = l.ring();
    let n = l.rank();
    let h = l.lattice_gram();
    // h(B d, B c) = c* H d
    let g: Vec<KRational> =
        (0..n).map(|j| (0..n).fold(KRational::zero(ring), |acc, i| &acc + &(&c[i].conj() * h.get(i, j)))).collect();
    let row = Matrix::from_fn(ring, 1, n, |_, j| g[j].clone());
    let den = KRational::from_int(ring, row.denominator());
    let (_, t) = hnf(&row.scale(&den))?;
    let idx: Vec<usize> = (1..n).collect();
    let k = t.select_cols(&idx);
    let gram = &(&k.adjoint() * &h) * &k;
    let lattice = HermLattice::standard(gram)?;
    Ok(Perp { lattice, embedding: k })
}

/// Whether the divisor of negative lines perpendicular to `x` is nonempty in
/// a lattice of signature `(n-1, 1)`.
pub fn dx_nonempty(l: &HermLattice, x: &[KRational]) -> Result<bool> {
    let n = l.rank();
    let (p, q) = l.signature()?;
    if (p, q) != (n.saturating_sub(1), 1) {
        return Err(Error::WrongSignature { expected_p: n.saturating_sub(1), p, q });
    }
    let c = lattice_vector(l, x)?;
    if c.iter().all(KRational::is_zero) {
        return Err(Error::IsotropicVector);
    }
    let hx = norm_of(l, &c).as_rational().expect("hermitian norm is rational");
    if hx.is_zero() {
        return Err(Error::IsotropicVector);
    }
    Ok(hx.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(ring: Ring, rows: &[&[&str]]) -> HermLattice {
        let g = Matrix::from_fn(ring, rows.len(), rows.len(), |i, j| ring.parse(rows[i][j]).unwrap());
        HermLattice::standard(g).unwrap()
    }

    fn vecr(ring: Ring, xs: &[i64]) -> Vec<KRational> {
        xs.iter().map(|&x| KRational::from_int(ring, x)).collect()
    }

    #[test]
    fn unit_counts() {
        let e = Ring::new(-3).unwrap();
        let g = Ring::new(-4).unwrap();
        assert_eq!(rep_count(&lat(e, &[&["1"]]), 1).unwrap(), 6);
        assert_eq!(rep_count(&lat(g, &[&["1"]]), 1).unwrap(), 4);
        assert_eq!(rep_count(&lat(e, &[&["1"]]), 2).unwrap(), 0);
        assert_eq!(rep_count(&lat(e, &[&["1"]]), 3).unwrap(), 6);
        assert_eq!(rep_count(&lat(e, &[&["1"]]), 0).unwrap(), 0);
    }

    #[test]
    fn gaussian_b2_norm_two() {
        let g = Ring::new(-4).unwrap();
        let l = lat(g, &[&["2", "1+i"], &["1-i", "2"]]);
        let s = enumerate_vectors(&l, 2).unwrap();
        assert_eq!(s.count(), 24);
        for v in &s.vectors {
            let c: Vec<KRational> = v.iter().cloned().map(Into::into).collect();
            assert_eq!(norm_of(&l, &c), KRational::from_int(g, 2));
        }
        let mut sorted = s.vectors.clone();
        sorted.sort_by(|a, b| cmp_vectors(a, b));
        assert_eq!(sorted, s.vectors);
    }

    #[test]
    fn indefinite_rejected() {
        let e = Ring::new(-3).unwrap();
        let l = lat(e, &[&["1", "0"], &["0", "-1"]]);
        assert_eq!(enumerate_vectors(&l, 1).unwrap_err(), Error::NotDefinite);
    }

    #[test]
    fn bigint_path_matches_i128() {
        let e = Ring::new(-3).unwrap();
        let l = lat(e, &[&["2", "w"], &["w*w", "3"]]);
        let (a, c) = integer_trace_form(&l).unwrap();
        let bar = Bareiss::new(a).unwrap();
        let r = c * BigInt::from(9);
        let small = search::<i128>(&bar, &r).unwrap();
        let big = search::<BigInt>(&bar, &r).unwrap();
        assert_eq!(small.len(), big.len());
        assert!(small.iter().zip(&big).all(|(x, y)| x.0 == y.0 && BigInt::from(x.1) == y.1));
    }

    #[test]
    fn perpendicular_lattices() {
        let e = Ring::new(-3).unwrap();
        let l = lat(
            e,
            &[
                &["1", "0", "0", "0", "0"],
                &["0", "1", "0", "0", "0"],
                &["0", "0", "1", "0", "0"],
                &["0", "0", "0", "1", "0"],
                &["0", "0", "0", "0", "-1"],
            ],
        );
        let p = perp_lattice(&l, &vecr(e, &[1, 0, 0, 0, 0])).unwrap();
        assert_eq!(p.lattice.signature().unwrap(), (3, 1));
        assert_eq!(p.lattice.lattice_gram(), Matrix::diagonal(e, &vecr(e, &[1, 1, 1, -1])));
        let p = perp_lattice(&l, &vecr(e, &[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(p.lattice.signature().unwrap(), (4, 0));
        assert!(dx_nonempty(&l, &vecr(e, &[1, 0, 0, 0, 0])).unwrap());
        assert!(!dx_nonempty(&l, &vecr(e, &[0, 0, 0, 0, 1])).unwrap());
        assert_eq!(dx_nonempty(&l, &vecr(e, &[1, 0, 0, 0, 1])).unwrap_err(), Error::IsotropicVector);

        let s = lat(e, &[&["1", "0"], &["0", "3"]]);
        let p = perp_lattice(&s, &vecr(e, &[1, 0])).unwrap();
        assert_eq!(p.lattice.lattice_gram(), Matrix::from_ints(e, &[&[3]]));
        let half = vec![e.parse("1/2").unwrap(), KRational::zero(e)];
        assert_eq!(perp_lattice(&s, &half).unwrap_err(), Error::NotInLattice);
    }
}
