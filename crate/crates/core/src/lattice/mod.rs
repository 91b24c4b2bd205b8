//! Hermitian lattices: an ambient Gram matrix `G` over `k` together with a
//! basis matrix `B` whose columns span the lattice.
//!
//! The form is `h(x, y) = y* G x`, linear in `x`, so `G[a][b] = h(e_b, e_a)`
//! and the lattice Gram is `B* G B`.

pub mod forms;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hnf, snf, Matrix};
use crate::ring::{KElem, KRational, Ring};

pub use forms::{FormKind, ZForm};

#[derive(Clone, Debug)]
pub struct HermLattice {
    gram: Matrix,
    basis: Matrix,
}

impl HermLattice {
    pub fn new(gram: Matrix, basis: Matrix) -> Result<HermLattice> {
        if gram.ring().is_integers() {
            return Err(Error::UnsupportedDiscriminant(0));
        }
        if !gram.is_square() {
            return Err(Error::DimensionMismatch("gram must be square".into()));
        }
        if !gram.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        if basis.rows() != gram.rows() || basis.cols() != gram.rows() {
            return Err(Error::DimensionMismatch(format!(
                "basis is {}x{}, expected {n}x{n}",
                basis.rows(),
                basis.cols(),
                n = gram.rows()
            )));
        }
        if basis.ring() != gram.ring() {
            return Err(Error::MixedRings(gram.ring().disc(), basis.ring().disc()));
        }
        if gram.det()?.is_zero() || basis.det()?.is_zero() {
            return Err(Error::SingularGram);
        }
        Ok(HermLattice { gram, basis })
    }

    /// `O_k^n` inside the space with Gram `G`.
    pub fn standard(gram: Matrix) -> Result<HermLattice> {
        let basis = Matrix::identity(gram.ring(), gram.rows());
        HermLattice::new(gram, basis)
    }

    pub fn ring(&self) -> Ring {
        self.gram.ring()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn lattice_gram(&self) -> Matrix {
        &(&self.basis.adjoint() * &self.gram) * &self.basis
    }

    /// `h(x, y)` for ambient vectors.
    pub fn h(&self, x: &[KRational], y: &[KRational]) -> KRational {
        let gx = self.gram.mul_vec(x);
        y.iter().zip(&gx).fold(KRational::zero(self.ring()), |acc, (a, b)| &acc + &(&a.conj() * b))
    }

    /// Ambient vector with lattice coordinates `c`.
    pub fn vector(&self, c: &[KRational]) -> Vec<KRational> {
        self.basis.mul_vec(c)
    }

    /// Lattice coordinates of an ambient vector.
    pub fn coords(&self, x: &[KRational]) -> Vec<KRational> {
        self.basis.solve_vec(x).expect("basis is nonsingular")
    }

    pub fn contains_vector(&self, x: &[KRational]) -> bool {
        self.coords(x).iter().all(KRational::is_integral)
    }

    pub fn is_integral(&self) -> bool {
        self.lattice_gram().is_integral()
    }

    pub fn same_space(&self, other: &HermLattice) -> bool {
        self.gram == other.gram
    }

    /// `(D, HNF(D*B))` with `D` the least integer clearing `B`; equal keys
    /// mean equal lattices.
    pub fn canonical_key(&self) -> (BigInt, Matrix) {
        let d = self.basis.denominator();
        let scaled = self.basis.scale(&KRational::from_int(self.ring(), d.clone()));
        let (h, _) = hnf(&scaled).expect("scaled basis is integral");
        (d, h)
    }

    /// Canonical basis: the column HNF of the basis, rescaled.
    pub fn canonical_basis(&self) -> Matrix {
        let (d, h) = self.canonical_key();
        let inv = KRational::from_int(self.ring(), d).inv().unwrap();
        h.scale(&inv)
    }

    pub fn with_basis(&self, basis: Matrix) -> Result<HermLattice> {
        HermLattice::new(self.gram.clone(), basis)
    }

    /// Whether `other` is a sublattice of `self`.
    pub fn contains(&self, other: &HermLattice) -> bool {
        self.transition(other).is_ok_and(|t| t.is_integral())
    }

    /// `B_self^{-1} B_other`.
    fn transition(&self, other: &HermLattice) -> Result<Matrix> {
        if !self.same_space(other) {
            return Err(Error::DimensionMismatch("lattices live in different spaces".into()));
        }
        self.basis.solve(&other.basis)
    }

    /// `L^v = {x : h(x, L) in O_k}`, with basis `B H^{-1}`.
    pub fn dual(&self) -> Result<HermLattice> {
        let h = self.lattice_gram();
        let hinv = h.inverse().map_err(|_| Error::SingularGram)?;
        self.with_basis(&self.basis * &hinv)
    }

    pub fn scale(&self, a: &KRational) -> Result<HermLattice> {
        if a.is_zero() {
            return Err(Error::ZeroScalar);
        }
        self.with_basis(self.basis.scale(a))
    }

    pub fn is_self_dual(&self) -> Result<bool> {
        Ok(self.dual()? == *self)
    }

    pub fn signature(&self) -> Result<(usize, usize)> {
        self.lattice_gram().signature()
    }

    pub fn is_positive_definite(&self) -> Result<bool> {
        Ok(self.signature()? == (self.rank(), 0))
    }

    /// Orthogonal sum, block-diagonal in both Gram and basis.
    pub fn direct_sum(parts: &[HermLattice]) -> Result<HermLattice> {
        let ring = parts.first().ok_or_else(|| Error::DimensionMismatch("empty sum".into()))?.ring();
        let grams: Vec<Matrix> = parts.iter().map(|p| p.gram.clone()).collect();
        let bases: Vec<Matrix> = parts.iter().map(|p| p.basis.clone()).collect();
        HermLattice::new(Matrix::block_diag(ring, &grams), Matrix::block_diag(ring, &bases))
    }

    /// Reduction of an integral lattice modulo a ramified prime.
    pub fn reduce_mod_pi(&self, pi: &KElem) -> Result<ModPiReduction> {
        let p = ramified_norm(self.ring(), pi)?;
        let h = self.lattice_gram();
        let elems = h.to_elems().map_err(|_| Error::NonIntegralLattice)?;
        let n = self.rank();
        let form: Vec<Vec<i64>> =
            elems.iter().map(|row| row.iter().map(|x| self.ring().residue(x, p)).collect()).collect();
        let radical_basis = kernel_mod_p(&form, n, p);
        Ok(ModPiReduction { p, radical_dim: radical_basis.len(), form, radical_basis })
    }

    /// Check `L ⊂ L^v ⊂ pi^{-1} L` and report the two quotients.
    pub fn verify_chain(&self, pi: &KElem) -> Result<ChainReport> {
        ramified_norm(self.ring(), pi)?;
        let dual = self.dual()?;
        let pi_inv = KRational::from(pi.clone()).inv()?;
        let top = self.scale(&pi_inv)?;
        let lower = disc_group(self, &dual).ok();
        let upper = disc_group(&dual, &top).ok();
        let index = disc_group(self, &top)?.order;
        let holds = lower.is_some() && upper.is_some();
        let multiplicative = match (&lower, &upper) {
            (Some(a), Some(b)) => &a.order * &b.order == index,
            _ => false,
        };
        Ok(ChainReport { holds, lower, upper, index, multiplicative })
    }
}

impl PartialEq for HermLattice {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.canonical_key() == other.canonical_key()
    }
}

/// Norm of a ramified prime generator, or an error for anything else.
fn ramified_norm(ring: Ring, pi: &KElem) -> Result<i64> {
    if pi.ring() != ring {
        return Err(Error::MixedRings(ring.disc(), pi.ring().disc()));
    }
    if !pi.is_integral() {
        return Err(Error::NotRamifiedElement);
    }
    let n = pi.norm_int().to_i64().ok_or(Error::NotRamifiedElement)?;
    if ring.ramified_primes().contains(&n) {
        Ok(n)
    } else {
        Err(Error::NotRamifiedElement)
    }
}

/// Basis of `{x in F_p^n : x^T A = 0}`; `A` is symmetric mod p here, so this
/// is also the right kernel.
fn kernel_mod_p(a: &[Vec<i64>], n: usize, p: i64) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..n).find(|&i| m[i][c] != 0) else { continue };
        m.swap(pr, r);
        let inv = mod_inverse(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        for i in 0..n {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..n {
                    m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0; n];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (-m[i][f]).rem_euclid(p);
            }
            v
        })
        .collect()
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    let e = a.extended_gcd(&p);
    e.x.rem_euclid(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPiReduction {
    pub p: i64,
    /// Residue of the lattice Gram in `F_p`.
    pub form: Vec<Vec<i64>>,
    pub radical_dim: usize,
    pub radical_basis: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub holds: bool,
    /// `L^v / L`.
    pub lower: Option<DiscGroup>,
    /// `pi^{-1} L / L^v`.
    pub upper: Option<DiscGroup>,
    /// `|pi^{-1} L / L|`.
    pub index: BigInt,
    pub multiplicative: bool,
}

/// A finite quotient `N / M` of lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscGroup {
    pub ring: Ring,
    /// Nontrivial elementary divisors.
    pub divisors: Vec<KElem>,
    pub order: BigInt,
    /// Orders of the cyclic factors of prime-power order, ascending.
    pub shape: Vec<BigInt>,
}

impl DiscGroup {
    pub fn from_divisors(ring: Ring, divisors: Vec<KElem>) -> DiscGroup {
        let mut shape = Vec::new();
        let mut order = BigInt::one();
        for d in &divisors {
            for c in cyclic_orders(ring, d) {
                order *= &c;
                shape.extend(prime_power_parts(&c));
            }
        }
        shape.sort();
        DiscGroup { ring, divisors, order, shape }
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    /// Whether the group is `(Z/p)^k` for the given `p` and `k`.
    pub fn is_elementary(&self, p: i64, k: usize) -> bool {
        self.shape.len() == k && self.shape.iter().all(|c| *c == BigInt::from(p))
    }
}

/// Cyclic factor orders of `O_k / d`, from the Smith form of multiplication
/// by `d` on `{1, theta}`.
fn cyclic_orders(ring: Ring, d: &KElem) -> Vec<BigInt> {
    if ring.is_integers() {
        let n = d.basis_coords().0.abs();
        return if n.is_one() { vec![] } else { vec![n] };
    }
    let z = Ring::integers();
    let (a0, b0) = d.basis_coords();
    let (a1, b1) = (d * &ring.generator()).basis_coords();
    let m = Matrix::from_fn(z, 2, 2, |i, j| {
        let v = match (i, j) {
            (0, 0) => &a0,
            (1, 0) => &b0,
            (0, 1) => &a1,
            _ => &b1,
        };
        KRational::from_int(z, v.clone())
    });
    snf(&m).expect("integer matrix").divisors.iter().map(|x| x.basis_coords().0.abs()).filter(|x| !x.is_one()).collect()
}

fn prime_power_parts(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut q = BigInt::one();
            while (&n % &p).is_zero() {
                n /= &p;
                q *= &p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// The quotient `sup / sub`.
pub fn disc_group(sub: &HermLattice, sup: &HermLattice) -> Result<DiscGroup> {
    let t = sup.transition(sub)?;
    if !t.is_integral() {
        return Err(Error::NotASublattice);
    }
    let s = snf(&t)?;
    Ok(DiscGroup::from_divisors(sub.ring(), s.nontrivial(sub.ring())))
}

/// `L^v / L` for an integral lattice.
pub fn dual_quotient(l: &HermLattice) -> Result<DiscGroup> {
    if !l.is_integral() {
        return Err(Error::NonIntegralLattice);
    }
    disc_group(l, &l.dual()?)
}
