//! Trace forms on the underlying `Z`-module of a hermitian lattice and the
//! inverse constructions recovering a hermitian form from a `Z`-form with an
//! action of the canonical generator.
//!
//! The `Z`-basis of a lattice with `O_k`-basis `b_1..b_n` is always
//! `b_1..b_n, theta*b_1..theta*b_n`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{DiscGroup, HermLattice};
use crate::error::{Error, Result};
use crate::linalg::{hnf, snf, Matrix};
use crate::ring::{KRational, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Alternating,
    Symmetric,
}

impl FormKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormKind::Alternating => "alternating",
            FormKind::Symmetric => "symmetric",
        }
    }
}

/// A rational bilinear form `S` on `Z^{2n}` with the action `J` of the
/// canonical generator of `O_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZForm {
    ring: Ring,
    kind: FormKind,
    s: Matrix,
    j: Matrix,
}

impl ZForm {
    /// Validates shape, symmetry type and the action (minimal polynomial and
    /// adjointness `J^T S = S J^sigma`).
    pub fn new(ring: Ring, kind: FormKind, s: Matrix, j: Matrix) -> Result<ZForm> {
        let z = Ring::integers();
        let bad = |m: &str| Err(Error::ActionIncompatible(m.to_string()));
        if s.ring() != z || j.ring() != z {
            return bad("form and action must have rational entries");
        }
        let m = s.rows();
        if !s.is_square() || !j.is_square() || j.rows() != m || !m.is_multiple_of(2) || m == 0 {
            return Err(Error::DimensionMismatch(format!(
                "S is {}x{} and J is {}x{}; both must be 2n x 2n",
                s.rows(),
                s.cols(),
                j.rows(),
                j.cols()
            )));
        }
        let st = s.transpose();
        let shape_ok = match kind {
            FormKind::Symmetric => st == s,
            FormKind::Alternating => st == s.scale(&KRational::from_int(z, -1)),
        };
        if !shape_ok {
            return bad(&format!("S is not {}", kind.as_str()));
        }
        if !j.is_integral() {
            return bad("J is not integral");
        }
        let t = KRational::from_int(z, ring.generator_trace());
        let nm = KRational::from_int(z, ring.generator_norm());
        let id = Matrix::identity(z, m);
        let minpoly = &(&(&j * &j) - &j.scale(&t)) + &id.scale(&nm);
        if !minpoly.is_zero() {
            return bad("J does not satisfy the minimal polynomial of the generator");
        }
        let jsigma = &id.scale(&t) - &j;
        if &j.transpose() * &s != &s * &jsigma {
            return bad("J is not adjoint to its conjugate under S");
        }
        Ok(ZForm { ring, kind, s, j })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }

    pub fn zrank(&self) -> usize {
        self.s.rows()
    }

    pub fn det(&self) -> KRational {
        self.s.det().expect("square")
    }

    pub fn signature(&self) -> Result<(usize, usize)> {
        if self.kind != FormKind::Symmetric {
            return Err(Error::ActionIncompatible("signature of an alternating form".into()));
        }
        self.s.signature()
    }

    /// `Z^{2n}* / Z^{2n}` for an integral nondegenerate form.
    pub fn dual_quotient(&self) -> Result<DiscGroup> {
        if self.det().is_zero() {
            return Err(Error::SingularGram);
        }
        let s = snf(&self.s).map_err(|_| Error::NonIntegralLattice)?;
        let z = Ring::integers();
        Ok(DiscGroup::from_divisors(z, s.nontrivial(z)))
    }
}

/// Action of the canonical generator on the `Z`-basis `{b, theta*b}`.
pub fn generator_action(ring: Ring, n: usize) -> Matrix {
    let z = Ring::integers();
    let t = ring.generator_trace();
    let nm = ring.generator_norm();
    let mut j = Matrix::zeros(z, 2 * n, 2 * n);
    for c in 0..n {
        j.set(n + c, c, KRational::one(z));
        j.set(c, n + c, KRational::from_int(z, -nm));
        j.set(n + c, n + c, KRational::from_int(z, t));
    }
    j
}

/// `S_ab = f(h(x_a, x_b))` over the `Z`-basis of `L`.
fn trace_matrix(l: &HermLattice, f: impl Fn(&KRational) -> BigRational) -> Matrix {
    let ring = l.ring();
    let n = l.rank();
    let h = l.lattice_gram();
    let theta = KRational::from(ring.generator());
    let one = KRational::one(ring);
    let coef = |a: usize| if a < n { &one } else { &theta };
    let z = Ring::integers();
    Matrix::from_fn(z, 2 * n, 2 * n, |a, b| {
        // h(alpha b_i, beta b_j) = alpha * conj(beta) * h(b_i, b_j)
        let v = &(coef(a) * &coef(b).conj()) * h.get(b % n, a % n);
        KRational::from_rational(z, &f(&v))
    })
}

fn require_integral(l: &HermLattice) -> Result<()> {
    if l.is_integral() {
        Ok(())
    } else {
        Err(Error::NonIntegralLattice)
    }
}

/// `<x, y> = tr(h(x, y) / sqrt(D))`.
pub fn trace_alt_form(l: &HermLattice) -> Result<ZForm> {
    require_integral(l)?;
    let ring = l.ring();
    let inv = KRational::from(ring.sqrt_disc()).inv()?;
    let s = trace_matrix(l, |v| (v * &inv).trace());
    ZForm::new(ring, FormKind::Alternating, s, generator_action(ring, l.rank()))
}

/// `s(x, y) = tr(h(x, y))`.
pub fn trace_sym_form(l: &HermLattice) -> Result<ZForm> {
    require_integral(l)?;
    let ring = l.ring();
    let s = trace_matrix(l, KRational::trace);
    ZForm::new(ring, FormKind::Symmetric, s, generator_action(ring, l.rank()))
}

fn require_disc(ring: Ring, d: i64) -> Result<()> {
    if ring.disc() == d {
        Ok(())
    } else {
        Err(Error::WrongDiscriminant { expected: d, actual: ring.disc() })
    }
}

/// `(x, y) = tr(h(x, y)) / 3` on an Eisenstein lattice.
pub fn sym_from_herm_scaled(l: &HermLattice) -> Result<ZForm> {
    require_disc(l.ring(), -3)?;
    let three = BigRational::from_integer(3.into());
    let s = trace_matrix(l, |v| v.trace() / &three);
    ZForm::new(l.ring(), FormKind::Symmetric, s, generator_action(l.ring(), l.rank()))
}

/// `(x, y) = tr(h(x, y)) / 2` on a Gaussian lattice.
pub fn sym_from_herm_gaussian(l: &HermLattice) -> Result<ZForm> {
    require_disc(l.ring(), -4)?;
    let two = BigRational::from_integer(2.into());
    let s = trace_matrix(l, |v| v.trace() / &two);
    ZForm::new(l.ring(), FormKind::Symmetric, s, generator_action(l.ring(), l.rank()))
}

/// A `k`-basis `v_1..v_n` of `Q^{2n}` under the action of `J`; the matrix
/// `[v | J v]` converts `k`-coordinates to rational coordinates.
struct Frame {
    ring: Ring,
    n: usize,
    phi: Matrix,
    phi_inv: Matrix,
}

impl Frame {
    fn new(z: &ZForm) -> Frame {
        let zr = Ring::integers();
        let m = z.zrank();
        let n = m / 2;
        let mut picked: Vec<Vec<KRational>> = Vec::new();
        let mut span: Vec<Vec<KRational>> = Vec::new();
        for i in 0..m {
            if picked.len() == n {
                break;
            }
            let e: Vec<KRational> = (0..m).map(|r| KRational::from_int(zr, (r == i) as i64)).collect();
            let mut trial = span.clone();
            trial.push(e.clone());
            if Matrix::from_cols(zr, m, &trial).rank() > span.len() {
                let je = z.j.mul_vec(&e);
                span.push(e.clone());
                span.push(je);
                picked.push(e);
            }
        }
        let jv: Vec<Vec<KRational>> = picked.iter().map(|v| z.j.mul_vec(v)).collect();
        let cols: Vec<Vec<KRational>> = picked.into_iter().chain(jv).collect();
        let phi = Matrix::from_cols(zr, m, &cols);
        let phi_inv = phi.inverse().expect("frame spans");
        Frame { ring: z.ring, n, phi, phi_inv }
    }

    /// `k`-coordinates of a rational vector.
    fn to_k(&self, w: &[KRational]) -> Vec<KRational> {
        let ab = self.phi_inv.mul_vec(w);
        (0..self.n)
            .map(|j| {
                let a = ab[j].as_rational().unwrap();
                let b = ab[self.n + j].as_rational().unwrap();
                KRational::from_basis_coords(self.ring, &a, &b)
            })
            .collect()
    }

    /// Rational coordinates of a `k`-vector.
    fn to_q(&self, c: &[KRational]) -> Vec<KRational> {
        let zr = Ring::integers();
        let mut ab = vec![KRational::zero(zr); 2 * self.n];
        for (j, x) in c.iter().enumerate() {
            let (a, b) = x.basis_coords();
            ab[j] = KRational::from_rational(zr, &a);
            ab[self.n + j] = KRational::from_rational(zr, &b);
        }
        self.phi.mul_vec(&ab)
    }

    /// Rational `Z`-basis matrix of an `O_k`-lattice given in `k`-coordinates.
    fn z_basis(&self, basis: &Matrix) -> Matrix {
        let theta = KRational::from(self.ring.generator());
        let mut cols = Vec::with_capacity(2 * self.n);
        for j in 0..self.n {
            cols.push(self.to_q(&basis.col(j)));
        }
        for j in 0..self.n {
            let tc: Vec<KRational> = basis.col(j).iter().map(|x| &theta * x).collect();
            cols.push(self.to_q(&tc));
        }
        Matrix::from_cols(Ring::integers(), 2 * self.n, &cols)
    }
}

fn bilinear(s: &Matrix, x: &[KRational], y: &[KRational]) -> BigRational {
    let sy = s.mul_vec(y);
    let v = x.iter().zip(&sy).fold(KRational::zero(s.ring()), |acc, (a, b)| &acc + &(a * b));
    v.as_rational().unwrap()
}

/// Action of `sqrt(D) = 2*theta - t` on rational coordinates.
fn sqrt_action(z: &ZForm, x: &[KRational]) -> Vec<KRational> {
    let zr = Ring::integers();
    let two = KRational::from_int(zr, 2);
    let t = KRational::from_int(zr, z.ring.generator_trace());
    let jx = z.j.mul_vec(x);
    jx.iter().zip(x).map(|(a, b)| &(&two * a) - &(&t * b)).collect()
}

/// Builds the hermitian lattice on `Z^{2n}` from a pairing formula.
fn recover(z: &ZForm, h: impl Fn(&[KRational], &[KRational]) -> KRational) -> Result<HermLattice> {
    let frame = Frame::new(z);
    let n = frame.n;
    let ring = z.ring;
    let vcols: Vec<Vec<KRational>> = (0..n).map(|j| frame.phi.col(j)).collect();
    let gram = Matrix::from_fn(ring, n, n, |a, b| h(&vcols[b], &vcols[a]));
    let zr = Ring::integers();
    let m = 2 * n;
    let kcols: Vec<Vec<KRational>> = (0..m)
        .map(|i| {
            let e: Vec<KRational> = (0..m).map(|r| KRational::from_int(zr, (r == i) as i64)).collect();
            frame.to_k(&e)
        })
        .collect();
    let c = Matrix::from_cols(ring, n, &kcols);
    let d = c.denominator();
    let dk = KRational::from_int(ring, d);
    let (hm, _) = hnf(&c.scale(&dk))?;
    let basis = hm.submatrix(0, 0, n, n).scale(&dk.inv()?);
    HermLattice::new(gram, basis).map_err(|e| match e {
        Error::NotHermitian => Error::ActionIncompatible("recovered form is not hermitian".into()),
        other => other,
    })
}

/// `h(x, y) = 1/2 (<sqrt(D) x, y> + <x, y> sqrt(D))`.
pub fn herm_from_alt(z: &ZForm) -> Result<HermLattice> {
    if z.kind != FormKind::Alternating {
        return Err(Error::ActionIncompatible("expected an alternating form".into()));
    }
    let half = BigRational::new(1.into(), 2.into());
    recover(z, |x, y| {
        let a = bilinear(&z.s, &sqrt_action(z, x), y) * &half;
        let b = bilinear(&z.s, x, y) * &half;
        KRational::from_parts(z.ring, &a, &b)
    })
}

/// `h(x, y) = 3/2 ((x, y) + (sqrt(D) x, y) / sqrt(D))` for `D = -3`.
pub fn herm_from_sym_scaled(z: &ZForm) -> Result<HermLattice> {
    require_disc(z.ring, -3)?;
    if z.kind != FormKind::Symmetric {
        return Err(Error::ActionIncompatible("expected a symmetric form".into()));
    }
    let three_halves = BigRational::new(3.into(), 2.into());
    let minus_half = BigRational::new((-1).into(), 2.into());
    recover(z, |x, y| {
        let a = bilinear(&z.s, x, y) * &three_halves;
        // 3/2 * c / sqrt(-3) = -c/2 * sqrt(-3)
        let b = bilinear(&z.s, &sqrt_action(z, x), y) * &minus_half;
        KRational::from_parts(z.ring, &a, &b)
    })
}

/// `h(x, y) = (x, y) + (x, J y) i` for `D = -4`.
pub fn herm_from_sym_gaussian(z: &ZForm) -> Result<HermLattice> {
    require_disc(z.ring, -4)?;
    if z.kind != FormKind::Symmetric {
        return Err(Error::ActionIncompatible("expected a symmetric form".into()));
    }
    let half = BigRational::new(1.into(), 2.into());
    recover(z, |x, y| {
        let a = bilinear(&z.s, x, y);
        // i = sqrt(-4) / 2
        let b = bilinear(&z.s, x, &z.j.mul_vec(y)) * &half;
        KRational::from_parts(z.ring, &a, &b)
    })
}

/// `(D, HNF(D*M))` for a rational `Z`-basis matrix.
fn z_key(m: &Matrix) -> (BigInt, Matrix) {
    let d = m.denominator();
    let s = m.scale(&KRational::from_int(m.ring(), d.clone()));
    (d, hnf(&s).expect("integral").0)
}

/// Dual of `Z^{2n}` under `S`, as a rational basis matrix.
fn z_dual(s: &Matrix) -> Result<Matrix> {
    s.inverse().map_err(|_| Error::SingularGram)
}

/// Whether the hermitian dual of `herm_from_sym_gaussian(z)` coincides with
/// the dual of `Z^{2n}` under `S`.
pub fn gaussian_duals_agree(z: &ZForm) -> Result<bool> {
    let l = herm_from_sym_gaussian(z)?;
    let frame = Frame::new(z);
    let hdual = frame.z_basis(l.dual()?.basis());
    Ok(z_key(&hdual) == z_key(&z_dual(&z.s)?))
}

/// Whether the dual of `L` under its alternating trace form coincides with
/// the hermitian dual.
pub fn alternating_duals_agree(l: &HermLattice) -> Result<bool> {
    let z = trace_alt_form(l)?;
    let n = l.rank();
    let coords = l.lattice_gram().inverse().map_err(|_| Error::SingularGram)?;
    let frame = Frame {
        ring: l.ring(),
        n,
        phi: Matrix::identity(Ring::integers(), 2 * n),
        phi_inv: Matrix::identity(Ring::integers(), 2 * n),
    };
    let hdual = frame.z_basis(&coords);
    Ok(z_key(&hdual) == z_key(&z_dual(&z.s)?))
}

/// The `Z`-basis of `L` in the rational coordinates of `Z^{2n}`; used to
/// compare lattices recovered from forms.
pub fn z_lattice_key(z: &ZForm, l: &HermLattice) -> (BigInt, Matrix) {
    let frame = Frame::new(z);
    z_key(&frame.z_basis(l.basis()))
}

pub fn is_unimodular(z: &ZForm) -> bool {
    let d = z.det();
    d.is_one() || (-&d).is_one()
}
