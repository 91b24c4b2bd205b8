//! Exact arithmetic in imaginary-quadratic fields `k = Q(sqrt(D))` and their
//! maximal orders, for the five norm-Euclidean discriminants.
//!
//! Every element is stored in half coordinates: the pair `(u, v)` stands for
//! `(u + v*sqrt(D)) / 2`. An element is integral exactly when `u = v*D (mod 2)`,
//! so one representation serves both `D = 1 (mod 4)` and `D = 0 (mod 4)`.
//!
//! The rational integers are modelled as a degenerate ring with `D = 0` and
//! `v = 0` throughout; this lets the normal-form code run unchanged over `Z`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Discriminants accepted by [`Ring::new`].
pub const SUPPORTED_DISCRIMINANTS: [i64; 5] = [-3, -4, -7, -8, -11];

/// Descriptor of an imaginary-quadratic maximal order (or of `Z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    disc: i64,
}

impl Ring {
    /// The order of discriminant `disc`; only norm-Euclidean discriminants
    /// are accepted.
    pub fn new(disc: i64) -> Result<Ring> {
        if SUPPORTED_DISCRIMINANTS.contains(&disc) {
            Ok(Ring { disc })
        } else {
            Err(Error::UnsupportedDiscriminant(disc))
        }
    }

    /// The rational integers, used for trace forms and abelian-group data.
    pub const fn integers() -> Ring {
        Ring { disc: 0 }
    }

    pub fn is_integers(&self) -> bool {
        self.disc == 0
    }

    /// The discriminant; `0` for the integers.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn unit_count(&self) -> usize {
        match self.disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// All units, found as the elements of norm one.
    pub fn units(&self) -> Vec<KElem> {
        let mut out = Vec::with_capacity(self.unit_count());
        let vmax = if self.is_integers() { 0 } else { 1 };
        for v in -vmax..=vmax {
            for u in -2i64..=2 {
                let x = self.elem(u, v);
                if x.is_integral() && x.norm() == BigRational::one() {
                    out.push(x);
                }
            }
        }
        out.sort_by(|a, b| b.cmp_lex(a));
        out
    }

    /// Element from half coordinates: `(u + v*sqrt(D)) / 2`.
    pub fn elem(&self, u: impl Into<BigInt>, v: impl Into<BigInt>) -> KElem {
        let v = v.into();
        assert!(!self.is_integers() || v.is_zero(), "the integers have no sqrt(D) component");
        KElem { ring: *self, u: u.into(), v }
    }

    pub fn zero(&self) -> KElem {
        self.elem(0, 0)
    }

    pub fn one(&self) -> KElem {
        self.elem(2, 0)
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> KElem {
        let n: BigInt = n.into();
        self.elem(n * 2, 0)
    }

    /// `sqrt(D)`, which generates the different of the order.
    pub fn sqrt_disc(&self) -> KElem {
        assert!(!self.is_integers());
        self.elem(0, 2)
    }

    /// Generator of the different ideal.
    pub fn different(&self) -> KElem {
        if self.is_integers() {
            self.one()
        } else {
            self.sqrt_disc()
        }
    }

    /// The canonical generator `theta` with `O_k = Z[theta]`: `omega` for
    /// `D = -3`, `i` for `D = -4`, and `(D + sqrt(D))/2` otherwise.
    pub fn generator(&self) -> KElem {
        match self.disc {
            0 => panic!("the integers have no quadratic generator"),
            -3 => self.elem(-1, 1),
            -4 => self.elem(0, 1),
            d => self.elem(d, 1),
        }
    }

    /// Trace of the canonical generator.
    pub fn generator_trace(&self) -> i64 {
        match self.disc {
            0 => 0,
            -3 => -1,
            -4 => 0,
            d => d,
        }
    }

    /// Norm of the canonical generator.
    pub fn generator_norm(&self) -> i64 {
        let t = self.generator_trace();
        (t * t - self.disc) / 4
    }

    /// Rational primes dividing the discriminant.
    pub fn ramified_primes(&self) -> Vec<i64> {
        let mut n = self.disc.abs();
        let mut out = Vec::new();
        let mut p = 2;
        while n > 1 {
            if n % p == 0 {
                out.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        out
    }

    /// Canonical generator of the prime ideal above a ramified prime `p`.
    pub fn ramified_prime(&self, p: i64) -> Result<KElem> {
        if self.is_integers() || !self.ramified_primes().contains(&p) {
            return Err(Error::NotRamified(p, self.disc));
        }
        let vmax = 2 * ((p as f64 / self.disc.abs() as f64).sqrt() as i64 + 1);
        let umax = 2 * ((p as f64).sqrt() as i64 + 1);
        let target = BigRational::from_integer(p.into());
        for v in -vmax..=vmax {
            for u in -umax..=umax {
                let x = self.elem(u, v);
                if x.is_integral() && x.norm() == target {
                    return Ok(self.canonical_associate(&x));
                }
            }
        }
        unreachable!("a ramified prime always has a generator of norm p")
    }

    /// The ramified prime generator; every supported discriminant has
    /// exactly one ramified prime.
    pub fn pi(&self) -> Result<KElem> {
        let primes = self.ramified_primes();
        match primes.first() {
            Some(&p) => self.ramified_prime(p),
            None => Err(Error::NotRamified(0, self.disc)),
        }
    }

    /// Root `r` of the generator's minimal polynomial modulo the ramified
    /// prime `p`, so that `x + y*theta -> x + y*r (mod p)` is reduction mod pi.
    pub(crate) fn residue_root(&self, p: i64) -> i64 {
        let t = self.generator_trace();
        let n = self.generator_norm();
        (0..p)
            .find(|&r| (r * r - t * r + n).rem_euclid(p) == 0 && (2 * r - t).rem_euclid(p) == 0)
            .expect("ramified prime has a double root")
    }

    /// Image of an integral element in `O_k / pi = F_p`.
    pub fn residue(&self, x: &KElem, p: i64) -> i64 {
        let (a, b) = x.basis_coords();
        let r = self.residue_root(p);
        let val = a + b * BigInt::from(r);
        val.mod_floor(&BigInt::from(p)).to_i64().unwrap()
    }

    fn check(&self, x: &KElem) -> Result<()> {
        if x.ring != *self {
            return Err(Error::MixedRings(self.disc, x.ring.disc));
        }
        Ok(())
    }

    /// Euclidean division `a = q*b + r` with `norm(r) < norm(b)`.
    ///
    /// The quotient rounds `a/b` coordinatewise: the `sqrt(D)` half
    /// coordinate goes to the nearest integer, then the rational half
    /// coordinate to the nearest integer of the parity that makes `q`
    /// integral. Halves round toward zero.
    pub fn divmod(&self, a: &KElem, b: &KElem) -> Result<(KElem, KElem)> {
        self.check(a)?;
        self.check(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        for x in [a, b] {
            if !x.is_integral() {
                return Err(Error::NotIntegral(x.to_string()));
            }
        }
        let x = KRational::from(a.clone()).div(&KRational::from(b.clone()))?;
        let (uu, vv) = x.half_coords();
        let v0 = round_half_to_zero(&vv);
        let parity = (&v0 * BigInt::from(self.disc)).mod_floor(&BigInt::from(2));
        let u0 = round_to_parity(&uu, &parity);
        let q = self.elem(u0, v0);
        let r = a - &(&q * b);
        debug_assert!(r.norm() < b.norm());
        Ok((q, r))
    }

    /// Canonical remainder of `a` modulo `p`: coordinates of `a/p` in the
    /// basis `{1, theta}` are floored, so the remainder depends only on the
    /// residue class of `a`.
    pub fn reduce_mod(&self, a: &KElem, p: &KElem) -> Result<(KElem, KElem)> {
        self.check(a)?;
        self.check(p)?;
        if p.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let x = KRational::from(a.clone()).div(&KRational::from(p.clone()))?;
        let (uu, vv) = x.half_coords();
        // x = x1 + x2*theta with x2 = vv and x1 = (uu - x2*t)/2
        let t = BigRational::from_integer(self.generator_trace().into());
        let x2 = vv.clone();
        let x1 = (uu - &x2 * t) / BigRational::from_integer(2.into());
        let q = self.from_basis_coords(x1.floor().to_integer(), x2.floor().to_integer());
        let r = a - &(&q * p);
        Ok((q, r))
    }

    /// `a + b*theta` as a ring element.
    pub fn from_basis_coords(&self, a: BigInt, b: BigInt) -> KElem {
        if self.is_integers() {
            return self.elem(a * 2, 0);
        }
        let t = BigInt::from(self.generator_trace());
        self.elem(a * 2 + &b * t, b)
    }

    /// Generator of the ideal `(a, b)`, normalized to its canonical associate.
    pub fn gcd(&self, a: &KElem, b: &KElem) -> Result<KElem> {
        self.check(a)?;
        self.check(b)?;
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = self.divmod(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.canonical_associate(&x))
    }

    /// Unit `e` such that `e*x` is the canonical associate of `x`.
    pub fn normalizing_unit(&self, x: &KElem) -> KElem {
        if x.is_zero() {
            return self.one();
        }
        let mut best: Option<(KElem, KElem)> = None;
        for e in self.units() {
            let cand = &e * x;
            let better = match &best {
                None => true,
                Some((_, cur)) => associate_order(&cand, cur) == Ordering::Greater,
            };
            if better {
                best = Some((e, cand));
            }
        }
        best.unwrap().0
    }

    /// Canonical representative of the associate class of `x`.
    ///
    /// A positive rational integer is preferred, then a positive multiple of
    /// `sqrt(D)`; otherwise the associate with nonnegative trace whose half
    /// coordinates `(u, v)` are lexicographically largest.
    pub fn canonical_associate(&self, x: &KElem) -> KElem {
        &self.normalizing_unit(x) * x
    }

    pub fn is_unit(&self, x: &KElem) -> bool {
        x.is_integral() && x.norm() == BigRational::one()
    }

    /// Exact quotient `a/b` when it lies in the order.
    pub fn exact_div(&self, a: &KElem, b: &KElem) -> Option<KElem> {
        if b.is_zero() {
            return None;
        }
        let q = KRational::from(a.clone()).div(&KRational::from(b.clone())).ok()?;
        q.to_integral()
    }

    pub fn divides(&self, b: &KElem, a: &KElem) -> bool {
        if b.is_zero() {
            return a.is_zero();
        }
        self.exact_div(a, b).is_some()
    }

    /// Parse an element written in the textual syntax, e.g.
    /// `-1/2+1/2*sqrt(-3)`, `1+i`, `3*pi`, `(2-w)/3`.
    pub fn parse(&self, s: &str) -> std::result::Result<KRational, String> {
        Parser::new(*self, s).parse_all()
    }
}

fn class_rank(x: &KElem) -> u8 {
    if x.v.is_zero() && x.u.is_positive() {
        0
    } else if x.u.is_zero() && x.v.is_positive() {
        1
    } else if !x.u.is_negative() {
        2
    } else {
        3
    }
}

/// Preference order among associates; `Greater` means "more canonical".
fn associate_order(a: &KElem, b: &KElem) -> Ordering {
    class_rank(b).cmp(&class_rank(a)).then_with(|| a.cmp_lex(b))
}

pub(crate) fn round_half_to_zero(r: &BigRational) -> BigInt {
    let f = r.floor();
    let frac = r - &f;
    let half = BigRational::new(1.into(), 2.into());
    let f = f.to_integer();
    match frac.cmp(&half) {
        Ordering::Less => f,
        Ordering::Greater => f + 1,
        Ordering::Equal => {
            if r.is_positive() {
                f
            } else {
                f + 1
            }
        }
    }
}

/// Nearest integer to `r` congruent to `parity` mod 2; ties go toward zero
/// (and to `+1` when `r = 0`).
fn round_to_parity(r: &BigRational, parity: &BigInt) -> BigInt {
    let two = BigRational::from_integer(2.into());
    let w = (r - BigRational::from_integer(parity.clone())) / &two;
    let f = w.floor();
    let frac = &w - &f;
    let lower = f.to_integer() * 2 + parity;
    let upper = &lower + 2;
    let half = BigRational::new(1.into(), 2.into());
    match frac.cmp(&half) {
        Ordering::Less => lower,
        Ordering::Greater => upper,
        Ordering::Equal => {
            if r.is_positive() {
                lower
            } else {
                upper
            }
        }
    }
}

/// An element `(u + v*sqrt(D)) / 2` with integer half coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElem {
    ring: Ring,
    u: BigInt,
    v: BigInt,
}

impl KElem {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        let lhs = &self.u - &self.v * BigInt::from(self.ring.disc);
        lhs.is_even()
    }

    pub fn conj(&self) -> KElem {
        KElem { ring: self.ring, u: self.u.clone(), v: -&self.v }
    }

    /// `(u^2 - D v^2) / 4`.
    pub fn norm(&self) -> BigRational {
        let n = &self.u * &self.u - BigInt::from(self.ring.disc) * &self.v * &self.v;
        BigRational::new(n, 4.into())
    }

    /// Norm of an integral element as an integer.
    pub fn norm_int(&self) -> BigInt {
        self.norm().to_integer()
    }

    /// `x + conj(x) = u`.
    pub fn trace(&self) -> BigInt {
        self.u.clone()
    }

    /// Coordinates `(a, b)` with `self = a + b*theta`; the element must be
    /// integral.
    pub fn basis_coords(&self) -> (BigInt, BigInt) {
        if self.ring.is_integers() {
            return (&self.u / 2, BigInt::zero());
        }
        let t = BigInt::from(self.ring.generator_trace());
        let b = self.v.clone();
        let a = (&self.u - &b * t) / 2;
        (a, b)
    }

    /// Lexicographic comparison on `(u, v)`.
    pub fn cmp_lex(&self, other: &KElem) -> Ordering {
        self.u.cmp(&other.u).then_with(|| self.v.cmp(&other.v))
    }

    pub fn try_add(&self, other: &KElem) -> Result<KElem> {
        self.ring.check(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &KElem) -> Result<KElem> {
        self.ring.check(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &KElem) -> Result<KElem> {
        self.ring.check(other)?;
        let p = KRational::from(self.clone()) * KRational::from(other.clone());
        p.to_elem().ok_or_else(|| Error::NotIntegral(p.to_string()))
    }
}

fn assert_same(a: Ring, b: Ring) {
    assert!(a == b, "mixed rings: discriminants {} and {}", a.disc, b.disc);
}

impl Add for &KElem {
    type Output = KElem;
    fn add(self, rhs: &KElem) -> KElem {
        assert_same(self.ring, rhs.ring);
        KElem { ring: self.ring, u: &self.u + &rhs.u, v: &self.v + &rhs.v }
    }
}

impl Sub for &KElem {
    type Output = KElem;
    fn sub(self, rhs: &KElem) -> KElem {
        assert_same(self.ring, rhs.ring);
        KElem { ring: self.ring, u: &self.u - &rhs.u, v: &self.v - &rhs.v }
    }
}

impl Neg for &KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        KElem { ring: self.ring, u: -&self.u, v: -&self.v }
    }
}

/// Product of two elements; panics if the result leaves half coordinates,
/// which cannot happen for integral operands.
impl Mul for &KElem {
    type Output = KElem;
    fn mul(self, rhs: &KElem) -> KElem {
        assert_same(self.ring, rhs.ring);
        let d = BigInt::from(self.ring.disc);
        let uu = &self.u * &rhs.u + d * &self.v * &rhs.v;
        let vv = &self.u * &rhs.v + &self.v * &rhs.u;
        assert!(uu.is_even() && vv.is_even(), "product is not in half coordinates");
        KElem { ring: self.ring, u: uu / 2, v: vv / 2 }
    }
}

/// A field element `num / den` with `den > 0` minimal, i.e.
/// `(u + v*sqrt(D)) / (2*den)` with `gcd(u, v, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KRational {
    num: KElem,
    den: BigInt,
}

impl From<KElem> for KRational {
    fn from(num: KElem) -> Self {
        KRational { num, den: BigInt::one() }
    }
}

impl KRational {
    pub fn new(num: KElem, den: BigInt) -> Result<KRational> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num.ring, num.u, num.v, den))
    }

    fn normalized(ring: Ring, mut u: BigInt, mut v: BigInt, mut den: BigInt) -> KRational {
        if u.is_zero() && v.is_zero() {
            return KRational { num: ring.zero(), den: BigInt::one() };
        }
        if den.is_negative() {
            u = -u;
            v = -v;
            den = -den;
        }
        let g = u.gcd(&v).gcd(&den);
        if !g.is_one() {
            u /= &g;
            v /= &g;
            den /= &g;
        }
        KRational { num: KElem { ring, u, v }, den }
    }

    pub fn zero(ring: Ring) -> KRational {
        ring.zero().into()
    }

    pub fn one(ring: Ring) -> KRational {
        ring.one().into()
    }

    pub fn from_int(ring: Ring, n: impl Into<BigInt>) -> KRational {
        ring.from_int(n).into()
    }

    /// `a + b*sqrt(D)` from rational parts.
    pub fn from_parts(ring: Ring, a: &BigRational, b: &BigRational) -> KRational {
        assert!(!ring.is_integers() || b.is_zero());
        let den = a.denom().lcm(b.denom());
        let u = a.numer() * (&den / a.denom()) * 2;
        let v = b.numer() * (&den / b.denom()) * 2;
        Self::normalized(ring, u, v, den)
    }

    pub fn from_rational(ring: Ring, a: &BigRational) -> KRational {
        Self::from_parts(ring, a, &BigRational::zero())
    }

    pub fn ring(&self) -> Ring {
        self.num.ring
    }

    pub fn numerator(&self) -> &KElem {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.v.is_zero() && self.num.u == BigInt::from(2)
    }

    /// Whether the element lies in the order.
    pub fn is_integral(&self) -> bool {
        self.den.is_one() && self.num.is_integral()
    }

    /// The element as a half-coordinate `KElem`, when its denominator is 1.
    pub fn to_elem(&self) -> Option<KElem> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn to_integral(&self) -> Option<KElem> {
        self.is_integral().then(|| self.num.clone())
    }

    /// Half coordinates `(U, V)` with `self = (U + V*sqrt(D))/2`.
    pub fn half_coords(&self) -> (BigRational, BigRational) {
        (BigRational::new(self.num.u.clone(), self.den.clone()), BigRational::new(self.num.v.clone(), self.den.clone()))
    }

    /// Rational part `a` of `a + b*sqrt(D)`.
    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.num.u.clone(), &self.den * 2)
    }

    /// Coefficient `b` of `sqrt(D)` in `a + b*sqrt(D)`.
    pub fn sqrt_part(&self) -> BigRational {
        BigRational::new(self.num.v.clone(), &self.den * 2)
    }

    pub fn is_rational(&self) -> bool {
        self.num.v.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rational_part())
    }

    /// Coordinates `(a, b)` in the basis `{1, theta}`.
    pub fn basis_coords(&self) -> (BigRational, BigRational) {
        let (uu, vv) = self.half_coords();
        let t = BigRational::from_integer(self.ring().generator_trace().into());
        let a = (uu - &vv * t) / BigRational::from_integer(2.into());
        (a, vv)
    }

    /// `a + b*theta` from rational basis coordinates.
    pub fn from_basis_coords(ring: Ring, a: &BigRational, b: &BigRational) -> KRational {
        if ring.is_integers() {
            return KRational::from_rational(ring, a);
        }
        let t = BigRational::from_integer(ring.generator_trace().into());
        let two = BigRational::from_integer(2.into());
        let uu = a * &two + b * t;
        let half = b.clone();
        // (uu + half*sqrt(D))/2 = uu/2 + (half/2) sqrt(D)
        KRational::from_parts(ring, &(uu / &two), &(half / two))
    }

    pub fn conj(&self) -> KRational {
        KRational { num: self.num.conj(), den: self.den.clone() }
    }

    pub fn norm(&self) -> BigRational {
        self.num.norm() / BigRational::from_integer(&self.den * &self.den)
    }

    pub fn trace(&self) -> BigRational {
        BigRational::new(self.num.u.clone(), self.den.clone())
    }

    pub fn inv(&self) -> Result<KRational> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = BigInt::from(self.ring().disc);
        let u = &self.num.u;
        let v = &self.num.v;
        let nd = u * u - d * v * v;
        let four_den = &self.den * 4;
        Ok(Self::normalized(
            self.ring(),
            &four_den * u,
            {
                let t: BigInt = &four_den * v;
                -t
            },
            nd,
        ))
    }

    pub fn div(&self, other: &KRational) -> Result<KRational> {
        Ok(self * &other.inv()?)
    }

    pub fn try_add(&self, other: &KRational) -> Result<KRational> {
        self.ring().check(&other.num)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &KRational) -> Result<KRational> {
        self.ring().check(&other.num)?;
        Ok(self * other)
    }

    /// Reinterpret a rational value in another ring.
    pub fn coerce(&self, ring: Ring) -> Option<KRational> {
        if ring == self.ring() {
            return Some(self.clone());
        }
        self.as_rational().map(|r| KRational::from_rational(ring, &r))
    }
}

impl Add for &KRational {
    type Output = KRational;
    fn add(self, rhs: &KRational) -> KRational {
        assert_same(self.ring(), rhs.ring());
        if self.den == rhs.den {
            return KRational::normalized(
                self.ring(),
                &self.num.u + &rhs.num.u,
                &self.num.v + &rhs.num.v,
                self.den.clone(),
            );
        }
        KRational::normalized(
            self.ring(),
            &self.num.u * &rhs.den + &rhs.num.u * &self.den,
            &self.num.v * &rhs.den + &rhs.num.v * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &KRational {
    type Output = KRational;
    fn sub(self, rhs: &KRational) -> KRational {
        self + &(-rhs)
    }
}

impl Neg for &KRational {
    type Output = KRational;
    fn neg(self) -> KRational {
        KRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &KRational {
    type Output = KRational;
    fn mul(self, rhs: &KRational) -> KRational {
        assert_same(self.ring(), rhs.ring());
        if self.is_zero() || rhs.is_zero() {
            return KRational::zero(self.ring());
        }
        let d = BigInt::from(self.ring().disc);
        let (a, b) = (&self.num, &rhs.num);
        let uu = &a.u * &b.u + d * &a.v * &b.v;
        let vv = &a.u * &b.v + &a.v * &b.u;
        KRational::normalized(self.ring(), uu, vv, &self.den * &rhs.den * 2)
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(KRational, Add::add, Sub::sub, Mul::mul);
forward_owned!(KElem, Add::add, Sub::sub, Mul::mul);

impl Neg for KRational {
    type Output = KRational;
    fn neg(self) -> KRational {
        -&self
    }
}

impl Neg for KElem {
    type Output = KElem;
    fn neg(self) -> KElem {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for KRational {
    /// Reduced textual form `a+b*sqrt(D)` with `a`, `b` reduced rationals,
    /// e.g. `-1/2+1/2*sqrt(-3)`, `sqrt(-3)`, `1+1/2*sqrt(-4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.rational_part();
        let b = self.sqrt_part();
        if b.is_zero() {
            return write!(f, "{}", fmt_rational(&a));
        }
        let d = self.ring().disc;
        if !a.is_zero() {
            write!(f, "{}", fmt_rational(&a))?;
            if b.is_positive() {
                write!(f, "+")?;
            }
        }
        if b.is_negative() {
            write!(f, "-")?;
        }
        let mag = b.abs();
        if mag.is_one() {
            write!(f, "sqrt({d})")
        } else {
            write!(f, "{}*sqrt({d})", fmt_rational(&mag))
        }
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        KRational::from(self.clone()).fmt(f)
    }
}

/// Recursive-descent parser for element literals.
///
/// ```text
/// expr   := ['+'|'-'] term (('+'|'-') term)*
/// term   := factor (('*'|'/') factor)*
/// factor := integer | 'sqrt(' integer ')' | 'pi' | 'i' | 'w' | 'omega'
///         | 'theta' | '(' expr ')' | '-' factor
/// ```
struct Parser<'a> {
    ring: Ring,
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: Ring, src: &'a str) -> Self {
        Parser { ring, src, pos: 0 }
    }

    fn parse_all(mut self) -> std::result::Result<KRational, String> {
        let v = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(format!("unexpected trailing input at offset {}", self.pos));
        }
        Ok(v)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<KRational, String> {
        self.skip_ws();
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<KRational, String> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                acc = acc.div(&d).map_err(|_| "division by zero".to_string())?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn integer(&mut self) -> std::result::Result<BigInt, String> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| format!("expected integer at offset {start}"))
    }

    fn factor(&mut self) -> std::result::Result<KRational, String> {
        self.skip_ws();
        let ring = self.ring;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(v)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => Ok(KRational::from_int(ring, self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                let quadratic = |name: &str| {
                    if ring.is_integers() {
                        Err(format!("symbol '{name}' is not available over the integers"))
                    } else {
                        Ok(())
                    }
                };
                match word {
                    "sqrt" => {
                        quadratic(word)?;
                        if !self.eat('(') {
                            return Err("expected '(' after sqrt".into());
                        }
                        let d = self.integer()?;
                        if !self.eat(')') {
                            return Err("missing ')'".into());
                        }
                        if d != BigInt::from(ring.disc()) {
                            return Err(format!("sqrt({d}) does not match discriminant {}", ring.disc()));
                        }
                        Ok(ring.sqrt_disc().into())
                    }
                    "pi" => {
                        quadratic(word)?;
                        ring.pi().map(Into::into).map_err(|e| e.to_string())
                    }
                    "theta" => {
                        quadratic(word)?;
                        Ok(ring.generator().into())
                    }
                    "i" if ring.disc() == -4 => Ok(ring.generator().into()),
                    "w" | "omega" if ring.disc() == -3 => Ok(ring.generator().into()),
                    _ => Err(format!("unknown symbol '{word}'")),
                }
            }
            Some(c) => Err(format!("unexpected character '{c}'")),
            None => Err("unexpected end of input".into()),
        }
    }
}
