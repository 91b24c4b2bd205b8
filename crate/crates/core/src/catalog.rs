//! The four occult cases as numeric profiles, explicit lattices realizing
//! them, and a verifier that checks a lattice against a profile.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::lattice::forms::{sym_from_herm_gaussian, sym_from_herm_scaled, trace_sym_form, ZForm};
use crate::lattice::{disc_group, DiscGroup, HermLattice};
use crate::linalg::Matrix;
use crate::ring::{KRational, Ring};

pub const CASE_NAMES: [&str; 4] = ["cubic-surfaces", "cubic-threefolds", "genus3", "genus4"];

/// Expected invariants of `L = pi * Lambda^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LLevelFacts {
    /// `L^v / pi^{-1} L` for Eisenstein cases, `L^v / L` for the Gaussian one.
    pub dual_quotient: Vec<u64>,
    pub dual_over_pi_inverse: bool,
    /// `L* / L` for the symmetric form recovered from `h`.
    pub sym_quotient: Vec<u64>,
    pub zrank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseProfile {
    pub name: &'static str,
    pub disc: i64,
    /// `None` for the principally polarized case.
    pub d: Option<i64>,
    pub n: usize,
    pub signature: (usize, usize),
    pub dim_a: usize,
    pub pol_degree: u64,
    /// Shape of `Lambda^v / Lambda`.
    pub quotient_1: Vec<u64>,
    /// Shape of `pi^{-1} Lambda / Lambda^v`.
    pub quotient_2: Vec<u64>,
    pub zrank: usize,
    pub excluded_cycle_t: u64,
    pub l_level: Option<LLevelFacts>,
}

fn copies(p: u64, k: usize) -> Vec<u64> {
    vec![p; k]
}

pub fn case_profile(name: &str) -> Result<CaseProfile> {
    let p = match name {
        "cubic-surfaces" => CaseProfile {
            name: "cubic-surfaces",
            disc: -3,
            d: None,
            n: 5,
            signature: (4, 1),
            dim_a: 5,
            pol_degree: 1,
            quotient_1: vec![],
            quotient_2: copies(3, 5),
            zrank: 10,
            excluded_cycle_t: 1,
            l_level: None,
        },
        "cubic-threefolds" => CaseProfile {
            name: "cubic-threefolds",
            disc: -3,
            d: Some(3),
            n: 11,
            signature: (10, 1),
            dim_a: 11,
            pol_degree: 3u64.pow(10),
            quotient_1: copies(3, 10),
            quotient_2: copies(3, 1),
            zrank: 22,
            excluded_cycle_t: 3,
            l_level: Some(LLevelFacts {
                dual_quotient: copies(3, 1),
                dual_over_pi_inverse: true,
                sym_quotient: copies(3, 1),
                zrank: 22,
            }),
        },
        "genus3" => CaseProfile {
            name: "genus3",
            disc: -4,
            d: Some(2),
            n: 7,
            signature: (6, 1),
            dim_a: 7,
            pol_degree: 2u64.pow(6),
            quotient_1: copies(2, 6),
            quotient_2: copies(2, 1),
            zrank: 14,
            excluded_cycle_t: 2,
            l_level: Some(LLevelFacts {
                dual_quotient: copies(2, 8),
                dual_over_pi_inverse: false,
                sym_quotient: copies(2, 8),
                zrank: 14,
            }),
        },
        "genus4" => CaseProfile {
            name: "genus4",
            disc: -3,
            d: Some(3),
            n: 10,
            signature: (9, 1),
            dim_a: 10,
            pol_degree: 3u64.pow(8),
            quotient_1: copies(3, 8),
            quotient_2: copies(3, 2),
            zrank: 20,
            excluded_cycle_t: 2,
            l_level: Some(LLevelFacts {
                dual_quotient: copies(3, 2),
                dual_over_pi_inverse: true,
                sym_quotient: copies(3, 2),
                zrank: 20,
            }),
        },
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    Ok(p)
}

fn check_d(d: i64) -> Result<()> {
    if d <= 1 {
        return Err(Error::BadD(d));
    }
    let mut m = d;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Err(Error::BadD(d));
            }
        }
        p += 1;
    }
    Ok(())
}

/// Degree of the polarization on the star moduli: `d^{n-1}` for odd `n`,
/// `d^{n-2}` for even `n`.
pub fn star_degree(d: i64, n: u32) -> Result<BigInt> {
    check_d(d)?;
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be at least 1".into()));
    }
    let e = if n % 2 == 1 { n - 1 } else { n - 2 };
    Ok(BigInt::from(d).pow(e))
}

/// `2 * floor((n-1)/2)` when `p | d`, else `0`.
pub fn star_t_function(d: i64, n: u32, p: i64) -> Result<u64> {
    check_d(d)?;
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be at least 1".into()));
    }
    Ok(if p > 1 && d % p == 0 { 2 * ((n as u64 - 1) / 2) } else { 0 })
}

fn scalar_block(ring: Ring, x: i64) -> Matrix {
    Matrix::from_ints(ring, &[&[x]])
}

/// `3 I_4 + pi T` with `T` antisymmetric; positive definite, `det 9`, and
/// equal to `pi` times a unimodular matrix.
fn g4(ring: Ring) -> Matrix {
    let pi = KRational::from(ring.pi().expect("ramified"));
    let t: [[i64; 4]; 4] = [[0, 1, -1, 0], [-1, 0, 0, 1], [1, 0, 0, 1], [0, -1, -1, 0]];
    Matrix::from_fn(ring, 4, 4, |i, j| {
        let diag = KRational::from_int(ring, if i == j { 3 } else { 0 });
        &diag + &(&pi * &KRational::from_int(ring, t[i][j]))
    })
}

/// `[[3, pi], [-pi, 0]]`, hyperbolic with divisors `(pi, pi)`.
fn e_block(ring: Ring) -> Matrix {
    let pi = KRational::from(ring.pi().expect("ramified"));
    Matrix::from_fn(ring, 2, 2, |i, j| match (i, j) {
        (0, 0) => KRational::from_int(ring, 3),
        (0, 1) => pi.clone(),
        (1, 0) => -&pi,
        _ => KRational::zero(ring),
    })
}

/// `[[2, 1+i], [1-i, 2]]`.
fn b2(ring: Ring) -> Matrix {
    let pi = KRational::from(ring.pi().expect("ramified"));
    Matrix::from_fn(ring, 2, 2, |i, j| match (i, j) {
        (0, 1) => pi.clone(),
        (1, 0) => pi.conj(),
        _ => KRational::from_int(ring, 2),
    })
}

pub fn build_case_lattice(name: &str) -> Result<HermLattice> {
    let profile = case_profile(name)?;
    let ring = Ring::new(profile.disc)?;
    let blocks = match name {
        "cubic-surfaces" => [1, 1, 1, 1, -1].iter().map(|&x| scalar_block(ring, x)).collect(),
        "cubic-threefolds" => vec![g4(ring), g4(ring), e_block(ring), scalar_block(ring, 1)],
        "genus3" => vec![b2(ring), b2(ring), b2(ring), scalar_block(ring, -1)],
        "genus4" => vec![g4(ring), g4(ring), scalar_block(ring, 1), scalar_block(ring, -1)],
        _ => unreachable!(),
    };
    HermLattice::standard(Matrix::block_diag(ring, &blocks))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub case: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub note: String,
}

pub fn format_shape(shape: &[u64]) -> String {
    let parts: Vec<String> = shape.iter().map(u64::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn group_shape(g: &DiscGroup) -> Vec<u64> {
    g.shape.iter().map(|x| x.to_u64().unwrap_or(u64::MAX)).collect()
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, id: &str, expected: impl ToString, actual: impl ToString) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let pass = expected == actual;
        self.0.push(Check { id: id.to_string(), expected, actual, pass });
    }
}

fn sig(p: (usize, usize)) -> String {
    format!("({}, {})", p.0, p.1)
}

fn chain_shape(g: &Option<DiscGroup>) -> String {
    g.as_ref().map_or_else(|| "not a sublattice".to_string(), |g| format_shape(&group_shape(g)))
}

/// Check a lattice against the profile of `name`.
pub fn verify_case(name: &str, lattice: &HermLattice) -> Result<CaseReport> {
    let profile = case_profile(name)?;
    let ring = lattice.ring();
    if ring.disc() != profile.disc {
        return Err(Error::RingMismatch { expected: profile.disc, actual: ring.disc() });
    }
    let pi = ring.pi()?;
    let mut c = Checks(Vec::new());
    let n = profile.n;
    c.push("rank", n, lattice.rank());
    if lattice.rank() != n {
        return Ok(finish(name, c));
    }
    c.push("signature", sig(profile.signature), sig(lattice.signature()?));
    c.push("integral", true, lattice.is_integral());

    let chain = lattice.verify_chain(&pi)?;
    c.push("chain.holds", true, chain.holds);
    c.push("chain.lower", format_shape(&profile.quotient_1), chain_shape(&chain.lower));
    c.push("chain.upper", format_shape(&profile.quotient_2), chain_shape(&chain.upper));
    c.push("chain.multiplicative", true, chain.multiplicative);
    let pol = chain.lower.as_ref().map_or_else(|| "undefined".to_string(), |g| g.order.to_string());
    c.push("polarization_degree", profile.pol_degree, pol);
    if profile.d.is_none() {
        c.push("self_dual", true, lattice.is_self_dual()?);
    }
    if let Some(facts) = &profile.l_level {
        l_level_checks(&mut c, lattice, facts, &pi)?;
    }
    if lattice.is_integral() {
        let red = lattice.reduce_mod_pi(&pi)?;
        c.push("radical_dim", profile.quotient_1.len(), red.radical_dim);
        let ts = trace_sym_form(lattice)?;
        let (p, q) = profile.signature;
        c.push("trace_form.signature", sig((2 * p, 2 * q)), sig(ts.signature()?));
        c.push("zrank", profile.zrank, ts.zrank());
    }
    Ok(finish(name, c))
}

fn l_level_checks(c: &mut Checks, lattice: &HermLattice, facts: &LLevelFacts, pi: &crate::ring::KElem) -> Result<()> {
    let ring = lattice.ring();
    let pik = KRational::from(pi.clone());
    let l = lattice.dual()?.scale(&pik)?;
    let l_dual = l.dual()?;
    let (label, bottom) =
        if facts.dual_over_pi_inverse { ("L.dual/pi_inv_L", l.scale(&pik.inv()?)?) } else { ("L.dual/L", l.clone()) };
    let q = disc_group(&bottom, &l_dual).map(|g| format_shape(&group_shape(&g)));
    c.push(label, format_shape(&facts.dual_quotient), q.unwrap_or_else(|_| "not a sublattice".into()));
    c.push("L.integral", true, l.is_integral());
    let sym: Result<ZForm> = if ring.disc() == -3 { sym_from_herm_scaled(&l) } else { sym_from_herm_gaussian(&l) };
    let sym = sym?;
    c.push("L.zrank", facts.zrank, sym.zrank());
    let det = sym.det().as_rational().unwrap();
    let expected_det: u64 = facts.sym_quotient.iter().product();
    c.push("L.sym_abs_det", expected_det, det.abs());
    let sq = sym.dual_quotient().map(|g| format_shape(&group_shape(&g)));
    c.push("L.sym_dual_quotient", format_shape(&facts.sym_quotient), sq.unwrap_or_else(|_| "non-integral".into()));
    Ok(())
}

fn finish(name: &str, c: Checks) -> CaseReport {
    let pass = c.0.iter().all(|x| x.pass);
    CaseReport {
        case: name.to_string(),
        checks: c.0,
        pass,
        note: "profile-verified, isometry-class unverified".to_string(),
    }
}
