//! Command-line front end. Every verb reads JSON (inline, from `--in FILE` or
//! from stdin) and prints one JSON document.
//!
//! Exit status: 0 on success, 1 when a verification comes out negative, 2 on
//! any usage, parse or domain error.

use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{build_case_lattice, case_profile, star_degree, star_t_function, verify_case};
use crate::cycles::{dx_nonempty, enumerate_vectors, perp_lattice};
use crate::json::*;
use crate::lattice::forms::{
    herm_from_alt, herm_from_sym_gaussian, herm_from_sym_scaled, sym_from_herm_gaussian, sym_from_herm_scaled,
    trace_alt_form, trace_sym_form, FormKind, ZForm,
};
use crate::lattice::{disc_group, dual_quotient, HermLattice};
use crate::linalg::{hnf, snf};
use crate::ring::{KElem, KRational, Ring};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "hermlat",
    version,
    about = "Exact computations with hermitian lattices over imaginary quadratic orders"
)]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Default)]
struct LatticeIn {
    /// Lattice JSON file, `-` for stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<String>,
    /// Discriminant, used with --gram.
    #[arg(long, allow_negative_numbers = true)]
    ring: Option<i64>,
    /// Gram matrix as JSON (nested array or matrix object).
    #[arg(long)]
    gram: Option<String>,
    /// Basis matrix as JSON; columns are the basis vectors.
    #[arg(long)]
    basis: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    /// Alternating trace form `tr(h / sqrt(D))`.
    Alt,
    /// Symmetric trace form `tr(h)`.
    Sym,
    /// `tr(h) / 3`, Eisenstein only.
    SymScaled,
    /// `tr(h) / 2`, Gaussian only.
    SymGaussian,
    /// Recover the hermitian lattice from a form with ring action.
    Herm,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Describe a ring; optionally evaluate element operations in it.
    RingInfo {
        #[arg(long, allow_negative_numbers = true)]
        ring: i64,
        #[arg(long, allow_hyphen_values = true)]
        elem: Option<String>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        divmod: Option<Vec<String>>,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        gcd: Option<Vec<String>>,
    },
    /// Dual lattice, optionally multiplied by a scalar.
    Dual {
        #[command(flatten)]
        lattice: LatticeIn,
        #[arg(long, allow_hyphen_values = true)]
        scale: Option<String>,
    },
    /// Smith normal form of a matrix, or its Hermite form with --hnf.
    Snf {
        #[arg(long = "in", value_name = "FILE")]
        input: Option<String>,
        /// Ring for a nested-array matrix: a discriminant, `Z` or `Q`.
        #[arg(long, allow_hyphen_values = true)]
        ring: Option<String>,
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        hnf: bool,
    },
    /// Signature of the hermitian form.
    Signature {
        #[command(flatten)]
        lattice: LatticeIn,
        /// Also report integrality, self-duality and definiteness.
        #[arg(long)]
        details: bool,
        /// Also report a congruence diagonal of the lattice Gram.
        #[arg(long)]
        diagonal: bool,
    },
    /// `L^v / L`, or `super / sub` given both lattices.
    DiscGroup {
        #[command(flatten)]
        lattice: LatticeIn,
        /// Sublattice JSON, inline or a file path.
        #[arg(long = "sub")]
        sub: Option<String>,
        /// Superlattice JSON, inline or a file path.
        #[arg(long = "super")]
        sup: Option<String>,
    },
    /// Convert between hermitian lattices and Z-forms with ring action.
    Convert {
        #[command(flatten)]
        lattice: LatticeIn,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Check `L ⊂ L^v ⊂ pi^-1 L`.
    Chain {
        #[command(flatten)]
        lattice: LatticeIn,
        #[arg(long, allow_hyphen_values = true)]
        pi: Option<String>,
    },
    /// Residue form on `L / pi L` and its radical.
    ReduceModPi {
        #[command(flatten)]
        lattice: LatticeIn,
        #[arg(long, allow_hyphen_values = true)]
        pi: Option<String>,
    },
    /// All lattice vectors with `h(x,x) = t` on a definite lattice.
    Enumerate {
        #[command(flatten)]
        lattice: LatticeIn,
        #[arg(long)]
        t: u64,
    },
    /// Orthogonal complement of a lattice vector.
    Perp {
        #[command(flatten)]
        lattice: LatticeIn,
        /// Lattice coordinates of the vector as a JSON array.
        #[arg(long)]
        x: String,
        /// Only decide whether the divisor of negative lines perpendicular to x is nonempty.
        #[arg(long)]
        dx: bool,
    },
    /// Profile of a catalogued case.
    CaseProfile { name: String },
    /// Model lattice of a catalogued case.
    CaseBuild { name: String },
    /// Check a lattice against a case profile.
    CaseVerify {
        name: String,
        /// Verify the built model lattice.
        #[arg(long)]
        build: bool,
        #[command(flatten)]
        lattice: LatticeIn,
    },
    /// Polarization degree and t-function for the star cases.
    StarDegree {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: u32,
        /// Prime for the t-function; defaults to every prime dividing d.
        #[arg(long)]
        p: Option<i64>,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut io = Io { stdin };
    match dispatch(&cli.cmd, &mut io) {
        Ok((value, ok)) => {
            let mut out = if cli.pretty { serde_json::to_string_pretty(&value) } else { serde_json::to_string(&value) }
                .expect("serializable");
            out.push('\n');
            Outcome { code: if ok { 0 } else { 1 }, stdout: out, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
}

impl Io<'_> {
    fn read(&mut self, path: Option<&str>) -> Result<Value> {
        let (name, text) = match path {
            None | Some("-") => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).map_err(|e| Error::parse("<stdin>", e.to_string()))?;
                ("<stdin>".to_string(), s)
            }
            Some(p) => {
                let s = std::fs::read_to_string(p).map_err(|e| Error::parse(p, e.to_string()))?;
                (p.to_string(), s)
            }
        };
        serde_json::from_str(&text).map_err(|e| Error::parse(name, e.to_string()))
    }

    /// Inline JSON if it looks like JSON, otherwise a file path.
    fn read_arg(&mut self, arg: &str, what: &str) -> Result<Value> {
        let t = arg.trim_start();
        if t.starts_with('{') || t.starts_with('[') {
            inline(arg, what)
        } else {
            self.read(Some(arg))
        }
    }

    fn lattice(&mut self, a: &LatticeIn) -> Result<HermLattice> {
        match &a.gram {
            Some(g) => {
                let d = a.ring.ok_or_else(|| Error::parse("ring", "--gram needs --ring"))?;
                let ring = Ring::new(d).map_err(|e| Error::parse("ring", e.to_string()))?;
                let gram = matrix_from_json(Some(ring), &inline(g, "gram")?, "gram")?;
                let basis = match &a.basis {
                    Some(b) => Some(matrix_from_json(Some(ring), &inline(b, "basis")?, "basis")?),
                    None => None,
                };
                lattice_from_parts(ring, gram, basis, "gram", "basis")
            }
            None => {
                if a.ring.is_some() || a.basis.is_some() {
                    return Err(Error::parse("gram", "--ring and --basis need --gram"));
                }
                let v = self.read(a.input.as_deref())?;
                lattice_from_json(&v, "")
            }
        }
    }
}

fn inline(text: &str, path: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::parse(path, e.to_string()))
}

fn elem_arg(ring: Ring, text: &str, path: &str) -> Result<KRational> {
    match serde_json::from_str::<Value>(text) {
        Ok(v @ (Value::Number(_) | Value::Array(_) | Value::String(_))) => elem_from_json(ring, &v, path),
        _ => ring.parse(text).map_err(|m| Error::parse(path, m)),
    }
}

fn integral_arg(ring: Ring, text: &str, path: &str) -> Result<KElem> {
    elem_arg(ring, text, path)?.to_integral().ok_or_else(|| Error::parse(path, "element must be integral"))
}

fn pi_arg(ring: Ring, text: Option<&str>) -> Result<KElem> {
    match text {
        Some(t) => integral_arg(ring, t, "pi"),
        None => ring.pi(),
    }
}

fn rational(r: &num_rational::BigRational) -> Value {
    elem_to_json(&KRational::from_rational(Ring::integers(), r))
}

fn canonical(l: &HermLattice) -> Result<HermLattice> {
    l.with_basis(l.canonical_basis())
}

fn dispatch(cmd: &Cmd, io: &mut Io<'_>) -> Result<(Value, bool)> {
    let done = |v: Value| Ok((v, true));
    match cmd {
        Cmd::RingInfo { ring, elem, divmod, gcd } => {
            let r = Ring::new(*ring)?;
            let mut out = json!({
                "ring": r.disc(),
                "unit_count": r.unit_count(),
                "units": r.units().iter().map(kelem_to_json).collect::<Vec<_>>(),
                "generator": kelem_to_json(&r.generator()),
                "different": kelem_to_json(&r.different()),
                "ramified_primes": r.ramified_primes(),
                "ramified_prime_generators": r
                    .ramified_primes()
                    .iter()
                    .map(|&p| r.ramified_prime(p).map(|x| kelem_to_json(&x)))
                    .collect::<Result<Vec<_>>>()?,
            });
            if let Some(e) = elem {
                let x = elem_arg(r, e, "elem")?;
                out["elem"] = json!({
                    "value": elem_to_json(&x),
                    "text": x.to_string(),
                    "norm": rational(&x.norm()),
                    "trace": rational(&x.trace()),
                    "conj": elem_to_json(&x.conj()),
                });
            }
            if let Some(ab) = divmod {
                let a = integral_arg(r, &ab[0], "divmod[0]")?;
                let b = integral_arg(r, &ab[1], "divmod[1]")?;
                let (q, rem) = r.divmod(&a, &b)?;
                out["divmod"] = json!({ "q": kelem_to_json(&q), "r": kelem_to_json(&rem) });
            }
            if let Some(ab) = gcd {
                let a = integral_arg(r, &ab[0], "gcd[0]")?;
                let b = integral_arg(r, &ab[1], "gcd[1]")?;
                out["gcd"] = kelem_to_json(&r.gcd(&a, &b)?);
            }
            done(out)
        }
        Cmd::Dual { lattice, scale } => {
            let l = io.lattice(lattice)?;
            let mut d = l.dual()?;
            if let Some(s) = scale {
                d = d.scale(&elem_arg(l.ring(), s, "scale")?)?;
            }
            done(lattice_to_json(&canonical(&d)?))
        }
        Cmd::Snf { input, ring, matrix, hnf: want_hnf } => {
            let ring = match ring {
                Some(r) => Some(ring_from_json(&inline_ring(r), "ring")?),
                None => None,
            };
            let m = match matrix {
                Some(text) => matrix_from_json(ring, &inline(text, "matrix")?, "matrix")?,
                None => {
                    let v = io.read(input.as_deref())?;
                    match v.get("gram") {
                        Some(_) => lattice_from_json(&v, "")?.lattice_gram(),
                        None => matrix_from_json(ring, &v, "matrix")?,
                    }
                }
            };
            if !m.is_integral() {
                return Err(Error::parse("matrix.entries", Error::NonIntegralEntries.to_string()));
            }
            if *want_hnf {
                let (h, t) = hnf(&m)?;
                return done(json!({ "hnf": matrix_to_json(&h), "transform": matrix_to_json(&t) }));
            }
            let s = snf(&m)?;
            let mut out = json!({
                "ring": ring_to_json(m.ring()),
                "divisors": s.divisors.iter().map(kelem_to_json).collect::<Vec<_>>(),
            });
            if m.is_square() {
                out["det"] = elem_to_json(&m.det()?);
            }
            done(out)
        }
        Cmd::Signature { lattice, details, diagonal } => {
            let l = io.lattice(lattice)?;
            let mut out = signature_to_json(l.signature()?);
            if *diagonal {
                let (d, _) = l.lattice_gram().congruence_diagonalize()?;
                out["diagonal"] = Value::Array(d.iter().map(rational).collect());
            }
            if *details {
                out["rank"] = json!(l.rank());
                out["integral"] = json!(l.is_integral());
                out["self_dual"] = json!(l.is_self_dual()?);
                out["positive_definite"] = json!(l.is_positive_definite()?);
                out["det"] = elem_to_json(&l.lattice_gram().det()?);
            }
            done(out)
        }
        Cmd::DiscGroup { lattice, sub, sup } => match (sub, sup) {
            (Some(a), Some(b)) => {
                let a = lattice_from_json(&io.read_arg(a, "sub")?, "sub")?;
                let b = lattice_from_json(&io.read_arg(b, "super")?, "super")?;
                done(disc_group_to_json(&disc_group(&a, &b)?))
            }
            (None, None) => done(disc_group_to_json(&dual_quotient(&io.lattice(lattice)?)?)),
            _ => Err(Error::parse("sub", "--sub and --super must be given together")),
        },
        Cmd::Convert { lattice, to } => {
            if *to == Target::Herm {
                let v = match &lattice.input {
                    Some(p) => io.read(Some(p))?,
                    None if lattice.gram.is_none() => io.read(None)?,
                    None => return Err(Error::parse("in", "--to herm reads a form, not --gram")),
                };
                let z = zform_from_json(&v, "")?;
                let l = match (z.kind(), z.ring().disc()) {
                    (FormKind::Alternating, _) => herm_from_alt(&z)?,
                    (FormKind::Symmetric, -3) => herm_from_sym_scaled(&z)?,
                    (FormKind::Symmetric, -4) => herm_from_sym_gaussian(&z)?,
                    (FormKind::Symmetric, d) => return Err(Error::WrongDiscriminant { expected: -3, actual: d }),
                };
                return done(lattice_to_json(&l));
            }
            let l = io.lattice(lattice)?;
            let z = match to {
                Target::Alt => trace_alt_form(&l)?,
                Target::Sym => trace_sym_form(&l)?,
                Target::SymScaled => sym_from_herm_scaled(&l)?,
                Target::SymGaussian => sym_from_herm_gaussian(&l)?,
                Target::Herm => unreachable!(),
            };
            done(zform_report(&z)?)
        }
        Cmd::Chain { lattice, pi } => {
            let l = io.lattice(lattice)?;
            let c = l.verify_chain(&pi_arg(l.ring(), pi.as_deref())?)?;
            Ok((chain_to_json(&c), c.holds))
        }
        Cmd::ReduceModPi { lattice, pi } => {
            let l = io.lattice(lattice)?;
            done(reduction_to_json(&l.reduce_mod_pi(&pi_arg(l.ring(), pi.as_deref())?)?))
        }
        Cmd::Enumerate { lattice, t } => {
            let l = io.lattice(lattice)?;
            done(reps_to_json(&enumerate_vectors(&l, *t)?))
        }
        Cmd::Perp { lattice, x, dx } => {
            let l = io.lattice(lattice)?;
            let c = vector_from_json(l.ring(), &inline(x, "x")?, "x")?;
            if *dx {
                let nonempty = dx_nonempty(&l, &c)?;
                return Ok((json!({ "nonempty": nonempty }), nonempty));
            }
            let p = perp_lattice(&l, &c)?;
            let mut out = lattice_to_json(&p.lattice);
            out["embedding"] = matrix_to_json(&p.embedding);
            out["signature"] = signature_to_json(p.lattice.signature()?);
            done(out)
        }
        Cmd::CaseProfile { name } => done(profile_to_json(&case_profile(name)?)),
        Cmd::CaseBuild { name } => done(lattice_to_json(&build_case_lattice(name)?)),
        Cmd::CaseVerify { name, build, lattice } => {
            let l = if *build { build_case_lattice(name)? } else { io.lattice(lattice)? };
            let r = verify_case(name, &l)?;
            Ok((report_to_json(&r), r.pass))
        }
        Cmd::StarDegree { d, n, p } => {
            let degree = star_degree(*d, *n)?;
            let primes = match p {
                Some(p) => vec![*p],
                None => prime_factors(*d),
            };
            let mut t = serde_json::Map::new();
            for q in primes {
                t.insert(q.to_string(), json!(star_t_function(*d, *n, q)?));
            }
            done(json!({ "d": d, "n": n, "degree": int(&degree), "t": t }))
        }
    }
}

fn inline_ring(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.to_string()))
}

fn zform_report(z: &ZForm) -> Result<Value> {
    let mut out = zform_to_json(z);
    out["zrank"] = json!(z.zrank());
    out["det"] = elem_to_json(&z.det());
    if z.kind() == FormKind::Symmetric {
        out["signature"] = signature_to_json(z.signature()?);
    }
    Ok(out)
}

fn prime_factors(mut d: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            out.push(p);
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Outcome {
        let mut empty: &[u8] = b"";
        run(std::iter::once("hermlat").chain(args.iter().copied()), &mut empty)
    }

    #[test]
    fn signature_example() {
        let o = call(&["signature", "--ring", "-3", "--gram", r#"[[3,"pi"],["-pi",0]]"#]);
        assert_eq!(o.stdout, "{\"p\":1,\"q\":1}\n");
        assert_eq!(o.code, 0);
    }

    #[test]
    fn usage_error_is_two() {
        assert_eq!(call(&["frobnicate"]).code, 2);
        let o = call(&["signature", "--ring", "-3", "--gram", "[[1,2],[3,1]]"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("gram"), "{}", o.stderr);
    }

    #[test]
    fn failed_verification_is_one() {
        let o = call(&["case-verify", "cubic-surfaces", "--ring", "-3", "--gram", "[[1,0],[0,1]]"]);
        assert_eq!(o.code, 1, "{}", o.stderr);
    }

    #[test]
    fn stdin_input() {
        let mut input: &[u8] = br#"{"ring": -4, "gram": [[2, [2, 1]], [[2, -1], 2]]}"#;
        let o = run(["hermlat", "disc-group"], &mut input);
        assert_eq!(o.stdout, "{\"order\":4,\"divisors\":[[2,1],[2,1]],\"shape\":[2,2]}\n");
    }
}
