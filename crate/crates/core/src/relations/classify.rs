//! Algebraicity classification of gamma monomials.
//!
//! A monomial prod (a_i/b_i)!^(e_i) * pi~^e reduces, through exact
//! k-cofactors, to a monomial in the basis values (q^j/(1-q^ell))! for the
//! common level ell (the lcm of the multiplicative orders of q modulo the
//! denominators). The verdict is theorem-backed, not numeric: the basis
//! values are algebraically independent, so the monomial is algebraic
//! exactly when its reduced exponent vector vanishes. Numerics only replay
//! the reduction identities behind the certificate.
//!
//! Reduction facts used, all exact:
//!  - r! for a non-negative integer is the one-unit part of the Carlitz
//!    factorial, an element of k;
//!  - r! / f! is in k whenever r - f is an integer (finite digit difference);
//!  - (-1)! = prod_j Gamma_j^(q-1) as one-units (digit rearrangement), and
//!    the one-unit part of pi~ equals the same product;
//!  - the digit formula (c/(1-q^ell))! = prod_j Gamma_j^(c_j).

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::Result;
use crate::field::Field;
use crate::poly::RatFunc;
use crate::series::{embed_rat, Laurent};
use crate::values::digits::GammaArg;
use crate::values::{factorial_ratio, goss_factorial, pi_tilde_in};

/// Formal product of gamma values and a power of the period.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaMonomial {
    pub factors: BTreeMap<GammaArg, i64>,
    pub pi_exp: i64,
}

impl GammaMonomial {
    pub fn new() -> GammaMonomial {
        GammaMonomial::default()
    }

    pub fn with_factor(mut self, arg: GammaArg, exp: i64) -> GammaMonomial {
        if exp != 0 {
            *self.factors.entry(arg).or_insert(0) += exp;
            if self.factors[&arg] == 0 {
                self.factors.remove(&arg);
            }
        }
        self
    }

    pub fn with_pi(mut self, exp: i64) -> GammaMonomial {
        self.pi_exp += exp;
        self
    }

    pub fn mul(&self, other: &GammaMonomial) -> GammaMonomial {
        let mut out = self.clone();
        for (arg, e) in &other.factors {
            out = out.with_factor(*arg, *e);
        }
        out.pi_exp += other.pi_exp;
        out
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty() && self.pi_exp == 0
    }
}

impl std::fmt::Display for GammaMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (arg, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            write!(f, "({})!^{}", arg, e)?;
        }
        if self.pi_exp != 0 {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            write!(f, "pi^{}", self.pi_exp)?;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Algebraic,
    Transcendental,
}

/// One bookkeeping entry of the reduction.
#[derive(Clone, Debug)]
pub enum ReductionStep {
    /// r! for integer r >= 0 is an exact element of k.
    NonNegativeInteger { arg: GammaArg, exponent: i64 },
    /// r! for integer r < 0: k-cofactor times prod_j Gamma_j^(q-1).
    NegativeInteger { arg: GammaArg, exponent: i64 },
    /// r! ~ f! with r - f integral; the exact k-ratio joins the cofactor.
    Translate {
        arg: GammaArg,
        target: GammaArg,
        exponent: i64,
    },
    /// Digit splitting of a proper fraction over the level-ell basis.
    DigitSplit {
        arg: GammaArg,
        digits: Vec<u32>,
        exponent: i64,
    },
    /// pi~'s one-unit part is prod_j Gamma_j^(q-1).
    PiRewrite { exponent: i64 },
}

impl ReductionStep {
    fn to_json(&self) -> Value {
        match self {
            ReductionStep::NonNegativeInteger { arg, exponent } => {
                json!({"step": "nonnegative-integer", "arg": arg.to_string(), "exponent": exponent})
            }
            ReductionStep::NegativeInteger { arg, exponent } => {
                json!({"step": "negative-integer", "arg": arg.to_string(), "exponent": exponent})
            }
            ReductionStep::Translate {
                arg,
                target,
                exponent,
            } => {
                json!({"step": "translate", "arg": arg.to_string(), "target": target.to_string(), "exponent": exponent})
            }
            ReductionStep::DigitSplit {
                arg,
                digits,
                exponent,
            } => {
                json!({"step": "digit-split", "arg": arg.to_string(), "digits": digits, "exponent": exponent})
            }
            ReductionStep::PiRewrite { exponent } => {
                json!({"step": "pi-rewrite", "exponent": exponent})
            }
        }
    }
}

/// Replayable record of the reduction to the level-ell basis.
#[derive(Clone, Debug)]
pub struct ReductionCert {
    pub q: u64,
    pub common_ell: u32,
    /// Exponents on the basis (q^j/(1-q^ell))!, j = 0..ell-1.
    pub exponent_vector: Vec<i64>,
    /// Exact k-element collecting every translation and integer step; a
    /// one-unit by construction.
    pub cofactor: RatFunc,
    pub steps: Vec<ReductionStep>,
}

impl ReductionCert {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "common_ell": self.common_ell,
            "exponent_vector": self.exponent_vector,
            "cofactor": self.cofactor.to_string(),
            "steps": self.steps.iter().map(ReductionStep::to_json).collect::<Vec<_>>(),
        })
    }

    /// The basis argument q^j / (1 - q^ell).
    pub fn basis_arg(&self, j: u32) -> GammaArg {
        let qj = (self.q as i64).pow(j);
        let den = 1 - (self.q as i64).pow(self.common_ell);
        GammaArg::new(qj, den).expect("nonzero denominator")
    }

    /// Numerically replays the reduction: the monomial's one-unit part must
    /// equal cofactor * prod_j Gamma_j^(v_j) at the given precision. The
    /// series field must carry level common_ell (or a multiple).
    pub fn replay(&self, m: &GammaMonomial, field: &Field, prec: i64) -> Result<bool> {
        let work = prec + 64;
        let mut lhs = Laurent::one(field).truncate(work);
        for (arg, e) in &m.factors {
            let v = goss_factorial(arg, field, work)?;
            lhs = lhs.mul(&v.int_pow(*e)?);
        }
        if m.pi_exp != 0 {
            let pi = pi_tilde_in(field, 1, work)?;
            lhs = lhs.mul(&pi.one_unit_part()?.truncate(work).int_pow(m.pi_exp)?);
        }
        let mut rhs = embed_rat(&self.cofactor, field, work)?;
        for (j, &v) in self.exponent_vector.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let basis = goss_factorial(&self.basis_arg(j as u32), field, work)?;
            rhs = rhs.mul(&basis.int_pow(v)?);
        }
        let w = lhs.prec().min(rhs.prec()).min(prec);
        lhs.agrees_with(&rhs.truncate(w), w)
    }
}

/// Classifies a gamma monomial. The verdict rests on the algebraic
/// independence of the level-ell basis values: algebraic iff the reduced
/// exponent vector is zero. The certificate carries every exact identity
/// used, for numeric replay.
pub fn classify_gamma_monomial(fq: &Field, m: &GammaMonomial) -> Result<(Verdict, ReductionCert)> {
    let q = fq.q();
    let p = fq.p();
    for arg in m.factors.keys() {
        arg.check_denominator(p)?;
    }
    // Common level: lcm of the multiplicative orders of q mod each
    // denominator (integers contribute 1).
    let mut ell = 1u32;
    for arg in m.factors.keys() {
        let o = arg.order_of_q(q)?;
        ell = lcm_u32(ell, o);
    }

    let mut vector = vec![0i64; ell as usize];
    let mut cofactor = RatFunc::one(fq);
    let mut steps = Vec::new();

    if m.pi_exp != 0 {
        for v in vector.iter_mut() {
            *v += m.pi_exp * (q as i64 - 1);
        }
        steps.push(ReductionStep::PiRewrite { exponent: m.pi_exp });
    }

    for (arg, &e) in &m.factors {
        if e == 0 {
            continue;
        }
        match arg.as_integer() {
            Some(n) if n >= 0 => {
                // r! is exactly Pi(r)/theta^deg, an element of k.
                let pi = crate::values::carlitz_factorial(fq, n as u64);
                let deg = pi.deg().unwrap_or(0);
                let unit = RatFunc::new(pi, crate::poly::Poly::theta_pow(fq, deg))?;
                cofactor = cofactor.mul(&unit.pow(e)?);
                steps.push(ReductionStep::NonNegativeInteger {
                    arg: *arg,
                    exponent: e,
                });
            }
            Some(_) => {
                // r! = (r!/(-1)!) * (-1)!, and (-1)! = prod_j Gamma_j^(q-1).
                let minus_one = GammaArg::from_int(-1);
                let ratio = factorial_ratio(arg, &minus_one, fq)?;
                cofactor = cofactor.mul(&ratio.pow(e)?);
                for v in vector.iter_mut() {
                    *v += e * (q as i64 - 1);
                }
                steps.push(ReductionStep::NegativeInteger {
                    arg: *arg,
                    exponent: e,
                });
            }
            None => {
                let (_, frac) = arg.split_integer();
                if frac != *arg {
                    let ratio = factorial_ratio(arg, &frac, fq)?;
                    cofactor = cofactor.mul(&ratio.pow(e)?);
                    steps.push(ReductionStep::Translate {
                        arg: *arg,
                        target: frac,
                        exponent: e,
                    });
                }
                // frac = c/(1 - q^ell); its digits repeat with period
                // dividing ell, and the digit formula splits the factorial
                // over the basis.
                let exp = frac.digits(q)?;
                let digits: Vec<u32> = (0..ell as usize).map(|i| exp.digit(i)).collect();
                for (j, &d) in digits.iter().enumerate() {
                    vector[j] += e * d as i64;
                }
                steps.push(ReductionStep::DigitSplit {
                    arg: frac,
                    digits,
                    exponent: e,
                });
            }
        }
    }

    let verdict = if vector.iter().all(|&v| v == 0) {
        Verdict::Algebraic
    } else {
        Verdict::Transcendental
    };
    Ok((
        verdict,
        ReductionCert {
            q,
            common_ell: ell,
            exponent_vector: vector,
            cofactor,
            steps,
        },
    ))
}

fn lcm_u32(a: u32, b: u32) -> u32 {
    let gcd = {
        let (mut x, mut y) = (a, b);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    a / gcd * b
}
