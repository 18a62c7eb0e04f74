//! Truncated Laurent series in the uniformizer u of K_ell = F_{q^ell}((u)),
//! where u is pinned by u^-(q^ell - 1) = -theta. Absolute precision is
//! tracked through every operation: a series with precision P has all terms
//! of exponent < P exact and an O(u^P) error.
//!
//! Equality is only ever "equal at precision"; a series whose known window is
//! empty is "zero at precision P" and carries val = P by convention.

pub mod fmt;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{embed_subfield, Field, FqElem};
use crate::poly::{Poly, RatFunc};

/// Sentinel for exact values (infinite absolute precision).
pub const PREC_INF: i64 = i64::MAX / 8;

pub fn is_inf(p: i64) -> bool {
    p >= PREC_INF / 2
}

fn padd(a: i64, b: i64) -> i64 {
    if is_inf(a) || is_inf(b) {
        PREC_INF
    } else {
        a + b
    }
}

fn pmin(a: i64, b: i64) -> i64 {
    a.min(b)
}

/// Sparse truncated Laurent series over F_{q^ell}.
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    field: Field,
    /// q^ell - 1, recording the defining relation u^-scale = -theta.
    scale: i64,
    /// Absolute precision: terms with exponent < prec are exact.
    prec: i64,
    /// Nonzero known coefficients, exponent -> coefficient; keys in [val, prec).
    terms: BTreeMap<i64, FqElem>,
}

impl Laurent {
    // -- constructors --------------------------------------------------------

    pub fn zero_at(field: &Field, prec: i64) -> Laurent {
        Laurent {
            field: field.clone(),
            scale: field.order() as i64 - 1,
            prec,
            terms: BTreeMap::new(),
        }
    }

    /// The exact zero series.
    pub fn zero(field: &Field) -> Laurent {
        Self::zero_at(field, PREC_INF)
    }

    /// Exact monomial c * u^exp.
    pub fn monomial(field: &Field, coeff: FqElem, exp: i64) -> Laurent {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Laurent {
            field: field.clone(),
            scale: field.order() as i64 - 1,
            prec: PREC_INF,
            terms,
        }
    }

    pub fn one(field: &Field) -> Laurent {
        Self::monomial(field, field.one(), 0)
    }

    /// The exact image of theta: -u^-(q^ell - 1).
    pub fn theta_image(field: &Field) -> Laurent {
        let scale = field.order() as i64 - 1;
        Self::monomial(field, field.from_int(-1), -scale)
    }

    pub fn from_terms(field: &Field, terms: Vec<(i64, FqElem)>, prec: i64) -> Laurent {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() || e >= prec {
                continue;
            }
            let entry = map.entry(e).or_insert_with(|| field.zero());
            *entry = entry.add(&c);
        }
        map.retain(|_, c: &mut FqElem| !c.is_zero());
        Laurent {
            field: field.clone(),
            scale: field.order() as i64 - 1,
            prec,
            terms: map,
        }
    }

    // -- accessors -----------------------------------------------------------

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn scale(&self) -> i64 {
        self.scale
    }
    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn terms(&self) -> &BTreeMap<i64, FqElem> {
        &self.terms
    }
    pub fn is_exact(&self) -> bool {
        is_inf(self.prec)
    }

    /// True when every known coefficient vanishes (zero at this precision).
    pub fn is_zero_at_prec(&self) -> bool {
        self.terms.is_empty()
    }

    /// u-valuation; equals prec for a series that is zero at its precision.
    pub fn val(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.prec)
    }

    pub fn coeff(&self, exp: i64) -> FqElem {
        debug_assert!(exp < self.prec, "coefficient read beyond precision");
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn check_compatible(&self, other: &Laurent) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.scale != other.scale {
            return Err(Error::ScaleMismatch(self.scale, other.scale));
        }
        Ok(())
    }

    // -- arithmetic ----------------------------------------------------------

    pub fn truncate(&self, prec: i64) -> Laurent {
        if prec >= self.prec {
            return self.clone();
        }
        let terms = self
            .terms
            .range(..prec)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec,
            terms,
        }
    }

    /// Asserts a precision established by analysis outside the generic
    /// propagation rules (Newton iterations square their error). Drops any
    /// terms at or beyond the claimed precision.
    fn with_prec(&self, prec: i64) -> Laurent {
        let terms = self
            .terms
            .range(..prec)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec,
            terms,
        }
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec: self.prec,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        self.check_compatible(other).expect("compatible operands");
        let prec = pmin(self.prec, other.prec);
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.range(..prec) {
            terms.insert(*e, c.clone());
        }
        for (e, c) in other.terms.range(..prec) {
            let entry = terms.entry(*e).or_insert_with(|| self.field.zero());
            *entry = entry.add(c);
        }
        terms.retain(|_, c: &mut FqElem| !c.is_zero());
        Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec,
            terms,
        }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul_scalar(&self, c: &FqElem) -> Laurent {
        if c.is_zero() {
            return Laurent::zero_at(&self.field, self.prec);
        }
        Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec: self.prec,
            terms: self.terms.iter().map(|(e, a)| (*e, a.mul(c))).collect(),
        }
    }

    /// Exact multiplication by u^k.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec: padd(self.prec, k),
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        self.check_compatible(other).expect("compatible operands");
        // prec(fg) = min(prec f + val g, prec g + val f)
        let prec = pmin(padd(self.prec, other.val()), padd(other.prec, self.val()));
        let mut terms: BTreeMap<i64, FqElem> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if e >= prec {
                    continue;
                }
                let prod = c1.mul(c2);
                if prod.is_zero() {
                    continue;
                }
                let entry = terms.entry(e).or_insert_with(|| self.field.zero());
                *entry = entry.add(&prod);
            }
        }
        terms.retain(|_, c: &mut FqElem| !c.is_zero());
        Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec,
            terms,
        }
    }

    /// Inverse at the propagated precision prec(f) - 2*val(f). Exact inputs
    /// must be monomials or be truncated first.
    pub fn invert(&self) -> Result<Laurent> {
        if self.is_zero_at_prec() {
            return Err(Error::ZeroInversion);
        }
        let val = self.val();
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            let out_prec = if self.is_exact() {
                PREC_INF
            } else {
                self.prec - 2 * val
            };
            return Ok(Laurent::monomial(&self.field, c.inv()?, -e).truncate(out_prec));
        }
        if self.is_exact() {
            return Err(Error::OutOfRange(
                "inverse of an exact multi-term series needs a truncation".into(),
            ));
        }
        let (lead, v, unit) = self.one_unit_decompose()?;
        // Newton iteration h -> h(2 - unit*h) on the one-unit part. The error
        // 1 - unit*h squares each round, so after the round targeting k the
        // iterate is correct mod u^k; the steps run as exact window
        // arithmetic and the precision claim is made at the end.
        let target = unit.prec;
        let two = Laurent::monomial(&self.field, self.field.from_int(2), 0);
        let mut h = Laurent::one(&self.field);
        let mut k: i64 = 1;
        while k < target {
            k = (2 * k).min(target);
            let u_k = unit.truncate(k).with_prec(PREC_INF);
            h = h.mul(&two.sub(&u_k.mul(&h)));
            h = h.with_prec(k).with_prec(PREC_INF);
        }
        let h = h.with_prec(target);
        Ok(h.shift(-v).mul_scalar(&lead.inv()?))
    }

    /// Inverse truncated to exactly `prec_out` (handles exact inputs).
    pub fn invert_to(&self, prec_out: i64) -> Result<Laurent> {
        if self.is_zero_at_prec() {
            return Err(Error::ZeroInversion);
        }
        if -self.val() >= prec_out {
            // The inverse has valuation -val, above the requested window.
            return Ok(Laurent::zero_at(&self.field, prec_out));
        }
        if self.terms.len() == 1 {
            return Ok(self.invert()?.truncate(prec_out));
        }
        let needed = prec_out + 2 * self.val();
        let t = self.truncate(pmin(self.prec, needed));
        if t.prec < needed {
            // Not enough input precision; return what propagation allows.
            return t.invert();
        }
        Ok(t.invert()?.truncate(prec_out))
    }

    pub fn int_pow(&self, k: i64) -> Result<Laurent> {
        if k < 0 {
            return self.invert()?.int_pow(-k);
        }
        let mut acc = Laurent::one(&self.field);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    // -- decomposition and twisting ------------------------------------------

    /// f = lead * u^val * unit with unit = 1 + (positive-exponent terms).
    pub fn one_unit_decompose(&self) -> Result<(FqElem, i64, Laurent)> {
        if self.is_zero_at_prec() {
            return Err(Error::ZeroInversion);
        }
        let val = self.val();
        let lead = self.coeff(val);
        let lead_inv = lead.inv()?;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e - val, c.mul(&lead_inv)))
            .collect();
        let unit = Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec: if self.is_exact() {
                PREC_INF
            } else {
                self.prec - val
            },
            terms,
        };
        Ok((lead, val, unit))
    }

    /// The unit factor of the one-unit decomposition.
    pub fn one_unit_part(&self) -> Result<Laurent> {
        Ok(self.one_unit_decompose()?.2)
    }

    pub fn recombine(lead: &FqElem, val: i64, unit: &Laurent) -> Laurent {
        unit.shift(val).mul_scalar(lead)
    }

    /// Twist by j: j <= 0 applies the forward Frobenius x -> x^(q^|j|)
    /// (total); j > 0 extracts the q^j-th root, which requires every stored
    /// exponent (and the precision) to be divisible by q^j.
    pub fn twist(&self, j: i64) -> Result<Laurent> {
        if j == 0 {
            return Ok(self.clone());
        }
        if j < 0 {
            let n = (-j) as u32;
            let m = self.field.q().pow(n) as i64;
            let terms = self
                .terms
                .iter()
                .map(|(e, c)| (e * m, c.frobenius(n as i64)))
                .collect();
            return Ok(Laurent {
                field: self.field.clone(),
                scale: self.scale,
                prec: if self.is_exact() {
                    PREC_INF
                } else {
                    self.prec * m
                },
                terms,
            });
        }
        let n = j as u32;
        let m = self.field.q().pow(n) as i64;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e % m != 0 {
                return Err(Error::ExponentNotDivisible {
                    exponent: *e,
                    power: n * self.field.e(),
                });
            }
            terms.insert(e / m, c.frobenius(-(n as i64)));
        }
        let prec = if self.is_exact() {
            PREC_INF
        } else {
            // ceil(prec / q^j): exponents < prec iff exponents/m < ceil(prec/m)
            (self.prec + m - 1).div_euclid(m)
        };
        Ok(Laurent {
            field: self.field.clone(),
            scale: self.scale,
            prec,
            terms,
        })
    }

    /// Forward Frobenius x -> x^(q^m), m >= 0 (always defined).
    pub fn frob_fwd(&self, m: u32) -> Laurent {
        self.twist(-(m as i64)).expect("forward twist is total")
    }

    // -- embeddings ----------------------------------------------------------

    /// Rescales to the field K_ell' via u_ell = u_ell'^((q^ell'-1)/(q^ell-1)).
    pub fn rescale(&self, target: &Field) -> Result<Laurent> {
        let emb = embed_subfield(&self.field, target)?;
        let new_scale = target.order() as i64 - 1;
        if new_scale % self.scale != 0 {
            return Err(Error::ScaleMismatch(self.scale, new_scale));
        }
        let kappa = new_scale / self.scale;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e * kappa, emb.apply(c)))
            .collect();
        Ok(Laurent {
            field: target.clone(),
            scale: new_scale,
            prec: if self.is_exact() {
                PREC_INF
            } else {
                self.prec * kappa
            },
            terms,
        })
    }

    // -- comparison ----------------------------------------------------------

    /// Checks coefficient-by-coefficient equality below `upto`; errors when
    /// either side does not carry that much precision.
    pub fn agrees_with(&self, other: &Laurent, upto: i64) -> Result<bool> {
        self.check_compatible(other)?;
        if self.prec < upto || other.prec < upto {
            return Err(Error::OutOfRange(format!(
                "comparison window {} exceeds precision (have {} and {})",
                upto, self.prec, other.prec
            )));
        }
        Ok(self
            .sub(&other.truncate(upto))
            .truncate(upto)
            .is_zero_at_prec())
    }

    /// Valuation of the difference, or None when the difference is zero at
    /// the contracted precision.
    pub fn residual_val(&self, other: &Laurent) -> Option<i64> {
        let d = self.sub(other);
        if d.is_zero_at_prec() {
            None
        } else {
            Some(d.val())
        }
    }
}

impl std::fmt::Debug for Laurent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)
    }
}

// ---------------------------------------------------------------------------
// Embedding of polynomials and rational functions
// ---------------------------------------------------------------------------

/// Exact Laurent image of a polynomial a(theta).
pub fn embed_poly(a: &Poly, field: &Field) -> Result<Laurent> {
    let emb = embed_subfield(a.field(), field)?;
    let scale = field.order() as i64 - 1;
    let mut terms = Vec::new();
    for (i, c) in a.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // theta^i = (-1)^i u^(-i*scale)
        let sign = if i % 2 == 0 {
            field.one()
        } else {
            field.from_int(-1)
        };
        terms.push((-(i as i64) * scale, emb.apply(c).mul(&sign)));
    }
    Ok(Laurent::from_terms(field, terms, PREC_INF))
}

/// Laurent expansion of num/den at the infinite place, re-expressed in u.
/// The result is exact when the denominator is a theta-monomial, and carries
/// precision `prec` otherwise.
pub fn embed_rat(r: &RatFunc, field: &Field, prec: i64) -> Result<Laurent> {
    let num = embed_poly(r.num(), field)?;
    if r.is_zero() {
        return Ok(Laurent::zero(field));
    }
    let den = embed_poly(r.den(), field)?;
    if den.terms().len() == 1 {
        return Ok(num.mul(&den.invert()?));
    }
    let inv = den.invert_to(prec - num.val())?;
    Ok(num.mul(&inv).truncate(prec))
}
