//! Polynomials A = F_q\[theta\] and rational functions k = F_q(theta), with
//! exact arithmetic, monic enumeration, and the textual form used by the CLI.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{parse_fq, Field, FqElem};

/// Dense polynomial in theta over a finite field; no trailing zeros, the zero
/// polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FqElem>,
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FqElem) -> Poly {
        let field = c.field().clone();
        let coeffs = if c.is_zero() { Vec::new() } else { vec![c] };
        Poly { field, coeffs }
    }

    pub fn theta(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![field.zero(), field.one()],
        }
    }

    /// theta^k.
    pub fn theta_pow(field: &Field, k: usize) -> Poly {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = field.one();
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(FqElem::is_zero) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn lead(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }
    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(FqElem::is_one)
    }
    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::from_coeffs(&self.field, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(FqElem::neg).collect(),
        }
    }

    pub fn scale(&self, c: &FqElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(&self.field, out)
    }

    pub fn pow(&self, mut k: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, div: &Poly) -> Result<(Poly, Poly)> {
        let dd = div.deg().ok_or(Error::ZeroDivision)?;
        let lead_inv = div.lead().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd || (rem.len() == dd + 1 && dd == 0 && !rem.is_empty()) {
            if rem.len() < dd + 1 {
                break;
            }
            let shift = rem.len() - 1 - dd;
            let f = rem.last().unwrap().mul(&lead_inv);
            if !f.is_zero() {
                quo[shift] = quo[shift].add(&f);
                for (i, c) in div.coeffs.iter().enumerate() {
                    let t = f.mul(c);
                    rem[i + shift] = rem[i + shift].sub(&t);
                }
            }
            rem.pop();
            while rem.last().is_some_and(FqElem::is_zero) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        Ok((
            Poly::from_coeffs(&self.field, quo),
            Poly::from_coeffs(&self.field, rem),
        ))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Coefficient-wise q^j-Frobenius (no theta substitution).
    pub fn coeff_frobenius(&self, j: i64) -> Poly {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.frobenius(j)).collect(),
        }
    }

    /// The twist a(theta) -> a(theta)^(q^m) for m >= 0: Frobenius on
    /// coefficients together with theta -> theta^(q^m).
    pub fn frobenius_twist(&self, m: u32) -> Poly {
        if m == 0 || self.is_zero() {
            return self.clone();
        }
        let stride = self.field.q().pow(m) as usize;
        let mut coeffs = vec![self.field.zero(); (self.coeffs.len() - 1) * stride + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * stride] = c.frobenius(m as i64);
        }
        Poly::from_coeffs(&self.field, coeffs)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Descending-power form, e.g. "θ^2+2*θ+1".
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let cs = c.to_string();
            let needs_parens = cs.contains('+');
            let is_unit_one = c.is_one();
            match i {
                0 => {
                    if needs_parens {
                        write!(f, "({})", cs)?;
                    } else {
                        write!(f, "{}", cs)?;
                    }
                }
                _ => {
                    if !is_unit_one {
                        if needs_parens {
                            write!(f, "({})*", cs)?;
                        } else {
                            write!(f, "{}*", cs)?;
                        }
                    }
                    if i == 1 {
                        write!(f, "θ")?;
                    } else {
                        write!(f, "θ^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses the `Display` form; accepts "theta" as an ASCII alias for θ.
pub fn parse_poly(field: &Field, s: &str) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let normalized = compact.replace("theta", "θ");
    if normalized.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = Poly::zero(field);
    // Split on '+' at paren depth zero.
    let mut depth = 0usize;
    let mut start = 0usize;
    let bytes: Vec<char> = normalized.chars().collect();
    let mut terms: Vec<String> = Vec::new();
    for (i, &ch) in bytes.iter().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' if depth == 0 && i > start => {
                terms.push(bytes[start..i].iter().collect());
                start = i + 1;
            }
            _ => {}
        }
    }
    terms.push(bytes[start..].iter().collect());

    for term in terms {
        if term.is_empty() {
            return Err(Error::Parse(format!("bad polynomial '{s}'")));
        }
        let (coeff, pow) = if let Some(idx) = term.find('θ') {
            let head = term[..idx].trim_end_matches('*');
            let tail = &term[idx + 'θ'.len_utf8()..];
            let pw = if tail.is_empty() {
                1usize
            } else if let Some(stripped) = tail.strip_prefix('^') {
                stripped
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?
            } else {
                return Err(Error::Parse(format!("bad term '{term}'")));
            };
            let c = if head.is_empty() {
                field.one()
            } else {
                parse_fq(field, head.trim_start_matches('(').trim_end_matches(')'))?
            };
            (c, pw)
        } else {
            (
                parse_fq(field, term.trim_start_matches('(').trim_end_matches(')'))?,
                0usize,
            )
        };
        acc = acc.add(&Poly::theta_pow(field, pow).scale(&coeff));
    }
    Ok(acc)
}

/// All monic polynomials of degree d, in lexicographic (encoding) order, the
/// constant coefficient varying fastest.
pub fn monics_of_degree(field: &Field, d: u32) -> impl Iterator<Item = Poly> + '_ {
    let q = field.order();
    let count = q.checked_pow(d).expect("q^d fits u64");
    (0..count).map(move |enc| {
        let mut coeffs = Vec::with_capacity(d as usize + 1);
        let mut v = enc;
        for _ in 0..d {
            coeffs.push(field.from_encoding(v % q));
            v /= q;
        }
        coeffs.push(field.one());
        Poly::from_coeffs(field, coeffs)
    })
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// Reduced fraction of polynomials with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::ZeroDivision);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(num.field()),
                den: Poly::one(den.field()),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.divrem(&g).unwrap().0, den.divrem(&g).unwrap().0)
        };
        let lead_inv = den.lead().unwrap().inv().unwrap();
        num = num.scale(&lead_inv);
        den = den.scale(&lead_inv);
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::zero(field))
    }
    pub fn one(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::one(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn field(&self) -> &Field {
        self.num.field()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// deg num - deg den; the negative of the 1/theta-valuation.
    pub fn inf_degree(&self) -> Option<i64> {
        self.num
            .deg()
            .map(|n| n as i64 - self.den.deg().unwrap() as i64)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFunc::reduce(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::ZeroInversion);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one(self.field());
        let mut b = base;
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Coefficient Frobenius plus theta -> theta^(q^m) on both parts.
    pub fn frobenius_twist(&self, m: u32) -> RatFunc {
        RatFunc::reduce(self.num.frobenius_twist(m), self.den.frobenius_twist(m))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Parses "num", "num/den", or "(num)/(den)".
pub fn parse_ratfunc(field: &Field, s: &str) -> Result<RatFunc> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    // Split on '/' at depth 0.
    let mut depth = 0usize;
    let mut slash = None;
    for (i, ch) in compact.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '/' if depth == 0 => {
                slash = Some(i);
                break;
            }
            _ => {}
        }
    }
    match slash {
        None => Ok(RatFunc::from_poly(parse_poly(field, &compact)?)),
        Some(i) => {
            let strip = |t: &str| -> String {
                let t = t.trim();
                if t.starts_with('(') && t.ends_with(')') {
                    t[1..t.len() - 1].to_string()
                } else {
                    t.to_string()
                }
            };
            let num = parse_poly(field, &strip(&compact[..i]))?;
            let den = parse_poly(field, &strip(&compact[i + 1..]))?;
            RatFunc::new(num, den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn f3() -> Field {
        make_field(3, 1, 1).unwrap()
    }

    #[test]
    fn product_over_f3() {
        // (θ+1)(θ+2) = θ^2 + 3θ + 2 = θ^2 + 2 over F_3.
        let f = f3();
        let a = parse_poly(&f, "θ+1").unwrap();
        let b = parse_poly(&f, "θ+2").unwrap();
        assert_eq!(a.mul(&b), parse_poly(&f, "θ^2+2").unwrap());
    }

    #[test]
    fn divrem_theta_squared_by_theta() {
        let f = f3();
        let (q, r) = Poly::theta_pow(&f, 2).divrem(&Poly::theta(&f)).unwrap();
        assert_eq!(q, Poly::theta(&f));
        assert!(r.is_zero());
    }

    #[test]
    fn ratfunc_normalizes_with_monic_denominator() {
        // (θ^2-θ)/θ = θ-1 = θ+2 over F_3.
        let f = f3();
        let num = parse_poly(&f, "θ^2+2*θ").unwrap();
        let r = RatFunc::new(num, Poly::theta(&f)).unwrap();
        assert_eq!(r.num(), &parse_poly(&f, "θ+2").unwrap());
        assert!(r.den().is_one());
        // Denominator made monic: (θ)/(2θ+1) has monic den after scaling.
        let r2 = RatFunc::new(Poly::theta(&f), parse_poly(&f, "2*θ+1").unwrap()).unwrap();
        assert!(r2.den().is_monic());
        assert_eq!(r2.den(), &parse_poly(&f, "θ+2").unwrap());
    }

    #[test]
    fn monic_enumeration_counts() {
        let f = f3();
        assert_eq!(monics_of_degree(&f, 0).count(), 1);
        let deg1: Vec<String> = monics_of_degree(&f, 1).map(|p| p.to_string()).collect();
        assert_eq!(deg1, vec!["θ", "θ+1", "θ+2"]);
        for d in 0..=4 {
            let polys: Vec<Poly> = monics_of_degree(&f, d).collect();
            assert_eq!(polys.len(), 3usize.pow(d));
            for w in &polys {
                assert!(w.is_monic());
                assert_eq!(w.deg(), Some(d as usize));
            }
            let mut dedup = polys.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), polys.len());
        }
    }

    #[test]
    fn frobenius_twist_substitutes_theta_power() {
        let f = f3();
        let a = parse_poly(&f, "θ^2+2*θ+1").unwrap();
        // a(θ)^3 = a(θ^3) when coefficients are in F_3.
        assert_eq!(a.frobenius_twist(1), a.pow(3));
    }

    #[test]
    fn parse_display_round_trip_f9_coeffs() {
        let f9 = make_field(3, 1, 2).unwrap();
        let p = Poly::from_coeffs(&f9, vec![f9.generator(), f9.one(), f9.generator().pow(3)]);
        let s = p.to_string();
        assert_eq!(parse_poly(&f9, &s).unwrap(), p, "round trip of '{s}'");
    }

    #[test]
    fn parse_accepts_theta_alias() {
        let f = f3();
        assert_eq!(
            parse_poly(&f, "theta^2 + 2*theta").unwrap(),
            parse_poly(&f, "θ^2+2*θ").unwrap()
        );
    }

    #[test]
    fn canonical_form_idempotent() {
        let f = f3();
        let p = parse_poly(&f, "2*θ^3+θ").unwrap();
        let r = RatFunc::new(p.clone(), parse_poly(&f, "θ^2").unwrap()).unwrap();
        let r2 = RatFunc::new(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(r, r2);
    }
}
