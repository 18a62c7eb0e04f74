//! Reduced fraction arguments r = a/b in Z_p and their base-q digit
//! expansions (eventually periodic; purely periodic on (-1, 0)).

use std::collections::HashMap;

use crate::error::{Error, Result};

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A reduced fraction a/b with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaArg {
    num: i64,
    den: i64,
}

impl GammaArg {
    pub fn new(num: i64, den: i64) -> Result<GammaArg> {
        if den == 0 {
            return Err(Error::ZeroDivision);
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Ok(GammaArg {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn from_int(n: i64) -> GammaArg {
        GammaArg { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }
    pub fn den(&self) -> i64 {
        self.den
    }
    pub fn is_integer(&self) -> bool {
        self.den == 1
    }
    pub fn as_integer(&self) -> Option<i64> {
        self.is_integer().then_some(self.num)
    }
    /// True when -1 < a/b < 0.
    pub fn is_proper(&self) -> bool {
        self.num < 0 && -self.num < self.den
    }

    /// Membership in Z_p requires p not dividing the denominator.
    pub fn check_denominator(&self, p: u64) -> Result<()> {
        if self.den.unsigned_abs() % p == 0 {
            return Err(Error::BadDenominator { den: self.den, p });
        }
        Ok(())
    }

    /// Writes r = shift + f with f in (-1, 0] and integer shift.
    pub fn split_integer(&self) -> (i64, GammaArg) {
        if self.is_integer() {
            return (self.num, GammaArg::from_int(0));
        }
        // ceil(a/b) for b > 0
        let shift = self.num.div_euclid(self.den) + 1;
        let frac = GammaArg {
            num: self.num - shift * self.den,
            den: self.den,
        };
        debug_assert!(frac.is_proper());
        (shift, frac)
    }

    pub fn sub_int(&self, n: i64) -> GammaArg {
        GammaArg {
            num: self.num - n * self.den,
            den: self.den,
        }
    }

    /// Multiplicative order of q modulo the denominator (1 for integers).
    pub fn order_of_q(&self, q: u64) -> Result<u32> {
        let b = self.den.unsigned_abs();
        if b == 1 {
            return Ok(1);
        }
        let qm = q % b;
        if gcd(qm as i64, b as i64) != 1 {
            return Err(Error::BadDenominator {
                den: self.den,
                p: q,
            });
        }
        let mut x = qm;
        let mut ord = 1u32;
        while x != 1 {
            x = x * qm % b;
            ord += 1;
        }
        Ok(ord)
    }

    /// Base-q digit expansion, little-endian, eventually periodic.
    pub fn digits(&self, q: u64) -> Result<DigitExpansion> {
        let b = self.den;
        let qi = q as i64;
        // b^{-1} mod q by scanning (q <= 2^16).
        let bq = (b % qi + qi) % qi;
        if gcd(bq, qi) != 1 {
            return Err(Error::BadDenominator {
                den: self.den,
                p: q,
            });
        }
        let binv = (1..qi)
            .find(|&x| bq * x % qi == 1)
            .expect("unit mod q has an inverse");
        let mut seen: HashMap<i64, usize> = HashMap::new();
        let mut digits: Vec<u32> = Vec::new();
        let mut a = self.num;
        loop {
            if let Some(&start) = seen.get(&a) {
                let period = digits.split_off(start);
                return Ok(DigitExpansion {
                    pre: digits,
                    period,
                });
            }
            seen.insert(a, digits.len());
            let d = ((a % qi + qi) % qi) * binv % qi;
            digits.push(d as u32);
            a = (a - d * b) / qi;
        }
    }
}

impl std::fmt::Display for GammaArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Eventually periodic digit stream c_0, c_1, ... with 0 <= c_i < q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitExpansion {
    pre: Vec<u32>,
    period: Vec<u32>,
}

impl DigitExpansion {
    pub fn preperiod(&self) -> &[u32] {
        &self.pre
    }
    pub fn period(&self) -> &[u32] {
        &self.period
    }
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    pub fn digit(&self, i: usize) -> u32 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    /// True when all digits from some point on are zero (non-negative integer).
    pub fn is_terminating(&self) -> bool {
        self.period.iter().all(|&d| d == 0)
    }
}
