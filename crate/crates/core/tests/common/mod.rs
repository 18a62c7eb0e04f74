//! Shared helpers for the integration suites: a deterministic RNG and
//! random-series builders with fixed enumeration order.

use carlitz_core::{Field, Laurent};

/// xorshift64*; deterministic across platforms.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }
    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Random sparse Laurent series with the given valuation window and
/// precision; the leading coefficient is forced nonzero.
pub fn random_series(field: &Field, rng: &mut Rng, val_span: i64, prec: i64) -> Laurent {
    let val = rng.below((2 * val_span + 1) as u64) as i64 - val_span;
    let mut terms = vec![(val, field.from_encoding(1 + rng.below(field.order() - 1)))];
    let width = (prec - val).max(1) as u64;
    for _ in 0..24 {
        let e = val + rng.below(width) as i64;
        terms.push((e, field.from_encoding(rng.below(field.order()))));
    }
    let s = Laurent::from_terms(field, terms, prec);
    if s.is_zero_at_prec() {
        Laurent::one(field).truncate(prec)
    } else {
        s
    }
}
