//! Shared fixtures for the benchmark targets.

use carlitz_core::{make_field, Field, Laurent};

pub fn f3() -> Field {
    make_field(3, 1, 1).expect("F_3")
}

pub fn f9() -> Field {
    make_field(3, 1, 2).expect("F_9")
}

/// A dense-ish one-unit series for arithmetic benchmarks.
pub fn sample_unit(field: &Field, prec: i64) -> Laurent {
    let mut terms = vec![(0, field.one())];
    let mut state = 0x1234_5678_9abc_def1u64;
    for e in 1..prec {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let c = field.from_encoding(state % field.order());
        terms.push((e, c));
    }
    Laurent::from_terms(field, terms, prec)
}
