//! Truncated Tate-algebra elements: power series in t over K_ell, kept to a
//! fixed t-truncation degree with per-coefficient u-precision.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::series::fmt::{laurent_from_json, laurent_to_json};
use crate::series::Laurent;

/// Power series in t truncated at tdeg; coefficient m is exact in its stated
/// u-precision for every m < tdeg.
#[derive(Clone, PartialEq, Eq)]
pub struct TatePoly {
    field: Field,
    coeffs: Vec<Laurent>,
}

impl TatePoly {
    pub fn from_coeffs(field: &Field, coeffs: Vec<Laurent>) -> TatePoly {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        TatePoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn constant(c: Laurent, tdeg: usize) -> TatePoly {
        let field = c.field().clone();
        let mut coeffs = vec![Laurent::zero(&field); tdeg];
        if tdeg > 0 {
            coeffs[0] = c;
        }
        TatePoly { field, coeffs }
    }

    pub fn zero(field: &Field, tdeg: usize) -> TatePoly {
        TatePoly {
            field: field.clone(),
            coeffs: vec![Laurent::zero(field); tdeg],
        }
    }

    pub fn one(field: &Field, tdeg: usize) -> TatePoly {
        Self::constant(Laurent::one(field), tdeg)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn tdeg(&self) -> usize {
        self.coeffs.len()
    }
    pub fn coeffs(&self) -> &[Laurent] {
        &self.coeffs
    }
    pub fn coeff(&self, m: usize) -> &Laurent {
        &self.coeffs[m]
    }

    /// Minimum u-precision over the tracked coefficients.
    pub fn min_prec(&self) -> i64 {
        self.coeffs
            .iter()
            .map(Laurent::prec)
            .min()
            .unwrap_or(crate::series::PREC_INF)
    }

    pub fn truncate_t(&self, tdeg: usize) -> TatePoly {
        TatePoly {
            field: self.field.clone(),
            coeffs: self.coeffs[..tdeg.min(self.coeffs.len())].to_vec(),
        }
    }

    pub fn truncate_u(&self, prec: i64) -> TatePoly {
        TatePoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.truncate(prec)).collect(),
        }
    }

    pub fn add(&self, other: &TatePoly) -> TatePoly {
        let tdeg = self.tdeg().min(other.tdeg());
        let coeffs = (0..tdeg)
            .map(|m| self.coeffs[m].add(&other.coeffs[m]))
            .collect();
        TatePoly {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &TatePoly) -> TatePoly {
        let tdeg = self.tdeg().min(other.tdeg());
        let coeffs = (0..tdeg)
            .map(|m| self.coeffs[m].sub(&other.coeffs[m]))
            .collect();
        TatePoly {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> TatePoly {
        TatePoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(Laurent::neg).collect(),
        }
    }

    pub fn scale_laurent(&self, s: &Laurent) -> TatePoly {
        TatePoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// Truncated ring product at min tdeg.
    pub fn mul(&self, other: &TatePoly) -> TatePoly {
        let tdeg = self.tdeg().min(other.tdeg());
        let mut coeffs = vec![Laurent::zero(&self.field); tdeg];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if a >= tdeg {
                break;
            }
            if ca.is_zero_at_prec() && ca.is_exact() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if a + b >= tdeg {
                    break;
                }
                coeffs[a + b] = coeffs[a + b].add(&ca.mul(cb));
            }
        }
        TatePoly {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn int_pow(&self, k: u64) -> TatePoly {
        let mut acc = TatePoly::one(&self.field, self.tdeg());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Entrywise twist of the t-coefficients (t itself is untouched).
    pub fn twist(&self, j: i64) -> Result<TatePoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.twist(j))
            .collect::<Result<Vec<_>>>()?;
        Ok(TatePoly {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn frob_fwd(&self, m: u32) -> TatePoly {
        self.twist(-(m as i64)).expect("forward twist is total")
    }

    /// Evaluates the truncation at a point. The caller is responsible for a
    /// tdeg large enough that the discarded tail lies below the precision of
    /// interest (coefficient valuations of the series in use grow with the
    /// t-degree).
    pub fn eval(&self, at: &Laurent) -> Laurent {
        let mut acc = Laurent::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    /// Coefficientwise agreement below `upto` for the first `tdeg` coefficients.
    pub fn agrees_with(&self, other: &TatePoly, tdeg: usize, upto: i64) -> Result<bool> {
        if self.tdeg() < tdeg || other.tdeg() < tdeg {
            return Err(Error::OutOfRange(format!(
                "t-window {} exceeds truncation ({} and {})",
                tdeg,
                self.tdeg(),
                other.tdeg()
            )));
        }
        for m in 0..tdeg {
            if !self.coeffs[m].agrees_with(&other.coeffs[m], upto)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl std::fmt::Debug for TatePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "TatePoly[tdeg {}]", self.tdeg())?;
        for (m, c) in self.coeffs.iter().enumerate() {
            writeln!(f, "  t^{m}: {c}")?;
        }
        Ok(())
    }
}

pub fn tate_to_json(t: &TatePoly) -> Value {
    json!({
        "tdeg": t.tdeg(),
        "coeffs": t.coeffs().iter().map(laurent_to_json).collect::<Vec<_>>(),
    })
}

pub fn tate_from_json(field: &Field, v: &Value) -> Result<TatePoly> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("tate JSON must be an object".into()))?;
    let coeffs = obj
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing coeffs".into()))?
        .iter()
        .map(|c| laurent_from_json(field, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(TatePoly::from_coeffs(field, coeffs))
}
