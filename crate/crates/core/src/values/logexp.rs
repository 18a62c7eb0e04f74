//! Carlitz exponential, logarithm, polylogarithms, and Bernoulli-Carlitz
//! numbers. The exponential and logarithms are q-power-supported series; on
//! coefficient lists, composition is the twisted product
//! (f o g)_h = sum_{i+j=h} f_i * g_j^(q^i).

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Poly, RatFunc};
use crate::series::{embed_poly, embed_rat, Laurent};

use super::{d_poly, gamma_poly, l_poly};

/// Coefficients of exp_C: z-coefficient of z^(q^h) is 1/D_h.
pub fn carlitz_exp_coeffs(field: &Field, terms: usize) -> Vec<RatFunc> {
    (0..terms)
        .map(|h| RatFunc::new(Poly::one(field), d_poly(field, h as u32)).expect("D_h is nonzero"))
        .collect()
}

/// Coefficients of log_C: z-coefficient of z^(q^i) is 1/L_i.
pub fn carlitz_log_coeffs(field: &Field, terms: usize) -> Vec<RatFunc> {
    polylog_coeffs(field, 1, terms)
}

/// Coefficients of the weight-n polylogarithm: 1/L_i^n.
pub fn polylog_coeffs(field: &Field, n: u32, terms: usize) -> Vec<RatFunc> {
    (0..terms)
        .map(|i| {
            RatFunc::new(Poly::one(field), l_poly(field, i as u32).pow(n as u64))
                .expect("L_i is nonzero")
        })
        .collect()
}

/// Twisted composition of q-power series given by coefficient lists.
pub fn compose_qseries(f: &[RatFunc], g: &[RatFunc], field: &Field) -> Vec<RatFunc> {
    let q = field.q();
    let len = f.len().min(g.len());
    let mut out = vec![RatFunc::zero(field); len];
    for h in 0..len {
        let mut acc = RatFunc::zero(field);
        for i in 0..=h {
            let gq = g[h - i]
                .pow(q.pow(i as u32) as i64)
                .expect("positive power");
            acc = acc.add(&f[i].mul(&gq));
        }
        out[h] = acc;
    }
    out
}

/// Checks the polylogarithm convergence bound (q-1) * deg(alpha) < n*q.
pub fn polylog_bound_ok(n: u32, alpha: &RatFunc, field: &Field) -> bool {
    match alpha.inf_degree() {
        None => true, // alpha = 0
        Some(d) => (field.q() as i64 - 1) * d < (n as i64) * field.q() as i64,
    }
}

/// The polylogarithm value log_C^\[n\](alpha) = sum_i alpha^(q^i) / L_i^n as a
/// Laurent series at the field's scale. Term i has u-valuation
/// n*scale*deg(L_i) - q^i*scale*deg(alpha), which grows exactly when the
/// convergence bound holds.
pub fn polylog_value(n: u32, alpha: &RatFunc, field: &Field, prec: i64) -> Result<Laurent> {
    if alpha.is_zero() {
        return Ok(Laurent::zero(field));
    }
    if !polylog_bound_ok(n, alpha, field) {
        return Err(Error::ConvergenceBound);
    }
    let q = field.q() as i64;
    let scale = field.order() as i64 - 1;
    let d_alpha = alpha.inf_degree().unwrap();
    let alpha_img = embed_rat(alpha, field, prec + scale * d_alpha.abs() + 8)?;
    let mut acc = Laurent::zero_at(field, prec);
    let mut i = 0u32;
    loop {
        // deg L_i = q + q^2 + ... + q^i
        let deg_l: i64 = (1..=i).map(|j| q.pow(j)).sum();
        let val = (n as i64) * scale * deg_l - q.pow(i) * scale * d_alpha;
        if val >= prec {
            break;
        }
        let num = alpha_img.frob_fwd(i);
        let den = embed_poly(&l_poly(field, i).pow(n as u64), field)?;
        let term = num.mul(&den.invert_to(prec - num.val())?);
        acc = acc.add(&term.truncate(prec));
        i += 1;
        if i > 48 {
            break; // valuation growth makes this unreachable at desk scale
        }
    }
    Ok(acc)
}

/// Evaluates exp_C at a Laurent argument (as a truncated q-power series),
/// summing embed(1/D_h) * z^(q^h) until the term valuation passes `prec`.
pub fn exp_eval(z: &Laurent, field: &Field, prec: i64) -> Result<Laurent> {
    let q = field.q() as i64;
    let scale = field.order() as i64 - 1;
    let vz = z.val();
    let mut acc = Laurent::zero_at(field, prec);
    let mut h = 0u32;
    loop {
        let deg_d = (h as i64) * q.pow(h); // deg D_h = h q^h
        let val = q.pow(h) * vz + scale * deg_d;
        if val >= prec {
            break;
        }
        let num = z.frob_fwd(h);
        let den = embed_poly(&d_poly(field, h), field)?;
        let term = num.mul(&den.invert_to(prec - num.val())?);
        acc = acc.add(&term.truncate(prec));
        h += 1;
        if h > 48 {
            break;
        }
    }
    Ok(acc)
}

/// Bernoulli-Carlitz number B_n in k, from the expansion of z / exp_C(z).
/// B_0 = 1, and B_n = 0 whenever (q-1) does not divide n.
pub fn bernoulli_carlitz(field: &Field, n: u64) -> RatFunc {
    let q = field.q();
    // exp_C(z)/z has z-coefficients E[q^h - 1] = 1/D_h, all exponents
    // multiples of q-1; invert the power series through degree n.
    let n_us = n as usize;
    let mut e = vec![RatFunc::zero(field); n_us + 1];
    let mut h = 0u32;
    loop {
        let idx = q.pow(h) as usize - 1;
        if idx > n_us {
            break;
        }
        e[idx] = RatFunc::new(Poly::one(field), d_poly(field, h)).unwrap();
        h += 1;
    }
    let mut inv = vec![RatFunc::zero(field); n_us + 1];
    inv[0] = RatFunc::one(field);
    for m in 1..=n_us {
        let mut acc = RatFunc::zero(field);
        for j in 1..=m {
            if e[j].is_zero() || inv[m - j].is_zero() {
                continue;
            }
            acc = acc.add(&e[j].mul(&inv[m - j]));
        }
        inv[m] = acc.neg();
    }
    inv[n_us].mul(&RatFunc::from_poly(gamma_poly(field, n + 1)))
}
