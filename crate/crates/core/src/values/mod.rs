//! Special values of F_q\[theta\]-arithmetic: the D_n and L_i families,
//! Carlitz factorials, the Goss factorial interpolation at p-adic arguments,
//! zeta values, periods and twisted Omega values, Carlitz
//! exponential/logarithm/polylogarithms, and Bernoulli-Carlitz numbers.

pub mod digits;
pub mod logexp;
pub mod pi_omega;
pub mod zeta;

pub use digits::{DigitExpansion, GammaArg};
pub use logexp::{
    bernoulli_carlitz, carlitz_exp_coeffs, carlitz_log_coeffs, compose_qseries, exp_eval,
    polylog_coeffs, polylog_value,
};
pub use pi_omega::{omega_tate, omega_tate_in, omega_value, omega_value_in, pi_tilde, pi_tilde_in};
pub use zeta::zeta;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Poly, RatFunc};
use crate::series::Laurent;

/// D_n = prod_{i<n} (theta^(q^n) - theta^(q^i)); D_0 = 1. Exact, monic of
/// degree n*q^n.
pub fn d_poly(field: &Field, n: u32) -> Poly {
    let q = field.q();
    let mut acc = Poly::one(field);
    let qn = q.pow(n);
    for i in 0..n {
        let f = Poly::theta_pow(field, qn as usize).sub(&Poly::theta_pow(field, q.pow(i) as usize));
        acc = acc.mul(&f);
    }
    acc
}

/// L_i = prod_{j=1..i} (theta - theta^(q^j)); L_0 = 1.
pub fn l_poly(field: &Field, i: u32) -> Poly {
    let q = field.q();
    let mut acc = Poly::one(field);
    for j in 1..=i {
        let f = Poly::theta(field).sub(&Poly::theta_pow(field, q.pow(j) as usize));
        acc = acc.mul(&f);
    }
    acc
}

/// The one-unit part of D_n as an exact rational function D_n / theta^(n q^n).
pub fn dbar_ratfunc(field: &Field, n: u32) -> RatFunc {
    let q = field.q();
    let deg = n as u64 * q.pow(n);
    RatFunc::new(d_poly(field, n), Poly::theta_pow(field, deg as usize))
        .expect("theta power is nonzero")
}

/// The one-unit D_n/theta^(deg D_n) as a Laurent truncation: the product
/// prod_{i<n} (1 - theta^(q^i - q^n)).
pub fn dbar_laurent(field: &Field, n: u32, prec: i64) -> Laurent {
    let q = field.q() as i64;
    let mut acc = Laurent::one(field).truncate(prec);
    let th = Laurent::theta_image(field);
    let qn = q.pow(n);
    for i in 0..n {
        let qi = q.pow(i);
        // 1 - theta^(q^i - q^n): exponent is negative, so this is an exact
        // one-unit monomial perturbation.
        let f = Laurent::one(field).sub(&th.int_pow(qi - qn).expect("monomial power"));
        acc = acc.mul(&f);
    }
    acc
}

/// Carlitz factorial: prod D_i^(n_i) over the base-q digits of n.
pub fn carlitz_factorial(field: &Field, n: u64) -> Poly {
    let q = field.q();
    let mut acc = Poly::one(field);
    let mut v = n;
    let mut i = 0u32;
    while v > 0 {
        let digit = v % q;
        if digit > 0 {
            acc = acc.mul(&d_poly(field, i).pow(digit));
        }
        v /= q;
        i += 1;
    }
    acc
}

/// Gamma_m = Carlitz factorial of m-1 (the shifted accessor used by the
/// Euler-Carlitz form); m >= 1.
pub fn gamma_poly(field: &Field, m: u64) -> Poly {
    assert!(m >= 1, "gamma index starts at 1");
    carlitz_factorial(field, m - 1)
}

/// Goss factorial r! = prod D-bar_i^(c_i) over the digit expansion of r,
/// as a one-unit Laurent at the field's scale, truncated at `prec`.
///
/// Valid for every r in Q with denominator prime to p: non-negative integers
/// give the finite product (the unit part of the Carlitz factorial), negative
/// integers and proper fractions give convergent infinite products.
pub fn goss_factorial(r: &GammaArg, field: &Field, prec: i64) -> Result<Laurent> {
    r.check_denominator(field.p())?;
    let q = field.q() as i64;
    let scale = field.order() as i64 - 1;
    let exp = r.digits(field.q())?;
    let mut acc = Laurent::one(field).truncate(prec);
    let mut i = 0u32;
    loop {
        // Factors D-bar_i for i >= 1 first deviate from 1 at exponent
        // scale*(q^i - q^(i-1)); once that passes prec the tail is negligible.
        if i >= 1 && scale * (q.pow(i) - q.pow(i - 1)) >= prec {
            break;
        }
        let digit = exp.digit(i as usize);
        if digit > 0 && i >= 1 {
            let f = dbar_laurent(field, i, prec);
            acc = acc.mul(&f.int_pow(digit as i64)?);
        }
        // D-bar_0 = 1 contributes nothing.
        i += 1;
        if i > 64 {
            break; // unreachable at supported scales
        }
    }
    Ok(acc)
}

/// Exact ratio a! / b! in k for arguments differing by an integer: the digit
/// expansions eventually agree, so the quotient is a finite product of
/// D-bar_i powers.
pub fn factorial_ratio(a: &GammaArg, b: &GammaArg, field: &Field) -> Result<RatFunc> {
    a.check_denominator(field.p())?;
    b.check_denominator(field.p())?;
    if a.num() * b.den() == b.num() * a.den() {
        return Ok(RatFunc::one(field));
    }
    let diff_num = a.num() * b.den() - b.num() * a.den();
    if diff_num % (a.den() * b.den() / gcd_i64(a.den(), b.den())) != 0 {
        // not differing by an integer
        return Err(Error::OutOfRange(format!(
            "{a} and {b} do not differ by an integer"
        )));
    }
    let q = field.q();
    let da = a.digits(q)?;
    let db = b.digits(q)?;
    // Digits agree from index N on: past the preperiods and one aligned lcm
    // of the periods, digit streams of numbers differing by an integer match.
    let lcm = |x: usize, y: usize| x / gcd_i64(x as i64, y as i64) as usize * y;
    let start = da.preperiod().len().max(db.preperiod().len());
    let span = lcm(da.period_len(), db.period_len());
    let mut n = start + span;
    // Walk forward until an aligned full period of agreement is seen.
    loop {
        let agree = (0..span).all(|k| da.digit(n + k) == db.digit(n + k));
        if agree
            && (0..span).all(|k| da.digit(n + k) == da.digit(n + span + k))
            && (0..span).all(|k| db.digit(n + k) == db.digit(n + span + k))
        {
            break;
        }
        n += 1;
        if n > 4096 {
            return Err(Error::ResourceCap(
                "digit streams failed to align; arguments likely do not differ by an integer"
                    .into(),
            ));
        }
    }
    let mut out = RatFunc::one(field);
    for i in 0..n {
        let ea = da.digit(i) as i64;
        let eb = db.digit(i) as i64;
        if ea != eb {
            out = out.mul(&dbar_ratfunc(field, i as u32).pow(ea - eb)?);
        }
    }
    Ok(out)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::series::embed_rat;

    fn f3() -> Field {
        make_field(3, 1, 1).unwrap()
    }

    #[test]
    fn d_family_basics() {
        let f = f3();
        assert!(d_poly(&f, 0).is_one());
        for n in 1..=4u32 {
            let d = d_poly(&f, n);
            assert!(d.is_monic());
            assert_eq!(d.deg(), Some(n as usize * 3usize.pow(n)));
        }
    }

    #[test]
    fn d_ratio_identity() {
        // D_i / D_{i-1}^q = theta^(q^i) - theta, for i = 1..4.
        let f = f3();
        for i in 1..=4u32 {
            let lhs = RatFunc::new(d_poly(&f, i), d_poly(&f, i - 1).pow(3)).unwrap();
            let rhs = RatFunc::from_poly(Poly::theta_pow(&f, 3usize.pow(i)).sub(&Poly::theta(&f)));
            assert_eq!(lhs, rhs, "i = {i}");
        }
    }

    #[test]
    fn dbar_routes_agree() {
        let f = f3();
        for n in 1..=4u32 {
            let via_rat = embed_rat(&dbar_ratfunc(&f, n), &f, 120).unwrap();
            let via_product = dbar_laurent(&f, n, 120);
            assert!(via_rat.agrees_with(&via_product, 120).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn carlitz_factorial_small() {
        let f = f3();
        assert!(carlitz_factorial(&f, 0).is_one());
        for n in 1..3u64 {
            assert!(
                carlitz_factorial(&f, n).is_one(),
                "n < q has D_0 digits only"
            );
        }
        // n = q: digits (0, 1) give D_1 = theta^q - theta.
        let expect = Poly::theta_pow(&f, 3).sub(&Poly::theta(&f));
        assert_eq!(carlitz_factorial(&f, 3), expect);
        assert_eq!(gamma_poly(&f, 4), expect);
    }

    #[test]
    fn goss_factorial_on_nonnegative_integers() {
        // r! for integer r >= 0 equals the unit part of the Carlitz factorial.
        let f = f3();
        for n in [0i64, 1, 2, 3, 4, 9, 10] {
            let via_digits = goss_factorial(&GammaArg::from_int(n), &f, 100).unwrap();
            let pi = carlitz_factorial(&f, n as u64);
            let deg = pi.deg().unwrap();
            let unit = RatFunc::new(pi, Poly::theta_pow(&f, deg)).unwrap();
            let via_poly = embed_rat(&unit, &f, 100).unwrap();
            assert!(via_digits.agrees_with(&via_poly, 100).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn goss_factorial_basis_value() {
        // (1/(1-q^ell))! = prod_m D-bar_{ell m}: check at ell=2 against a
        // hand-rolled product.
        let f = f3();
        let prec = 140;
        let r = GammaArg::new(1, -8).unwrap();
        let got = goss_factorial(&r, &f, prec).unwrap();
        let mut expect = Laurent::one(&f).truncate(prec);
        for m in 0..6u32 {
            expect = expect.mul(&dbar_laurent(&f, 2 * m, prec));
        }
        assert!(got.agrees_with(&expect, prec).unwrap());
    }

    #[test]
    fn factorial_ratio_replays_numerically() {
        // a! = ratio * b! at precision, for pairs differing by integers.
        let f = f3();
        let prec = 100;
        for (a, b) in [
            (GammaArg::new(-9, 8).unwrap(), GammaArg::new(-1, 8).unwrap()),
            (GammaArg::new(7, 8).unwrap(), GammaArg::new(-1, 8).unwrap()),
            (GammaArg::from_int(-2), GammaArg::from_int(-1)),
            (GammaArg::from_int(4), GammaArg::from_int(0)),
        ] {
            let ratio = factorial_ratio(&a, &b, &f).unwrap();
            let va = goss_factorial(&a, &f, prec).unwrap();
            let vb = goss_factorial(&b, &f, prec).unwrap();
            let rhs = embed_rat(&ratio, &f, prec + 40).unwrap().mul(&vb);
            let w = va.prec().min(rhs.prec()).min(prec);
            assert!(va.agrees_with(&rhs.truncate(w), w).unwrap(), "{a} vs {b}");
        }
    }

    #[test]
    fn negative_one_factorial_is_power_of_basis() {
        // (-1)! = ((1/(1-q))!)^(q-1) exactly: both are prod D-bar_i^(q-1).
        let f = f3();
        let prec = 120;
        let lhs = goss_factorial(&GammaArg::from_int(-1), &f, prec).unwrap();
        let basis = goss_factorial(&GammaArg::new(1, -2).unwrap(), &f, prec).unwrap();
        let rhs = basis.int_pow(2).unwrap();
        assert!(lhs.agrees_with(&rhs.truncate(prec), prec).unwrap());
    }
}
