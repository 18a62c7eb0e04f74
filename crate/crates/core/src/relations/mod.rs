//! Exact linear-relation search among computed Laurent values, the
//! function-field analogue of integer-relation detection: coefficient
//! windows become an F_p-linear system solved by exact Gaussian elimination.
//! No floating point, no rounding; a returned relation is a finite-precision
//! CANDIDATE and is re-verified on wider windows before anything reports it.

pub mod classify;
pub mod verify;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{embed_subfield, Field, FqElem};
use crate::poly::{Poly, RatFunc};
use crate::series::{embed_rat, Laurent};
use crate::values::{polylog_value, zeta};

// ---------------------------------------------------------------------------
// F_p kernel machinery
// ---------------------------------------------------------------------------

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Kernel basis of the column space: solutions x with M x = 0, M given by
/// rows. Deterministic reduced row echelon form; one basis vector per free
/// column, in column order.
fn kernel_basis(p: u64, mut rows: Vec<Vec<u64>>, cols: usize) -> Vec<Vec<u64>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0usize;
    for col in 0..cols {
        let piv = (rank..rows.len()).find(|&r| rows[r][col] != 0);
        let Some(piv) = piv else { continue };
        rows.swap(rank, piv);
        let inv = mod_pow(rows[rank][col], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                let pivot_row = rows[rank].clone();
                for (x, pv) in rows[r].iter_mut().zip(pivot_row.iter()) {
                    *x = (*x + (p - f) * pv) % p;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for col in 0..cols {
            if let Some(r) = pivot_of_col[col] {
                v[col] = (p - rows[r][free] % p) % p;
            }
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// F_q-linear relations
// ---------------------------------------------------------------------------

/// A finite-precision relation candidate over F_q: sum of coeffs\[j\] *
/// values\[j\] vanishes on the inspected window. Never a proof of an exact
/// relation; callers re-verify on wider windows.
#[derive(Clone, Debug)]
pub struct FqRelation {
    pub coeffs: Vec<FqElem>,
    /// Window on which the kernel was computed.
    pub window_prec: i64,
}

impl FqRelation {
    pub fn residual(&self, values: &[Laurent]) -> Laurent {
        let field = values[0].field();
        let mut acc = Laurent::zero(field);
        for (c, v) in self.coeffs.iter().zip(values) {
            acc = acc.add(&v.mul_scalar(c));
        }
        acc
    }

    /// Checks the relation on the window below `prec` (values must carry it).
    pub fn verify(&self, values: &[Laurent], prec: i64) -> Result<bool> {
        let r = self.residual(values);
        if r.prec() < prec {
            return Err(Error::OutOfRange(format!(
                "relation verification window {} exceeds residual precision {}",
                prec,
                r.prec()
            )));
        }
        Ok(r.truncate(prec).is_zero_at_prec())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "candidate": true,
            "window_prec": self.window_prec,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Basis of F_q inside the values' field, as embedded generator powers.
fn fq_basis_in(field: &Field) -> Result<(Field, Vec<FqElem>)> {
    let fq = crate::field::make_field(field.p(), field.e(), 1)?;
    let emb = embed_subfield(&fq, field)?;
    let eta = emb.apply(&fq.generator());
    let e = field.e() as usize;
    let mut basis = Vec::with_capacity(e);
    let mut pw = field.one();
    for _ in 0..e {
        basis.push(pw.clone());
        pw = pw.mul(&eta);
    }
    Ok((fq, basis))
}

/// Searches for a nonzero F_q-linear relation among the values, exact on the
/// coefficient window below `prec`. Returns the first kernel vector in a
/// deterministic order, or None when the window forces independence.
pub fn find_fq_linear_relation(values: &[Laurent], prec: i64) -> Result<Option<FqRelation>> {
    let kernel = fq_kernel(values, prec)?;
    Ok(kernel.into_iter().next().map(|coeffs| FqRelation {
        coeffs,
        window_prec: prec,
    }))
}

/// Full kernel of the window system, each vector as F_q coefficients in the
/// values' field.
pub fn fq_kernel(values: &[Laurent], prec: i64) -> Result<Vec<Vec<FqElem>>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let field = values[0].field().clone();
    for v in values {
        if *v.field() != field {
            return Err(Error::FieldMismatch);
        }
        if v.prec() < prec {
            return Err(Error::OutOfRange(format!(
                "window {} exceeds a value's precision {}",
                prec,
                v.prec()
            )));
        }
    }
    let p = field.p();
    let n = field.deg();
    let e = field.e() as usize;
    let (_, basis) = fq_basis_in(&field)?;

    let lo = values.iter().map(Laurent::val).min().unwrap().min(prec);
    let cols = values.len() * e;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for exp in lo..prec {
        let coeffs: Vec<FqElem> = values.iter().map(|v| v.coeff(exp)).collect();
        if coeffs.iter().all(FqElem::is_zero) {
            continue;
        }
        for comp in 0..n {
            let mut row = Vec::with_capacity(cols);
            for c in &coeffs {
                for b in &basis {
                    row.push(b.mul(c).rep()[comp]);
                }
            }
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }

    let basis_vecs = kernel_basis(p, rows, cols);
    let mut out = Vec::with_capacity(basis_vecs.len());
    for v in basis_vecs {
        let coeffs: Vec<FqElem> = (0..values.len())
            .map(|j| {
                let mut c = field.zero();
                for (t, b) in basis.iter().enumerate() {
                    let x = v[j * e + t];
                    if x != 0 {
                        c = c.add(&b.mul(&field.from_prime(x)));
                    }
                }
                c
            })
            .collect();
        out.push(coeffs);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// k-linear relations with bounded-degree polynomial coefficients
// ---------------------------------------------------------------------------

/// Kernel of sum_j c_j(theta) * values\[j\] = 0 with deg c_j <= deg_bound,
/// found on the window below `prec`. The inputs must carry precision at
/// least prec + deg_bound*scale, since multiplying by theta^d consumes
/// d*scale digits of the window. Each kernel vector is returned as the
/// coefficient polynomials c_j over F_q.
pub fn k_relation_basis(values: &[Laurent], deg_bound: u32, prec: i64) -> Result<Vec<Vec<Poly>>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let field = values[0].field().clone();
    let scale = field.order() as i64 - 1;
    let needed = prec + deg_bound as i64 * scale;
    for v in values {
        if v.prec() < needed {
            return Err(Error::OutOfRange(format!(
                "inputs need precision {} for window {} at degree bound {}",
                needed, prec, deg_bound
            )));
        }
    }
    let theta = Laurent::theta_image(&field);
    let mut expanded = Vec::with_capacity(values.len() * (deg_bound as usize + 1));
    for v in values {
        let mut shifted = v.clone();
        for _ in 0..=deg_bound {
            expanded.push(shifted.truncate(prec));
            shifted = shifted.mul(&theta);
        }
    }

    // Underdetermined systems are reported, not guessed.
    let e = field.e() as usize;
    let n = field.deg();
    let lo = expanded.iter().map(Laurent::val).min().unwrap().min(prec);
    let rows_available = ((prec - lo).max(0) as usize) * n;
    let cols = expanded.len() * e;
    if rows_available < cols {
        return Err(Error::Underdetermined {
            rows: rows_available,
            cols,
        });
    }

    let kernel = fq_kernel(&expanded, prec)?;
    let (fq, basis) = fq_basis_in(&field)?;
    let stride = deg_bound as usize + 1;
    let mut out = Vec::with_capacity(kernel.len());
    for vec in kernel {
        let polys: Vec<Poly> = (0..values.len())
            .map(|j| {
                let coeffs: Vec<FqElem> = (0..stride)
                    .map(|d| subfield_down(&fq, &basis, &vec[j * stride + d]))
                    .collect();
                Poly::from_coeffs(&fq, coeffs)
            })
            .collect();
        out.push(polys);
    }
    Ok(out)
}

/// Expresses an element of the embedded F_q back in the abstract F_q by
/// scanning (the subfield is tiny at desk scale).
fn subfield_down(fq: &Field, basis: &[FqElem], x: &FqElem) -> FqElem {
    if x.is_zero() {
        return fq.zero();
    }
    for cand in fq.elements() {
        let coords = cand.gen_coords();
        let mut img = x.field().zero();
        for (t, b) in basis.iter().enumerate() {
            let a = coords.get(t).copied().unwrap_or(0);
            if a != 0 {
                img = img.add(&b.mul(&x.field().from_prime(a)));
            }
        }
        if img == *x {
            return cand;
        }
    }
    unreachable!("element lies in the embedded subfield by construction")
}

/// First nonzero bounded-degree k-relation, re-verified on the widest window
/// the inputs allow before being returned.
pub fn find_k_linear_relation(
    values: &[Laurent],
    deg_bound: u32,
    prec: i64,
) -> Result<Option<Vec<RatFunc>>> {
    let basis = k_relation_basis(values, deg_bound, prec)?;
    let field = values[0].field();
    let scale = field.order() as i64 - 1;
    for polys in basis {
        let full = values.iter().map(Laurent::prec).min().unwrap() - deg_bound as i64 * scale;
        let mut acc = Laurent::zero(field);
        for (c, v) in polys.iter().zip(values) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&crate::series::embed_poly(c, field)?.mul(v));
        }
        if acc.truncate(full).is_zero_at_prec() {
            return Ok(Some(polys.into_iter().map(RatFunc::from_poly).collect()));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Anderson-Thakur coefficient recovery
// ---------------------------------------------------------------------------

/// A replayable certificate for zeta_C(n) = sum h_i * L_{theta^i, n}(theta).
#[derive(Clone, Debug)]
pub struct ATCert {
    pub n: u32,
    pub l_n: u32,
    pub h: Vec<RatFunc>,
    /// Window on which the residual was last verified to vanish.
    pub residual_prec: i64,
    pub deg_bound: u32,
}

impl ATCert {
    /// Recomputes all values at `prec` and checks the residual vanishes.
    pub fn replay(&self, field: &Field, prec: i64) -> Result<bool> {
        let zeta_v = zeta(self.n, field, prec);
        let mut acc = zeta_v.neg();
        for (i, h) in self.h.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let alpha = RatFunc::from_poly(Poly::theta_pow(h.field(), i));
            let l = polylog_value(self.n, &alpha, field, prec)?;
            acc = acc.add(&embed_rat(h, field, prec)?.mul(&l).truncate(prec));
        }
        let w = acc.prec().min(prec);
        Ok(acc.truncate(w).is_zero_at_prec())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "l_n": self.l_n,
            "h": self.h.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
            "residual_prec": self.residual_prec,
            "deg_bound": self.deg_bound,
        })
    }
}

/// Searches l = 0, 1, ... below nq/(q-1) and escalating degree bounds for a
/// certified expression of zeta_C(n) in the polylogarithm values at
/// theta-power arguments. The kernel runs on a window of `prec`; accepted
/// certificates are re-verified on freshly computed values at 2*prec.
pub fn anderson_thakur_coeffs(field: &Field, n: u32, prec: i64) -> Result<ATCert> {
    if n == 0 {
        return Err(Error::OutOfRange("weight must be positive".into()));
    }
    let q = field.q() as i64;
    let scale = field.order() as i64 - 1;
    let deg0 = ((n as i64 * q) + (q - 2)) / (q - 1); // ceil(nq/(q-1))
    let caps = 3; // doublings of the degree bound

    for l in 0.. {
        if (l as i64) * (q - 1) >= n as i64 * q {
            break;
        }
        let mut deg_bound = deg0 as u32;
        for _ in 0..caps {
            let hi = 2 * prec + deg_bound as i64 * scale;
            let zeta_v = zeta(n, field, hi);
            let mut values = vec![zeta_v];
            let mut ok = true;
            for i in 0..=l {
                let alpha = RatFunc::from_poly(Poly::theta_pow(
                    &crate::field::make_field(field.p(), field.e(), 1)?,
                    i as usize,
                ));
                match polylog_value(n, &alpha, field, hi) {
                    Ok(v) => values.push(v),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                break; // theta^l out of the convergence disc
            }
            let basis = match k_relation_basis(&values, deg_bound, prec) {
                Ok(b) => b,
                Err(Error::Underdetermined { .. }) => {
                    deg_bound *= 2;
                    continue;
                }
                Err(e) => return Err(e),
            };
            // Want a vector with a nonzero zeta coefficient.
            if let Some(polys) = basis.iter().find(|v| !v[0].is_zero()) {
                let c0 = RatFunc::from_poly(polys[0].clone());
                let h: Vec<RatFunc> = polys[1..]
                    .iter()
                    .map(|c| {
                        RatFunc::from_poly(c.clone())
                            .mul(&c0.inv().expect("nonzero"))
                            .neg()
                    })
                    .collect();
                let cert = ATCert {
                    n,
                    l_n: l,
                    h,
                    residual_prec: prec,
                    deg_bound,
                };
                // Mandatory re-verification at doubled precision on freshly
                // computed values.
                if cert.replay(field, 2 * prec)? {
                    return Ok(ATCert {
                        residual_prec: 2 * prec,
                        ..cert
                    });
                }
            }
            deg_bound *= 2;
        }
    }
    Err(Error::ResourceCap(format!(
        "no certificate for n = {n} within the degree caps"
    )))
}

// ---------------------------------------------------------------------------
// Transcendence-degree bookkeeping
// ---------------------------------------------------------------------------

/// U(s) = { n <= s : p does not divide n, (q-1) does not divide n }.
pub fn u_set(q: u64, s: u64) -> Result<Vec<u64>> {
    let (p, _) = split_prime_power(q)?;
    Ok((1..=s)
        .filter(|&n| n % p != 0 && (q == 2 || n % (q - 1) != 0))
        .collect())
}

/// Expected transcendence degree of the field generated by zeta values up to
/// s together with the level-ell gamma family:
/// s - floor(s/p) - floor(s/(q-1)) + floor(s/(p(q-1))) + ell.
/// For q = 2 every zeta value is a rational multiple of a power of the
/// period, so the count degenerates to ell + 1.
pub fn expected_trdeg(q: u64, s: u64, ell: u32) -> Result<u64> {
    let (p, _) = split_prime_power(q)?;
    if q == 2 {
        return Ok(ell as u64 + 1);
    }
    Ok(s - s / p - s / (q - 1) + s / (p * (q - 1)) + ell as u64)
}

pub fn split_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NonPrime(q));
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut e = 0u32;
            let mut v = q;
            while v % p == 0 {
                v /= p;
                e += 1;
            }
            if v != 1 {
                return Err(Error::NonPrime(q));
            }
            return Ok((p, e));
        }
        p += 1;
    }
    Ok((q, 1))
}

/// Counting profile behind the independence statements.
#[derive(Clone, Debug, Serialize)]
pub struct IndependenceProfile {
    pub q: u64,
    pub p: u64,
    pub s: u64,
    pub ell: u32,
    pub u_set: Vec<u64>,
    pub expected_trdeg: u64,
    pub q2_degenerate: bool,
}

impl IndependenceProfile {
    pub fn new(q: u64, s: u64, ell: u32) -> Result<IndependenceProfile> {
        let (p, _) = split_prime_power(q)?;
        Ok(IndependenceProfile {
            q,
            p,
            s,
            ell,
            u_set: u_set(q, s)?,
            expected_trdeg: expected_trdeg(q, s, ell)?,
            q2_degenerate: q == 2,
        })
    }
}
