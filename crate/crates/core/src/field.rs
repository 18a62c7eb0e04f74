//! Finite fields F_{q^ell}, q = p^e, as F_p\[x\] modulo a deterministic
//! irreducible, with Frobenius maps and compatible subfield embeddings.
//!
//! Construction is pinned so that repeated runs (and independent
//! implementations following the same rule) agree: the modulus is the
//! lexicographically smallest monic irreducible of its degree over F_p, and
//! the generator is the smallest element of full multiplicative order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest supported field cardinality; keeps exhaustive scans cheap.
pub const MAX_FIELD_ORDER: u128 = 1 << 16;

// ---------------------------------------------------------------------------
// F_p[x] helpers on raw coefficient vectors (ascending powers, entries < p)
// ---------------------------------------------------------------------------

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

/// Remainder of `a` modulo monic `m`.
fn fp_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    debug_assert!(m.last() == Some(&1));
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = i + shift;
                r[idx] = (r[idx] + (p - 1) * lead % p * c) % p;
            }
        }
        r.pop();
        fp_trim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    r
}

fn fp_is_irreducible(p: u64, m: &[u64]) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for enc in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut v = enc;
            for _ in 0..d {
                divisor.push(v % p);
                v /= p;
            }
            divisor.push(1);
            if fp_rem(p, m, &divisor).is_empty() {
                return false;
            }
        }
    }
    true
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Field descriptor
// ---------------------------------------------------------------------------

/// Describes F_{q^ell} with q = p^e, carried as F_p\[x\]/(modulus).
#[derive(Debug)]
pub struct FieldDesc {
    p: u64,
    e: u32,
    ell: u32,
    /// Monic irreducible of degree e*ell over F_p, ascending coefficients.
    modulus: Vec<u64>,
    /// x-basis representation of the fixed multiplicative generator.
    generator: Vec<u64>,
    q: u64,
    order: u64,
    /// Column i holds the x-basis rep of generator^i.
    gen_basis: Vec<Vec<u64>>,
    /// Inverse of `gen_basis` over F_p; converts x-coords to generator-power coords.
    gen_basis_inv: Vec<Vec<u64>>,
    /// Minimal polynomial of the generator over F_p.
    gen_minpoly: Vec<u64>,
}

/// Cheap-to-clone handle on a field descriptor.
#[derive(Clone)]
pub struct Field(Arc<FieldDesc>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{}^{}}}", self.q(), self.ell())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.ell == other.0.ell)
    }
}
impl Eq for Field {}

fn mat_inverse(p: u64, m: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    // Augmented [M | I], M laid out as columns; work on rows of the transpose
    // so that inv * x_coords = gen coords.
    let mut a = vec![vec![0u64; 2 * n]; n];
    for (j, col) in m.iter().enumerate() {
        for i in 0..n {
            a[i][j] = col[i];
        }
    }
    for i in 0..n {
        a[i][n + i] = 1;
    }
    let mut row = 0;
    for col in 0..n {
        let pivot = (row..n).find(|&r| a[r][col] != 0)?;
        a.swap(row, pivot);
        let inv = mod_pow(a[row][col], p - 2, p);
        for k in 0..2 * n {
            a[row][k] = a[row][k] * inv % p;
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for k in 0..2 * n {
                    a[r][k] = (a[r][k] + (p - f) * a[row][k]) % p;
                }
            }
        }
        row += 1;
    }
    Some((0..n).map(|i| a[i][n..].to_vec()).collect())
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Builds the field F_{(p^e)^ell} with deterministic modulus and generator.
pub fn make_field(p: u64, e: u32, ell: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if e == 0 || ell == 0 {
        return Err(Error::OutOfRange("e and ell must be positive".into()));
    }
    let n = (e * ell) as usize;
    let order128 = (p as u128).pow(e * ell);
    if order128 > MAX_FIELD_ORDER {
        return Err(Error::DegreeOverflow(order128));
    }
    let order = order128 as u64;
    let q = p.pow(e);

    // Lexicographically smallest monic irreducible of degree n: candidates are
    // ordered by the base-p integer encoding of their non-leading coefficients,
    // most significant coefficient first.
    let mut modulus = None;
    for enc in 0..order {
        let mut cand = Vec::with_capacity(n + 1);
        let mut v = enc;
        for _ in 0..n {
            cand.push(v % p);
            v /= p;
        }
        cand.push(1);
        if fp_is_irreducible(p, &cand) {
            modulus = Some(cand);
            break;
        }
    }
    let modulus = modulus.expect("an irreducible of every degree exists");

    let raw_mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut r = fp_rem(p, &fp_mul(p, a, b), &modulus);
        r.resize(n, 0);
        r
    };
    let raw_pow = |a: &[u64], mut k: u64| -> Vec<u64> {
        let mut acc = vec![0u64; n];
        acc[0] = 1;
        let mut base = a.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = raw_mul(&acc, &base);
            }
            base = raw_mul(&base, &base);
            k >>= 1;
        }
        acc
    };
    let one = {
        let mut v = vec![0u64; n];
        v[0] = 1;
        v
    };

    // Smallest element of full multiplicative order q^ell - 1.
    let factors = prime_factors(order - 1);
    let mut generator = None;
    'outer: for enc in 1..order {
        let mut rep = Vec::with_capacity(n);
        let mut v = enc;
        for _ in 0..n {
            rep.push(v % p);
            v /= p;
        }
        for &r in &factors {
            if raw_pow(&rep, (order - 1) / r) == one {
                continue 'outer;
            }
        }
        generator = Some(rep);
        break;
    }
    let generator = generator.expect("finite field groups are cyclic");

    let mut gen_basis = Vec::with_capacity(n);
    let mut pw = one.clone();
    for _ in 0..n {
        gen_basis.push(pw.clone());
        pw = raw_mul(&pw, &generator);
    }
    let gen_basis_inv =
        mat_inverse(p, &gen_basis).expect("powers of a primitive element form a basis");
    // pw now holds g^n; minpoly(g) = x^n - sum c_i x^i with c = basis_inv * g^n.
    let mut minpoly = vec![0u64; n + 1];
    minpoly[n] = 1;
    for i in 0..n {
        let mut c = 0u64;
        for j in 0..n {
            c = (c + gen_basis_inv[i][j] * pw[j]) % p;
        }
        minpoly[i] = (p - c) % p;
    }

    Ok(Field(Arc::new(FieldDesc {
        p,
        e,
        ell,
        modulus,
        generator,
        q,
        order,
        gen_basis,
        gen_basis_inv,
        gen_minpoly: minpoly,
    })))
}

impl Field {
    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn e(&self) -> u32 {
        self.0.e
    }
    pub fn ell(&self) -> u32 {
        self.0.ell
    }
    /// q = p^e.
    pub fn q(&self) -> u64 {
        self.0.q
    }
    /// Cardinality q^ell.
    pub fn order(&self) -> u64 {
        self.0.order
    }
    /// Degree over F_p.
    pub fn deg(&self) -> usize {
        (self.0.e * self.0.ell) as usize
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub fn gen_minpoly(&self) -> &[u64] {
        &self.0.gen_minpoly
    }

    pub fn zero(&self) -> FqElem {
        FqElem {
            field: self.clone(),
            rep: vec![0; self.deg()],
        }
    }
    pub fn one(&self) -> FqElem {
        self.from_prime(1)
    }
    pub fn from_prime(&self, c: u64) -> FqElem {
        let mut rep = vec![0; self.deg()];
        rep[0] = c % self.0.p;
        FqElem {
            field: self.clone(),
            rep,
        }
    }
    /// Signed prime-field constant; `from_int(-1)` is p-1.
    pub fn from_int(&self, c: i64) -> FqElem {
        let p = self.0.p as i64;
        self.from_prime(c.rem_euclid(p) as u64)
    }
    pub fn generator(&self) -> FqElem {
        FqElem {
            field: self.clone(),
            rep: self.0.generator.clone(),
        }
    }
    pub fn from_rep(&self, rep: Vec<u64>) -> FqElem {
        assert_eq!(rep.len(), self.deg());
        debug_assert!(rep.iter().all(|&c| c < self.0.p));
        FqElem {
            field: self.clone(),
            rep,
        }
    }

    /// Element with the given integer encoding (base-p digits become x-coords).
    pub fn from_encoding(&self, enc: u64) -> FqElem {
        let mut rep = Vec::with_capacity(self.deg());
        let mut v = enc;
        for _ in 0..self.deg() {
            rep.push(v % self.0.p);
            v /= self.0.p;
        }
        FqElem {
            field: self.clone(),
            rep,
        }
    }

    /// All field elements in encoding order. Intended for exhaustive tests.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |m| self.from_encoding(m))
    }

    /// The canonical image of the F_q generator inside this field: the
    /// generator itself when ell = 1, otherwise the smallest root of the F_q
    /// generator's minimal polynomial.
    pub fn q_generator_image(&self) -> Result<FqElem> {
        if self.0.ell == 1 {
            return Ok(self.generator());
        }
        let base = make_field(self.0.p, self.0.e, 1)?;
        let mp = base.gen_minpoly().to_vec();
        for cand in self.elements() {
            if cand.eval_fp_poly(&mp).is_zero() {
                return Ok(cand);
            }
        }
        unreachable!("subfield of matching degree always exists")
    }
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// An element of F_{q^ell}, reduced x-basis coordinates over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    field: Field,
    rep: Vec<u64>,
}

impl FqElem {
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rep(&self) -> &[u64] {
        &self.rep
    }
    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(|&c| c == 0)
    }
    pub fn is_one(&self) -> bool {
        self.rep[0] == 1 && self.rep[1..].iter().all(|&c| c == 0)
    }
    pub fn encoding(&self) -> u64 {
        let p = self.field.p();
        self.rep.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn add(&self, other: &FqElem) -> FqElem {
        assert_eq!(self.field, other.field, "field mismatch");
        let p = self.field.p();
        let rep = self
            .rep
            .iter()
            .zip(&other.rep)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            rep,
        }
    }

    pub fn sub(&self, other: &FqElem) -> FqElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FqElem {
        let p = self.field.p();
        let rep = self.rep.iter().map(|&a| (p - a) % p).collect();
        FqElem {
            field: self.field.clone(),
            rep,
        }
    }

    pub fn mul(&self, other: &FqElem) -> FqElem {
        assert_eq!(self.field, other.field, "field mismatch");
        let d = &self.field.0;
        if d.e * d.ell == 1 {
            let mut rep = vec![0u64; 1];
            rep[0] = self.rep[0] * other.rep[0] % d.p;
            return FqElem {
                field: self.field.clone(),
                rep,
            };
        }
        let mut rep = fp_rem(d.p, &fp_mul(d.p, &self.rep, &other.rep), &d.modulus);
        rep.resize(self.field.deg(), 0);
        FqElem {
            field: self.field.clone(),
            rep,
        }
    }

    pub fn pow(&self, mut k: u64) -> FqElem {
        if self.is_zero() {
            return if k == 0 {
                self.field.one()
            } else {
                self.clone()
            };
        }
        k %= self.field.order() - 1;
        let mut acc = self.field.one();
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

    pub fn inv(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::ZeroInversion);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// x^(q^j); negative j gives the unique q^|j|-th root.
    pub fn frobenius(&self, j: i64) -> FqElem {
        let n = self.field.deg() as i64;
        let e = self.field.e() as i64;
        let r = (e * j).rem_euclid(n) as u32;
        let exp = self.field.p().pow(r);
        self.pow(exp)
    }

    /// Evaluates an F_p-coefficient polynomial at this element.
    pub fn eval_fp_poly(&self, coeffs: &[u64]) -> FqElem {
        let mut acc = self.field.zero();
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&self.field.from_prime(c));
        }
        acc
    }

    /// Coordinates with respect to the generator-power basis 1, g, ..., g^(n-1).
    pub fn gen_coords(&self) -> Vec<u64> {
        let d = &self.field.0;
        let n = self.field.deg();
        let mut out = vec![0u64; n];
        for i in 0..n {
            let mut c = 0u64;
            for j in 0..n {
                c = (c + d.gen_basis_inv[i][j] * self.rep[j]) % d.p;
            }
            out[i] = c;
        }
        out
    }

    /// Rebuilds an element from generator-power coordinates.
    pub fn from_gen_coords(field: &Field, coords: &[u64]) -> FqElem {
        let d = &field.0;
        let n = field.deg();
        let mut rep = vec![0u64; n];
        for (i, &y) in coords.iter().enumerate() {
            if y == 0 {
                continue;
            }
            for j in 0..n {
                rep[j] = (rep[j] + y * d.gen_basis[i][j]) % d.p;
            }
        }
        FqElem {
            field: field.clone(),
            rep,
        }
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Polynomial-in-generator notation: "g^2+2*g+1" for extension fields,
/// plain integers for prime fields.
impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.deg() == 1 {
            return write!(f, "{}", self.rep[0]);
        }
        let coords = self.gen_coords();
        let mut first = true;
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{}", c)?,
                (1, 1) => write!(f, "g")?,
                (1, _) => write!(f, "{}*g", c)?,
                (_, 1) => write!(f, "g^{}", i)?,
                (_, _) => write!(f, "{}*g^{}", c, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses the `Display` form back into an element.
pub fn parse_fq(field: &Field, s: &str) -> Result<FqElem> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty field element".into()));
    }
    let n = field.deg();
    let mut coords = vec![0u64; n];
    let body = s.trim_start_matches('+');
    for term in body.split('+') {
        if term.is_empty() {
            return Err(Error::Parse(format!("bad field element '{s}'")));
        }
        let (coeff_str, pow): (&str, usize) = if let Some(idx) = term.find('g') {
            let head = &term[..idx];
            let tail = &term[idx + 1..];
            let pw = if tail.is_empty() {
                1
            } else if let Some(stripped) = tail.strip_prefix('^') {
                stripped
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?
            } else {
                return Err(Error::Parse(format!("bad term '{term}'")));
            };
            (head.trim_end_matches('*'), pw)
        } else {
            (term, 0)
        };
        let c: u64 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad coefficient '{coeff_str}'")))?
        };
        if pow >= n && !(n == 1 && pow == 0) {
            return Err(Error::Parse(format!(
                "generator power {pow} out of range for degree {n}"
            )));
        }
        if n == 1 {
            coords[0] = (coords[0] + c) % field.p();
        } else {
            coords[pow] = (coords[pow] + c) % field.p();
        }
    }
    Ok(FqElem::from_gen_coords(field, &coords))
}

// ---------------------------------------------------------------------------
// Subfield embeddings
// ---------------------------------------------------------------------------

/// A field homomorphism F_{q^ell} -> F_{q^ell'}, ell | ell', pinned so that
/// the canonical F_q images on both sides correspond.
#[derive(Clone)]
pub struct Embedding {
    from: Field,
    to: Field,
    gen_image: FqElem,
}

impl Embedding {
    pub fn from_field(&self) -> &Field {
        &self.from
    }
    pub fn to_field(&self) -> &Field {
        &self.to
    }

    pub fn apply(&self, x: &FqElem) -> FqElem {
        assert_eq!(*x.field(), self.from, "field mismatch");
        if self.from.deg() == 1 {
            return self.to.from_prime(x.rep()[0]);
        }
        let coords = x.gen_coords();
        let mut acc = self.to.zero();
        for &y in coords.iter().rev() {
            acc = acc.mul(&self.gen_image);
            if y != 0 {
                acc = acc.add(&self.to.from_prime(y));
            }
        }
        acc
    }
}

type EmbedKey = (u64, u32, u32, u32);
static EMBED_CACHE: OnceLock<Mutex<BTreeMap<EmbedKey, Embedding>>> = OnceLock::new();

/// Deterministic embedding of `from` into `to` (same p and e, from.ell | to.ell,
/// or `from` the prime field).
pub fn embed_subfield(from: &Field, to: &Field) -> Result<Embedding> {
    let fail = || {
        Err(Error::NotASubfield(
            format!("{:?}", from),
            format!("{:?}", to),
        ))
    };
    if from.p() != to.p() {
        return fail();
    }
    if from == to {
        return Ok(Embedding {
            from: from.clone(),
            to: to.clone(),
            gen_image: to.generator(),
        });
    }
    if from.deg() == 1 {
        return Ok(Embedding {
            from: from.clone(),
            to: to.clone(),
            gen_image: to.one(),
        });
    }
    if from.e() != to.e() || to.ell() % from.ell() != 0 {
        return fail();
    }

    let key = (from.p(), from.e(), from.ell(), to.ell());
    let cache = EMBED_CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(e) = cache.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }

    // Discrete log of the canonical F_q image in `from`.
    let eta_from = from.q_generator_image()?;
    let eta_to = to.q_generator_image()?;
    let g = from.generator();
    let mut m = 0u64;
    let mut pw = from.one();
    while pw != eta_from {
        pw = pw.mul(&g);
        m += 1;
        if m >= from.order() {
            unreachable!("generator has full order");
        }
    }

    let minpoly = from.gen_minpoly().to_vec();
    for cand in to.elements() {
        if cand.is_zero() || !cand.eval_fp_poly(&minpoly).is_zero() {
            continue;
        }
        if cand.pow(m) == eta_to {
            let emb = Embedding {
                from: from.clone(),
                to: to.clone(),
                gen_image: cand,
            };
            cache.lock().unwrap().insert(key, emb.clone());
            return Ok(emb);
        }
    }
    fail()
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.ell == other.ell
    }
}
