//! Prime and extension field arithmetic.
//!
//! An element of GF(p^e) is a polynomial of degree < e over GF(p), reduced
//! modulo a monic irreducible polynomial of degree e. Internally an element
//! is packed into a single `u64` as `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`,
//! so integer order on the packed value is the big-endian lexicographic order
//! on coefficient vectors. No log/antilog tables are built, which keeps
//! fields of order up to 2^62 usable.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const ORDER_LIMIT: u64 = 1 << 62;
const MAX_DEGREE: usize = 62;

type Digits = [u64; MAX_DEGREE];

/// A finite field GF(p^e) together with its defining modulus.
///
/// Cloning is cheap; two specs compare equal iff `(p, e, modulus)` match.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

struct Inner {
    p: u64,
    e: usize,
    /// Monic, little-endian, `e + 1` entries. `[0, 1]` for prime fields.
    modulus: Vec<u64>,
    order: u64,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}; modulus {:?})",
            self.0.p, self.0.e, self.0.modulus
        )
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.e)
        }
    }
}

impl FieldSpec {
    /// Builds GF(p^e) using the smallest monic irreducible modulus of degree
    /// `e`, where candidates are ordered by their lower coefficients read
    /// big-endian. Deterministic across runs.
    pub fn new(p: u64, e: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = checked_order(p, e)?;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, e)
        };
        Ok(Self(Arc::new(Inner {
            p,
            e,
            modulus,
            order,
        })))
    }

    /// Prime field GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Builds a field from an explicit modulus, validating it.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::ZeroDegree);
        }
        let e = modulus.len() - 1;
        let order = checked_order(p, e)?;
        if modulus[e] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus("coefficient out of range".into()));
        }
        if e == 1 {
            if modulus != [0, 1] {
                return Err(Error::InvalidModulus(
                    "prime fields use the placeholder modulus x".into(),
                ));
            }
        } else if !is_irreducible(p, &modulus) {
            return Err(Error::InvalidModulus(format!(
                "{modulus:?} is reducible over GF({p})"
            )));
        }
        Ok(Self(Arc::new(Inner {
            p,
            e,
            modulus,
            order,
        })))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.e
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Number of elements, p^e.
    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            value: 1,
        }
    }

    /// Element from little-endian coefficients. Shorter vectors are
    /// zero-padded; longer ones are rejected.
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.0.e {
            return Err(Error::InvalidElement(format!(
                "{} coefficients for degree {}",
                coeffs.len(),
                self.0.e
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::InvalidElement(format!(
                "coefficient {c} >= {}",
                self.0.p
            )));
        }
        let mut digits = [0u64; MAX_DEGREE];
        digits[..coeffs.len()].copy_from_slice(coeffs);
        Ok(FieldElement {
            spec: self.clone(),
            value: self.encode(&digits),
        })
    }

    /// Element from its packed integer value (`0 <= value < order`).
    pub fn from_value(&self, value: u64) -> Result<FieldElement> {
        if value >= self.0.order {
            return Err(Error::InvalidElement(format!(
                "value {value} >= order {}",
                self.0.order
            )));
        }
        Ok(FieldElement {
            spec: self.clone(),
            value,
        })
    }

    /// Image of an integer under GF(p) -> GF(p^e).
    pub fn from_prime_subfield(&self, c: u64) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            value: c % self.0.p,
        }
    }

    /// Returns `s` with `q = p^s`, `s >= 1`.
    pub fn characteristic_exponent(&self, q: u64) -> Result<u32> {
        let p = self.0.p;
        let mut acc = p;
        let mut s = 1;
        while acc < q {
            acc = match acc.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
            s += 1;
        }
        if acc == q {
            Ok(s)
        } else {
            Err(Error::NotCharacteristicPower { q, p })
        }
    }

    // Raw kernels on packed values. Callers guarantee operands are < order.

    fn decode(&self, mut v: u64) -> Digits {
        let mut d = [0u64; MAX_DEGREE];
        let p = self.0.p;
        for slot in d.iter_mut().take(self.0.e) {
            *slot = v % p;
            v /= p;
        }
        d
    }

    fn encode(&self, d: &Digits) -> u64 {
        let p = self.0.p;
        d[..self.0.e].iter().rev().fold(0u64, |acc, &c| acc * p + c)
    }

    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let p = self.0.p;
        if self.0.e == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if p == 2 {
            return a ^ b;
        }
        let (x, y) = (self.decode(a), self.decode(b));
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.0.e {
            let s = x[i] + y[i];
            out[i] = if s >= p { s - p } else { s };
        }
        self.encode(&out)
    }

    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        let p = self.0.p;
        if self.0.e == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        if p == 2 {
            return a;
        }
        let x = self.decode(a);
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.0.e {
            out[i] = if x[i] == 0 { 0 } else { p - x[i] };
        }
        self.encode(&out)
    }

    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let p = self.0.p;
        let e = self.0.e;
        if e == 1 {
            return mulmod(a, b, p);
        }
        if a == 1 {
            return b;
        }
        if b == 1 {
            return a;
        }
        // e >= 2 implies p < 2^31, so coefficient products fit in u64.
        let (x, y) = (self.decode(a), self.decode(b));
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if x[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        let m = &self.0.modulus;
        for deg in (e..2 * e - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            let base = deg - e;
            for i in 0..e {
                prod[base + i] = (prod[base + i] + (p - c) * m[i]) % p;
            }
        }
        let mut out = [0u64; MAX_DEGREE];
        out[..e].copy_from_slice(&prod[..e]);
        self.encode(&out)
    }

    pub(crate) fn pow_raw(&self, mut base: u64, mut exp: u128) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(self.pow_raw(a, self.0.order as u128 - 2))
    }
}

/// An element of a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    value: u64,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.is_prime_field() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{:?}", self.coeffs())
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by [`FieldElement::order_key`]. Elements of different fields are
/// ordered by value as well; callers should not rely on that.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub(crate) fn from_raw(spec: &FieldSpec, value: u64) -> Self {
        debug_assert!(value < spec.order());
        Self {
            spec: spec.clone(),
            value,
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Packed integer representation.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Little-endian coefficient vector, always exactly `e` entries.
    pub fn coeffs(&self) -> Vec<u64> {
        self.spec.decode(self.value)[..self.spec.degree()].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Canonical total-order key: the big-endian coefficient vector compared
    /// lexicographically, which coincides with the packed value.
    pub fn order_key(&self) -> u64 {
        self.value
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(
            &self.spec,
            self.spec.add_raw(self.value, other.value),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(
            &self.spec,
            self.spec.sub_raw(self.value, other.value),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(&self.spec, self.spec.neg_raw(self.value))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(
            &self.spec,
            self.spec.mul_raw(self.value, other.value),
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self.spec.inv_raw(self.value).ok_or(Error::ZeroInverse)?;
        Ok(Self::from_raw(&self.spec, v))
    }

    pub fn pow(&self, exp: u128) -> Self {
        Self::from_raw(&self.spec, self.spec.pow_raw(self.value, exp))
    }

    /// `x^q` for `q` a power of the characteristic.
    pub fn frobenius(&self, q: u64) -> Result<Self> {
        self.spec.characteristic_exponent(q)?;
        Ok(self.pow(q as u128))
    }

    /// Coordinates over the prime subfield GF(p); only `q = p` is supported.
    pub fn as_subfield_vector(&self, q: u64) -> Result<Vec<u64>> {
        let p = self.spec.characteristic();
        if q != p {
            return Err(Error::UnsupportedSubfield { q, p });
        }
        Ok(self.coeffs())
    }
}

fn checked_order(p: u64, e: usize) -> Result<u64> {
    if e > MAX_DEGREE {
        return Err(Error::FieldTooLarge { p, e });
    }
    let mut order: u64 = 1;
    for _ in 0..e {
        order = order
            .checked_mul(p)
            .filter(|&o| o <= ORDER_LIMIT)
            .ok_or(Error::FieldTooLarge { p, e })?;
    }
    Ok(order)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Polynomials over GF(p), little-endian, trailing zeros trimmed.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let df = f.len() - 1;
    let lead_inv = powmod(f[df], p - 2, p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = mulmod(r[top], lead_inv, p);
        if c != 0 {
            let shift = top - df;
            for (i, &fc) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - mulmod(c, fc, p)) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_powmod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Rabin's irreducibility test for a monic polynomial of degree >= 1.
fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let e = f.len() - 1;
    if e == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = vec![poly_rem(&x, f, p)];
    for i in 1..=e {
        let next = poly_powmod(&frob[i - 1], p, f, p);
        frob.push(next);
    }
    if frob[e] != poly_rem(&x, f, p) {
        return false;
    }
    prime_factors(e).into_iter().all(|l| {
        let mut h = frob[e / l].clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(f, &trim(h), p);
        g.len() == 1
    })
}

fn smallest_irreducible(p: u64, e: usize) -> Vec<u64> {
    // Lower coefficients enumerated as a base-p counter with c_{e-1} most
    // significant; finite because an irreducible polynomial always exists.
    let mut lower = vec![0u64; e];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
        for c in lower.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}
