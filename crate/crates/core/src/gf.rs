//! Exact arithmetic in finite fields `F_q`, `q = p^k`.
//!
//! Elements are stored as their coefficient vector over `F_p` packed into a
//! single integer, `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. That integer is also
//! the element order used everywhere for tie-breaking: `0, 1, ..., p-1` are
//! the prime subfield, `p` is the residue of `x`, and so on.
//!
//! Multiplication goes through discrete log tables built around the
//! designated primitive element `ω`, which is the smallest element (in the
//! order above) of multiplicative order `q - 1`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// An element of some [`FiniteField`], as a packed coefficient vector.
///
/// The value carries no reference to its field; callers keep track of which
/// field it belongs to. [`FieldElement`] is the checked alternative.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: Elem,
    // exp[i] = ω^i for 0 <= i < q - 1
    exp: Vec<u32>,
    // log[a] for a != 0; log[0] is unused
    log: Vec<u32>,
    neg: Vec<u32>,
    // full addition table for small extension fields
    add: Option<Vec<u16>>,
}

/// The finite field `F_{p^k}` with a fixed modulus and primitive element.
///
/// Cloning is cheap; all clones share the same tables.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.0.p)
            .field("k", &self.0.k)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.k)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Default moduli: `F_4: x^2+x+1`, `F_8: x^3+x+1`, `F_9: x^2+2x+2`. Other
/// extension fields use the smallest primitive polynomial, where polynomials
/// are compared by their packed lower coefficients.
pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    match (p, k) {
        (_, 1) => vec![0, 1],
        (2, 2) => vec![1, 1, 1],
        (2, 3) => vec![1, 1, 0, 1],
        (3, 2) => vec![2, 2, 1],
        _ => {
            let count = (p as u64).pow(k);
            (0..count)
                .map(|code| {
                    let mut m = unpack(code as u32, p, k);
                    m.push(1);
                    m
                })
                .find(|m| irreducible(m, p) && x_is_primitive(m, p, k))
                .expect("a primitive polynomial exists for every degree")
        }
    }
}

fn unpack(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let c = code % p;
            code /= p;
            c
        })
        .collect()
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

// remainder of a modulo the monic polynomial m, over F_p; both ascending
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                let sub = lead * c % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
    }
    r
}

fn irreducible(m: &[u32], p: u32) -> bool {
    let k = (m.len() - 1) as u32;
    for d in 1..=k / 2 {
        for code in 0..p.pow(d) {
            let mut div = unpack(code, p, d);
            div.push(1);
            if poly_rem(m, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn poly_pow(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let k = m.len() - 1;
    let mut result = vec![0u32; k];
    result[0] = 1;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

fn is_generator(a: &[u32], m: &[u32], p: u32, order: u64) -> bool {
    let one = {
        let mut v = vec![0u32; m.len() - 1];
        v[0] = 1;
        v
    };
    a.iter().any(|&c| c != 0)
        && prime_factors(order)
            .into_iter()
            .all(|r| poly_pow(a, order / r, m, p) != one)
}

fn x_is_primitive(m: &[u32], p: u32, k: u32) -> bool {
    if k < 2 {
        return false;
    }
    let mut x = vec![0u32; k as usize];
    x[1] = 1;
    is_generator(&x, m, p, (p as u64).pow(k) - 1)
}

impl FiniteField {
    /// Builds `F_{p^k}`. Without an explicit modulus the [`default_modulus`]
    /// table is used.
    pub fn new(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::param("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_FIELD_ORDER as u64);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge {
                p,
                k,
                cap: MAX_FIELD_ORDER,
            });
        };
        let q = q as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != k as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients, got {}",
                        k + 1,
                        m.len()
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
                }
                if m[k as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !irreducible(m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                m.to_vec()
            }
            None => default_modulus(p, k),
        };

        let order = (q - 1) as u64;
        let primitive = if q == 2 {
            vec![1]
        } else {
            (1..q)
                .map(|code| unpack(code, p, k))
                .find(|a| is_generator(a, &modulus, p, order))
                .expect("the multiplicative group of a field is cyclic")
        };

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![0u32; k as usize];
        cur[0] = 1;
        for i in 0..q - 1 {
            let code = pack(&cur, p);
            exp.push(code);
            log[code as usize] = i;
            cur = poly_mulmod(&cur, &primitive, &modulus, p);
        }

        let neg = (0..q)
            .map(|a| {
                let c: Vec<u32> = unpack(a, p, k).iter().map(|&c| (p - c) % p).collect();
                pack(&c, p)
            })
            .collect();

        let add = (k > 1 && q <= 1024).then(|| {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                let ca = unpack(a, p, k);
                for b in 0..q {
                    let cb = unpack(b, p, k);
                    let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                    table[(a * q + b) as usize] = pack(&s, p) as u16;
                }
            }
            table
        });

        Ok(FiniteField(Arc::new(Inner {
            p,
            k,
            q,
            modulus,
            primitive: Elem(pack(&primitive, p)),
            exp,
            log,
            neg,
            add,
        })))
    }

    /// `F_p` for a prime `p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// The default field of order `q`.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q as u64).ok_or_else(|| Error::param(format!("{q} is not a prime power")))?;
        Self::new(p, k, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Ascending coefficients of the modulus, length `k + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn primitive(&self) -> Elem {
        self.0.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.0.q).map(Elem)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.q
    }

    /// `n · 1` for an integer `n`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.0.k as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::param(format!(
                "{coeffs:?} is not a coefficient vector over F_{}",
                self.0.p
            )));
        }
        Ok(Elem(pack(coeffs, self.0.p)))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        unpack(a.0, self.0.p, self.0.k)
    }

    /// Whether `a` lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: Elem) -> bool {
        a.0 < self.0.p
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if f.k == 1 {
            let s = a.0 + b.0;
            Elem(if s >= f.p { s - f.p } else { s })
        } else if let Some(t) = &f.add {
            Elem(t[(a.0 * f.q + b.0) as usize] as u32)
        } else {
            let (mut x, mut y) = (a.0, b.0);
            let mut out = 0;
            let mut scale = 1;
            for _ in 0..f.k {
                out += ((x % f.p + y % f.p) % f.p) * scale;
                x /= f.p;
                y /= f.p;
                scale *= f.p;
            }
            Elem(out)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let f = &*self.0;
        let mut e = f.log[a.index()] + f.log[b.index()];
        let n = f.q - 1;
        if e >= n {
            e -= n;
        }
        Elem(f.exp[e as usize])
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let f = &*self.0;
        let n = f.q - 1;
        let l = f.log[a.index()];
        Ok(Elem(f.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer exponent; negative exponents go through the
    /// inverse, and `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        if a.0 == 0 {
            return match e {
                0 => Ok(Elem::ONE),
                e if e > 0 => Ok(Elem::ZERO),
                _ => Err(Error::DivisionByZero),
            };
        }
        let n = (self.0.q - 1) as i64;
        let l = self.0.log[a.index()] as i64;
        Ok(Elem(self.0.exp[(l * e.rem_euclid(n)).rem_euclid(n) as usize]))
    }

    /// `ω^j`.
    pub fn omega_pow(&self, j: i64) -> Elem {
        let n = (self.0.q - 1) as i64;
        Elem(self.0.exp[j.rem_euclid(n) as usize])
    }

    /// Discrete logarithm to base `ω`.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a.0 != 0).then(|| self.0.log[a.index()])
    }

    pub fn order(&self, a: Elem) -> Option<u32> {
        let l = self.log(a)?;
        let n = self.0.q - 1;
        Some(n / num_integer::gcd(n, l))
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as i64).expect("nonnegative exponent")
    }

    /// Parses `"w"`, `"w^j"` or a decimal integer into an element.
    ///
    /// Integers denote multiples of 1. In extension fields only `0..p` are
    /// accepted, so an integer can never be mistaken for a packed element.
    pub fn parse_token(&self, token: &str) -> Result<Elem> {
        let t = token.trim();
        if t == "w" {
            return Ok(self.omega_pow(1));
        }
        if let Some(rest) = t.strip_prefix("w^") {
            let rest = rest.trim_start_matches('{').trim_end_matches('}');
            let j: i64 = rest
                .parse()
                .map_err(|_| Error::param(format!("bad exponent in token {t:?}")))?;
            return Ok(self.omega_pow(j));
        }
        let n: i64 = t
            .parse()
            .map_err(|_| Error::param(format!("malformed field token {t:?}")))?;
        if self.0.k > 1 && !(0..self.0.p as i64).contains(&n) {
            return Err(Error::param(format!(
                "integer token {n} is ambiguous in {self}; use 0..{} or w^j",
                self.0.p - 1
            )));
        }
        Ok(self.from_int(n))
    }

    /// Inverse of [`parse_token`](Self::parse_token): integers for the prime
    /// subfield, `w^j` otherwise.
    pub fn format_token(&self, a: Elem) -> String {
        if self.is_prime_subfield(a) {
            a.0.to_string()
        } else {
            match self.log(a) {
                Some(1) => "w".to_string(),
                Some(j) => format!("w^{j}"),
                None => unreachable!("zero is in the prime subfield"),
            }
        }
    }

    pub fn element(&self, value: Elem) -> Result<FieldElement> {
        if !self.contains(value) {
            return Err(Error::param(format!("{} is not an element of {self}", value.0)));
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    pub fn dot(&self, a: &[Elem; 3], b: &[Elem; 3]) -> Elem {
        let s = self.add(self.mul(a[0], b[0]), self.mul(a[1], b[1]));
        self.add(s, self.mul(a[2], b[2]))
    }

    pub fn cross(&self, a: &[Elem; 3], b: &[Elem; 3]) -> [Elem; 3] {
        [
            self.sub(self.mul(a[1], b[2]), self.mul(a[2], b[1])),
            self.sub(self.mul(a[2], b[0]), self.mul(a[0], b[2])),
            self.sub(self.mul(a[0], b[1]), self.mul(a[1], b[0])),
        ]
    }

    pub fn det3(&self, a: &[Elem; 3], b: &[Elem; 3], c: &[Elem; 3]) -> Elem {
        self.dot(a, &self.cross(b, c))
    }

    /// A field isomorphism onto `other`, as a table indexed by element:
    /// `x` is sent to the smallest root of this field's modulus in `other`.
    pub fn isomorphism_to(&self, other: &FiniteField) -> Result<Vec<Elem>> {
        if self.q() != other.q() || self.p() != other.p() {
            return Err(Error::MixedFields);
        }
        let m = self.modulus();
        let root = other
            .elements()
            .find(|&r| {
                let mut acc = Elem::ZERO;
                for &c in m.iter().rev() {
                    acc = other.add(other.mul(acc, r), other.from_int(c as i64));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::Inconsistent("modulus has no root in target field".into()))?;
        Ok(self
            .elements()
            .map(|a| {
                let mut acc = Elem::ZERO;
                for &c in self.coeffs(a).iter().rev() {
                    acc = other.add(other.mul(acc, root), other.from_int(c as i64));
                }
                acc
            })
            .collect())
    }
}

/// A field element bundled with its field, for arithmetic that must reject
/// operands from different fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: FiniteField,
    value: Elem,
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn wrap(&self, value: Elem) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        Ok(self.wrap(self.field.pow(self.value, e)?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_token(self.value))
    }
}
