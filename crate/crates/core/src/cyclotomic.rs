//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are rational coefficient vectors in the power basis
//! `1, ζ, ..., ζ^{φ(m)-1}`, always reduced modulo the cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest supported conductor.
pub const MAX_CONDUCTOR: u32 = 200;

/// Largest `n` accepted by the `A(2n,1)` trigonometric helpers.
pub const MAX_HALF_PERIOD: u32 = 13;

type Poly = Vec<BigRational>;

/// The `m`-th cyclotomic polynomial, ascending integer coefficients.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    static MEMO: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(p) = memo.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Φ_d with d | m, d < m
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = div_exact_monic(&num, &cyclotomic_polynomial(d));
    }
    memo.lock().unwrap().insert(m, num.clone());
    num
}

fn div_exact_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut quo = vec![0i64; a.len() - db];
    for i in (0..quo.len()).rev() {
        let c = r[i + db];
        quo[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quo
}

struct Inner {
    m: u32,
    // monic, ascending; length φ(m) + 1
    modulus: Vec<BigRational>,
}

/// The cyclotomic field `Q(ζ_m)`.
#[derive(Clone)]
pub struct CycloField(Arc<Inner>);

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.0.m == other.0.m
    }
}

impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.0.m)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = b[db].recip();
    let mut quo = vec![BigRational::zero(); r.len() - db];
    for i in (0..quo.len()).rev() {
        let c = &r[i + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
        }
        quo[i] = c;
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut quo);
    (quo, r)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

impl CycloField {
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=MAX_CONDUCTOR).contains(&m) {
            return Err(Error::CapExceeded {
                what: format!("cyclotomic conductor {m}"),
                limit: MAX_CONDUCTOR as u64,
            });
        }
        let modulus = cyclotomic_polynomial(m).into_iter().map(rat).collect();
        Ok(CycloField(Arc::new(Inner { m, modulus })))
    }

    pub fn conductor(&self) -> u32 {
        self.0.m
    }

    /// `φ(m)`, the degree over `Q`.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    /// Integer coefficients of `Φ_m`, ascending.
    pub fn polynomial(&self) -> Vec<i64> {
        cyclotomic_polynomial(self.0.m)
    }

    fn reduce(&self, p: Poly) -> CycloElement {
        let (_, mut r) = poly_divrem(&p, &self.0.modulus);
        r.resize(self.degree(), BigRational::zero());
        CycloElement {
            field: self.clone(),
            coeffs: r,
        }
    }

    pub fn zero(&self) -> CycloElement {
        self.reduce(Vec::new())
    }

    pub fn one(&self) -> CycloElement {
        self.rational(BigRational::one())
    }

    pub fn integer(&self, n: i64) -> CycloElement {
        self.rational(rat(n))
    }

    pub fn rational(&self, r: BigRational) -> CycloElement {
        self.reduce(vec![r])
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CycloElement {
        let e = k.rem_euclid(self.0.m as i64) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        self.reduce(p)
    }

    /// Element from power-basis coefficients (reduced if longer than `φ(m)`).
    pub fn from_coeffs(&self, coeffs: Vec<BigRational>) -> CycloElement {
        self.reduce(coeffs)
    }

    /// Determinant of a 3×3 matrix by cofactor expansion along the first row.
    pub fn det3(&self, rows: &[[CycloElement; 3]; 3]) -> Result<CycloElement> {
        for r in rows.iter().flatten() {
            if r.field != *self {
                return Err(Error::MixedFields);
            }
        }
        let [a, b, c] = rows;
        let minor = |x: &CycloElement, y: &CycloElement, z: &CycloElement, w: &CycloElement| {
            x.mul_unchecked(y).sub_unchecked(&z.mul_unchecked(w))
        };
        let t0 = a[0].mul_unchecked(&minor(&b[1], &c[2], &b[2], &c[1]));
        let t1 = a[1].mul_unchecked(&minor(&b[0], &c[2], &b[2], &c[0]));
        let t2 = a[2].mul_unchecked(&minor(&b[0], &c[1], &b[1], &c[0]));
        Ok(t0.sub_unchecked(&t1).add_unchecked(&t2))
    }
}

/// An element of a [`CycloField`].
#[derive(Clone, PartialEq, Eq)]
pub struct CycloElement {
    field: CycloField,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl CycloElement {
    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn check(&self, other: &CycloElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn add_unchecked(&self, other: &CycloElement) -> CycloElement {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub_unchecked(&self, other: &CycloElement) -> CycloElement {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    fn mul_unchecked(&self, other: &CycloElement) -> CycloElement {
        self.field.reduce(poly_mul(&self.coeffs, &other.coeffs))
    }

    pub fn add(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn mul(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> CycloElement {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> CycloElement {
        CycloElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Φ_m`.
    pub fn inv(&self) -> Result<CycloElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut a: Poly = self.coeffs.clone();
        trim(&mut a);
        let (mut r0, mut r1) = (self.field.0.modulus.clone(), a);
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (quo, rem) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // Φ_m is irreducible, so the gcd is a nonzero constant
        debug_assert_eq!(r0.len(), 1);
        let g = r0[0].recip();
        Ok(self.field.reduce(s0.into_iter().map(|c| c * &g).collect()))
    }

    pub fn div(&self, other: &CycloElement) -> Result<CycloElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }
}

/// Sines and cosines of multiples of `2π/2n`, lifted into
/// `Q(ζ_M)` with `M = lcm(4, 2n)` so that both `i` and `ζ_{2n}` exist.
#[derive(Clone, Debug)]
pub struct Trig {
    field: CycloField,
    n: u32,
    half: BigRational,
    // 1 / (2i) = -i/2
    inv_two_i: CycloElement,
}

impl Trig {
    pub fn new(n: u32) -> Result<Self> {
        if !(1..=MAX_HALF_PERIOD).contains(&n) {
            return Err(Error::CapExceeded {
                what: format!("half-period n = {n}"),
                limit: MAX_HALF_PERIOD as u64,
            });
        }
        let m = (4u32).lcm(&(2 * n));
        let field = CycloField::new(m)?;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let i = field.zeta_pow((m / 4) as i64);
        let inv_two_i = i.neg().scale(&half);
        Ok(Trig {
            field,
            n,
            half,
            inv_two_i,
        })
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    fn zeta_2n(&self, a: i64) -> CycloElement {
        let step = (self.field.conductor() / (2 * self.n)) as i64;
        self.field.zeta_pow(step * a)
    }

    /// `cos(2π a / 2n)`.
    pub fn c(&self, a: i64) -> CycloElement {
        self.zeta_2n(a).add_unchecked(&self.zeta_2n(-a)).scale(&self.half)
    }

    /// `sin(2π a / 2n)`.
    pub fn s(&self, a: i64) -> CycloElement {
        self.zeta_2n(a)
            .sub_unchecked(&self.zeta_2n(-a))
            .mul_unchecked(&self.inv_two_i)
    }
}

/// Sign of a real rational, for reports.
pub fn rational_sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
