//! Explicit arrangement families.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::Arrangement;
use crate::cyclotomic::{CycloElement, Trig};
use crate::error::{Error, Result};
use crate::gf::{is_prime, Elem, FiniteField};
use crate::projplane::{Plane, ProjLine, ProjPoint};
use crate::search::IncidenceStructure;

fn v(f: &FiniteField, a: i64, b: i64, c: i64) -> [Elem; 3] {
    [f.from_int(a), f.from_int(b), f.from_int(c)]
}

/// `k` lines through `(0,0,1)` (the first ones in plane order) and the
/// transversal `(0,0,1)^⊥`.
pub fn near_pencil(f: &FiniteField, k: usize) -> Result<Arrangement> {
    let q = f.q() as usize;
    if !(2..=q + 1).contains(&k) {
        return Err(Error::param(format!("pencil size {k} outside 2..={}", q + 1)));
    }
    let plane = Plane::shared(f)?;
    let center = plane.index_of(v(f, 0, 0, 1))?;
    let mut lines: Vec<usize> = plane.points_on(center).iter().take(k).map(|&l| l as usize).collect();
    lines.push(center);
    Arrangement::from_indices(plane, lines)
}

/// `{(0,1,a)^⊥} ∪ {(1,a,a²)^⊥}` over all `a`, plus `(1,b,0)^⊥` for `b ∈ B`.
pub fn d_b(f: &FiniteField, b: &[Elem]) -> Result<Arrangement> {
    if b.iter().any(|x| x.is_zero()) {
        return Err(Error::param("B must not contain 0"));
    }
    if b.iter().any(|x| !f.contains(*x)) {
        return Err(Error::param("B must consist of field elements"));
    }
    let mut normals = Vec::new();
    for a in f.elements() {
        normals.push([Elem::ZERO, Elem::ONE, a]);
    }
    for a in f.elements() {
        normals.push([Elem::ONE, a, f.mul(a, a)]);
    }
    for &x in b {
        normals.push([Elem::ONE, x, Elem::ZERO]);
    }
    Arrangement::from_normals(f, &normals)
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
}

/// `(1/n) Σ_{d|n} φ(n/d) 2^d` with `n = q − 1`: the number of classes of
/// arrangements `D_B` for odd `q`.
pub fn d_b_class_count(q: u32) -> Result<u64> {
    if q.is_multiple_of(2) {
        return Err(Error::param("the class count is stated for odd q"));
    }
    crate::gf::prime_power(q as u64).ok_or_else(|| Error::param(format!("{q} is not a prime power")))?;
    let n = (q - 1) as u64;
    let sum: u64 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| totient(n / d) << d)
        .sum();
    Ok(sum / n)
}

/// A removal pattern for [`max_deletion`]: the line `H`, `q − 1` points on
/// it, and for each point `q − 1` further lines through it.
#[derive(Clone, Debug)]
pub struct DeletionPattern {
    pub h: ProjLine,
    pub points: Vec<ProjPoint>,
    pub removals: Vec<Vec<ProjLine>>,
}

/// The full plane minus the lines of a valid removal pattern.
pub fn max_deletion(f: &FiniteField, pattern: &DeletionPattern) -> Result<Arrangement> {
    let q = f.q() as usize;
    let bad = |m: &str| Err(Error::param(format!("invalid deletion pattern: {m}")));
    if pattern.points.len() != q - 1 || pattern.removals.len() != q - 1 {
        return bad("need q-1 points with one removal list each");
    }
    let distinct: HashSet<&ProjPoint> = pattern.points.iter().collect();
    if distinct.len() != q - 1 {
        return bad("points must be distinct");
    }
    let plane = Plane::shared(f)?;
    let mut removed = HashSet::new();
    for (p, lines) in pattern.points.iter().zip(&pattern.removals) {
        if !p.incident(f, &pattern.h) {
            return bad("point not on H");
        }
        if lines.len() != q - 1 {
            return bad("each point needs q-1 removed lines");
        }
        for l in lines {
            if *l == pattern.h {
                return bad("H itself cannot be removed");
            }
            if !p.incident(f, l) {
                return bad("removed line misses its point");
            }
            if !removed.insert(plane.index(l)) {
                return bad("line removed twice");
            }
        }
    }
    Arrangement::from_indices(plane.clone(), (0..plane.len()).filter(|l| !removed.contains(l)))
}

/// A uniformly random valid deletion pattern from a seeded generator.
pub fn random_deletion_pattern(f: &FiniteField, seed: u64) -> Result<DeletionPattern> {
    let plane = Plane::shared(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = f.q() as usize;
    let h_idx = rng.random_range(0..plane.len());
    let h = plane.point(h_idx);
    let mut on_h: Vec<u32> = plane.points_on(h_idx).to_vec();
    on_h.shuffle(&mut rng);
    on_h.truncate(q - 1);
    let mut points = Vec::new();
    let mut removals = Vec::new();
    for &p in &on_h {
        let mut through: Vec<u32> = plane
            .points_on(p as usize)
            .iter()
            .copied()
            .filter(|&l| l as usize != h_idx)
            .collect();
        through.shuffle(&mut rng);
        through.truncate(q - 1);
        points.push(plane.point(p as usize));
        removals.push(through.iter().map(|&l| plane.point(l as usize)).collect());
    }
    Ok(DeletionPattern { h, points, removals })
}

/// The pattern on `H = (1,0,0)^⊥` with points `(0,1,z)`, `z ≠ 0`, keeping
/// `(0,1,−1/z)^⊥` at each; it reproduces [`full3q`].
pub fn full3q_pattern(f: &FiniteField) -> Result<DeletionPattern> {
    let plane = Plane::shared(f)?;
    let h = ProjPoint::normalize(f, v(f, 1, 0, 0))?;
    let mut points = Vec::new();
    let mut removals = Vec::new();
    for z in f.nonzero() {
        let p = ProjPoint::normalize(f, [Elem::ZERO, Elem::ONE, z])?;
        let keep = ProjPoint::normalize(f, [Elem::ZERO, Elem::ONE, f.neg(f.inv(z)?)])?;
        let through = plane.points_on(plane.index(&p));
        removals.push(
            through
                .iter()
                .map(|&l| plane.point(l as usize))
                .filter(|l| *l != h && *l != keep)
                .collect(),
        );
        points.push(p);
    }
    Ok(DeletionPattern { h, points, removals })
}

/// `{(1,a,0)^⊥, (1,0,a)^⊥, (0,1,a)^⊥ : a ∈ F_q} ∪ {(0,0,1)^⊥}`, 3q lines.
pub fn full3q(f: &FiniteField) -> Result<Arrangement> {
    let all: Vec<Elem> = f.elements().collect();
    coordinate_family(f, &all)
}

fn coordinate_family(f: &FiniteField, values: &[Elem]) -> Result<Arrangement> {
    let mut normals = vec![v(f, 0, 0, 1)];
    for &a in values {
        normals.push([Elem::ONE, a, Elem::ZERO]);
        normals.push([Elem::ONE, Elem::ZERO, a]);
        normals.push([Elem::ZERO, Elem::ONE, a]);
    }
    Arrangement::from_normals(f, &normals)
}

fn subgroup(f: &FiniteField, e: u32) -> Result<Vec<Elem>> {
    let n = f.q() - 1;
    if e == 0 || !n.is_multiple_of(e) {
        return Err(Error::param(format!("{e} does not divide q-1 = {n}")));
    }
    let step = (n / e) as i64;
    Ok((0..e as i64).map(|j| f.omega_pow(j * step)).collect())
}

/// Lines `x_i = h x_j` for `h` in the subgroup `H` of order `e` of `F_q^×`,
/// plus the coordinate lines: `3e + 3` lines with the incidence of the
/// reflection arrangement of `G(e,1,3)`.
///
/// The normals are `(1,−h,0)`, `(1,0,−h)`, `(0,1,−h)`. With `+h` instead the
/// set is only the same when `−1 ∈ H` or `q` is even; see
/// [`ge13_plus_sign`].
pub fn ge13(f: &FiniteField, e: u32) -> Result<Arrangement> {
    let mut values: Vec<Elem> = subgroup(f, e)?.into_iter().map(|h| f.neg(h)).collect();
    values.push(Elem::ZERO);
    coordinate_family(f, &values)
}

/// The family with normals `(1,h,0)`, `(1,0,h)`, `(0,1,h)`, `h ∈ H ∪ {0}`.
pub fn ge13_plus_sign(f: &FiniteField, e: u32) -> Result<Arrangement> {
    let mut values = subgroup(f, e)?;
    values.push(Elem::ZERO);
    coordinate_family(f, &values)
}

/// Twelve lines over `F_4` (with `ω² = ω + 1`) forming a simplicial
/// arrangement with the incidences of the reflection arrangement of `G₂₅`.
pub fn g25f4() -> Result<Arrangement> {
    let f = FiniteField::of_order(4)?;
    let w = |j: i64| f.omega_pow(j);
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let normals = [
        [o, o, z],
        [o, o, w(1)],
        [z, z, o],
        [o, z, w(1)],
        [z, o, w(2)],
        [o, w(2), w(2)],
        [z, o, z],
        [o, o, o],
        [o, w(2), z],
        [o, w(1), z],
        [z, o, w(1)],
        [o, w(2), w(1)],
    ];
    Arrangement::from_normals(&f, &normals)
}

/// Whether `a` could come from [`max_deletion`]: `3q` lines and a line
/// carrying at least `q − 1` double points.
pub fn has_max_deletion_shape(a: &Arrangement) -> bool {
    let q = a.q() as usize;
    if a.len() != 3 * q {
        return false;
    }
    let plane = a.plane();
    let doubles: HashSet<u32> = a
        .profile()
        .points
        .iter()
        .filter(|&&(_, m)| m == 2)
        .map(|&(p, _)| p)
        .collect();
    a.lines().iter().any(|&l| {
        plane
            .points_on(l as usize)
            .iter()
            .filter(|p| doubles.contains(p))
            .count()
            >= q - 1
    })
}

/// Exact normal vectors of `A(2n,1)` in `Q(ζ_M)`, `M = lcm(4, 2n)`.
#[derive(Clone, Debug)]
pub struct A2n1 {
    pub n: u32,
    /// `α_m = (s(2m)c(2m+2) − c(2m)s(2m+2), s(2m+2) − s(2m), c(2m) − c(2m+2))`.
    pub alpha: Vec<[CycloElement; 3]>,
    /// `α'_m = (0, s(m), −c(m))`.
    pub alpha_prime: Vec<[CycloElement; 3]>,
}

pub fn a2n1_normals(n: u32) -> Result<A2n1> {
    if n < 2 {
        return Err(Error::param("A(2n,1) needs n >= 2"));
    }
    let t = Trig::new(n)?;
    let k = t.field();
    let mut alpha = Vec::new();
    let mut alpha_prime = Vec::new();
    for m in 0..n as i64 {
        let (s0, c0, s1, c1) = (t.s(2 * m), t.c(2 * m), t.s(2 * m + 2), t.c(2 * m + 2));
        let first = s0.mul(&c1)?.sub(&c0.mul(&s1)?)?;
        alpha.push([first, s1.sub(&s0)?, c0.sub(&c1)?]);
        alpha_prime.push([k.zero(), t.s(m), t.c(m).neg()]);
    }
    Ok(A2n1 { n, alpha, alpha_prime })
}

impl A2n1 {
    /// The `2n` normals, `α'_0..α'_{n−1}` then `α_0..α_{n−1}`.
    pub fn normals(&self) -> Vec<[CycloElement; 3]> {
        self.alpha_prime.iter().chain(&self.alpha).cloned().collect()
    }

    /// Incidence structure from exact concurrency tests.
    pub fn incidence(&self) -> Result<IncidenceStructure> {
        let normals = self.normals();
        let k = normals[0][0].field().clone();
        let mut err = None;
        let inc = IncidenceStructure::from_concurrency(normals.len(), |a, b, c| {
            match k.det3(&[normals[a].clone(), normals[b].clone(), normals[c].clone()]) {
                Ok(d) => d.is_zero(),
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => inc,
        }
    }
}

/// Result of comparing `D_∅` over `F_q` with `A(2q,1)` triple by triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    pub q: u32,
    /// Index shift `c` in `(1,a,a²) ↦ α_{(a+c) mod q}`.
    pub shift: u32,
    pub triples: usize,
    pub concurrent: usize,
    /// Triples whose concurrency differs between the two sides.
    pub mismatches: Vec<[usize; 3]>,
}

impl PhiReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks that `(0,1,a) ↦ α'_a`, `(1,a,a²) ↦ α_{(a+1) mod q}` preserves
/// concurrency of every triple of lines.
///
/// This map is an isomorphism only for `q = 3`; see [`verify_phi_shifted`]
/// and [`phi_shift`].
pub fn verify_phi(q: u32) -> Result<PhiReport> {
    verify_phi_shifted(q, 1)
}

/// Shift `c` for which `(1,a,a²) ↦ α_{(a+c) mod q}` (with `(0,1,a) ↦ α'_a`)
/// preserves concurrency: `c = (q−1)/2`.
pub fn phi_shift(q: u32) -> u32 {
    (q - 1) / 2
}

/// As [`verify_phi`] with `(1,a,a²) ↦ α_{(a+shift) mod q}`.
pub fn verify_phi_shifted(q: u32, shift: u32) -> Result<PhiReport> {
    if q.is_multiple_of(2) || !is_prime(q as u64) {
        return Err(Error::param(format!("q = {q} must be an odd prime")));
    }
    let f = FiniteField::prime(q)?;
    let a = a2n1_normals(q)?;
    let k = a.alpha[0][0].field().clone();
    let mut finite = Vec::new();
    let mut exact = Vec::new();
    for x in 0..q as i64 {
        finite.push(v(&f, 0, 1, x));
        exact.push(a.alpha_prime[x as usize].clone());
    }
    for x in 0..q as i64 {
        finite.push(v(&f, 1, x, x * x));
        exact.push(a.alpha[((x + shift as i64) % q as i64) as usize].clone());
    }
    let n = finite.len();
    let mut report = PhiReport {
        q,
        shift,
        triples: 0,
        concurrent: 0,
        mismatches: Vec::new(),
    };
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let lhs = f.det3(&finite[i], &finite[j], &finite[l]).is_zero();
                let rhs = k
                    .det3(&[exact[i].clone(), exact[j].clone(), exact[l].clone()])?
                    .is_zero();
                report.triples += 1;
                report.concurrent += lhs as usize;
                if lhs != rhs {
                    report.mismatches.push([i, j, l]);
                }
            }
        }
    }
    Ok(report)
}

/// Named constructions, for command-line use.
#[derive(Clone, Debug)]
pub enum Construction {
    NearPencil { k: usize },
    DB { b: Vec<i64> },
    MaxDeletion { seed: u64 },
    Full3q,
    Ge13 { e: u32 },
    G25F4,
}

impl Construction {
    pub fn build(&self, f: &FiniteField) -> Result<Arrangement> {
        match self {
            Construction::NearPencil { k } => near_pencil(f, *k),
            Construction::DB { b } => {
                let elems: Vec<Elem> = b.iter().map(|&x| f.from_int(x)).collect();
                d_b(f, &elems)
            }
            Construction::MaxDeletion { seed } => max_deletion(f, &random_deletion_pattern(f, *seed)?),
            Construction::Full3q => full3q(f),
            Construction::Ge13 { e } => ge13(f, *e),
            Construction::G25F4 => {
                if f.q() != 4 {
                    return Err(Error::param("g25f4 is defined over F_4"));
                }
                g25f4()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{canonize, incidence_of};

    fn field(q: u32) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    fn all_simplicial(a: &Arrangement) {
        assert!(a.is_simplicial().unwrap(), "{a:?}");
        a.check_identities().unwrap();
    }

    #[test]
    fn near_pencils() {
        let a = near_pencil(&field(3), 2).unwrap();
        assert_eq!(a.len(), 3);
        all_simplicial(&a);
        let a = near_pencil(&field(3), 4).unwrap();
        assert_eq!(a.len(), 5);
        all_simplicial(&a);
        assert!(a.is_near_pencil());
        for q in [2, 4, 5, 7] {
            let a = near_pencil(&field(q), q as usize + 1).unwrap();
            assert_eq!(a.len(), q as usize + 2);
            all_simplicial(&a);
        }
        assert!(near_pencil(&field(3), 5).is_err());
        assert!(near_pencil(&field(3), 1).is_err());
    }

    #[test]
    fn d_empty_and_d_b() {
        let f5 = field(5);
        let a = d_b(&f5, &[]).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!((a.n0(), a.n1()), (0, 15));
        all_simplicial(&a);
        let b = d_b(&f5, &[Elem(1), Elem(2)]).unwrap();
        assert_eq!(b.len(), 12);
        assert_eq!(b.n1(), 9);
        all_simplicial(&b);
        all_simplicial(&d_b(&field(4), &[]).unwrap());
        assert!(d_b(&f5, &[Elem(0)]).is_err());
    }

    // rotation classes of subsets of Z_n, by explicit enumeration
    fn necklaces(n: u32) -> u64 {
        let mut seen = HashSet::new();
        let mut classes = 0;
        for mask in 0u32..(1 << n) {
            if seen.contains(&mask) {
                continue;
            }
            classes += 1;
            let mut m = mask;
            for _ in 0..n {
                seen.insert(m);
                m = ((m << 1) | (m >> (n - 1))) & ((1 << n) - 1);
            }
        }
        classes
    }

    #[test]
    fn necklace_formula() {
        for (q, expected) in [(3, 3), (5, 6), (7, 14), (9, 36), (11, 108)] {
            assert_eq!(d_b_class_count(q).unwrap(), expected);
            assert_eq!(necklaces(q - 1), expected);
        }
        assert!(d_b_class_count(4).is_err());
    }

    #[test]
    fn d_b_classes_q5() {
        let f = field(5);
        let plane = Plane::shared(&f).unwrap();
        let mut forms = HashSet::new();
        for mask in 0u32..16 {
            let b: Vec<Elem> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| Elem(i + 1)).collect();
            let a = d_b(&f, &b).unwrap();
            all_simplicial(&a);
            forms.insert(canonize(&plane, a.lines()).unwrap().form);
        }
        assert_eq!(forms.len() as u64, d_b_class_count(5).unwrap());
    }

    #[test]
    fn full3q_family() {
        let a = full3q(&field(4)).unwrap();
        assert_eq!(a.len(), 12);
        assert_eq!(a.t_vector().to_string(), "2^9,3^9,5^3");
        assert_eq!(a.char_poly().unwrap().coeffs, [1, -12, 39, -28]);
        all_simplicial(&a);
        for q in [2, 3, 5, 7, 8, 9] {
            let f = field(q);
            let a = full3q(&f).unwrap();
            assert_eq!(a.len(), 3 * q as usize);
            let t = a.t_vector();
            assert_eq!(t.get(2), 3 * (q - 1));
            if q > 2 {
                assert_eq!(t.get(3), (q - 1) * (q - 1));
                assert_eq!(t.get(q + 1), 3);
            } else {
                assert_eq!(t.get(3), 4);
            }
            assert_eq!(t.points(), (3 * (q - 1) + (q - 1) * (q - 1) + 3) as u64);
            all_simplicial(&a);
            assert_eq!(max_deletion(&f, &full3q_pattern(&f).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn ge13_family() {
        let a = ge13(&field(7), 3).unwrap();
        assert_eq!(a.len(), 12);
        all_simplicial(&a);
        assert_eq!(ge13(&field(5), 4).unwrap(), full3q(&field(5)).unwrap());
        for q in [3, 4, 5, 7, 8, 9, 11, 13] {
            let f = field(q);
            for e in (1..q).filter(|e| (q - 1) % e == 0) {
                let a = ge13(&f, e).unwrap();
                assert_eq!(a.len(), 3 * e as usize + 3);
                all_simplicial(&a);
            }
        }
        assert!(ge13(&field(7), 4).is_err());
        // the +h variant differs exactly when -1 is outside H in odd characteristic
        for (q, e) in [(7, 3), (13, 3), (11, 5)] {
            let a = ge13_plus_sign(&field(q), e).unwrap();
            assert_eq!(a.len(), 3 * e as usize + 3);
            assert!(!a.is_simplicial().unwrap());
        }
        for (q, e) in [(7, 6), (13, 4), (8, 7), (4, 3)] {
            assert_eq!(ge13_plus_sign(&field(q), e).unwrap(), ge13(&field(q), e).unwrap());
        }
        // same incidence for the same e over different fields
        let x = incidence_of(&full3q(&field(4)).unwrap());
        let y = incidence_of(&ge13(&field(7), 3).unwrap());
        assert!(x.isomorphism(&y).is_some());
        assert_eq!(x.certificate(), y.certificate());
    }

    #[test]
    fn max_deletion_random_and_invalid() {
        for q in [3, 4, 5, 7] {
            let f = field(q);
            for seed in 0..10 {
                let a = max_deletion(&f, &random_deletion_pattern(&f, seed).unwrap()).unwrap();
                assert_eq!(a.len(), 3 * q as usize);
                assert_eq!((a.n0(), a.n1()), (0, 0));
                all_simplicial(&a);
                assert!(has_max_deletion_shape(&a));
            }
        }
        let f = field(5);
        let mut p = random_deletion_pattern(&f, 1).unwrap();
        p.removals[0].pop();
        assert!(max_deletion(&f, &p).is_err());
        let mut p = random_deletion_pattern(&f, 2).unwrap();
        p.removals[1][0] = p.h;
        assert!(max_deletion(&f, &p).is_err());
        let mut p = random_deletion_pattern(&f, 3).unwrap();
        p.points[1] = p.points[0];
        assert!(max_deletion(&f, &p).is_err());
    }

    #[test]
    fn g25_over_f4() {
        let a = g25f4().unwrap();
        assert_eq!(a.len(), 12);
        assert_eq!((a.n0(), a.n1()), (0, 0));
        all_simplicial(&a);
        assert!(!has_max_deletion_shape(&a));
    }

    #[test]
    fn a2n1_basics() {
        for n in [3, 4, 5, 7, 13] {
            let a = a2n1_normals(n).unwrap();
            let k = a.alpha[0][0].field().clone();
            assert_eq!(a.alpha_prime[0], [k.zero(), k.zero(), k.integer(-1)]);
            let t = Trig::new(n).unwrap();
            for m in 0..n as usize {
                assert_eq!(a.alpha[m][0], t.s(2).neg());
            }
            // 2n pairwise distinct projective lines: no two normals are parallel
            let normals = a.normals();
            for i in 0..normals.len() {
                assert!(normals[i].iter().any(|x| !x.is_zero()));
                for j in i + 1..normals.len() {
                    let (u, w) = (&normals[i], &normals[j]);
                    let cross = [
                        u[1].mul(&w[2]).unwrap().sub(&u[2].mul(&w[1]).unwrap()).unwrap(),
                        u[2].mul(&w[0]).unwrap().sub(&u[0].mul(&w[2]).unwrap()).unwrap(),
                        u[0].mul(&w[1]).unwrap().sub(&u[1].mul(&w[0]).unwrap()).unwrap(),
                    ];
                    assert!(cross.iter().any(|x| !x.is_zero()), "n={n} {i} {j}");
                }
            }
        }
        assert!(a2n1_normals(14).is_err());
        // n = 2: α_0 = (0,0,2) is parallel to α'_0
        let a = a2n1_normals(2).unwrap();
        assert!(a.alpha[0][0].is_zero() && a.alpha[0][1].is_zero());
    }

    #[test]
    fn phi_small() {
        let r = verify_phi(3).unwrap();
        assert!(r.holds());
        assert_eq!(r.triples, 20);
        // the stated shift fails from q = 5 on; (q-1)/2 works
        assert_eq!(verify_phi(5).unwrap().mismatches.len(), 20);
        for q in [3, 5, 7] {
            assert!(verify_phi_shifted(q, phi_shift(q)).unwrap().holds());
        }
        assert!(verify_phi(4).is_err());
        assert!(verify_phi(9).is_err());
    }

    #[test]
    fn a14_matches_d_empty_over_f7() {
        let inc = a2n1_normals(7).unwrap().incidence().unwrap();
        let d = incidence_of(&d_b(&field(7), &[]).unwrap());
        assert!(inc.isomorphism(&d).is_some());
    }
}
