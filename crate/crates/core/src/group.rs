//! `PGL₃(F_q)` acting on the lines of `PG(2, q)`.
//!
//! A matrix `g` acts on points by `v ↦ g v` and on lines (normal vectors) by
//! the inverse transpose, so incidence is preserved.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Elem, FiniteField};
use crate::projplane::Plane;

/// A 3×3 matrix over a finite field, row-major.
pub type Mat3 = [[Elem; 3]; 3];

/// Default largest `q` for exhaustive cycle-type tallies.
pub const DEFAULT_TALLY_MAX_Q: u32 = 7;

/// Default cap on the size of a generated subgroup.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

pub fn identity() -> Mat3 {
    let (o, z) = (Elem::ONE, Elem::ZERO);
    [[o, z, z], [z, o, z], [z, z, o]]
}

pub fn mat_mul(f: &FiniteField, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[Elem::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = Elem::ZERO;
            for k in 0..3 {
                s = f.add(s, f.mul(a[i][k], b[k][j]));
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn mat_vec(f: &FiniteField, a: &Mat3, v: &[Elem; 3]) -> [Elem; 3] {
    [f.dot(&a[0], v), f.dot(&a[1], v), f.dot(&a[2], v)]
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut t = *a;
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn det(f: &FiniteField, a: &Mat3) -> Elem {
    f.det3(&a[0], &a[1], &a[2])
}

/// Inverse via the adjugate.
pub fn mat_inv(f: &FiniteField, a: &Mat3) -> Result<Mat3> {
    let d = det(f, a);
    let dinv = f.inv(d)?;
    // rows of the adjugate are cross products of columns
    let t = transpose(a);
    let c0 = f.cross(&t[1], &t[2]);
    let c1 = f.cross(&t[2], &t[0]);
    let c2 = f.cross(&t[0], &t[1]);
    let mut out = [c0, c1, c2];
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = f.mul(*x, dinv);
        }
    }
    Ok(out)
}

/// Scales so the first nonzero entry in row-major order is 1, which picks
/// a unique representative of the projective class.
pub fn canonical(f: &FiniteField, a: &Mat3) -> Result<Mat3> {
    let lead = a
        .iter()
        .flatten()
        .copied()
        .find(|x| !x.is_zero())
        .ok_or(Error::ZeroVector)?;
    let s = f.inv(lead)?;
    Ok(a.map(|row| row.map(|x| f.mul(s, x))))
}

/// `|PGL₃(F_q)| = q⁸ − q⁶ − q⁵ + q³`.
pub fn pgl_order(q: u64) -> u64 {
    q.pow(8) - q.pow(6) - q.pow(5) + q.pow(3)
}

/// Permutation of point indices induced by `v ↦ a v`.
pub fn point_perm(plane: &Plane, a: &Mat3) -> Vec<u32> {
    let f = plane.field();
    plane
        .points()
        .iter()
        .map(|p| {
            let img = mat_vec(f, a, &p.coords());
            plane.index_of(img).expect("invertible matrix") as u32
        })
        .collect()
}

/// Permutation of line indices induced by `a` (normals map by `a^{-T}`).
pub fn line_perm(plane: &Plane, a: &Mat3) -> Result<Vec<u32>> {
    let dual = transpose(&mat_inv(plane.field(), a)?);
    Ok(point_perm(plane, &dual))
}

/// Sorted cycle lengths of a permutation.
pub fn cycle_type(perm: &[u32]) -> Vec<u32> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

/// An invertible matrix in canonical scaling, with its line permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    matrix: Mat3,
    perm: Arc<[u32]>,
}

impl GroupElement {
    pub fn new(plane: &Plane, matrix: &Mat3) -> Result<Self> {
        let f = plane.field();
        if det(f, matrix).is_zero() {
            return Err(Error::param("matrix is singular"));
        }
        let matrix = canonical(f, matrix)?;
        let perm = line_perm(plane, &matrix)?.into();
        Ok(GroupElement { matrix, perm })
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    /// Image of every line index.
    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn act_on_line(&self, line: usize) -> usize {
        self.perm[line] as usize
    }
}

/// Cycle types of the line action of every element of `PGL₃(F_q)`.
pub type CycleTypeTally = BTreeMap<Vec<u32>, u64>;

// Rows of canonical representatives: a normalized first row, then any rows.
fn normalized_vectors(f: &FiniteField) -> Vec<[Elem; 3]> {
    crate::projplane::all_points(f)
        .into_iter()
        .map(|p| p.coords())
        .collect()
}

fn all_vectors(f: &FiniteField) -> Vec<[Elem; 3]> {
    let mut out = Vec::with_capacity((f.q() as usize).pow(3));
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn check_tally_cap(q: u32, cap: u32) -> Result<()> {
    if q > cap {
        return Err(Error::CapExceeded {
            what: format!("exhaustive group enumeration for q = {q}"),
            limit: cap as u64,
        });
    }
    Ok(())
}

fn merge(mut a: HashMap<Vec<u32>, u64>, b: HashMap<Vec<u32>, u64>) -> HashMap<Vec<u32>, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Calls `visit` once for every element of `PGL₃(F_q)`, using the
/// representative whose first row is a normalized nonzero vector.
pub fn for_each_pgl_element(f: &FiniteField, mut visit: impl FnMut(&Mat3)) {
    let rest = all_vectors(f);
    for r0 in normalized_vectors(f) {
        for r1 in &rest {
            let c = f.cross(&r0, r1);
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            for r2 in &rest {
                if !f.dot(&c, r2).is_zero() {
                    visit(&[r0, *r1, *r2]);
                }
            }
        }
    }
}

/// Cycle-type tally over one representative per projective class: the
/// first row is a normalized point, the other rows are arbitrary.
///
/// The point action is tallied; the line action `g ↦ g^{-T}` is a bijection
/// of the group, so both tallies coincide.
pub fn cycle_type_tally(plane: &Plane, cap: u32) -> Result<CycleTypeTally> {
    check_tally_cap(plane.q(), cap)?;
    let f = plane.field();
    let firsts = normalized_vectors(f);
    let rest = all_vectors(f);
    let map = firsts
        .par_iter()
        .map(|r0| {
            let mut local: HashMap<Vec<u32>, u64> = HashMap::new();
            for r1 in &rest {
                let c = f.cross(r0, r1);
                if c.iter().all(|x| x.is_zero()) {
                    continue;
                }
                for r2 in &rest {
                    if f.dot(&c, r2).is_zero() {
                        continue;
                    }
                    let perm = point_perm(plane, &[*r0, *r1, *r2]);
                    *local.entry(cycle_type(&perm)).or_insert(0) += 1;
                }
            }
            local
        })
        .reduce(HashMap::new, merge);
    Ok(map.into_iter().collect())
}

/// The same tally by iterating all of `GL₃(F_q)` on lines and dividing by
/// the `q − 1` scalars.
pub fn cycle_type_tally_gl(plane: &Plane, cap: u32) -> Result<CycleTypeTally> {
    check_tally_cap(plane.q(), cap)?;
    let f = plane.field();
    let rest = all_vectors(f);
    let map = rest
        .par_iter()
        .map(|r0| {
            let mut local: HashMap<Vec<u32>, u64> = HashMap::new();
            for r1 in &rest {
                for r2 in &rest {
                    let m = [*r0, *r1, *r2];
                    if det(f, &m).is_zero() {
                        continue;
                    }
                    let perm = line_perm(plane, &m).expect("invertible");
                    *local.entry(cycle_type(&perm)).or_insert(0) += 1;
                }
            }
            local
        })
        .reduce(HashMap::new, merge);
    let scalars = (f.q() - 1) as u64;
    map.into_iter()
        .map(|(k, v)| {
            if v % scalars != 0 {
                Err(Error::Inconsistent(format!(
                    "cycle type count {v} not divisible by q-1"
                )))
            } else {
                Ok((k, v / scalars))
            }
        })
        .collect()
}

/// Coefficients of `F(t) = |G|⁻¹ Σ_g Π_cycles (1 + t^len)`, the number of
/// `k`-line arrangements up to projectivity, for `k = 0..=max_k`.
pub fn polya_polynomial(tally: &CycleTypeTally, max_k: Option<usize>) -> Result<Vec<BigUint>> {
    let n: u32 = tally
        .keys()
        .next()
        .map(|ct| ct.iter().sum())
        .ok_or_else(|| Error::param("empty tally"))?;
    let order: u64 = tally.values().sum();
    let top = max_k.unwrap_or(n as usize).min(n as usize);
    let mut sum = vec![BigUint::zero(); top + 1];
    for (ct, &count) in tally {
        let mut poly = vec![BigUint::zero(); top + 1];
        poly[0] = BigUint::one();
        for &len in ct {
            let len = len as usize;
            for d in (len..=top).rev() {
                let lower = poly[d - len].clone();
                poly[d] += lower;
            }
        }
        for (s, p) in sum.iter_mut().zip(poly) {
            *s += p * count;
        }
    }
    let order = BigUint::from(order);
    sum.into_iter()
        .map(|c| {
            if (&c % &order).is_zero() {
                Ok(c / &order)
            } else {
                Err(Error::Inconsistent("Polya sum not divisible by the group order".into()))
            }
        })
        .collect()
}

/// A subgroup of `PGL₃(F_q)` given by generators, with its elements.
#[derive(Clone, Debug)]
pub struct PermGroup {
    plane: Arc<Plane>,
    generators: Vec<GroupElement>,
    elements: Vec<Mat3>,
    orbits: Vec<Vec<u32>>,
}

impl PermGroup {
    /// Closes the generators under multiplication (breadth first).
    pub fn closure(plane: Arc<Plane>, generators: &[Mat3], cap: usize) -> Result<Self> {
        let f = plane.field().clone();
        let gens = generators
            .iter()
            .map(|m| GroupElement::new(&plane, m))
            .collect::<Result<Vec<_>>>()?;
        let id = identity();
        let mut seen: HashSet<Mat3> = HashSet::from([id]);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = canonical(&f, &mat_mul(&f, &x, g.matrix()))?;
                if seen.insert(y) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "subgroup closure".into(),
                            limit: cap as u64,
                        });
                    }
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        let orbits = orbits_of(plane.len(), gens.iter().map(|g| g.perm()));
        Ok(PermGroup {
            plane,
            generators: gens,
            elements,
            orbits,
        })
    }

    pub fn plane(&self) -> &Arc<Plane> {
        &self.plane
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[Mat3] {
        &self.elements
    }

    /// Line orbits, each sorted, ordered by their smallest line.
    pub fn orbits(&self) -> &[Vec<u32>] {
        &self.orbits
    }

    pub fn orbit_of(&self, line: usize) -> &[u32] {
        self.orbits
            .iter()
            .find(|o| o.binary_search(&(line as u32)).is_ok())
            .expect("orbits cover all lines")
    }
}

/// Orbits of the group generated by the given permutations.
pub fn orbits_of<'a>(n: usize, gens: impl Iterator<Item = &'a [u32]> + Clone) -> Vec<Vec<u32>> {
    let mut label = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![s as u32];
        label[s] = id;
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i] as usize;
            for g in gens.clone() {
                let y = g[x] as usize;
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y as u32);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// All 48 signed permutation matrices (entries 0, ±1).
pub fn signed_permutation_matrices(f: &FiniteField) -> Vec<Mat3> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for p in perms {
        for signs in 0..8 {
            let mut m = [[Elem::ZERO; 3]; 3];
            for i in 0..3 {
                let s = if signs >> i & 1 == 1 { -1 } else { 1 };
                m[i][p[i]] = f.from_int(s);
            }
            out.push(m);
        }
    }
    out
}
