//! The projective plane `PG(2, q)`.
//!
//! Points and lines share one representation: a homogeneous triple whose
//! first nonzero coordinate is 1. A line is stored by its normal vector, and
//! a point `v` lies on the line with normal `l` iff `v · l = 0`.
//!
//! Points are numbered `0..q²+q+1` in the order `(1,y,z)` (lexicographic in
//! the element encoding), then `(0,1,z)`, then `(0,0,1)`. Because lines are
//! dual points, the same numbering serves for lines.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gf::{Elem, FiniteField};

/// Largest `q` for which a [`Plane`] with full incidence tables is built.
pub const MAX_PLANE_ORDER: u32 = 64;

const MEET_TABLE_MAX_Q: u32 = 32;

/// A normalized homogeneous triple.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint([Elem; 3]);

/// Lines are dual points: the triple is the normal vector.
pub type ProjLine = ProjPoint;

impl ProjPoint {
    /// Scales `v` so its first nonzero coordinate is 1.
    pub fn normalize(f: &FiniteField, v: [Elem; 3]) -> Result<Self> {
        let lead = v.iter().copied().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        if lead == Elem::ONE {
            return Ok(ProjPoint(v));
        }
        let s = f.inv(lead)?;
        Ok(ProjPoint([f.mul(s, v[0]), f.mul(s, v[1]), f.mul(s, v[2])]))
    }

    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }

    /// Whether the point `self` lies on the line `line`.
    pub fn incident(&self, f: &FiniteField, line: &ProjLine) -> bool {
        f.dot(&self.0, &line.0).is_zero()
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0].0, self.0[1].0, self.0[2].0)
    }
}

/// The common point of two distinct lines (or, dually, the line through two
/// distinct points).
pub fn meet(f: &FiniteField, a: &ProjLine, b: &ProjLine) -> Result<ProjPoint> {
    if a == b {
        return Err(Error::EqualLines);
    }
    ProjPoint::normalize(f, f.cross(&a.0, &b.0))
}

/// Whether three nonzero vectors are linearly dependent. For normals this
/// means the three lines are concurrent.
pub fn collinear_triple(f: &FiniteField, a: &[Elem; 3], b: &[Elem; 3], c: &[Elem; 3]) -> Result<bool> {
    if [a, b, c].iter().any(|v| v.iter().all(|x| x.is_zero())) {
        return Err(Error::ZeroVector);
    }
    Ok(f.det3(a, b, c).is_zero())
}

/// `PG(2, q)` with its points enumerated and incidences tabulated.
pub struct Plane {
    field: FiniteField,
    q: u32,
    points: Vec<ProjPoint>,
    // on[l] = sorted indices of the q+1 points on line l
    on: Vec<Vec<u32>>,
    meet: Option<Vec<u16>>,
}

impl fmt::Debug for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PG(2,{})", self.field)
    }
}

/// All `q²+q+1` canonical points in the fixed plane order.
pub fn all_points(f: &FiniteField) -> Vec<ProjPoint> {
    let mut out = Vec::with_capacity(point_count(f.q()));
    for y in f.elements() {
        for z in f.elements() {
            out.push(ProjPoint([Elem::ONE, y, z]));
        }
    }
    for z in f.elements() {
        out.push(ProjPoint([Elem::ZERO, Elem::ONE, z]));
    }
    out.push(ProjPoint([Elem::ZERO, Elem::ZERO, Elem::ONE]));
    out
}

pub fn point_count(q: u32) -> usize {
    let q = q as usize;
    q * q + q + 1
}

impl Plane {
    pub fn new(field: FiniteField) -> Result<Arc<Plane>> {
        let q = field.q();
        if q > MAX_PLANE_ORDER {
            return Err(Error::CapExceeded {
                what: format!("plane order q = {q}"),
                limit: MAX_PLANE_ORDER as u64,
            });
        }
        let points = all_points(&field);
        let n = points.len();
        let mut on = vec![Vec::with_capacity(q as usize + 1); n];
        for (l, line) in points.iter().enumerate() {
            for (i, p) in points.iter().enumerate() {
                if p.incident(&field, line) {
                    on[l].push(i as u32);
                }
            }
        }
        let mut plane = Plane {
            field,
            q,
            points,
            on,
            meet: None,
        };
        if q <= MEET_TABLE_MAX_Q {
            let mut table = vec![u16::MAX; n * n];
            for v in 0..n {
                // lines through v are the dual of the points on v
                let through = &plane.on[v];
                for &a in through {
                    for &b in through {
                        if a != b {
                            table[a as usize * n + b as usize] = v as u16;
                        }
                    }
                }
            }
            plane.meet = Some(table);
        }
        Ok(Arc::new(plane))
    }

    /// A process-wide cached plane for `field`.
    pub fn shared(field: &FiniteField) -> Result<Arc<Plane>> {
        type Key = (u32, u32, Vec<u32>);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<Plane>>>> = OnceLock::new();
        let key = (field.p(), field.k(), field.modulus().to_vec());
        let cache = CACHE.get_or_init(Default::default);
        if let Some(p) = cache.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let plane = Plane::new(field.clone())?;
        cache.lock().unwrap().insert(key, plane.clone());
        Ok(plane)
    }

    pub fn of_order(q: u32) -> Result<Arc<Plane>> {
        Self::shared(&FiniteField::of_order(q)?)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of points, which is also the number of lines.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> ProjPoint {
        self.points[i]
    }

    /// Index of a canonical point in the plane order.
    pub fn index(&self, p: &ProjPoint) -> usize {
        let q = self.q as usize;
        let [a, b, c] = p.0;
        if a == Elem::ONE {
            b.index() * q + c.index()
        } else if b == Elem::ONE {
            q * q + c.index()
        } else {
            q * q + q
        }
    }

    /// Index of the point spanned by an arbitrary nonzero vector.
    pub fn index_of(&self, v: [Elem; 3]) -> Result<usize> {
        Ok(self.index(&ProjPoint::normalize(&self.field, v)?))
    }

    /// Points on line `l` (equivalently, by duality, lines through point `l`).
    pub fn points_on(&self, l: usize) -> &[u32] {
        &self.on[l]
    }

    pub fn incident(&self, point: usize, line: usize) -> bool {
        self.on[line].binary_search(&(point as u32)).is_ok()
    }

    /// Index of the common point of two distinct lines.
    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        if a == b {
            return Err(Error::EqualLines);
        }
        if let Some(t) = &self.meet {
            return Ok(t[a * self.len() + b] as usize);
        }
        let p = meet(&self.field, &self.points[a], &self.points[b])?;
        Ok(self.index(&p))
    }

    /// The line through two distinct points.
    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        self.meet(a, b)
    }
}
