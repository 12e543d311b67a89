//! Line arrangements in `PG(2, q)` and their combinatorial invariants.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gf::{Elem, FiniteField};
use crate::projplane::{Plane, ProjLine, ProjPoint};

/// Multiplicity histogram of the intersection points, `i ↦ t_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TVector(pub BTreeMap<u32, u32>);

impl TVector {
    pub fn from_multiplicities(ms: impl IntoIterator<Item = u32>) -> Self {
        let mut map = BTreeMap::new();
        for m in ms {
            *map.entry(m).or_insert(0) += 1;
        }
        TVector(map)
    }

    pub fn get(&self, i: u32) -> u32 {
        self.0.get(&i).copied().unwrap_or(0)
    }

    /// `Σ t_i`, the number of intersection points.
    pub fn points(&self) -> u64 {
        self.0.values().map(|&t| t as u64).sum()
    }

    /// `Σ i·t_i`.
    pub fn weighted(&self) -> u64 {
        self.0.iter().map(|(&i, &t)| i as u64 * t as u64).sum()
    }
}

/// Renders as `2^7,3^13,5^2`.
impl fmt::Display for TVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(i, t)| format!("{i}^{t}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for TVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for part in s.split([',', ' ']).filter(|p| !p.is_empty()) {
            let (i, t) = part
                .split_once('^')
                .ok_or_else(|| Error::param(format!("bad t-vector entry {part:?}")))?;
            let i: u32 = i
                .trim()
                .parse()
                .map_err(|_| Error::param(format!("bad multiplicity {i:?}")))?;
            let t: u32 = t.trim().parse().map_err(|_| Error::param(format!("bad count {t:?}")))?;
            if map.insert(i, t).is_some() {
                return Err(Error::param(format!("multiplicity {i} repeated")));
            }
        }
        Ok(TVector(map))
    }
}

/// `χ(t) = t³ + c[1] t² + c[2] t + c[3]` with `c[0] = 1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CharPoly3 {
    pub coeffs: [i64; 4],
}

impl CharPoly3 {
    /// `t³ − n t² + b₂ t + μ₀` with `μ₀ = −(1 − n + b₂)`.
    pub fn from_counts(n: i64, b2: i64) -> Self {
        CharPoly3 {
            coeffs: [1, -n, b2, -(1 - n + b2)],
        }
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().fold(0, |acc, &c| acc * t + c)
    }
}

impl fmt::Display for CharPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [_, a, b, c] = self.coeffs;
        write!(
            f,
            "t^3 {} {}t^2 {} {}t {} {}",
            if a < 0 { '-' } else { '+' },
            a.abs(),
            if b < 0 { '-' } else { '+' },
            b.abs(),
            if c < 0 { '-' } else { '+' },
            c.abs()
        )
    }
}

/// Intersection data of an arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    /// `(point index, m_v)` for every point on at least two lines, by index.
    pub points: Vec<(u32, u32)>,
    /// Points of the plane on no line.
    pub n0: u64,
    /// Points of the plane on exactly one line.
    pub n1: u64,
    /// For each line (in arrangement order), the number of intersection
    /// points on it.
    pub points_per_line: Vec<u32>,
}

impl Profile {
    pub fn multiplicity_sum(&self) -> u64 {
        self.points.iter().map(|&(_, m)| m as u64).sum()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.points.iter().map(|&(_, m)| m).max().unwrap_or(0)
    }
}

#[derive(Debug)]
struct Invariants {
    profile: Profile,
    tvector: TVector,
}

/// A set of lines of one projective plane.
///
/// Lines are kept as sorted, duplicate-free plane indices. Invariants are
/// computed on first use and cached.
#[derive(Clone)]
pub struct Arrangement {
    plane: Arc<Plane>,
    lines: Vec<u32>,
    inv: OnceLock<Arc<Invariants>>,
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.plane.field() == other.plane.field() && self.lines == other.lines
    }
}

impl Eq for Arrangement {}

impl fmt::Debug for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Arrangement")
            .field("q", &self.q())
            .field("lines", &self.normals())
            .finish()
    }
}

impl Arrangement {
    /// Normalizes, deduplicates and sorts the given normal vectors.
    pub fn from_normals(field: &FiniteField, normals: &[[Elem; 3]]) -> Result<Self> {
        let plane = Plane::shared(field)?;
        let idx = normals.iter().map(|&v| plane.index_of(v)).collect::<Result<Vec<_>>>()?;
        Self::from_indices(plane, idx)
    }

    pub fn from_indices(plane: Arc<Plane>, lines: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = plane.len();
        let mut v = Vec::new();
        for l in lines {
            if l >= n {
                return Err(Error::param(format!("line index {l} out of range for {plane:?}")));
            }
            v.push(l as u32);
        }
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::param("an arrangement needs at least one line"));
        }
        Ok(Arrangement {
            plane,
            lines: v,
            inv: OnceLock::new(),
        })
    }

    pub fn plane(&self) -> &Arc<Plane> {
        &self.plane
    }

    pub fn field(&self) -> &FiniteField {
        self.plane.field()
    }

    pub fn q(&self) -> u32 {
        self.plane.q()
    }

    pub fn lines(&self) -> &[u32] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn contains(&self, line: usize) -> bool {
        self.lines.binary_search(&(line as u32)).is_ok()
    }

    pub fn normals(&self) -> Vec<ProjLine> {
        self.lines.iter().map(|&l| self.plane.point(l as usize)).collect()
    }

    /// The image under a field isomorphism given as an element table, such
    /// as one from [`FiniteField::isomorphism_to`].
    pub fn transport(&self, target: &FiniteField, phi: &[Elem]) -> Result<Arrangement> {
        if phi.len() != self.field().q() as usize || target.q() != self.q() {
            return Err(Error::MixedFields);
        }
        let normals: Vec<[Elem; 3]> = self
            .normals()
            .iter()
            .map(|n| n.coords().map(|x| phi[x.index()]))
            .collect();
        Arrangement::from_normals(target, &normals)
    }

    fn invariants(&self) -> &Invariants {
        self.inv.get_or_init(|| {
            let profile = scan_profile(&self.plane, &self.lines);
            let tvector = TVector::from_multiplicities(profile.points.iter().map(|&(_, m)| m));
            Arc::new(Invariants { profile, tvector })
        })
    }

    /// Intersection profile by scanning every point of the plane.
    pub fn profile(&self) -> &Profile {
        &self.invariants().profile
    }

    /// Intersection points and multiplicities computed from pairwise meets
    /// instead of a plane scan.
    pub fn profile_pairwise(&self) -> Vec<(u32, u32)> {
        let mut pts: Vec<u32> = Vec::new();
        for (i, &a) in self.lines.iter().enumerate() {
            for &b in &self.lines[i + 1..] {
                let v = self.plane.meet(a as usize, b as usize).expect("distinct lines");
                pts.push(v as u32);
            }
        }
        pts.sort_unstable();
        pts.dedup();
        let f = self.field();
        pts.into_iter()
            .map(|v| {
                let p = self.plane.point(v as usize);
                let m = self
                    .lines
                    .iter()
                    .filter(|&&l| p.incident(f, &self.plane.point(l as usize)))
                    .count();
                (v, m as u32)
            })
            .collect()
    }

    pub fn t_vector(&self) -> &TVector {
        &self.invariants().tvector
    }

    pub fn n0(&self) -> u64 {
        self.profile().n0
    }

    pub fn n1(&self) -> u64 {
        self.profile().n1
    }

    /// `|P|`, the number of intersection points.
    pub fn point_count(&self) -> usize {
        self.profile().points.len()
    }

    /// Not all lines pass through one point.
    pub fn is_essential(&self) -> bool {
        self.len() >= 3 && self.profile().max_multiplicity() < self.len() as u32
    }

    /// All lines but one pass through a common point.
    pub fn is_near_pencil(&self) -> bool {
        self.is_essential() && self.profile().max_multiplicity() == self.len() as u32 - 1
    }

    fn essential(&self) -> Result<()> {
        if self.is_essential() {
            Ok(())
        } else {
            Err(Error::NotEssential)
        }
    }

    /// `3(|P| − 1) = Σ m_v`.
    pub fn simplicial_by_points(&self) -> Result<bool> {
        self.essential()?;
        let p = self.profile();
        Ok(3 * (p.points.len() as u64 - 1) == p.multiplicity_sum())
    }

    /// `|A| = 3q − (3n₀ + 2n₁)/(q + 1)`.
    pub fn simplicial_by_count(&self) -> Result<bool> {
        self.essential()?;
        Ok(count_criterion(self.q(), self.len(), self.n0(), self.n1()))
    }

    /// `3χ(−1) + 2 Σ_H χ_{A^H}(−1) = 0`, where the rank-two restriction to
    /// `H` has `χ_{A^H}(−1) = 2 k_H` for `k_H` intersection points on `H`.
    pub fn simplicial_by_chi(&self) -> Result<bool> {
        let chi = self.char_poly()?;
        let restr: i64 = self.profile().points_per_line.iter().map(|&k| 2 * k as i64).sum();
        Ok(3 * chi.eval(-1) + 2 * restr == 0)
    }

    /// Runs all three tests and fails if they disagree.
    pub fn is_simplicial(&self) -> Result<bool> {
        let a = self.simplicial_by_points()?;
        let b = self.simplicial_by_count()?;
        let c = self.simplicial_by_chi()?;
        if a == b && b == c {
            Ok(a)
        } else {
            Err(Error::Inconsistent(format!(
                "simpliciality tests disagree: points={a} count={b} chi={c}"
            )))
        }
    }

    /// Characteristic polynomial from the rank-3 lattice: `μ(v) = m_v − 1`.
    pub fn char_poly(&self) -> Result<CharPoly3> {
        self.essential()?;
        let p = self.profile();
        let b2: i64 = p.points.iter().map(|&(_, m)| m as i64 - 1).sum();
        Ok(CharPoly3::from_counts(self.len() as i64, b2))
    }

    /// Number of chambers, `|χ(−1)|`.
    pub fn chambers(&self) -> Result<u64> {
        Ok(self.char_poly()?.eval(-1).unsigned_abs())
    }

    /// Checks the counting identities every arrangement in the plane obeys:
    /// the double count of incidences, `χ(q) = (q−1) n₀`, and
    /// `n₀ = q² − |A| q + q + f − |A|` with `2f` chambers.
    pub fn check_identities(&self) -> Result<()> {
        let q = self.q() as i64;
        let n = self.len() as i64;
        let p = self.profile();
        let (n0, n1) = (p.n0 as i64, p.n1 as i64);
        let fail = |what: &str| Err(Error::Inconsistent(format!("{what} fails for {self:?}")));
        if p.multiplicity_sum() as i64 + n1 != n * (q + 1) {
            return fail("incidence double count");
        }
        if n0 + n1 + p.points.len() as i64 != q * q + q + 1 {
            return fail("point partition");
        }
        if !self.is_essential() {
            return Ok(());
        }
        let chi = self.char_poly()?;
        if chi.eval(q) != (q - 1) * n0 {
            return fail("chi(q) = (q-1) n0");
        }
        let chambers = self.chambers()? as i64;
        if chambers % 2 != 0 || n0 != q * q - n * q + q + chambers / 2 - n {
            return fail("chamber identity for n0");
        }
        Ok(())
    }
}

/// The counting criterion on raw numbers, with the divisibility guard.
pub fn count_criterion(q: u32, lines: usize, n0: u64, n1: u64) -> bool {
    let s = 3 * n0 + 2 * n1;
    let q1 = q as u64 + 1;
    s.is_multiple_of(q1) && (lines as u64) + s / q1 == 3 * q as u64
}

fn scan_profile(plane: &Plane, lines: &[u32]) -> Profile {
    let mut counts = vec![0u32; plane.len()];
    for &l in lines {
        for &p in plane.points_on(l as usize) {
            counts[p as usize] += 1;
        }
    }
    let mut points = Vec::new();
    let (mut n0, mut n1) = (0, 0);
    for (i, &c) in counts.iter().enumerate() {
        match c {
            0 => n0 += 1,
            1 => n1 += 1,
            m => points.push((i as u32, m)),
        }
    }
    let points_per_line = lines
        .iter()
        .map(|&l| {
            plane
                .points_on(l as usize)
                .iter()
                .filter(|&&p| counts[p as usize] >= 2)
                .count() as u32
        })
        .collect();
    Profile {
        points,
        n0,
        n1,
        points_per_line,
    }
}

/// Intersection point of two arrangement lines, as a canonical point.
pub fn meet_point(a: &Arrangement, i: usize, j: usize) -> Result<ProjPoint> {
    let plane = a.plane();
    Ok(plane.point(plane.meet(a.lines()[i] as usize, a.lines()[j] as usize)?))
}
