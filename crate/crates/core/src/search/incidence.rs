//! Abstract point–line incidence structures, independent of any field.
//!
//! A structure has lines `0..n` and a list of blocks: each block is the set
//! of lines through one intersection point (at least two lines). Two lines
//! share at most one block.
//!
//! Isomorphism, automorphism counting and canonical certificates all work on
//! line permutations, since a line permutation determines the point map.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::projplane::Plane;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    n: usize,
    blocks: Vec<Vec<u32>>,
    // block index of the common point of two lines, NONE if they share none
    meet: Vec<u32>,
    on_line: Vec<Vec<u32>>,
}

/// A canonical certificate: equal iff the structures are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Certificate(pub Vec<u32>);

impl IncidenceStructure {
    pub fn from_blocks(n: usize, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut meet = vec![NONE; n * n];
        let mut on_line = vec![Vec::new(); n];
        let mut blocks: Vec<Vec<u32>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        blocks.sort();
        for (i, b) in blocks.iter().enumerate() {
            if b.len() < 2 {
                return Err(Error::Inconsistent("a point must lie on at least two lines".into()));
            }
            for &x in b {
                if x as usize >= n {
                    return Err(Error::Inconsistent(format!("line {x} out of range")));
                }
                on_line[x as usize].push(i as u32);
                for &y in b {
                    if x != y {
                        let slot = &mut meet[x as usize * n + y as usize];
                        if *slot != NONE {
                            return Err(Error::Inconsistent(format!("lines {x} and {y} share two points")));
                        }
                        *slot = i as u32;
                    }
                }
            }
        }
        Ok(IncidenceStructure {
            n,
            blocks,
            meet,
            on_line,
        })
    }

    /// Lines are numbered in arrangement order.
    pub fn from_arrangement(a: &Arrangement) -> Self {
        let plane = a.plane();
        let f = plane.field();
        let normals = a.normals();
        let blocks = a
            .profile()
            .points
            .iter()
            .map(|&(v, _)| {
                let p = plane.point(v as usize);
                normals
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| p.incident(f, l))
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        Self::from_blocks(a.len(), blocks).expect("arrangements are linear spaces")
    }

    /// Lines are numbered by position in `lines`.
    pub fn from_plane_lines(plane: &Plane, lines: &[u32]) -> Self {
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(lines.len() * (plane.q() as usize + 1));
        for (i, &l) in lines.iter().enumerate() {
            pairs.extend(plane.points_on(l as usize).iter().map(|&p| (p, i as u32)));
        }
        pairs.sort_unstable();
        let mut blocks = Vec::new();
        for group in pairs.chunk_by(|a, b| a.0 == b.0) {
            if group.len() >= 2 {
                blocks.push(group.iter().map(|&(_, i)| i).collect());
            }
        }
        Self::from_blocks(lines.len(), blocks).expect("plane lines form a linear space")
    }

    /// Builds the structure of `n` lines from a concurrency oracle on
    /// triples of distinct lines. Every pair of lines is assumed to meet.
    pub fn from_concurrency(n: usize, mut concurrent: impl FnMut(usize, usize, usize) -> bool) -> Result<Self> {
        let mut blocks: HashSet<Vec<u32>> = HashSet::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut b = vec![i as u32, j as u32];
                b.extend(
                    (0..n)
                        .filter(|&k| k != i && k != j && concurrent(i, j, k))
                        .map(|k| k as u32),
                );
                b.sort_unstable();
                blocks.insert(b);
            }
        }
        Self::from_blocks(n, blocks.into_iter().collect())
    }

    pub fn lines(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Block index of the point shared by lines `a` and `b`, if any.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let m = self.meet[a * self.n + b];
        (m != NONE).then_some(m as usize)
    }

    /// Whether three distinct lines pass through one point.
    pub fn concurrent(&self, a: usize, b: usize, c: usize) -> bool {
        self.meet(a, b).is_some_and(|p| self.meet(a, c) == Some(p))
    }

    /// The structure with line `x` renamed to `perm[x]`.
    pub fn relabel(&self, perm: &[u32]) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| perm[x as usize]).collect())
            .collect();
        Self::from_blocks(self.n, blocks).expect("relabeling preserves validity")
    }

    /// Whether a line permutation maps blocks onto blocks.
    pub fn is_isomorphism(&self, other: &Self, perm: &[u32]) -> bool {
        self.n == other.n && self.points() == other.points() && self.relabel(perm).blocks == other.blocks
    }

    // Iterated refinement of line colors by the multiset of point colors.
    // Colors are hash values of isomorphism-invariant data.
    fn refine(&self, colors: &mut [u64]) {
        let mut cells = distinct(colors);
        let mut pc = vec![0u64; self.blocks.len()];
        loop {
            for (p, b) in self.blocks.iter().enumerate() {
                let mut cs: Vec<u64> = b.iter().map(|&x| colors[x as usize]).collect();
                cs.sort_unstable();
                pc[p] = hash(&cs);
            }
            let next: Vec<u64> = (0..self.n)
                .map(|x| {
                    let mut ps: Vec<u64> = self.on_line[x].iter().map(|&p| pc[p as usize]).collect();
                    ps.sort_unstable();
                    hash(&(colors[x], ps))
                })
                .collect();
            colors.copy_from_slice(&next);
            let now = distinct(colors);
            if now == cells {
                break;
            }
            cells = now;
        }
    }

    fn initial_colors(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.n];
        self.refine(&mut c);
        c
    }

    /// Stable line colors, comparable between structures.
    pub fn line_colors(&self) -> Vec<u64> {
        self.initial_colors()
    }

    /// A line bijection mapping `self` onto `other`, if one exists.
    pub fn isomorphism(&self, other: &Self) -> Option<Vec<u32>> {
        if self.n != other.n || self.points() != other.points() {
            return None;
        }
        let (ca, cb) = (self.initial_colors(), other.initial_colors());
        find_map(self, &ca, other, &cb)
    }

    /// Order of the group of line permutations preserving the incidence.
    ///
    /// Uses a chain of line stabilizers; each orbit is found by searching
    /// for an automorphism to every candidate image, reusing earlier finds.
    pub fn automorphism_group_order(&self) -> u128 {
        let mut order: u128 = 1;
        let mut gens: Vec<Vec<u32>> = Vec::new();
        let mut prefix: Vec<u32> = Vec::new();
        let mut colors = self.initial_colors();
        while let Some(cell) = target_cell(&colors) {
            let b = cell[0];
            let fixing: Vec<Vec<u32>> = gens
                .iter()
                .filter(|g| prefix.iter().all(|&x| g[x as usize] == x))
                .cloned()
                .collect();
            let mut fixing = fixing;
            let mut orbit = orbit_closure(&[b], &fixing, self.n);
            let base = individualize(self, &colors, b, prefix.len());
            for &c in &cell[1..] {
                if orbit.contains(&c) {
                    continue;
                }
                let other = individualize(self, &colors, c, prefix.len());
                if let Some(g) = find_map(self, &base, self, &other) {
                    fixing.push(g.clone());
                    gens.push(g);
                    orbit = orbit_closure(&[b], &fixing, self.n);
                }
            }
            order *= orbit.len() as u128;
            prefix.push(b);
            colors = base;
        }
        order
    }

    /// Canonical certificate by individualization and refinement, taking the
    /// smallest relabeled block list over all leaves of the search tree.
    pub fn certificate(&self) -> Certificate {
        self.canonical_labeling().0
    }

    /// The certificate together with a labeling (old line → new label)
    /// realizing it.
    pub fn canonical_labeling(&self) -> (Certificate, Vec<u32>) {
        let mut s = Canon {
            inc: self,
            best: None,
            autos: Vec::new(),
        };
        let mut prefix = Vec::new();
        s.descend(self.initial_colors(), &mut prefix);
        let (cert, lab) = s.best.expect("at least one leaf");
        (Certificate(cert), lab)
    }
}

fn hash<T: Hash>(v: &T) -> u64 {
    let mut h = DefaultHasher::new();
    v.hash(&mut h);
    h.finish()
}

fn distinct(colors: &[u64]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

// The non-singleton cell with the smallest color, members ascending.
fn target_cell(colors: &[u64]) -> Option<Vec<u32>> {
    let mut sorted: Vec<(u64, u32)> = colors.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
    sorted.sort_unstable();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j].0 == sorted[i].0 {
            j += 1;
        }
        if j - i > 1 {
            return Some(sorted[i..j].iter().map(|&(_, x)| x).collect());
        }
        i = j;
    }
    None
}

fn individualize(inc: &IncidenceStructure, colors: &[u64], x: u32, depth: usize) -> Vec<u64> {
    let mut c = colors.to_vec();
    c[x as usize] = hash(&(c[x as usize], u64::MAX, depth));
    inc.refine(&mut c);
    c
}

fn orbit_closure(seed: &[u32], gens: &[Vec<u32>], n: usize) -> HashSet<u32> {
    let mut seen: HashSet<u32> = seed.iter().copied().collect();
    let mut stack: Vec<u32> = seed.to_vec();
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x as usize];
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    debug_assert!(seen.len() <= n);
    seen
}

// Backtracking search for a color-preserving line bijection a → b that
// maps every block onto a block.
fn find_map(a: &IncidenceStructure, ca: &[u64], b: &IncidenceStructure, cb: &[u64]) -> Option<Vec<u32>> {
    let n = a.n;
    let mut sa = ca.to_vec();
    let mut sb = cb.to_vec();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let mut sizes_a: Vec<usize> = a.blocks.iter().map(Vec::len).collect();
    let mut sizes_b: Vec<usize> = b.blocks.iter().map(Vec::len).collect();
    sizes_a.sort_unstable();
    sizes_b.sort_unstable();
    if sizes_a != sizes_b {
        return None;
    }
    // map small color classes first
    let count = |c: u64| sa.iter().filter(|&&x| x == c).count();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&x| (count(ca[x as usize]), ca[x as usize], x));
    let mut st = MapState {
        a,
        b,
        ca,
        cb,
        order,
        map: vec![NONE; n],
        used: vec![false; n],
        pmap: vec![NONE; a.blocks.len()],
        pinv: vec![NONE; b.blocks.len()],
    };
    st.extend(0).then_some(st.map)
}

struct MapState<'a> {
    a: &'a IncidenceStructure,
    b: &'a IncidenceStructure,
    ca: &'a [u64],
    cb: &'a [u64],
    order: Vec<u32>,
    map: Vec<u32>,
    used: Vec<bool>,
    pmap: Vec<u32>,
    pinv: Vec<u32>,
}

impl MapState<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let x = self.order[depth] as usize;
        for y in 0..self.b.n {
            if self.used[y] || self.cb[y] != self.ca[x] {
                continue;
            }
            let mut assigned: Vec<u32> = Vec::new();
            let mut ok = true;
            for &w in &self.order[..depth] {
                let w = w as usize;
                let p = self.a.meet[x * self.a.n + w];
                let r = self.b.meet[y * self.b.n + self.map[w] as usize];
                if (p == NONE) != (r == NONE) {
                    ok = false;
                    break;
                }
                if p == NONE {
                    continue;
                }
                let (pu, ru) = (p as usize, r as usize);
                if self.pmap[pu] == NONE && self.pinv[ru] == NONE {
                    if self.a.blocks[pu].len() != self.b.blocks[ru].len() {
                        ok = false;
                        break;
                    }
                    self.pmap[pu] = r;
                    self.pinv[ru] = p;
                    assigned.push(p);
                } else if self.pmap[pu] != r || self.pinv[ru] != p {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.map[x] = y as u32;
                self.used[y] = true;
                if self.extend(depth + 1) {
                    return true;
                }
                self.used[y] = false;
                self.map[x] = NONE;
            }
            for p in assigned {
                let r = self.pmap[p as usize];
                self.pmap[p as usize] = NONE;
                self.pinv[r as usize] = NONE;
            }
        }
        false
    }
}

struct Canon<'a> {
    inc: &'a IncidenceStructure,
    best: Option<(Vec<u32>, Vec<u32>)>,
    autos: Vec<Vec<u32>>,
}

impl Canon<'_> {
    fn descend(&mut self, colors: Vec<u64>, prefix: &mut Vec<u32>) {
        let Some(cell) = target_cell(&colors) else {
            self.leaf(&colors);
            return;
        };
        let mut explored: Vec<u32> = Vec::new();
        for &c in &cell {
            if !explored.is_empty() {
                let fixing: Vec<Vec<u32>> = self
                    .autos
                    .iter()
                    .filter(|g| prefix.iter().all(|&x| g[x as usize] == x))
                    .cloned()
                    .collect();
                if orbit_closure(&explored, &fixing, self.inc.n).contains(&c) {
                    continue;
                }
            }
            let next = individualize(self.inc, &colors, c, prefix.len());
            prefix.push(c);
            self.descend(next, prefix);
            prefix.pop();
            explored.push(c);
        }
    }

    fn leaf(&mut self, colors: &[u64]) {
        let mut sorted: Vec<u64> = colors.to_vec();
        sorted.sort_unstable();
        let lab: Vec<u32> = colors.iter().map(|c| sorted.binary_search(c).unwrap() as u32).collect();
        let mut blocks: Vec<Vec<u32>> = self
            .inc
            .blocks
            .iter()
            .map(|b| {
                let mut v: Vec<u32> = b.iter().map(|&x| lab[x as usize]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        blocks.sort();
        let mut cert = vec![self.inc.n as u32];
        for b in blocks {
            cert.push(b.len() as u32);
            cert.extend(b);
        }
        match &self.best {
            None => self.best = Some((cert, lab)),
            Some((bc, bl)) => match cert.cmp(bc) {
                std::cmp::Ordering::Less => self.best = Some((cert, lab)),
                std::cmp::Ordering::Equal => {
                    // bl⁻¹ ∘ lab is an automorphism
                    let mut inv = vec![0u32; bl.len()];
                    for (x, &l) in bl.iter().enumerate() {
                        inv[l as usize] = x as u32;
                    }
                    let g: Vec<u32> = lab.iter().map(|&l| inv[l as usize]).collect();
                    if g.iter().enumerate().any(|(i, &x)| i as u32 != x) {
                        self.autos.push(g);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> IncidenceStructure {
        IncidenceStructure::from_blocks(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    // Fano plane as a line arrangement: 7 lines, 7 triple points.
    fn fano() -> IncidenceStructure {
        let blocks = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        IncidenceStructure::from_blocks(7, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn small_automorphism_groups() {
        assert_eq!(triangle().automorphism_group_order(), 6);
        assert_eq!(fano().automorphism_group_order(), 168);
        // near pencil: 3 concurrent lines plus a transversal
        let np = IncidenceStructure::from_blocks(4, vec![vec![0, 1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(np.automorphism_group_order(), 6);
    }

    #[test]
    fn self_isomorphism() {
        let f = fano();
        let m = f.isomorphism(&f).unwrap();
        assert!(f.is_isomorphism(&f, &m));
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(IncidenceStructure::from_blocks(3, vec![vec![0]]).is_err());
        assert!(IncidenceStructure::from_blocks(3, vec![vec![0, 1], vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn certificate_is_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for inc in [triangle(), fano()] {
            let cert = inc.certificate();
            for _ in 0..200 {
                let mut perm: Vec<u32> = (0..inc.lines() as u32).collect();
                perm.shuffle(&mut rng);
                let other = inc.relabel(&perm);
                assert_eq!(other.certificate(), cert);
                let w = inc.isomorphism(&other).unwrap();
                assert!(inc.is_isomorphism(&other, &w));
            }
        }
    }

    #[test]
    fn non_isomorphic_detected() {
        let np = IncidenceStructure::from_blocks(4, vec![vec![0, 1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]).unwrap();
        let generic = IncidenceStructure::from_blocks(
            4,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]],
        )
        .unwrap();
        assert!(np.isomorphism(&generic).is_none());
        assert_ne!(np.certificate(), generic.certificate());
    }
}
