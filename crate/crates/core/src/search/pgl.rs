//! Canonical forms of line sets under `PGL₃(F_q)`.
//!
//! Here a matrix `N` acts directly on normal vectors, `n ↦ N n`; this is
//! the line action of `g = N^{-T}`, so both describe the same group.
//!
//! Sets with four lines in general position are canonized through frames:
//! for each ordered frame `(l₁,l₂,l₃,l₄)` there is exactly one projectivity
//! sending it to the standard frame `e₁, e₂, e₃, (1,1,1)`. Only frames whose
//! tuple of refined line colors is lexicographically smallest are tried, and
//! the canonical form is the smallest sorted image among them. Sets without
//! such a frame fall back to minimizing over the whole group.

use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gf::{Elem, FiniteField};
use crate::group::{for_each_pgl_element, mat_inv, mat_vec, Mat3};
use crate::projplane::Plane;
use crate::search::incidence::IncidenceStructure;

/// Largest `q` for which frame-less sets are canonized by brute force.
pub const BRUTE_FORCE_MAX_Q: u32 = 7;

const MATERIALIZE_MAX_Q: u32 = 5;

/// A canonical form and every normal-action matrix that produces it.
#[derive(Clone, Debug)]
pub struct Canonized {
    /// Sorted line indices of the canonical representative.
    pub form: Vec<u32>,
    /// All `N` with `N·S = form`; a coset of the set stabilizer.
    pub canonizers: Vec<Mat3>,
}

impl Canonized {
    /// Size of the stabilizer of the set in `PGL₃(F_q)`.
    pub fn stabilizer_order(&self) -> usize {
        self.canonizers.len()
    }
}

/// Image of line `l` under the normal action of `n`.
pub fn act(plane: &Plane, n: &Mat3, l: u32) -> u32 {
    let v = plane.point(l as usize).coords();
    plane.index_of(mat_vec(plane.field(), n, &v)).expect("invertible") as u32
}

fn image(plane: &Plane, n: &Mat3, normals: &[[Elem; 3]], out: &mut Vec<u32>) {
    out.clear();
    let f = plane.field();
    out.extend(
        normals
            .iter()
            .map(|v| plane.index_of(mat_vec(f, n, v)).expect("invertible") as u32),
    );
    out.sort_unstable();
}

/// The projectivity sending the frame to the standard frame.
fn frame_matrix(f: &FiniteField, frame: [[Elem; 3]; 4]) -> Mat3 {
    let [n1, n2, n3, n4] = frame;
    let m: Mat3 = [[n1[0], n2[0], n3[0]], [n1[1], n2[1], n3[1]], [n1[2], n2[2], n3[2]]];
    let c = mat_vec(f, &mat_inv(f, &m).expect("frame in general position"), &n4);
    let b: Mat3 = m.map(|row| [f.mul(row[0], c[0]), f.mul(row[1], c[1]), f.mul(row[2], c[2])]);
    mat_inv(f, &b).expect("frame in general position")
}

/// Canonical form of a set of line indices.
pub fn canonize(plane: &Plane, lines: &[u32]) -> Result<Canonized> {
    let mut lines = lines.to_vec();
    lines.sort_unstable();
    lines.dedup();
    let frames = minimal_frames(plane, &lines);
    if frames.is_empty() {
        return canonize_brute(plane, &lines);
    }
    let f = plane.field();
    let normals: Vec<[Elem; 3]> = lines.iter().map(|&l| plane.point(l as usize).coords()).collect();
    let mut best: Option<Vec<u32>> = None;
    let mut canonizers = Vec::new();
    let mut img = Vec::with_capacity(lines.len());
    for fr in frames {
        let n = frame_matrix(f, fr.map(|i| normals[i as usize]));
        image(plane, &n, &normals, &mut img);
        match best.as_ref().map(|b| img.cmp(b)) {
            None | Some(std::cmp::Ordering::Less) => {
                best = Some(img.clone());
                canonizers.clear();
                canonizers.push(n);
            }
            Some(std::cmp::Ordering::Equal) => canonizers.push(n),
            Some(std::cmp::Ordering::Greater) => {}
        }
    }
    Ok(Canonized {
        form: best.expect("at least one frame"),
        canonizers,
    })
}

/// Ordered frames (positions into `lines`) with the smallest color tuple.
fn minimal_frames(plane: &Plane, lines: &[u32]) -> Vec<[u32; 4]> {
    if lines.len() < 4 {
        return Vec::new();
    }
    let colors = IncidenceStructure::from_plane_lines(plane, lines).line_colors();
    let mut order: Vec<u32> = (0..lines.len() as u32).collect();
    order.sort_by_key(|&i| (colors[i as usize], i));
    let mut st = FrameSearch {
        plane,
        lines,
        colors: &colors,
        order: &order,
        best: None,
        frames: Vec::new(),
        chosen: [0; 4],
    };
    st.dfs(0);
    st.frames
}

struct FrameSearch<'a> {
    plane: &'a Plane,
    lines: &'a [u32],
    colors: &'a [u64],
    order: &'a [u32],
    best: Option<[u64; 4]>,
    frames: Vec<[u32; 4]>,
    chosen: [u32; 4],
}

impl FrameSearch<'_> {
    fn line(&self, pos: u32) -> usize {
        self.lines[pos as usize] as usize
    }

    fn compatible(&self, depth: usize, c: u32) -> bool {
        let l = self.line(c);
        if self.chosen[..depth].contains(&c) {
            return false;
        }
        // no three of the chosen lines may be concurrent
        for i in 0..depth {
            for j in i + 1..depth {
                let p = self
                    .plane
                    .meet(self.line(self.chosen[i]), self.line(self.chosen[j]))
                    .expect("distinct lines");
                if self.plane.incident(p, l) {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self, depth: usize) {
        if depth == 4 {
            let tuple = self.chosen.map(|c| self.colors[c as usize]);
            match self.best.map(|b| tuple.cmp(&b)) {
                None | Some(std::cmp::Ordering::Less) => {
                    self.best = Some(tuple);
                    self.frames.clear();
                    self.frames.push(self.chosen);
                }
                Some(std::cmp::Ordering::Equal) => self.frames.push(self.chosen),
                Some(std::cmp::Ordering::Greater) => {}
            }
            return;
        }
        for k in 0..self.order.len() {
            let c = self.order[k];
            if let Some(b) = self.best {
                let mut prefix: Vec<u64> = self.chosen[..depth].iter().map(|&x| self.colors[x as usize]).collect();
                prefix.push(self.colors[c as usize]);
                if prefix.as_slice() > &b[..=depth] {
                    break;
                }
            }
            if self.compatible(depth, c) {
                self.chosen[depth] = c;
                self.dfs(depth + 1);
            }
        }
    }
}

struct Materialized {
    matrices: Vec<Mat3>,
    // perms[i * n + l] = image of line l under matrices[i]
    perms: Vec<u16>,
    n: usize,
}

fn materialized(plane: &Plane) -> Arc<Materialized> {
    type Key = (u32, u32, Vec<u32>);
    type Cache = Mutex<Vec<(Key, Arc<Materialized>)>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let f = plane.field();
    let key = (f.p(), f.k(), f.modulus().to_vec());
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    if let Some((_, m)) = guard.iter().find(|(k, _)| *k == key) {
        return m.clone();
    }
    let n = plane.len();
    let mut matrices = Vec::new();
    let mut perms = Vec::new();
    for_each_pgl_element(f, |m| {
        matrices.push(*m);
        for l in 0..n {
            perms.push(act(plane, m, l as u32) as u16);
        }
    });
    let m = Arc::new(Materialized { matrices, perms, n });
    guard.push((key, m.clone()));
    m
}

/// Minimum sorted image over the whole group.
pub fn canonize_brute(plane: &Plane, lines: &[u32]) -> Result<Canonized> {
    let q = plane.q();
    if q > BRUTE_FORCE_MAX_Q {
        return Err(Error::CapExceeded {
            what: format!("whole-group canonical form at q = {q}"),
            limit: BRUTE_FORCE_MAX_Q as u64,
        });
    }
    let mut best: Option<Vec<u32>> = None;
    let mut canonizers = Vec::new();
    let mut img: Vec<u32> = Vec::with_capacity(lines.len());
    let mut consider = |m: &Mat3, img: &Vec<u32>| match best.as_ref().map(|b| img.cmp(b)) {
        None | Some(std::cmp::Ordering::Less) => {
            best = Some(img.clone());
            canonizers.clear();
            canonizers.push(*m);
        }
        Some(std::cmp::Ordering::Equal) => canonizers.push(*m),
        Some(std::cmp::Ordering::Greater) => {}
    };
    if q <= MATERIALIZE_MAX_Q {
        let mat = materialized(plane);
        for (i, m) in mat.matrices.iter().enumerate() {
            let row = &mat.perms[i * mat.n..(i + 1) * mat.n];
            img.clear();
            img.extend(lines.iter().map(|&l| row[l as usize] as u32));
            img.sort_unstable();
            consider(m, &img);
        }
    } else {
        let normals: Vec<[Elem; 3]> = lines.iter().map(|&l| plane.point(l as usize).coords()).collect();
        for_each_pgl_element(plane.field(), |m| {
            image(plane, m, &normals, &mut img);
            consider(m, &img);
        });
    }
    Ok(Canonized {
        form: best.unwrap_or_default(),
        canonizers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{canonical, mat_mul};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(f: &FiniteField, rng: &mut ChaCha8Rng) -> Mat3 {
        loop {
            let m: Mat3 = [[0; 3]; 3].map(|r| r.map(|_: i32| Elem(rng.random_range(0..f.q()))));
            if !crate::group::det(f, &m).is_zero() {
                return m;
            }
        }
    }

    fn apply(plane: &Plane, m: &Mat3, lines: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = lines.iter().map(|&l| act(plane, m, l)).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn triangles_have_one_form() {
        let plane = Plane::of_order(3).unwrap();
        let n = plane.len() as u32;
        let mut forms = std::collections::HashSet::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let p = plane.meet(a as usize, b as usize).unwrap();
                    if plane.incident(p, c as usize) {
                        continue;
                    }
                    forms.insert(canonize(&plane, &[a, b, c]).unwrap().form);
                }
            }
        }
        assert_eq!(forms.len(), 1);
    }

    #[test]
    fn invariant_under_random_projectivities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [3, 4, 5, 7] {
            let plane = Plane::of_order(q).unwrap();
            let f = plane.field().clone();
            for _ in 0..40 {
                let k = rng.random_range(1..=3 * q as usize);
                let mut lines: Vec<u32> = (0..plane.len() as u32).collect();
                for i in 0..k {
                    let j = rng.random_range(i..lines.len());
                    lines.swap(i, j);
                }
                lines.truncate(k);
                lines.sort_unstable();
                let c = canonize(&plane, &lines).unwrap();
                for n in &c.canonizers {
                    assert_eq!(apply(&plane, n, &lines), c.form);
                }
                let g = random_matrix(&f, &mut rng);
                let moved = apply(&plane, &g, &lines);
                let c2 = canonize(&plane, &moved).unwrap();
                assert_eq!(c2.form, c.form, "q={q} lines={lines:?}");
                assert_eq!(c2.stabilizer_order(), c.stabilizer_order());
            }
        }
    }

    #[test]
    fn canonizers_form_a_coset() {
        let plane = Plane::of_order(5).unwrap();
        let f = plane.field();
        // a quadrilateral: stabilizer is S4
        let mut lines: Vec<u32> = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
            .iter()
            .map(|v| plane.index_of(v.map(|x| f.from_int(x))).unwrap() as u32)
            .collect();
        lines.sort_unstable();
        let c = canonize(&plane, &lines).unwrap();
        assert_eq!(c.stabilizer_order(), 24);
        let n0inv = mat_inv(f, &c.canonizers[0]).unwrap();
        for n in &c.canonizers {
            let s = canonical(f, &mat_mul(f, &n0inv, n)).unwrap();
            assert_eq!(apply(&plane, &s, &lines), lines);
        }
    }

    #[test]
    fn brute_force_agrees_on_frame_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let plane = Plane::of_order(3).unwrap();
        for _ in 0..30 {
            let mask: u32 = rng.random_range(0..1 << 13);
            let lines: Vec<u32> = (0..13).filter(|i| mask >> i & 1 == 1).collect();
            let a = canonize(&plane, &lines).unwrap();
            let b = canonize_brute(&plane, &lines).unwrap();
            assert_eq!(a.stabilizer_order(), b.stabilizer_order());
        }
    }
}
