//! Enumeration of simplicial arrangements up to projectivity and up to
//! incidence isomorphism, and searches restricted to unions of orbits of a
//! symmetry group.

pub mod incidence;
pub mod pgl;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{count_criterion, Arrangement};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::projplane::Plane;

pub use incidence::{Certificate, IncidenceStructure};
pub use pgl::{canonize, Canonized};

/// Canonical representative of the `PGL₃(F_q)`-orbit of an arrangement.
pub fn canonical_under_pgl(a: &Arrangement) -> Result<Vec<u32>> {
    Ok(canonize(a.plane(), a.lines())?.form)
}

/// Incidence structure of an arrangement, lines in arrangement order.
pub fn incidence_of(a: &Arrangement) -> IncidenceStructure {
    IncidenceStructure::from_plane_lines(a.plane(), a.lines())
}

/// Whether the counting criterion holds for an essential line set; the
/// raw form used inside searches.
pub fn lines_simplicial(plane: &Plane, lines: &[u32], counts: &mut Vec<u32>) -> bool {
    counts.clear();
    counts.resize(plane.len(), 0);
    for &l in lines {
        for &p in plane.points_on(l as usize) {
            counts[p as usize] += 1;
        }
    }
    let k = lines.len() as u32;
    if k < 3 || counts.contains(&k) {
        return false;
    }
    let n0 = counts.iter().filter(|&&c| c == 0).count() as u64;
    let n1 = counts.iter().filter(|&&c| c == 1).count() as u64;
    count_criterion(plane.q(), lines.len(), n0, n1)
}

/// Which equivalence a census counts.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UpTo {
    Pgl,
    Incidence,
}

/// Classes of essential simplicial arrangements of each size.
#[derive(Clone, Debug, Serialize)]
pub struct SimplicialCensus {
    pub q: u32,
    pub max_lines: usize,
    /// Number of `PGL₃(F_q)`-orbits of simplicial arrangements, by size.
    pub pgl: BTreeMap<usize, usize>,
    /// Number of incidence classes of simplicial arrangements, by size.
    pub incidence: BTreeMap<usize, usize>,
    /// Number of `PGL₃(F_q)`-orbits of all line sets, by size.
    pub all_orbits: BTreeMap<usize, usize>,
    /// One canonical line set per simplicial `PGL`-orbit.
    pub representatives: Vec<Vec<u32>>,
    /// Indices into `representatives`, one per incidence class.
    pub incidence_representatives: Vec<usize>,
}

impl SimplicialCensus {
    pub fn table(&self, up_to: UpTo) -> &BTreeMap<usize, usize> {
        match up_to {
            UpTo::Pgl => &self.pgl,
            UpTo::Incidence => &self.incidence,
        }
    }
}

/// Children of a canonical parent accepted by canonical augmentation, as
/// canonical forms, one per isomorphism class.
fn accepted_children(plane: &Plane, parent: &[u32]) -> Result<Vec<Vec<u32>>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut out = Vec::new();
    for l in 0..plane.len() as u32 {
        if parent.binary_search(&l).is_ok() {
            continue;
        }
        let mut child = parent.to_vec();
        let pos = child.partition_point(|&x| x < l);
        child.insert(pos, l);
        let c = canonize(plane, &child)?;
        let top = *c.form.last().expect("nonempty");
        // the new line must lie in the orbit of the canonically chosen line
        let accepted = c.canonizers.iter().any(|n| pgl::act(plane, n, l) == top);
        if accepted && seen.insert(c.form.clone()) {
            out.push(c.form);
        }
    }
    Ok(out)
}

/// Every `PGL₃(F_q)`-orbit of line sets of size `0..=max_lines`, as
/// canonical forms grouped by size, by canonical augmentation.
pub fn enumerate_orbits(plane: &Plane, max_lines: usize) -> Result<Vec<Vec<Vec<u32>>>> {
    let mut levels: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
    for k in 0..max_lines.min(plane.len()) {
        let mut next: Vec<Vec<u32>> = levels[k]
            .par_iter()
            .map(|p| accepted_children(plane, p))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        next.sort();
        log::info!("q={}: {} orbits of {}-line sets", plane.q(), next.len(), k + 1);
        levels.push(next);
    }
    Ok(levels)
}

/// Census of essential simplicial arrangements with at most `max_lines`
/// lines, up to projectivity and up to incidence.
pub fn enumerate_simplicial(plane: &Arc<Plane>, max_lines: usize) -> Result<SimplicialCensus> {
    let levels = enumerate_orbits(plane, max_lines)?;
    let mut pgl = BTreeMap::new();
    let mut incidence = BTreeMap::new();
    let mut all_orbits = BTreeMap::new();
    let mut representatives = Vec::new();
    let mut incidence_representatives = Vec::new();
    let mut counts = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        all_orbits.insert(k, level.len());
        if k < 3 {
            continue;
        }
        let hits: Vec<&Vec<u32>> = level
            .iter()
            .filter(|s| lines_simplicial(plane, s, &mut counts))
            .collect();
        pgl.insert(k, hits.len());
        let mut certs: HashMap<Certificate, usize> = HashMap::new();
        for s in hits {
            let a = Arrangement::from_indices(plane.clone(), s.iter().map(|&l| l as usize))?;
            if !a.is_simplicial()? {
                return Err(Error::Inconsistent(format!("criteria disagree on {s:?}")));
            }
            let idx = representatives.len();
            representatives.push(s.clone());
            let cert = incidence_of(&a).certificate();
            certs.entry(cert).or_insert_with(|| {
                incidence_representatives.push(idx);
                idx
            });
        }
        incidence.insert(k, certs.len());
    }
    Ok(SimplicialCensus {
        q: plane.q(),
        max_lines,
        pgl,
        incidence,
        all_orbits,
        representatives,
        incidence_representatives,
    })
}

/// Limits for [`orbit_union_search`].
#[derive(Copy, Clone, Debug)]
pub struct OrbitSearchOptions {
    pub min_lines: usize,
    pub max_lines: usize,
    pub max_orbits: usize,
}

impl OrbitSearchOptions {
    /// Between `2q` and `3q` lines, at most 20 eligible orbits.
    pub fn for_q(q: u32) -> Self {
        OrbitSearchOptions {
            min_lines: 2 * q as usize,
            max_lines: 3 * q as usize,
            max_orbits: 20,
        }
    }
}

struct UnionSearch<'a> {
    group: &'a PermGroup,
    eligible: Vec<usize>,
    opts: OrbitSearchOptions,
    chosen: Vec<usize>,
    counts: Vec<u32>,
    seen: HashSet<Certificate>,
    hits: Vec<OrbitHit>,
}

impl UnionSearch<'_> {
    fn descend(&mut self, pos: usize, size: usize) -> Result<()> {
        if pos == self.eligible.len() {
            if size >= self.opts.min_lines {
                self.evaluate()?;
            }
            return Ok(());
        }
        self.descend(pos + 1, size)?;
        let o = self.eligible[pos];
        let len = self.group.orbits()[o].len();
        if size + len <= self.opts.max_lines {
            self.chosen.push(o);
            self.descend(pos + 1, size + len)?;
            self.chosen.pop();
        }
        Ok(())
    }

    fn evaluate(&mut self) -> Result<()> {
        let orbits = self.group.orbits();
        let mut lines: Vec<u32> = self.chosen.iter().flat_map(|&o| orbits[o].iter().copied()).collect();
        lines.sort_unstable();
        let plane = self.group.plane();
        if !lines_simplicial(plane, &lines, &mut self.counts) {
            return Ok(());
        }
        let a = Arrangement::from_indices(plane.clone(), lines.iter().map(|&l| l as usize))?;
        if self.seen.insert(incidence_of(&a).certificate()) {
            self.hits.push(OrbitHit {
                arrangement: a,
                orbits: self.chosen.clone(),
                orbit_sizes: self.chosen.iter().map(|&o| orbits[o].len()).collect(),
            });
        }
        Ok(())
    }
}

/// A simplicial union of orbits.
#[derive(Clone, Debug)]
pub struct OrbitHit {
    pub arrangement: Arrangement,
    /// Indices into the group's orbit list.
    pub orbits: Vec<usize>,
    pub orbit_sizes: Vec<usize>,
}

/// Tries every union of line orbits of `group` whose size lies in
/// `[min_lines, max_lines]` and keeps the simplicial ones, one per
/// incidence class.
pub fn orbit_union_search(group: &PermGroup, opts: OrbitSearchOptions) -> Result<Vec<OrbitHit>> {
    let eligible: Vec<usize> = group
        .orbits()
        .iter()
        .enumerate()
        .filter(|(_, o)| o.len() <= opts.max_lines)
        .map(|(i, _)| i)
        .collect();
    if eligible.len() > opts.max_orbits {
        return Err(Error::CapExceeded {
            what: format!("{} eligible orbits", eligible.len()),
            limit: opts.max_orbits as u64,
        });
    }
    let mut st = UnionSearch {
        group,
        eligible,
        opts,
        chosen: Vec::new(),
        counts: Vec::new(),
        seen: HashSet::new(),
        hits: Vec::new(),
    };
    st.descend(0, 0)?;
    let hits = st.hits;
    Ok(hits)
}
