//! Simpliciality of free arrangements from exponent data.
//!
//! For a free arrangement with exponents `e_1..e_r` the characteristic
//! polynomial factors as `Π (t − e_i)`, so the simpliciality equation
//! `r·χ_A(−1) + 2·Σ_H χ_{A^H}(−1) = 0` can be evaluated from the exponents
//! of `A` and of its restrictions.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bundled data for the exceptional irreducible reflection groups of rank
/// at least 3.
pub const EXCEPTIONAL_GROUPS_TOML: &str = include_str!("../data/exceptional_groups.toml");

/// A hyperplane orbit: its size and the exponents of the restriction to
/// any of its hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneOrbit {
    pub size: u64,
    pub restriction: Vec<u64>,
}

/// Exponent data of a free arrangement and of its restrictions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeArrangementSpec {
    pub name: String,
    pub rank: usize,
    pub exponents: Vec<u64>,
    pub orbits: Vec<HyperplaneOrbit>,
}

impl FreeArrangementSpec {
    pub fn hyperplanes(&self) -> u64 {
        self.orbits.iter().map(|o| o.size).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::param(format!("{}: {m}", self.name)));
        if self.rank < 2 {
            return bad(format!("rank {} < 2", self.rank));
        }
        if self.exponents.len() != self.rank {
            return bad(format!("{} exponents for rank {}", self.exponents.len(), self.rank));
        }
        if self.orbits.is_empty() {
            return bad("no hyperplane orbits".into());
        }
        for o in &self.orbits {
            if o.restriction.len() != self.rank - 1 {
                return bad(format!(
                    "restriction with {} exponents, expected {}",
                    o.restriction.len(),
                    self.rank - 1
                ));
            }
        }
        let sum: u64 = self.exponents.iter().sum();
        if sum != self.hyperplanes() {
            return bad(format!(
                "exponent sum {sum} differs from hyperplane count {}",
                self.hyperplanes()
            ));
        }
        Ok(())
    }

    /// `r·χ_A(−1) + 2·Σ_orbits size·χ_{A^H}(−1)`; zero iff simplicial.
    pub fn simpliciality_defect(&self) -> Result<BigInt> {
        self.validate()?;
        let mut total = BigInt::from(self.rank) * chi_from_exponents(&self.exponents, -1);
        for o in &self.orbits {
            total += BigInt::from(2 * o.size) * chi_from_exponents(&o.restriction, -1);
        }
        Ok(total)
    }
}

/// `Π (t − e_i)`.
pub fn chi_from_exponents(exps: &[u64], t: i64) -> BigInt {
    exps.iter().map(|&e| BigInt::from(t) - BigInt::from(e)).product()
}

pub fn simplicial_free(spec: &FreeArrangementSpec) -> Result<bool> {
    Ok(spec.simpliciality_defect()?.is_zero())
}

fn check_gedr(e: u64, d: u64, r: usize) -> Result<()> {
    if e == 0 || d == 0 || !e.is_multiple_of(d) {
        return Err(Error::param(format!("need d | e, got e={e}, d={d}")));
    }
    if r < 2 {
        return Err(Error::param(format!("rank {r} < 2")));
    }
    if e == 1 {
        return Err(Error::param("G(1,1,r) is not essential in rank r"));
    }
    Ok(())
}

/// Exponent data of the reflection arrangement of `G(e,d,r)`.
///
/// For `d < e` this is the arrangement of `G(e,1,r)`; for `d = e` the
/// coordinate hyperplanes are absent.
pub fn gedr_spec(e: u64, d: u64, r: usize) -> Result<FreeArrangementSpec> {
    check_gedr(e, d, r)?;
    let rr = r as u64;
    let pairs = rr * (rr - 1) / 2 * e;
    let (exponents, restriction, size) = if e != d {
        (
            (0..rr).map(|k| k * e + 1).collect(),
            (0..rr - 1).map(|k| k * e + 1).collect(),
            rr + pairs,
        )
    } else {
        let mut exps: Vec<u64> = (0..rr - 1).map(|k| k * e + 1).collect();
        exps.push((rr - 1) * (e - 1));
        let mut res: Vec<u64> = (0..rr.saturating_sub(2)).map(|k| k * e + 1).collect();
        res.push((rr - 2) * e + 3 - rr);
        (exps, res, pairs)
    };
    Ok(FreeArrangementSpec {
        name: format!("G({e},{d},{r})"),
        rank: r,
        exponents,
        orbits: vec![HyperplaneOrbit { size, restriction }],
    })
}

/// `G(e,d,r)` with `d < e` is always simplicial; `G(e,e,r)` iff `e = 2` or
/// `r = 2`.
pub fn gedr_simplicial_closed_form(e: u64, d: u64, r: usize) -> Result<bool> {
    check_gedr(e, d, r)?;
    Ok(e != d || e == 2 || r == 2)
}

#[derive(Deserialize)]
struct GroupTable {
    group: Vec<FreeArrangementSpec>,
}

/// Parses a TOML table of `[[group]]` entries and validates each.
pub fn load_specs(text: &str) -> Result<Vec<FreeArrangementSpec>> {
    let table: GroupTable = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1).unwrap_or(0);
        Error::parse(line, e.message())
    })?;
    for g in &table.group {
        g.validate()?;
    }
    Ok(table.group)
}

pub fn exceptional_groups() -> Result<Vec<FreeArrangementSpec>> {
    load_specs(EXCEPTIONAL_GROUPS_TOML)
}

/// Verdict for one group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupVerdict {
    pub name: String,
    pub rank: usize,
    pub hyperplanes: u64,
    pub defect: String,
    pub simplicial: bool,
}

pub fn exceptional_report(data: &[FreeArrangementSpec]) -> Result<Vec<GroupVerdict>> {
    data.iter()
        .map(|g| {
            let defect = g.simpliciality_defect()?;
            Ok(GroupVerdict {
                name: g.name.clone(),
                rank: g.rank,
                hyperplanes: g.hyperplanes(),
                simplicial: defect.is_zero(),
                defect: defect.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{full3q, ge13};
    use crate::gf::FiniteField;

    #[test]
    fn chi_values() {
        assert_eq!(chi_from_exponents(&[1, 1, 1], -1), BigInt::from(-8));
        assert_eq!(chi_from_exponents(&[1, 4, 7], -1), BigInt::from(-80));
        let a = full3q(&FiniteField::of_order(4).unwrap()).unwrap();
        let chi = a.char_poly().unwrap();
        for t in -3..10 {
            assert_eq!(chi_from_exponents(&[1, 4, 7], t), BigInt::from(chi.eval(t)));
        }
    }

    #[test]
    fn gedr_examples() {
        let s = gedr_spec(3, 1, 3).unwrap();
        assert_eq!(s.exponents, vec![1, 4, 7]);
        assert_eq!(s.hyperplanes(), 12);
        assert!(simplicial_free(&s).unwrap());
        let s = gedr_spec(2, 2, 3).unwrap();
        let mut e = s.exponents.clone();
        e.sort();
        assert_eq!(e, vec![1, 2, 3]);
        assert_eq!(s.hyperplanes(), 6);
        assert!(simplicial_free(&s).unwrap());
        let s = gedr_spec(3, 3, 3).unwrap();
        assert_eq!(s.exponents, vec![1, 4, 4]);
        assert_eq!(s.orbits[0].restriction, vec![1, 3]);
        assert!(!simplicial_free(&s).unwrap());
        assert!(simplicial_free(&gedr_spec(5, 5, 2).unwrap()).unwrap());
        for r in 2..9 {
            assert!(simplicial_free(&gedr_spec(2, 2, r).unwrap()).unwrap());
        }
        assert!(gedr_spec(4, 3, 3).is_err());
        assert!(gedr_spec(1, 1, 3).is_err());
        assert!(gedr_spec(3, 1, 1).is_err());
        assert!(gedr_simplicial_closed_form(4, 1, 3).unwrap());
        assert!(!gedr_simplicial_closed_form(3, 3, 3).unwrap());
        assert!(gedr_simplicial_closed_form(3, 3, 2).unwrap());
    }

    #[test]
    fn closed_form_agrees() {
        for e in 2..=10 {
            for r in 2..=8 {
                for d in [1, e] {
                    let s = gedr_spec(e, d, r).unwrap();
                    assert_eq!(s.exponents.iter().sum::<u64>(), s.hyperplanes());
                    assert_eq!(
                        simplicial_free(&s).unwrap(),
                        gedr_simplicial_closed_form(e, d, r).unwrap(),
                        "G({e},{d},{r})"
                    );
                }
            }
        }
    }

    #[test]
    fn rank3_cross_check() {
        for q in [3u32, 4, 5, 7, 8, 9, 11, 13] {
            let f = FiniteField::of_order(q).unwrap();
            for e in (1..q).filter(|e| (q - 1) % e == 0) {
                let a = ge13(&f, e).unwrap();
                if e == 1 {
                    continue;
                }
                let s = gedr_spec(e as u64, 1, 3).unwrap();
                assert_eq!(simplicial_free(&s).unwrap(), a.simplicial_by_chi().unwrap());
                let chi = a.char_poly().unwrap();
                for t in -2..4 {
                    assert_eq!(chi_from_exponents(&s.exponents, t), BigInt::from(chi.eval(t)));
                }
            }
        }
    }

    #[test]
    fn malformed_specs() {
        let mut s = gedr_spec(3, 1, 3).unwrap();
        s.exponents[0] = 2;
        assert!(simplicial_free(&s).is_err());
        let mut s = gedr_spec(3, 1, 3).unwrap();
        s.orbits[0].restriction.push(1);
        assert!(simplicial_free(&s).is_err());
        assert!(matches!(
            load_specs("[[group]]\nname = 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn exceptional_pattern() {
        let data = exceptional_groups().unwrap();
        assert_eq!(data.len(), 15);
        let report = exceptional_report(&data).unwrap();
        let failing: Vec<&str> = report
            .iter()
            .filter(|v| !v.simplicial)
            .map(|v| v.name.as_str())
            .collect();
        assert_eq!(failing, ["G24", "G27", "G29", "G33", "G34"]);
    }
}
