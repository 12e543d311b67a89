//! Text formats for arrangements and generators, ingestion of the bundled
//! dataset of 29 arrangements, and invariant reports.

use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, TVector};
use crate::error::{Error, Result};
use crate::gf::{Elem, FiniteField};
use crate::group::Mat3;
use crate::search::incidence_of;

/// The bundled normal-vector listing of 29 arrangements, in LaTeX.
pub const APPENDIX_TEX: &str = include_str!("../data/appendix.tex");

/// Reference invariants for the same 29 arrangements.
pub const SIMC_TABLE_TOML: &str = include_str!("../data/simc_table.toml");

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses `field <p>[^<k>] [modulus c0,...,ck]`.
pub fn parse_field_header(line: &str) -> Result<FiniteField> {
    let mut words = line.split_whitespace();
    if words.next() != Some("field") {
        return Err(Error::param("header must start with `field`"));
    }
    let order = words.next().ok_or_else(|| Error::param("missing field order"))?;
    let (p, k) = match order.split_once('^') {
        Some((p, k)) => (p, k),
        None => (order, "1"),
    };
    let p: u32 = p
        .parse()
        .map_err(|_| Error::param(format!("bad characteristic {p:?}")))?;
    let k: u32 = k.parse().map_err(|_| Error::param(format!("bad degree {k:?}")))?;
    let modulus = match words.next() {
        None => None,
        Some("modulus") => {
            let list = words
                .next()
                .ok_or_else(|| Error::param("missing modulus coefficients"))?;
            let coeffs = list
                .split(',')
                .map(|c| c.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::param(format!("bad modulus {list:?}")))?;
            Some(coeffs)
        }
        Some(w) => return Err(Error::param(format!("unexpected {w:?} in header"))),
    };
    if let Some(w) = words.next() {
        return Err(Error::param(format!("unexpected {w:?} in header")));
    }
    FiniteField::new(p, k, modulus.as_deref())
}

pub fn format_field_header(f: &FiniteField) -> String {
    if f.k() == 1 {
        format!("field {}", f.p())
    } else {
        let m: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
        format!("field {}^{} modulus {}", f.p(), f.k(), m.join(","))
    }
}

/// Splits a file into its header field and the numbered body lines that
/// carry content.
fn split_file(text: &str) -> Result<(FiniteField, Vec<(usize, &str)>)> {
    let mut field = None;
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        if field.is_none() {
            field = Some(parse_field_header(line).map_err(|e| Error::parse(i + 1, e.to_string()))?);
        } else {
            body.push((i + 1, line));
        }
    }
    let field = field.ok_or_else(|| Error::parse(0, "missing `field` header"))?;
    Ok((field, body))
}

fn parse_tokens(f: &FiniteField, line_no: usize, line: &str, expected: usize) -> Result<Vec<Elem>> {
    let tokens: Vec<&str> = line
        .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')')
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.len() != expected {
        return Err(Error::parse(
            line_no,
            format!("expected {expected} entries, found {}", tokens.len()),
        ));
    }
    tokens
        .iter()
        .map(|t| f.parse_token(t).map_err(|e| Error::parse(line_no, e.to_string())))
        .collect()
}

/// A parsed arrangement file.
#[derive(Clone, Debug)]
pub struct ArrangementFile {
    pub arrangement: Arrangement,
    /// Line numbers of rows repeating an earlier line.
    pub duplicates: Vec<usize>,
}

/// Parses a `field` header followed by one normal vector per line.
/// `#` starts a comment. Repeated lines are dropped with a warning.
pub fn parse_arrangement_file(text: &str) -> Result<ArrangementFile> {
    let (f, body) = split_file(text)?;
    let plane = crate::projplane::Plane::shared(&f)?;
    let mut seen = std::collections::HashSet::new();
    let mut lines = Vec::new();
    let mut duplicates = Vec::new();
    for (no, line) in body {
        let t = parse_tokens(&f, no, line, 3)?;
        let idx = plane
            .index_of([t[0], t[1], t[2]])
            .map_err(|e| Error::parse(no, e.to_string()))?;
        if seen.insert(idx) {
            lines.push(idx);
        } else {
            log::warn!("line {no}: duplicate of an earlier line, ignored");
            duplicates.push(no);
        }
    }
    Ok(ArrangementFile {
        arrangement: Arrangement::from_indices(plane, lines)?,
        duplicates,
    })
}

/// Canonical text form: header, then normalized normals in plane order.
pub fn write_arrangement(a: &Arrangement) -> String {
    let f = a.field();
    let mut out = format_field_header(f);
    out.push('\n');
    for n in a.normals() {
        let c = n.coords();
        out.push_str(&format!(
            "{} {} {}\n",
            f.format_token(c[0]),
            f.format_token(c[1]),
            f.format_token(c[2])
        ));
    }
    out
}

/// Parses a `field` header followed by one 3×3 matrix per line, nine
/// entries in row-major order.
pub fn parse_generator_file(text: &str) -> Result<(FiniteField, Vec<Mat3>)> {
    let (f, body) = split_file(text)?;
    let mut gens = Vec::new();
    for (no, line) in body {
        let t = parse_tokens(&f, no, line, 9)?;
        gens.push([[t[0], t[1], t[2]], [t[3], t[4], t[5]], [t[6], t[7], t[8]]]);
    }
    Ok((f, gens))
}

pub fn write_generator_file(f: &FiniteField, gens: &[Mat3]) -> String {
    let mut out = format_field_header(f);
    out.push('\n');
    for m in gens {
        let row: Vec<String> = m.iter().flatten().map(|&x| f.format_token(x)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// One entry of the appendix listing.
#[derive(Clone, Debug)]
pub struct AppendixEntry {
    pub row: usize,
    pub q: u32,
    pub arrangement: Arrangement,
}

// `\omega^{5}`, `\omega^5`, `\omega` and integers become field tokens.
fn latex_token(t: &str) -> String {
    match t.strip_prefix("\\omega") {
        Some("") => "w".to_string(),
        Some(rest) => format!("w{}", rest.replace(['{', '}'], "")),
        None => t.to_string(),
    }
}

/// Parses the appendix syntax: `$q=5$,\:\: $\{(0,1,1)$, $(1,0,0)$, …\}$`,
/// one entry per `q=`. Fields use the default modulus, with `\omega` its
/// primitive root.
pub fn ingest_appendix(text: &str) -> Result<Vec<AppendixEntry>> {
    ingest_appendix_with(text, FiniteField::of_order)
}

/// As [`ingest_appendix`], with the field of each order supplied by `field`.
pub fn ingest_appendix_with(text: &str, field: impl Fn(u32) -> Result<FiniteField>) -> Result<Vec<AppendixEntry>> {
    let mut entries = Vec::new();
    for (row, chunk) in text.split("q=").skip(1).enumerate() {
        let row = row + 1;
        let err = |m: String| Error::parse(row, format!("appendix row {row}: {m}"));
        let digits: String = chunk.chars().take_while(char::is_ascii_digit).collect();
        let q: u32 = digits.parse().map_err(|_| err("missing field order".into()))?;
        let f = field(q).map_err(|e| err(e.to_string()))?;
        let start = chunk.find("\\{").ok_or_else(|| err("missing `\\{`".into()))?;
        let end = chunk.find("\\}").ok_or_else(|| err("missing `\\}`".into()))?;
        let mut normals = Vec::new();
        let mut rest = &chunk[start + 2..end];
        while let Some(open) = rest.find('(') {
            let close = rest[open..].find(')').ok_or_else(|| err("unclosed vector".into()))? + open;
            let parts: Vec<&str> = rest[open + 1..close].split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(err(format!("vector with {} entries", parts.len())));
            }
            let mut v = [Elem::ZERO; 3];
            for (slot, p) in v.iter_mut().zip(&parts) {
                *slot = f.parse_token(&latex_token(p)).map_err(|e| err(e.to_string()))?;
            }
            normals.push(v);
            rest = &rest[close + 1..];
        }
        let arrangement = Arrangement::from_normals(&f, &normals).map_err(|e| err(e.to_string()))?;
        if arrangement.len() != normals.len() {
            return Err(err("repeated vectors".into()));
        }
        entries.push(AppendixEntry { row, q, arrangement });
    }
    Ok(entries)
}

/// A row of reference invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimcRow {
    pub lines: usize,
    pub points: usize,
    /// Realization field, informational only.
    pub field: String,
    pub q: u32,
    pub t_vector: String,
    pub aut: u128,
}

#[derive(Deserialize)]
struct SimcTable {
    row: Vec<SimcRow>,
}

pub fn simc_table() -> Result<Vec<SimcRow>> {
    let t: SimcTable = toml::from_str(SIMC_TABLE_TOML).map_err(|e| Error::parse(0, e.message()))?;
    Ok(t.row)
}

/// Outcome of checking one appendix entry against its reference row.
#[derive(Clone, Debug, Serialize)]
pub struct AppendixCheck {
    pub row: usize,
    pub expected: SimcRow,
    pub report: InvariantReport,
    pub mismatches: Vec<String>,
}

impl AppendixCheck {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Ingests the bundled appendix and compares each entry with the bundled
/// table, including incidence automorphism group orders.
pub fn verify_appendix() -> Result<Vec<AppendixCheck>> {
    let entries = ingest_appendix(APPENDIX_TEX)?;
    let rows = simc_table()?;
    if entries.len() != rows.len() {
        return Err(Error::Inconsistent(format!(
            "{} appendix entries but {} table rows",
            entries.len(),
            rows.len()
        )));
    }
    entries
        .iter()
        .zip(rows)
        .map(|(e, expected)| {
            let report = InvariantReport::new(&e.arrangement, true)?;
            let mut mismatches = Vec::new();
            let tv: TVector = expected.t_vector.parse()?;
            let mut cmp = |what: &str, got: String, want: String| {
                if got != want {
                    mismatches.push(format!("{what}: got {got}, expected {want}"));
                }
            };
            cmp("q", e.q.to_string(), expected.q.to_string());
            cmp("lines", report.lines.to_string(), expected.lines.to_string());
            cmp("points", report.points.to_string(), expected.points.to_string());
            cmp("t-vector", report.t_vector.clone(), tv.to_string());
            cmp(
                "aut",
                format!("{:?}", report.aut_order),
                format!("{:?}", Some(expected.aut)),
            );
            cmp("simplicial", report.simplicial.to_string(), "true".into());
            Ok(AppendixCheck {
                row: e.row,
                expected,
                report,
                mismatches,
            })
        })
        .collect()
}

/// Invariants of an arrangement in a fixed serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub q: u32,
    pub lines: usize,
    pub points: usize,
    pub n0: u64,
    pub n1: u64,
    pub t_vector: String,
    /// Coefficients of `t³, t², t, 1`.
    pub chi: [i64; 4],
    pub chambers: u64,
    pub simplicial_by_points: bool,
    pub simplicial_by_count: bool,
    pub simplicial_by_chi: bool,
    pub simplicial: bool,
    pub near_pencil: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut_order: Option<u128>,
}

impl InvariantReport {
    pub fn new(a: &Arrangement, with_aut: bool) -> Result<Self> {
        let by_points = a.simplicial_by_points()?;
        let by_count = a.simplicial_by_count()?;
        let by_chi = a.simplicial_by_chi()?;
        if by_points != by_count || by_count != by_chi {
            return Err(Error::Inconsistent(format!(
                "simpliciality criteria disagree: points {by_points}, count {by_count}, chi {by_chi}"
            )));
        }
        a.check_identities()?;
        Ok(InvariantReport {
            q: a.q(),
            lines: a.len(),
            points: a.profile().points.len(),
            n0: a.n0(),
            n1: a.n1(),
            t_vector: a.t_vector().to_string(),
            chi: a.char_poly()?.coeffs,
            chambers: a.chambers()?,
            simplicial_by_points: by_points,
            simplicial_by_count: by_count,
            simplicial_by_chi: by_chi,
            simplicial: by_points,
            near_pencil: a.is_near_pencil(),
            aut_order: with_aut.then(|| incidence_of(a).automorphism_group_order()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Human-readable `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "q: {}\nlines: {}\npoints: {}\nn0: {}\nn1: {}\nt-vector: {}\nchi: t^3 {:+} t^2 {:+} t {:+}\nchambers: {}\nsimplicial: {}\nnear pencil: {}\n",
            self.q,
            self.lines,
            self.points,
            self.n0,
            self.n1,
            self.t_vector,
            self.chi[1],
            self.chi[2],
            self.chi[3],
            self.chambers,
            self.simplicial,
            self.near_pencil
        );
        if let Some(a) = self.aut_order {
            out.push_str(&format!("aut order: {a}\n"));
        }
        out
    }
}
