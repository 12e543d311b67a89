//! `arrfq`: simplicial line arrangements over finite fields.
//!
//! Exit status is 0 when a command succeeds with a positive verdict, 1 when
//! the verdict is negative and 2 on errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};

use arrfq_core::constructions::{phi_shift, verify_phi, verify_phi_shifted, Construction, PhiReport};
use arrfq_core::gf::prime_power;
use arrfq_core::group::{cycle_type_tally, polya_polynomial, PermGroup, DEFAULT_CLOSURE_CAP, DEFAULT_TALLY_MAX_Q};
use arrfq_core::io::{
    ingest_appendix, parse_arrangement_file, parse_generator_file, verify_appendix, write_arrangement, InvariantReport,
    APPENDIX_TEX,
};
use arrfq_core::reflection::{exceptional_report, gedr_simplicial_closed_form, gedr_spec, load_specs};
use arrfq_core::search::{enumerate_simplicial, incidence_of, orbit_union_search, OrbitSearchOptions, UpTo};
use arrfq_core::{Arrangement, Error, FiniteField, Plane};

#[derive(Parser)]
#[command(name = "arrfq", version, about = "Simplicial line arrangements over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an arrangement file is simplicial.
    Check { file: PathBuf },
    /// Print the invariants of an arrangement file.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also compute the order of the incidence automorphism group.
        #[arg(long)]
        aut: bool,
    },
    /// Build a named arrangement and write it in file format.
    Construct(ConstructArgs),
    /// Census of simplicial arrangements up to projectivity or incidence.
    Enumerate {
        #[arg(long)]
        q: u32,
        /// Largest arrangement size considered [default: 3q].
        #[arg(long)]
        max_lines: Option<usize>,
        #[arg(long, value_enum, default_value_t = Equivalence::Pgl)]
        up_to: Equivalence,
        /// Worker threads [default: all cores].
        #[arg(long)]
        jobs: Option<usize>,
        /// Directory receiving one arrangement file per class.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of line sets of each size up to projectivity.
    Polya {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Line orbits of the group generated by the matrices in a file.
    Orbits {
        #[arg(long)]
        gens: PathBuf,
    },
    /// Simplicial unions of line orbits of a group.
    OrbitSearch {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        gens: PathBuf,
        /// [default: 2q]
        #[arg(long)]
        min_lines: Option<usize>,
        /// [default: 3q]
        #[arg(long)]
        max_lines: Option<usize>,
        #[arg(long, default_value_t = 20)]
        max_orbits: usize,
        /// Directory receiving one arrangement file per hit.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two arrangements have isomorphic incidence structures.
    Iso { first: PathBuf, second: PathBuf },
    /// Order of the incidence automorphism group.
    Aut { file: PathBuf },
    /// Simpliciality of reflection arrangements from exponent data.
    #[command(subcommand)]
    Reflection(ReflectionCommand),
    /// Compare the concurrent triples of A(2q,1) and D_∅ over F_q.
    VerifyA2n1 {
        #[arg(long)]
        q: u32,
        /// Index shift of the map on the `(1,a,a²)` lines.
        #[arg(long, default_value_t = 1)]
        shift: u32,
    },
    /// The bundled appendix arrangements.
    Appendix {
        /// Compare every entry with the bundled reference invariants.
        #[arg(long)]
        verify: bool,
        /// Directory receiving one arrangement file per entry.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReflectionCommand {
    /// The imprimitive group G(e,d,r).
    Gedr {
        #[arg(long)]
        e: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: usize,
    },
    /// Every group in a TOML data file.
    Table {
        data_file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    q: u32,
    /// Field modulus coefficients `c0,...,ck` for prime powers.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Number of lines of a near pencil.
    #[arg(long)]
    k: Option<usize>,
    /// Elements of B for `db`, as integers.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    b: Vec<i64>,
    /// Seed of the random removal pattern for `max-deletion`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Subgroup order for `ge13`.
    #[arg(long)]
    e: Option<u32>,
    /// Output file [default: stdout].
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Kind {
    NearPencil,
    Db,
    MaxDeletion,
    Full3q,
    Ge13,
    G25f4,
}

#[derive(Copy, Clone, ValueEnum)]
enum Equivalence {
    Pgl,
    Incidence,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Arrangement> {
    let file = parse_arrangement_file(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.arrangement)
}

fn field(q: u32, modulus: Option<&[u32]>) -> Result<FiniteField> {
    let Some((p, k)) = prime_power(q as u64) else {
        bail!("{q} is not a prime power");
    };
    Ok(FiniteField::new(p, k, modulus)?)
}

fn set_jobs(jobs: Option<usize>) -> Result<()> {
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    Ok(())
}

fn write_dir(dir: &Path, name: &str, a: &Arrangement) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, write_arrangement(a)).with_context(|| format!("writing {}", path.display()))
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Check { file } => {
            let a = load(&file)?;
            let verdict = match a.is_simplicial() {
                Ok(v) => v,
                Err(Error::NotEssential) => {
                    println!("not simplicial: all lines are concurrent");
                    return Ok(false);
                }
                Err(e) => return Err(e.into()),
            };
            println!("{}", if verdict { "simplicial" } else { "not simplicial" });
            Ok(verdict)
        }
        Command::Invariants { file, json, aut } => {
            let report = InvariantReport::new(&load(&file)?, aut)?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            Ok(true)
        }
        Command::Construct(args) => construct(args),
        Command::Enumerate {
            q,
            max_lines,
            up_to,
            jobs,
            out,
        } => {
            set_jobs(jobs)?;
            let plane = Plane::of_order(q)?;
            let census = enumerate_simplicial(&plane, max_lines.unwrap_or(3 * q as usize))?;
            let up_to = match up_to {
                Equivalence::Pgl => UpTo::Pgl,
                Equivalence::Incidence => UpTo::Incidence,
            };
            let json = serde_json::json!({
                "q": census.q,
                "max_lines": census.max_lines,
                "up_to": up_to,
                "counts": census.table(up_to),
                "pgl": census.pgl,
                "incidence": census.incidence,
            });
            println!("{}", serde_json::to_string_pretty(&json)?);
            if let Some(dir) = out {
                let picks: Vec<usize> = match up_to {
                    UpTo::Pgl => (0..census.representatives.len()).collect(),
                    UpTo::Incidence => census.incidence_representatives.clone(),
                };
                for (n, i) in picks.into_iter().enumerate() {
                    let lines = &census.representatives[i];
                    let a = Arrangement::from_indices(plane.clone(), lines.iter().map(|&l| l as usize))?;
                    write_dir(&dir, &format!("q{q}_{}lines_{n:04}.txt", a.len()), &a)?;
                }
            }
            Ok(true)
        }
        Command::Polya { q, max_k, jobs } => {
            set_jobs(jobs)?;
            let plane = Plane::of_order(q)?;
            let poly = polya_polynomial(&cycle_type_tally(&plane, DEFAULT_TALLY_MAX_Q)?, max_k)?;
            for (k, c) in poly.iter().enumerate() {
                println!("{k}\t{c}");
            }
            let total: BigUint = poly.iter().sum();
            let bounded: BigUint = poly.iter().take(3 * q as usize + 1).sum();
            println!("total\t{total}");
            println!("at most 3q lines\t{bounded}");
            Ok(true)
        }
        Command::Orbits { gens } => {
            let (f, gens) = parse_generator_file(&read(&gens)?)?;
            let plane = Plane::shared(&f)?;
            let g = PermGroup::closure(plane.clone(), &gens, DEFAULT_CLOSURE_CAP)?;
            println!("group order {}", g.order());
            for (i, o) in g.orbits().iter().enumerate() {
                let a = Arrangement::from_indices(plane.clone(), o.iter().map(|&l| l as usize))?;
                let normals: Vec<String> = a.normals().iter().map(|n| fmt_line(&f, n.coords())).collect();
                println!("orbit {i} ({} lines): {}", o.len(), normals.join(" "));
            }
            Ok(true)
        }
        Command::OrbitSearch {
            q,
            gens,
            min_lines,
            max_lines,
            max_orbits,
            out,
        } => {
            let (f, gens) = parse_generator_file(&read(&gens)?)?;
            if f.q() != q {
                bail!("generator file is over F_{}, not F_{q}", f.q());
            }
            let plane = Plane::shared(&f)?;
            let g = PermGroup::closure(plane, &gens, DEFAULT_CLOSURE_CAP)?;
            let mut opts = OrbitSearchOptions::for_q(q);
            opts.max_orbits = max_orbits;
            if let Some(m) = min_lines {
                opts.min_lines = m;
            }
            if let Some(m) = max_lines {
                opts.max_lines = m;
            }
            let hits = orbit_union_search(&g, opts)?;
            println!("group order {}, {} line orbits", g.order(), g.orbits().len());
            for (n, h) in hits.iter().enumerate() {
                let a = &h.arrangement;
                println!(
                    "{} lines, {} points, t-vector {}, orbit sizes {:?}",
                    a.len(),
                    a.point_count(),
                    a.t_vector(),
                    h.orbit_sizes
                );
                if let Some(dir) = &out {
                    write_dir(dir, &format!("hit_{n:04}.txt"), a)?;
                }
            }
            println!("{} incidence classes", hits.len());
            Ok(!hits.is_empty())
        }
        Command::Iso { first, second } => {
            let (a, b) = (incidence_of(&load(&first)?), incidence_of(&load(&second)?));
            match a.isomorphism(&b) {
                Some(perm) => {
                    println!("isomorphic");
                    let map: Vec<String> = perm.iter().enumerate().map(|(i, j)| format!("{i}->{j}")).collect();
                    println!("line map: {}", map.join(" "));
                    Ok(true)
                }
                None => {
                    println!("not isomorphic");
                    Ok(false)
                }
            }
        }
        Command::Aut { file } => {
            println!("{}", incidence_of(&load(&file)?).automorphism_group_order());
            Ok(true)
        }
        Command::Reflection(ReflectionCommand::Gedr { e, d, r }) => {
            let spec = gedr_spec(e, d, r)?;
            let defect = spec.simpliciality_defect()?;
            let verdict = defect == BigInt::from(0);
            if verdict != gedr_simplicial_closed_form(e, d, r)? {
                bail!("exponent test and closed form disagree for {}", spec.name);
            }
            println!("{}: rank {}, {} hyperplanes", spec.name, spec.rank, spec.hyperplanes());
            println!(
                "exponents {:?}, restriction exponents {:?}",
                spec.exponents, spec.orbits[0].restriction
            );
            println!("defect {defect}");
            println!("{}", if verdict { "simplicial" } else { "not simplicial" });
            Ok(verdict)
        }
        Command::Reflection(ReflectionCommand::Table { data_file, json }) => {
            let report = exceptional_report(&load_specs(&read(&data_file)?)?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                for v in &report {
                    println!(
                        "{}\trank {}\t{} hyperplanes\tdefect {}\t{}",
                        v.name,
                        v.rank,
                        v.hyperplanes,
                        v.defect,
                        if v.simplicial { "simplicial" } else { "not simplicial" }
                    );
                }
            }
            Ok(true)
        }
        Command::VerifyA2n1 { q, shift } => {
            let report = if shift == 1 {
                verify_phi(q)?
            } else {
                verify_phi_shifted(q, shift)?
            };
            print_phi(&report);
            if !report.holds() && shift != phi_shift(q) {
                let alt = verify_phi_shifted(q, phi_shift(q))?;
                println!("note: shift {} gives {} mismatches", alt.shift, alt.mismatches.len());
            }
            Ok(report.holds())
        }
        Command::Appendix { verify, out } => {
            let mut ok = true;
            if verify {
                for c in verify_appendix()? {
                    let r = &c.report;
                    let status = if c.ok() { "ok" } else { "MISMATCH" };
                    println!(
                        "row {:2}  q={:2}  {:2} lines  {:3} points  {}  aut {}  {status}",
                        c.row,
                        r.q,
                        r.lines,
                        r.points,
                        r.t_vector,
                        r.aut_order.map_or("-".to_string(), |x| x.to_string())
                    );
                    for m in &c.mismatches {
                        println!("    {m}");
                    }
                    ok &= c.ok();
                }
            }
            let entries = ingest_appendix(APPENDIX_TEX)?;
            if !verify {
                for e in &entries {
                    println!("row {:2}  q={:2}  {:2} lines", e.row, e.q, e.arrangement.len());
                }
            }
            if let Some(dir) = out {
                for e in &entries {
                    write_dir(&dir, &format!("row{:02}_q{}.txt", e.row, e.q), &e.arrangement)?;
                }
            }
            Ok(ok)
        }
    }
}

fn construct(args: ConstructArgs) -> Result<bool> {
    let f = field(args.q, args.modulus.as_deref())?;
    let c = match args.kind {
        Kind::NearPencil => Construction::NearPencil {
            k: args.k.context("near-pencil needs --k")?,
        },
        Kind::Db => Construction::DB { b: args.b },
        Kind::MaxDeletion => Construction::MaxDeletion { seed: args.seed },
        Kind::Full3q => Construction::Full3q,
        Kind::Ge13 => Construction::Ge13 {
            e: args.e.context("ge13 needs --e")?,
        },
        Kind::G25f4 => Construction::G25F4,
    };
    let text = write_arrangement(&c.build(&f)?);
    match args.output {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn fmt_line(f: &FiniteField, c: [arrfq_core::Elem; 3]) -> String {
    format!(
        "({},{},{})",
        f.format_token(c[0]),
        f.format_token(c[1]),
        f.format_token(c[2])
    )
}

fn print_phi(r: &PhiReport) {
    println!(
        "q={} shift {}: {} triples, {} concurrent in D_∅, {} mismatches",
        r.q,
        r.shift,
        r.triples,
        r.concurrent,
        r.mismatches.len()
    );
    for m in r.mismatches.iter().take(10) {
        println!("    mismatch at lines {m:?}");
    }
    println!(
        "{}",
        if r.holds() {
            "incidence isomorphism"
        } else {
            "not an incidence isomorphism"
        }
    );
}
